"""Concrete two-qubit operator algebra.

Elements of the total algebra are dense 4x4 complex numpy arrays. The
fifteen generators are Kronecker products of Pauli matrices::

    lam(i)   = 1 (x) sigma_i          i = 1, 2, 3
    lam(3+i) = sigma_i (x) 1          i = 1, 2, 3
    lam(j)   = sigma_a (x) sigma_b    j = 7..15, (a, b) lexicographic

so that ``lam(7) = sigma_1 (x) sigma_1``, ``lam(8) = sigma_1 (x) sigma_2``, ...,
``lam(15) = sigma_3 (x) sigma_3``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

#: singular values below RANK_RTOL * (largest singular value) count as zero
RANK_RTOL = 1e-9

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_LEX_PAIRS = tuple((a, b) for a in (1, 2, 3) for b in (1, 2, 3))

IDENTITY2 = np.eye(2, dtype=complex)
IDENTITY = np.eye(4, dtype=complex)
IDENTITY.setflags(write=False)


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


def pauli(i: int) -> np.ndarray:
    """Return the 2x2 Pauli matrix sigma_i, i in {1, 2, 3}."""
    if i not in (1, 2, 3):
        raise IndexError(f"Pauli index must be 1, 2 or 3, got {i!r}")
    return _PAULI[i - 1].copy()


def kron(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Kronecker product of two 2x2 matrices."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != (2, 2) or y.shape != (2, 2):
        raise ValueError(f"kron expects two 2x2 matrices, got {x.shape} and {y.shape}")
    out = np.empty((4, 4), dtype=complex)
    for a in range(2):
        for b in range(2):
            out[2 * a:2 * a + 2, 2 * b:2 * b + 2] = x[a, b] * y
    return out


def _build_lambda(j: int) -> np.ndarray:
    if 1 <= j <= 3:
        return kron(IDENTITY2, _PAULI[j - 1])
    if 4 <= j <= 6:
        return kron(_PAULI[j - 4], IDENTITY2)
    a, b = _LEX_PAIRS[j - 7]
    return kron(_PAULI[a - 1], _PAULI[b - 1])


@lru_cache(maxsize=None)
def _lambda_cached(j: int) -> np.ndarray:
    return _frozen(_build_lambda(j))


def lam(j: int) -> np.ndarray:
    """Generator lambda_j of the total algebra, j in 1..15.

    The returned array is read-only and shared; copy it before mutating.
    """
    if not isinstance(j, (int, np.integer)) or not 1 <= j <= 15:
        raise IndexError(f"generator index must be in 1..15, got {j!r}")
    return _lambda_cached(int(j))


@dataclass(frozen=True)
class GeneratorTable:
    """The ordered generators lambda_1..lambda_15 together with the identity."""

    lambdas: tuple
    identity: np.ndarray = IDENTITY

    def __len__(self) -> int:
        return len(self.lambdas)

    def __getitem__(self, j: int) -> np.ndarray:
        # 1-based, matching the generator labels
        if not 1 <= j <= len(self.lambdas):
            raise IndexError(f"generator index must be in 1..{len(self.lambdas)}, got {j!r}")
        return self.lambdas[j - 1]

    def stacked(self) -> np.ndarray:
        """Generators as one (15, 4, 4) array."""
        return np.stack(self.lambdas)

    def permuted(self, order: Sequence[int]) -> "GeneratorTable":
        """Table whose j-th generator is the ``order[j-1]``-th of this one."""
        return GeneratorTable(tuple(self[k] for k in order), self.identity)


def generator_table() -> GeneratorTable:
    return GeneratorTable(tuple(lam(j) for j in range(1, 16)))


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    return float(np.max(np.abs(m - m.conj().T))) <= tol


def is_involution(m: np.ndarray, tol: float = 1e-10) -> bool:
    return float(np.max(np.abs(m @ m - np.eye(m.shape[0])))) <= tol


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def anticommutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y + y @ x


def decompose(a: np.ndarray) -> np.ndarray:
    """Coefficients (c_0, c_1, ..., c_15) with a = c_0 1 + sum_j c_j lam(j).

    Uses Hilbert-Schmidt orthogonality, tr(lam_i lam_j) = 4 delta_ij.
    """
    a = np.asarray(a, dtype=complex)
    coeffs = np.empty(16, dtype=complex)
    coeffs[0] = np.trace(a) / 4
    for j in range(1, 16):
        coeffs[j] = np.trace(lam(j) @ a) / 4
    return coeffs


def reconstruct(coeffs: Sequence[complex]) -> np.ndarray:
    """Inverse of :func:`decompose`."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (16,):
        raise ValueError(f"expected 16 coefficients, got shape {coeffs.shape}")
    out = coeffs[0] * np.eye(4, dtype=complex)
    for j in range(1, 16):
        out = out + coeffs[j] * lam(j)
    return out


def rank_of_span(elements: Sequence[np.ndarray], rtol: float = RANK_RTOL) -> int:
    """Dimension of the complex linear span of 4x4 matrices."""
    if len(elements) == 0:
        raise ValueError("rank_of_span needs at least one element")
    vecs = np.array([np.asarray(m, dtype=complex).reshape(-1) for m in elements])
    sv = np.linalg.svd(vecs, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


def span_residual(target: np.ndarray, basis: Sequence[np.ndarray]) -> float:
    """Max-entry distance from ``target`` to the linear span of ``basis``."""
    mat = np.array([np.asarray(m, dtype=complex).reshape(-1) for m in basis]).T
    t = np.asarray(target, dtype=complex).reshape(-1)
    coef, *_ = np.linalg.lstsq(mat, t, rcond=None)
    return float(np.max(np.abs(mat @ coef - t)))
