"""States on the total algebra: vector states, density matrices and named families."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .algebra import lam

NORM_TOL = 1e-12
PSD_TOL = 1e-10
MIXED_TOL = 1e-10


class StateError(ValueError):
    """A state failed one of its defining invariants."""


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized vector Psi = z1 e1 + z2 e2 + z3 e3 + z4 e4."""

    amplitudes: np.ndarray

    def __post_init__(self):
        z = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if z.shape != (4,):
            raise StateError(f"a pure state needs 4 amplitudes, got {z.size}")
        if not np.all(np.isfinite(z)):
            raise StateError("amplitudes must be finite")
        norm2 = float(np.vdot(z, z).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise StateError(f"normalization violated: sum |z_k|^2 = {norm2!r}")
        z.setflags(write=False)
        object.__setattr__(self, "amplitudes", z)

    @classmethod
    def from_vector(cls, v, normalize: bool = True) -> "PureState":
        v = np.asarray(v, dtype=complex).reshape(-1)
        if normalize:
            n = np.linalg.norm(v)
            if n == 0:
                raise StateError("cannot normalize the zero vector")
            v = v / n
        return cls(v)

    @classmethod
    def basis(cls, k: int) -> "PureState":
        """Canonical basis vector e_k, k in 1..4."""
        if not 1 <= k <= 4:
            raise IndexError(f"basis index must be in 1..4, got {k!r}")
        v = np.zeros(4, dtype=complex)
        v[k - 1] = 1.0
        return cls(v)

    @property
    def z(self) -> np.ndarray:
        return self.amplitudes

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def equals_up_to_phase(self, other: "PureState", tol: float = 1e-8) -> bool:
        return abs(abs(np.vdot(self.amplitudes, other.amplitudes)) - 1.0) <= tol

    def to_json(self) -> dict:
        return {"re": [float(x) for x in self.amplitudes.real],
                "im": [float(x) for x in self.amplitudes.imag]}

    def __repr__(self) -> str:
        return f"PureState({np.array2string(self.amplitudes, precision=6)})"


@dataclass(frozen=True, eq=False)
class MixedState:
    """Density matrix rho, evaluated as omega(A) = tr(rho A)."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (4, 4):
            raise StateError(f"density matrix must be 4x4, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > MIXED_TOL:
            raise StateError("density matrix is not hermitian")
        tr = np.trace(rho)
        if abs(tr - 1.0) > MIXED_TOL:
            raise StateError(f"density matrix trace is {tr.real!r}, not 1")
        lo = float(np.linalg.eigvalsh(rho)[0])
        if lo < -PSD_TOL:
            raise StateError(f"density matrix not positive semidefinite (min eigenvalue {lo!r})")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    def density_matrix(self) -> np.ndarray:
        return self.rho

    def to_json(self) -> dict:
        return {"rho_re": self.rho.real.tolist(), "rho_im": self.rho.imag.tolist()}


State = Union[PureState, MixedState]


def expectation(state: State, a: np.ndarray) -> complex:
    """omega(A): <Psi, A Psi> for vector states, tr(rho A) for density matrices."""
    a = np.asarray(a, dtype=complex)
    if isinstance(state, PureState):
        z = state.amplitudes
        return complex(np.vdot(z, a @ z))
    if isinstance(state, MixedState):
        return complex(np.trace(state.rho @ a))
    raise TypeError(f"expected PureState or MixedState, got {type(state).__name__}")


def real_expectation(state: State, a: np.ndarray, tol: float = 1e-12) -> float:
    """Expectation of a hermitian element; the imaginary residue is checked then dropped."""
    val = expectation(state, a)
    if abs(val.imag) > tol:
        raise ValueError(f"expectation has imaginary part {val.imag!r}; element not hermitian?")
    return val.real


def w_vector(state: PureState) -> np.ndarray:
    """w_j = omega(lam(j)) for j = 1..15 from closed forms in the amplitudes.

    Returned as a length-15 array, ``w[j-1]`` for generator j. Every entry
    agrees with ``expectation(state, lam(j))``; entries 5, 8, 10, 12, 14 carry
    the opposite sign to the commonly printed table (see
    :func:`printed_w_vector`).
    """
    z1, z2, z3, z4 = state.amplitudes
    c = np.conj
    p12_34 = c(z1) * z2 + c(z3) * z4
    p13_24 = c(z1) * z3 + c(z2) * z4
    a1, a2, a3, a4 = (abs(x) ** 2 for x in (z1, z2, z3, z4))
    w = np.array([
        2 * p12_34.real,
        2 * p12_34.imag,
        a1 - a2 + a3 - a4,
        2 * p13_24.real,
        2 * p13_24.imag,
        a1 + a2 - a3 - a4,
        2 * (c(z2) * z3 + c(z1) * z4).real,
        2 * (c(z1) * z4 - c(z2) * z3).imag,
        2 * (c(z1) * z3 - c(z2) * z4).real,
        2 * (c(z2) * z3 + c(z1) * z4).imag,
        2 * (c(z2) * z3 - c(z1) * z4).real,
        2 * (c(z1) * z3 - c(z2) * z4).imag,
        2 * (c(z1) * z2 - c(z3) * z4).real,
        2 * (c(z1) * z2 - c(z3) * z4).imag,
        a1 - a2 - a3 + a4,
    ], dtype=float)
    return w


def printed_w_vector(state: PureState) -> np.ndarray:
    """The published closed-form table for w_1..w_15, transcribed verbatim.

    Kept as a reference to compare against; use :func:`w_vector` for values.
    """
    z1, z2, z3, z4 = state.amplitudes
    c = np.conj
    a1, a2, a3, a4 = (abs(x) ** 2 for x in (z1, z2, z3, z4))
    return np.array([
        2 * (c(z1) * z2 + c(z3) * z4).real,
        2 * (c(z1) * z2 + c(z3) * z4).imag,
        a1 - a2 + a3 - a4,
        2 * (c(z1) * z3 + c(z2) * z4).real,
        -2 * (c(z1) * z3 + c(z2) * z4).imag,
        a1 + a2 - a3 - a4,
        2 * (c(z2) * z3 + c(z1) * z4).real,
        2 * (c(z2) * z3 - c(z1) * z4).imag,
        2 * (c(z1) * z3 - c(z2) * z4).real,
        -2 * (c(z2) * z3 + c(z1) * z4).imag,
        2 * (c(z2) * z3 - c(z1) * z4).real,
        2 * (c(z2) * z4 - c(z1) * z3).imag,
        2 * (c(z1) * z2 - c(z3) * z4).real,
        2 * (c(z3) * z4 - c(z1) * z2).imag,
        a1 - a2 - a3 + a4,
    ], dtype=float)


def w_table_discrepancies(states, tol: float = 1e-12) -> set:
    """Generator indices j where the printed w_j differs from <Psi|lam(j) Psi>."""
    bad = set()
    for s in states:
        direct = np.array([expectation(s, lam(j)).real for j in range(1, 16)])
        dev = np.abs(printed_w_vector(s) - direct)
        bad.update(int(j) + 1 for j in np.nonzero(dev > tol)[0])
    return bad


def _check_range(name: str, value: float, lo: float, hi: float) -> None:
    if not (lo <= value <= hi) or math.isnan(value):
        raise ValueError(f"{name}={value!r} outside [{lo}, {hi}]")


def phi_state(c: float) -> PureState:
    """Phi(c) = sqrt((1-d)/2) e2 + sqrt((1+d)/2) e3 with d = sqrt(1 - c^2).

    Its concurrence, and its total correlation for the canonical pair, is c.
    """
    _check_range("c", c, 0.0, 1.0)
    d = math.sqrt(1.0 - c * c)
    return PureState([0.0, math.sqrt((1 - d) / 2), math.sqrt((1 + d) / 2), 0.0])


def maxent_state(a: float, phi: float, theta: float) -> PureState:
    """Canonically maximally entangled family A e1 + B e^{i phi} e2 + B e^{i theta} e3 - A e^{i(phi+theta)} e4."""
    _check_range("a", a, 0.0, 1.0)
    _check_range("phi", phi, 0.0, 2 * math.pi)
    _check_range("theta", theta, 0.0, 2 * math.pi)
    big_a = a / math.sqrt(2)
    big_b = math.sqrt((1 - a * a) / 2)
    return PureState([
        big_a,
        big_b * np.exp(1j * phi),
        big_b * np.exp(1j * theta),
        -big_a * np.exp(1j * (phi + theta)),
    ])


def abmax_state(r: float, phi: float, theta: float) -> PureState:
    """Three-parameter family with vanishing Bloch vectors for :func:`bellalg.bellpair.paper_pair_ab`."""
    _check_range("r", r, 0.0, 1.0)
    _check_range("phi", phi, 0.0, math.pi / 2)
    _check_range("theta", theta, 0.0, 2 * math.pi)
    k = r / math.sqrt(2) * math.cos(phi)
    return PureState([
        k,
        -k * np.exp(2j * theta),
        r * math.sin(phi) * np.exp(1j * theta),
        1j * math.sqrt(1 - r * r) * np.exp(1j * theta),
    ])


def random_pure(seed=None) -> PureState:
    """Haar-random pure state: four standard complex Gaussians, normalized."""
    rng = _as_rng(seed)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return PureState(v / np.linalg.norm(v))


# JSON I/O -----------------------------------------------------------------

def _real_array(obj: dict, key: str, shape: tuple) -> np.ndarray:
    if key not in obj:
        raise StateError(f"missing field {key!r}")
    try:
        arr = np.array(obj[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateError(f"field {key!r} is not numeric: {exc}") from None
    if arr.shape != shape:
        raise StateError(f"field {key!r} has shape {arr.shape}, expected {shape}")
    return arr


def state_from_json(obj: dict) -> State:
    """Parse ``{"re": [...], "im": [...]}`` or ``{"rho_re": ..., "rho_im": ...}``.

    Raises StateError naming the offending field or the violated invariant.
    """
    if not isinstance(obj, dict):
        raise StateError("state JSON must be an object")
    if "rho_re" in obj or "rho_im" in obj:
        re = _real_array(obj, "rho_re", (4, 4))
        im = _real_array(obj, "rho_im", (4, 4))
        return MixedState(re + 1j * im)
    re = _real_array(obj, "re", (4,))
    im = _real_array(obj, "im", (4,))
    return PureState(re + 1j * im)


def load_state(path) -> State:
    with open(path) as fh:
        return state_from_json(json.load(fh))
