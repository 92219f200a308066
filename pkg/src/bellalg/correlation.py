"""Correlation matrices and total correlation.

For unit vectors a, b and A = sum a_i A_i, B = sum b_j B_j,

    omega(AB) - omega(A) omega(B) = <a, Q b>,
    q_ij = omega(A_i B_j) - omega(A_i) omega(B_j),

so the supremum of |omega(AB) - omega(A) omega(B)| over such observables is
the largest singular value of Q.
"""

from __future__ import annotations

import math

import numpy as np

from .bellpair import BellPair, canonical_pair
from .states import MixedState, PureState, State, _as_rng

IMAG_TOL = 1e-12
# 1 - r^2 below this switches the largest-eigenvalue solve to Jacobi
DEGENERACY_TOL = 1e-6


def correlation_matrix(state: State, pair: BellPair) -> np.ndarray:
    """3x3 real matrix q_ij = omega(A_i B_j) - omega(A_i) omega(B_j)."""
    if isinstance(state, PureState):
        z = state.amplitudes

        def ev(m):
            return np.vdot(z, m @ z)
    elif isinstance(state, MixedState):
        rho = state.rho

        def ev(m):
            return np.trace(rho @ m)
    else:
        raise TypeError(f"expected PureState or MixedState, got {type(state).__name__}")

    ra = [ev(a) for a in pair.left]
    sb = [ev(b) for b in pair.right]
    q = np.empty((3, 3), dtype=complex)
    for i, a in enumerate(pair.left):
        for j, b in enumerate(pair.right):
            q[i, j] = ev(a @ b) - ra[i] * sb[j]
    resid = float(np.max(np.abs(q.imag)))
    if resid > IMAG_TOL:
        raise ValueError(
            f"correlation matrix has imaginary residue {resid:.3g}; "
            "generators are not hermitian or do not commute"
        )
    return q.real.copy()


# symmetric 3x3 eigenvalues -------------------------------------------------

def _jacobi_eigvals(m: np.ndarray, sweeps: int = 50) -> np.ndarray:
    """Cyclic Jacobi rotations for a real symmetric 3x3 matrix."""
    a = np.array(m, dtype=float)
    n = 3
    for _ in range(sweeps):
        off = a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
        if off <= 1e-300 or off <= (1e-34 * np.sum(np.diag(a) ** 2)):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                diff = a[q, q] - a[p, p]
                if abs(apq) <= 1e-18 * abs(diff):
                    # rotation angle below rounding: drop the off-diagonal
                    a[p, q] = a[q, p] = 0.0
                    continue
                tau = diff / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    return np.sort(np.diag(a))


def symmetric_eigvals3(m: np.ndarray) -> np.ndarray:
    """Eigenvalues (ascending) of a real symmetric 3x3 matrix.

    Closed-form trigonometric solution of the characteristic cubic, with a
    Jacobi fallback near repeated roots where acos loses accuracy.
    """
    m = np.asarray(m, dtype=float)
    p1 = m[0, 1] ** 2 + m[0, 2] ** 2 + m[1, 2] ** 2
    q = np.trace(m) / 3.0
    p2 = (m[0, 0] - q) ** 2 + (m[1, 1] - q) ** 2 + (m[2, 2] - q) ** 2 + 2.0 * p1
    scale = max(float(np.max(np.abs(m))), 1e-300)
    if p2 <= (1e-14 * scale) ** 2:
        return _jacobi_eigvals(m)
    p = math.sqrt(p2 / 6.0)
    b = (m - q * np.eye(3)) / p
    r = np.linalg.det(b) / 2.0
    r = min(1.0, max(-1.0, r))
    if 1.0 - r * r < DEGENERACY_TOL:
        return _jacobi_eigvals(m)
    phi = math.acos(r) / 3.0
    e1 = q + 2.0 * p * math.cos(phi)
    e3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    e2 = 3.0 * q - e1 - e3
    return np.array([e3, e2, e1])


def spectral_norm(q: np.ndarray) -> float:
    """Largest singular value of a real 3x3 matrix via the eigenvalues of Q^T Q."""
    q = np.asarray(q, dtype=float)
    if q.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got {q.shape}")
    if not np.all(np.isfinite(q)):
        raise ValueError("matrix has non-finite entries")
    scale = float(np.max(np.abs(q)))
    if scale == 0.0:
        return 0.0
    qs = q / scale
    lam_max = symmetric_eigvals3(qs.T @ qs)[-1]
    return scale * math.sqrt(max(lam_max, 0.0))


def top_singular_pair(q: np.ndarray):
    """Unit vectors (a, b) with <a, Q b> = ||Q||."""
    u, _, vt = np.linalg.svd(np.asarray(q, dtype=float))
    return u[:, 0], vt[0]


# total correlation -----------------------------------------------------------

def total_correlation(state: State, pair: BellPair) -> float:
    """C_omega(A, B) = ||Q|| for pure states."""
    if isinstance(state, MixedState):
        raise TypeError("total correlation as ||Q|| holds for pure states only; got a mixed state")
    return spectral_norm(correlation_matrix(state, pair))


def concurrence(state: PureState) -> float:
    """Concurrence as the total correlation for the canonical pair."""
    return total_correlation(state, canonical_pair())


def concurrence_closed_form(state: PureState) -> float:
    """2 |z1 z4 - z2 z3|."""
    z1, z2, z3, z4 = state.amplitudes
    return 2.0 * abs(z1 * z4 - z2 * z3)


def correlation_at(state: PureState, pair: BellPair, a, b) -> np.ndarray:
    """|omega(AB) - omega(A) omega(B)| for A = sum a_i A_i, B = sum b_j B_j.

    ``a`` and ``b`` may be single 3-vectors or (n, 3) batches; the
    observables are assembled as operators, not through Q.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    z = state.amplitudes
    ops_a = np.einsum("ni,ijk->njk", a, pair.left.stacked())
    ops_b = np.einsum("ni,ijk->njk", b, pair.right.stacked())
    az = ops_a @ z
    bz = ops_b @ z
    abz = np.einsum("njk,nk->nj", ops_a, bz)
    ev_a = az @ z.conj()
    ev_b = bz @ z.conj()
    ev_ab = abz @ z.conj()
    return np.abs(ev_ab - ev_a * ev_b)


def _unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def brute_force_correlation(state: PureState, pair: BellPair, samples: int = 10_000,
                            seed=None, chunk: int = 20_000) -> float:
    """Monte-Carlo lower bound on the total correlation from random unit (a, b)."""
    if isinstance(state, MixedState):
        raise TypeError("brute-force correlation is defined for pure states")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = _as_rng(seed)
    best = 0.0
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        vals = correlation_at(state, pair, _unit_vectors(rng, n), _unit_vectors(rng, n))
        best = max(best, float(vals.max()))
        done += n
    return best


# published closed forms for the (A', B') pair --------------------------------

def kora_formula(a: float, phi: float, theta: float) -> float:
    """sqrt(a^2 (1-a^2) (2 + cos 2phi - cos 2theta))."""
    val = a * a * (1 - a * a) * (2 + math.cos(2 * phi) - math.cos(2 * theta))
    return math.sqrt(max(val, 0.0))


def printed_prime_correlation(a: float, phi: float, theta: float) -> np.ndarray:
    """The published entry-wise closed forms of Q for the maxent family under
    :func:`bellalg.bellpair.paper_pair_prime`, transcribed verbatim.

    Seven entries agree with the definition; q22 and q31 do not. Use
    :func:`printed_prime_agreement` to see which.
    """
    cos, sin = math.cos, math.sin
    k = math.sqrt(2) * a * math.sqrt(1 - a * a)
    a2 = a * a
    f, t = phi, theta
    return np.array([
        [k * (cos(f) - a2 * cos(t) * cos(f + t)),
         k * (sin(t) + a2 * sin(f) * cos(f + t)),
         -2 * a2 * (1 - a2) * cos(f + t)],
        [k * sin(t) * (2 * a2 * cos(f) * cos(t) - cos(f - t)),
         k * cos(f) * (cos(f - t) - 2 * a2 * sin(f) * cos(t)),
         4 * a2 * (1 - a2) * cos(f) * sin(t)],
        [k * (sin(t) * sin(f - 2 * t) - (a2 / 2) * (cos(f) + cos(f - 2 * t))),
         k * (a2 * sin(f) * cos(f - t) - cos(f) * sin(f - t)),
         -2 * a2 * (1 - a2) * cos(f - t)],
    ])


def printed_prime_agreement(grid, pair: BellPair | None = None, tol: float = 1e-9) -> dict:
    """Per-entry max deviation between printed q_ij and the definition over ``grid``.

    ``grid`` is an iterable of (a, phi, theta). Returns
    ``{"max_dev": 3x3 array, "agrees": 3x3 bool array}``.
    """
    from .bellpair import paper_pair_prime
    from .states import maxent_state

    pair = pair if pair is not None else paper_pair_prime()
    dev = np.zeros((3, 3))
    for a, f, t in grid:
        q = correlation_matrix(maxent_state(a, f, t), pair)
        dev = np.maximum(dev, np.abs(q - printed_prime_correlation(a, f, t)))
    return {"max_dev": dev, "agrees": dev <= tol}
