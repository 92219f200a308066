"""Separability of pure states relative to a Bell pair.

A pure state is separable for a pair exactly when both restrictions are pure,
i.e. both Bloch vectors r = (omega(A_i)) and s = (omega(B_j)) have unit length.
Vanishing Bloch vectors (trace-state restrictions) mark maximal correlation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .bellpair import BellPair, validate
from .correlation import total_correlation
from .states import MixedState, PureState, State, _as_rng

EPS_SEP = 1e-7
EPS_MAX = 1e-7

OBJECTIVE_TOL = 1e-16
RESTARTS = 32
MIN_STEP = 1e-14
MAX_EVALS = 200_000


class SolverError(RuntimeError):
    """Multi-start search exhausted its restart budget without converging."""


@dataclass(frozen=True)
class BlochRestriction:
    r: np.ndarray
    s: np.ndarray

    @property
    def r_norm(self) -> float:
        return float(np.linalg.norm(self.r))

    @property
    def s_norm(self) -> float:
        return float(np.linalg.norm(self.s))


class Kind(str, enum.Enum):
    SEPARABLE = "Separable"
    CORRELATED = "Correlated"
    MAXIMALLY_CORRELATED = "MaximallyCorrelated"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    correlation: float
    r_norm: float
    s_norm: float
    eps_sep: float = EPS_SEP
    eps_max: float = EPS_MAX

    def __str__(self) -> str:
        if self.kind is Kind.CORRELATED:
            return f"Correlated({self.correlation:.6g})"
        return self.kind.value


def _restriction_vectors(z: np.ndarray, pair: BellPair):
    r = np.array([np.vdot(z, a @ z).real for a in pair.left])
    s = np.array([np.vdot(z, b @ z).real for b in pair.right])
    return r, s


def restrict(state: State, pair: BellPair) -> BlochRestriction:
    """Bloch vectors of the restrictions to each side of ``pair``."""
    if isinstance(state, MixedState):
        from .states import real_expectation
        r = np.array([real_expectation(state, a) for a in pair.left])
        s = np.array([real_expectation(state, b) for b in pair.right])
        return BlochRestriction(r, s)
    return BlochRestriction(*_restriction_vectors(state.amplitudes, pair))


def classify(state: State, pair: BellPair, eps_sep: float = EPS_SEP,
             eps_max: float = EPS_MAX) -> Classification:
    if isinstance(state, MixedState):
        raise TypeError("classification of mixed states is not supported")
    br = restrict(state, pair)
    c = total_correlation(state, pair)
    rn, sn = br.r_norm, br.s_norm
    if min(rn, sn) >= 1 - eps_sep:
        kind = Kind.SEPARABLE
    elif max(rn, sn) <= eps_max:
        kind = Kind.MAXIMALLY_CORRELATED
    else:
        kind = Kind.CORRELATED
    return Classification(kind, c, rn, sn, eps_sep, eps_max)


def printed_prime_restriction(state: PureState):
    """Published closed forms of r and s for the (A', B') pair, verbatim.

    ``s[1]`` carries the opposite sign to direct evaluation.
    """
    z1, z2, z3, z4 = state.amplitudes
    c = np.conj
    r = np.array([
        abs(z2) ** 2 - abs(z3) ** 2 + 2 * (c(z1) * z4).real,
        -2 * (c(z2) * z3 + c(z1) * z4).imag,
        abs(z4) ** 2 - abs(z1) ** 2 + 2 * (c(z2) * z3).real,
    ])
    s = np.array([
        math.sqrt(2) * (c(z1) * (z2 - z3) + (c(z2) + c(z3)) * z4).real,
        math.sqrt(2) * (c(z1) * (z3 - z2) + (c(z2) + c(z3)) * z4).imag,
        abs(z1) ** 2 - abs(z2) ** 2 - abs(z3) ** 2 + abs(z4) ** 2,
    ])
    return r, s


def printed_ab_zero_system(state: PureState):
    """Left-hand sides of the published maximal-correlation equations for
    :func:`bellalg.bellpair.paper_pair_ab` (three for each side).

    Each expression is a nonzero multiple of one Bloch component, so all six
    vanish iff r = s = 0.
    """
    z1, z2, z3, z4 = state.amplitudes
    c = np.conj
    za = np.array([
        (z1 * (c(z3) - c(z4))).real + (z2 * (c(z3) + c(z4))).real,
        (z1 * (c(z4) - c(z3))).imag + (z2 * (c(z3) + c(z4))).imag,
        abs(z2) ** 2 - abs(z1) ** 2 - 2 * (z3 * c(z4)).real,
    ])
    zb = np.array([
        (z1 * (c(z3) + c(z4))).real + (z2 * (c(z3) - c(z4))).real,
        (c(z1) * (z3 + z4)).imag + (z2 * (c(z3) - c(z4))).imag,
        abs(z2) ** 2 - abs(z1) ** 2 + 2 * (z3 * c(z4)).real,
    ])
    return za, zb


# pure-state manifold and local search ----------------------------------------

def amplitudes_from_angles(x: np.ndarray) -> np.ndarray:
    """Map 6 coordinates to a unit vector in C^4 with z1 real and >= 0.

    x[0:3] are hyperspherical angles for the magnitudes, x[3:6] the phases
    of z2, z3, z4.
    """
    t1, t2, t3, p2, p3, p4 = x
    m1 = math.cos(t1)
    m2 = math.sin(t1) * math.cos(t2)
    m3 = math.sin(t1) * math.sin(t2) * math.cos(t3)
    m4 = math.sin(t1) * math.sin(t2) * math.sin(t3)
    return np.array([m1, m2 * np.exp(1j * p2), m3 * np.exp(1j * p3), m4 * np.exp(1j * p4)])


def _random_start(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v = v / np.linalg.norm(v)
    v = v * np.exp(-1j * np.angle(v[0]))
    m = np.abs(v)
    t1 = math.acos(min(1.0, m[0]))
    t2 = math.atan2(math.hypot(m[2], m[3]), m[1])
    t3 = math.atan2(m[3], m[2])
    return np.array([t1, t2, t3, *np.angle(v[1:])])


@dataclass
class SearchResult:
    x: np.ndarray
    objective: float
    evaluations: int


def coordinate_search(f, x0: np.ndarray, step: float = 0.5, min_step: float = MIN_STEP,
                      target: float = 0.0, max_evals: int = MAX_EVALS) -> SearchResult:
    """Derivative-free compass search: probe +-step along each axis, accept
    improvements (and grow the step), halve the step when no axis improves."""
    x = np.array(x0, dtype=float)
    fx = f(x)
    evals = 1
    n = x.size
    while step >= min_step and evals < max_evals and fx > target:
        improved = False
        for i in range(n):
            for sgn in (1.0, -1.0):
                y = x.copy()
                y[i] += sgn * step
                fy = f(y)
                evals += 1
                if fy < fx:
                    x, fx = y, fy
                    improved = True
                    break
        if improved:
            step *= 2.0
        else:
            step *= 0.5
    return SearchResult(x, fx, evals)


@dataclass
class SolveResult:
    state: PureState
    objective: float
    restarts_used: int
    seed: object
    evaluations: int = 0
    extra: dict = field(default_factory=dict)

    def provenance(self) -> dict:
        seed = self.seed if isinstance(self.seed, (int, type(None))) else str(self.seed)
        return {"objective": self.objective, "restarts_used": self.restarts_used, "seed": seed}

    def to_json(self) -> dict:
        out = self.state.to_json()
        out["provenance"] = self.provenance()
        return out


def _multistart(objective, seed, restarts: int, tol: float) -> SolveResult:
    rng = _as_rng(seed)
    best = None
    total = 0
    for k in range(restarts):
        res = coordinate_search(objective, _random_start(rng), target=tol * 1e-4)
        total += res.evaluations
        if best is None or res.objective < best[0].objective:
            best = (res, k + 1)
        if res.objective <= tol:
            break
    res, _ = best
    if res.objective > tol:
        raise SolverError(
            f"no restart reached objective <= {tol:g} after {restarts} restarts "
            f"(best {res.objective:.3g})"
        )
    z = amplitudes_from_angles(res.x)
    state = PureState(z / np.linalg.norm(z))
    return SolveResult(state, res.objective, k + 1, seed, total)


def _require_unit(name: str, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector")
    if abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ValueError(f"{name} must have unit length (got norm {np.linalg.norm(v):.6g}); "
                         "non-unit restrictions cannot come from a separable state")
    return v


def _require_valid(pair: BellPair) -> None:
    report = validate(pair)
    if not report.passed:
        raise ValueError(f"not a valid Bell pair: failed {', '.join(report.failed())}")


def find_separable(pair: BellPair, target_r, target_s, seed=0, restarts: int = RESTARTS,
                   tol: float = OBJECTIVE_TOL) -> SolveResult:
    """Pure state with Bloch vectors (target_r, target_s) for ``pair``.

    Minimizes ||r - target_r||^2 + ||s - target_s||^2 + ||Q||_F^2; the
    correlation term vanishes at the (unique up to phase) separable solution
    and makes a small objective certify a small total correlation.
    """
    tr = _require_unit("target_r", target_r)
    ts = _require_unit("target_s", target_s)
    _require_valid(pair)

    def objective(x):
        z = amplitudes_from_angles(x)
        r, s = _restriction_vectors(z, pair)
        q = _q_fast(z, pair, r, s)
        return float(np.sum((r - tr) ** 2) + np.sum((s - ts) ** 2) + np.sum(q * q))

    result = _multistart(objective, seed, restarts, tol)
    br = restrict(result.state, pair)
    result.extra = {
        "restriction_error": float(max(np.linalg.norm(br.r - tr), np.linalg.norm(br.s - ts))),
        "total_correlation": total_correlation(result.state, pair),
    }
    return result


def find_maximally_correlated(pair: BellPair, seed=0, restarts: int = RESTARTS,
                              tol: float = OBJECTIVE_TOL) -> SolveResult:
    """Pure state whose restrictions to both sides are trace states (r = s = 0)."""
    _require_valid(pair)

    def objective(x):
        r, s = _restriction_vectors(amplitudes_from_angles(x), pair)
        return float(np.sum(r * r) + np.sum(s * s))

    result = _multistart(objective, seed, restarts, tol)
    c = total_correlation(result.state, pair)
    if abs(c - 1.0) > 1e-8:
        raise SolverError(f"state with vanishing Bloch vectors has total correlation {c!r}, not 1")
    result.extra = {"total_correlation": c}
    return result


def _q_fast(z: np.ndarray, pair: BellPair, r: np.ndarray, s: np.ndarray) -> np.ndarray:
    bz = [b @ z for b in pair.right]
    return np.array([[np.vdot(z, a @ bzj).real - r[i] * s[j] for j, bzj in enumerate(bz)]
                     for i, a in enumerate(pair.left)])


def separable_state_exact(pair: BellPair, target_r, target_s) -> PureState:
    """Closed-form separable state: the common +1 eigenvector of r.A and s.B.

    Independent of the search in :func:`find_separable`; used to check it.
    """
    tr = _require_unit("target_r", target_r)
    ts = _require_unit("target_s", target_s)
    proj = (np.eye(4) + pair.left.combination(tr)) @ (np.eye(4) + pair.right.combination(ts)) / 4
    w, v = np.linalg.eigh((proj + proj.conj().T) / 2)
    return PureState.from_vector(v[:, -1])


__all__ = [
    "BlochRestriction", "Classification", "Kind", "SolverError", "SolveResult",
    "restrict", "classify", "find_separable", "find_maximally_correlated",
    "separable_state_exact", "printed_prime_restriction", "printed_ab_zero_system",
    "amplitudes_from_angles", "coordinate_search",
]
