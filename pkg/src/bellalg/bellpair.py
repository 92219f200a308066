"""Bell pairs of subalgebras: representation, validation and named constructions.

A side of the pair is given by three hermitian, involutive, pairwise
anticommuting generators; the subalgebra is their span together with the
identity. Two sides form a Bell pair when every left generator commutes with
every right generator and the sixteen products A^alpha B^beta span the full
4x4 matrix algebra.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import (
    IDENTITY,
    anticommutator,
    commutator,
    lam,
    rank_of_span,
    span_residual,
)

DEFAULT_TOL = 1e-10
UNITARY_TOL = 1e-10
PRESETS = ("canonical", "paper-AB", "paper-prime")


class PairError(ValueError):
    """Malformed pair specification."""


def _freeze(m) -> np.ndarray:
    m = np.array(m, dtype=complex)
    if m.shape != (4, 4):
        raise PairError(f"generators must be 4x4 matrices, got shape {m.shape}")
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class SubalgebraTriple:
    gens: tuple

    def __post_init__(self):
        if len(self.gens) != 3:
            raise PairError(f"a subalgebra triple needs 3 generators, got {len(self.gens)}")
        object.__setattr__(self, "gens", tuple(_freeze(g) for g in self.gens))

    def __getitem__(self, i: int) -> np.ndarray:
        return self.gens[i]

    def __iter__(self):
        return iter(self.gens)

    def __len__(self) -> int:
        return 3

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubalgebraTriple):
            return NotImplemented
        return all(np.array_equal(a, b) for a, b in zip(self.gens, other.gens))

    def combination(self, coeffs: Sequence[float]) -> np.ndarray:
        """sum_i coeffs[i] * gens[i]."""
        return sum(c * g for c, g in zip(coeffs, self.gens))

    def stacked(self) -> np.ndarray:
        return np.stack(self.gens)


@dataclass(frozen=True, eq=False)
class BellPair:
    left: SubalgebraTriple
    right: SubalgebraTriple
    label: str = field(default="")

    def __post_init__(self):
        if not isinstance(self.left, SubalgebraTriple):
            object.__setattr__(self, "left", SubalgebraTriple(tuple(self.left)))
        if not isinstance(self.right, SubalgebraTriple):
            object.__setattr__(self, "right", SubalgebraTriple(tuple(self.right)))

    # labels are metadata, excluded from equality
    def __eq__(self, other) -> bool:
        if not isinstance(other, BellPair):
            return NotImplemented
        return self.left == other.left and self.right == other.right

    def allclose(self, other: "BellPair", atol: float = 1e-10) -> bool:
        return all(
            np.allclose(a, b, rtol=0, atol=atol)
            for a, b in zip(self.left.gens + self.right.gens, other.left.gens + other.right.gens)
        )

    def swapped(self) -> "BellPair":
        return BellPair(self.right, self.left, self.label)

    def to_json(self) -> dict:
        def mat(m):
            return {"re": m.real.tolist(), "im": m.imag.tolist()}
        return {
            "label": self.label,
            "left": [mat(g) for g in self.left],
            "right": [mat(g) for g in self.right],
        }


@dataclass
class ValidationReport:
    """Per-condition maximum violations of the Bell pair axioms.

    ``rank`` is the dimension of the span of the 16 products; ``passed``
    requires every violation to be within ``tol`` and ``rank == 16``.
    """

    hermiticity: float
    involution: float
    traceless: float
    anticommutation: float
    cross_commutation: float
    closure: float
    side_ranks: tuple
    rank: int
    tol: float

    @property
    def checks(self) -> dict:
        t = self.tol
        return {
            "hermiticity": self.hermiticity <= t,
            "involution": self.involution <= t,
            "traceless": self.traceless <= t,
            "anticommutation": self.anticommutation <= t,
            "cross_commutation": self.cross_commutation <= t,
            "independence": self.side_ranks == (4, 4),
            "closure": self.closure <= t,
            "generation": self.rank == 16,
        }

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def max_violation(self) -> float:
        return max(self.hermiticity, self.involution, self.traceless,
                   self.anticommutation, self.cross_commutation, self.closure)

    def failed(self) -> list:
        return [k for k, ok in self.checks.items() if not ok]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "tol": self.tol,
            "checks": self.checks,
            "violations": {
                "hermiticity": self.hermiticity,
                "involution": self.involution,
                "traceless": self.traceless,
                "anticommutation": self.anticommutation,
                "cross_commutation": self.cross_commutation,
                "closure": self.closure,
            },
            "side_ranks": list(self.side_ranks),
            "generation_rank": self.rank,
        }


def _maxabs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m)))


def _side_closure(gens) -> float:
    basis = [IDENTITY, *gens]
    return max(span_residual(x @ y, basis) for x in gens for y in gens)


def validate(pair: BellPair, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check every defining relation of a Bell pair; failures are reported, not raised."""
    gens = pair.left.gens + pair.right.gens
    herm = max(_maxabs(g - g.conj().T) for g in gens)
    invol = max(_maxabs(g @ g - IDENTITY) for g in gens)
    trace = max(abs(np.trace(g)) for g in gens)
    anti = max(
        _maxabs(anticommutator(side[i], side[j]))
        for side in (pair.left, pair.right)
        for i, j in itertools.combinations(range(3), 2)
    )
    cross = max(_maxabs(commutator(a, b)) for a in pair.left for b in pair.right)
    closure = max(_side_closure(pair.left.gens), _side_closure(pair.right.gens))
    side_ranks = (
        rank_of_span([IDENTITY, *pair.left.gens]),
        rank_of_span([IDENTITY, *pair.right.gens]),
    )
    products = [a @ b for a in (IDENTITY, *pair.left.gens) for b in (IDENTITY, *pair.right.gens)]
    return ValidationReport(
        hermiticity=herm,
        involution=invol,
        traceless=float(trace),
        anticommutation=anti,
        cross_commutation=cross,
        closure=closure,
        side_ranks=side_ranks,
        rank=rank_of_span(products),
        tol=tol,
    )


def canonical_pair() -> BellPair:
    """(1 (x) sigma_i) against (sigma_i (x) 1): the tensor-product partition."""
    return BellPair(
        SubalgebraTriple((lam(1), lam(2), lam(3))),
        SubalgebraTriple((lam(4), lam(5), lam(6))),
        "canonical",
    )


def paper_pair_ab() -> BellPair:
    """Pair under which e1, e2 are separable and e3, e4 maximally correlated."""
    s = 1 / math.sqrt(2)
    left = (
        s * (lam(4) + lam(11)),
        s * (lam(10) - lam(12)),
        -0.5 * (lam(1) + lam(3) - lam(13) + lam(15)),
    )
    right = (
        s * (lam(7) + lam(9)),
        -s * (lam(5) + lam(8)),
        0.5 * (lam(1) - lam(3) - lam(13) - lam(15)),
    )
    return BellPair(SubalgebraTriple(left), SubalgebraTriple(right), "paper-AB")


def paper_pair_prime() -> BellPair:
    """Pair for which the canonically maximally entangled family has total
    correlation sqrt(a^2 (1-a^2) (2 + cos 2phi - cos 2theta))."""
    s = 1 / math.sqrt(2)
    left = (
        -0.5 * (lam(3) - lam(6) - lam(7) + lam(11)),
        -lam(10),
        -0.5 * (lam(3) + lam(6) - lam(7) - lam(11)),
    )
    right = (
        s * (lam(1) - lam(9)),
        -s * (lam(5) - lam(14)),
        lam(15),
    )
    return BellPair(SubalgebraTriple(left), SubalgebraTriple(right), "paper-prime")


def preset(name: str) -> BellPair:
    builders = {
        "canonical": canonical_pair,
        "paper-AB": paper_pair_ab,
        "paper-prime": paper_pair_prime,
    }
    try:
        return builders[name]()
    except KeyError:
        raise PairError(f"unknown pair preset {name!r}; choose from {', '.join(PRESETS)}") from None


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    return u.shape == (4, 4) and _maxabs(u.conj().T @ u - IDENTITY) <= tol


def transported_pair(u: np.ndarray, base: BellPair, label: str | None = None) -> BellPair:
    """Image of ``base`` under G -> U G U^dagger.

    Equivalently the pair alpha^{-1}(base) for the automorphism
    alpha(A) = U^{-1} A U.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError("transport requires a unitary 4x4 matrix")
    ud = u.conj().T

    def move(side):
        return SubalgebraTriple(tuple(u @ g @ ud for g in side))

    return BellPair(move(base.left), move(base.right), label if label is not None else base.label)


# JSON ---------------------------------------------------------------------

def _matrix_from_json(obj, where: str) -> np.ndarray:
    if not isinstance(obj, dict) or "re" not in obj or "im" not in obj:
        raise PairError(f"{where}: matrix must be an object with 're' and 'im'")
    try:
        re = np.array(obj["re"], dtype=float)
        im = np.array(obj["im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise PairError(f"{where}: non-numeric entries ({exc})") from None
    if re.shape != (4, 4) or im.shape != (4, 4):
        raise PairError(f"{where}: expected 4x4 're'/'im', got {re.shape} / {im.shape}")
    return re + 1j * im


def pair_from_json(obj) -> BellPair:
    """Parse any of the accepted pair encodings.

    ``{"preset": name}``, ``{"transport": {"base": name, "unitary": matrix}}``
    or an explicit ``{"label": ..., "left": [3 matrices], "right": [3 matrices]}``.
    """
    if not isinstance(obj, dict):
        raise PairError("pair JSON must be an object")
    if "preset" in obj:
        return preset(obj["preset"])
    if "transport" in obj:
        spec = obj["transport"]
        if not isinstance(spec, dict) or "base" not in spec or "unitary" not in spec:
            raise PairError("transport: needs 'base' and 'unitary'")
        u = _matrix_from_json(spec["unitary"], "transport.unitary")
        if not is_unitary(u):
            raise PairError("transport.unitary: matrix is not unitary")
        return transported_pair(u, preset(spec["base"]), label=f"transport({spec['base']})")
    for side in ("left", "right"):
        if side not in obj:
            raise PairError(f"missing field {side!r}")
        if not isinstance(obj[side], list) or len(obj[side]) != 3:
            raise PairError(f"{side}: expected a list of 3 matrices")
    left = tuple(_matrix_from_json(m, f"left[{i}]") for i, m in enumerate(obj["left"]))
    right = tuple(_matrix_from_json(m, f"right[{i}]") for i, m in enumerate(obj["right"]))
    return BellPair(SubalgebraTriple(left), SubalgebraTriple(right), str(obj.get("label", "")))


def load_pair(spec: str) -> BellPair:
    """Resolve a preset name, or read a pair JSON file."""
    if spec in PRESETS:
        return preset(spec)
    with open(spec) as fh:
        return pair_from_json(json.load(fh))
