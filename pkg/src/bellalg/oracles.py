"""Independent cross-checks run by ``bellalg oracle-check``.

Each oracle recomputes a quantity by a route that does not share code with
the implementation it checks:

* ``w``: closed-form w_j against <Psi, lam(j) Psi> from the generator matrices.
* ``concurrence``: ||Q|| for the canonical pair against 2 |z1 z4 - z2 z3|.
* ``brute_force``: sampled |omega(AB) - omega(A) omega(B)| against ||Q||.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import GeneratorTable, generator_table
from .bellpair import canonical_pair, transported_pair
from .correlation import (
    brute_force_correlation,
    concurrence,
    concurrence_closed_form,
    correlation_matrix,
    spectral_norm,
)
from .states import expectation, random_pure, w_vector
from .transport import random_unitary

W_TOL = 1e-12
CONCURRENCE_TOL = 1e-10
BRUTE_UPPER_TOL = 1e-10
BRUTE_WINDOW = 0.05


def power_iteration_norm(q: np.ndarray, iters: int = 100_000, tol: float = 1e-15) -> float:
    """Largest singular value of ``q`` by power iteration on Q^T Q."""
    q = np.asarray(q, dtype=float)
    m = q.T @ q
    v = np.ones(m.shape[0]) / np.sqrt(m.shape[0])
    est = 0.0
    for _ in range(iters):
        w = m @ v
        n = np.linalg.norm(w)
        if n == 0.0:
            return 0.0
        v = w / n
        new = float(v @ m @ v)
        if abs(new - est) <= tol * max(new, 1e-300):
            est = new
            break
        est = new
    return float(np.sqrt(max(est, 0.0)))


@dataclass
class OracleResult:
    name: str
    max_deviation: float
    tolerance: float
    worst_case: int
    cases: int
    passed: bool
    detail: dict = field(default_factory=dict)

    def line(self, seed) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name}: max deviation {self.max_deviation:.3e} "
                f"(tol {self.tolerance:.0e}) over {self.cases} cases; "
                f"worst case seed=[{seed}, {self.worst_case}]")


def _case_rng(seed: int, k: int) -> np.random.Generator:
    return np.random.default_rng([seed, k])


def w_oracle(seed: int, n: int, table: GeneratorTable | None = None) -> OracleResult:
    table = table if table is not None else generator_table()
    worst, worst_k = 0.0, 0
    for k in range(n):
        psi = random_pure(_case_rng(seed, k))
        direct = np.array([expectation(psi, table[j]).real for j in range(1, 16)])
        dev = float(np.max(np.abs(w_vector(psi) - direct)))
        if dev > worst:
            worst, worst_k = dev, k
    return OracleResult("w_vector vs <Psi|lam_j Psi>", worst, W_TOL, worst_k, n, worst <= W_TOL)


def concurrence_oracle(seed: int, n: int) -> OracleResult:
    worst, worst_k = 0.0, 0
    for k in range(n):
        psi = random_pure(_case_rng(seed, k))
        dev = abs(concurrence(psi) - concurrence_closed_form(psi))
        if dev > worst:
            worst, worst_k = dev, k
    return OracleResult("||Q|| (canonical) vs 2|z1z4-z2z3|", worst, CONCURRENCE_TOL,
                        worst_k, n, worst <= CONCURRENCE_TOL)


def brute_force_oracle(seed: int, n: int, samples: int = 10_000) -> OracleResult:
    """Sampled supremum must lie in [||Q|| - 0.05, ||Q|| + 1e-10].

    Pairs are Haar transports of the canonical pair. The reported deviation
    is the worst violation of that window (0 when every case is inside).
    """
    worst, worst_k = 0.0, 0
    over = 0.0
    gap = 0.0
    for k in range(n):
        rng = _case_rng(seed, k)
        psi = random_pure(rng)
        pair = transported_pair(random_unitary(rng), canonical_pair())
        norm = spectral_norm(correlation_matrix(psi, pair))
        bf = brute_force_correlation(psi, pair, samples, rng)
        over = max(over, bf - norm)
        gap = max(gap, norm - bf)
        violation = max(bf - norm - BRUTE_UPPER_TOL, norm - bf - BRUTE_WINDOW, 0.0)
        if violation > worst:
            worst, worst_k = violation, k
    return OracleResult("brute-force sup vs ||Q||", worst, 0.0, worst_k, n, worst == 0.0,
                        {"max_excess": over, "max_shortfall": gap, "samples": samples})


def run_all(seed: int, n: int, samples: int = 10_000,
            table: GeneratorTable | None = None) -> list:
    return [
        w_oracle(seed, n, table),
        concurrence_oracle(seed, n),
        brute_force_oracle(seed, n, samples),
    ]
