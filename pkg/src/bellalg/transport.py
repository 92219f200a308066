"""Moving Bell pairs by unitary conjugation to realize a prescribed correlation.

Given Psi and a target c, take Phi(c) (total correlation c for the canonical
pair) and a unitary U with U Phi = Psi. The pair with generators U G U^dagger
then gives Psi total correlation exactly c, since
<Psi, U G U^dagger Psi> = <Phi, G Phi>.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .bellpair import BellPair, canonical_pair, is_unitary, transported_pair
from .states import PureState, _as_rng, phi_state

RESIDUAL_TOL = 1e-8


def complete_basis(v: np.ndarray, order: Sequence[int] = (0, 1, 2, 3)) -> np.ndarray:
    """Unitary matrix whose first column is ``v``.

    Remaining columns come from Gram-Schmidt on the canonical basis vectors
    taken in ``order``; candidates whose residual norm is below 1e-8 are
    skipped.
    """
    v = np.asarray(v, dtype=complex)
    cols = [v / np.linalg.norm(v)]
    for k in order:
        if len(cols) == 4:
            break
        e = np.zeros(4, dtype=complex)
        e[k] = 1.0
        # two passes of classical Gram-Schmidt
        for _ in range(2):
            for c in cols:
                e = e - np.vdot(c, e) * c
        n = np.linalg.norm(e)
        if n < RESIDUAL_TOL:
            continue
        cols.append(e / n)
    if len(cols) != 4:
        raise ValueError(f"basis order {tuple(order)} does not complete to 4 vectors")
    return np.column_stack(cols)


def unitary_from_states(phi: PureState, psi: PureState,
                        order: Sequence[int] = (0, 1, 2, 3)) -> np.ndarray:
    """Unitary U with U phi = psi (both completed with the same basis ``order``)."""
    w_phi = complete_basis(phi.amplitudes, order)
    w_psi = complete_basis(psi.amplitudes, order)
    return w_psi @ w_phi.conj().T


def random_unitary(seed=None) -> np.ndarray:
    """Haar-random 4x4 unitary (QR of a complex Ginibre matrix, phases fixed)."""
    rng = _as_rng(seed)
    z = (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def apply_unitary(u: np.ndarray, state: PureState) -> PureState:
    if not is_unitary(u):
        raise ValueError("matrix is not unitary")
    return PureState.from_vector(np.asarray(u) @ state.amplitudes)


def realize_correlation(psi: PureState, c: float,
                        order: Sequence[int] = (0, 1, 2, 3)) -> BellPair:
    """Bell pair in which ``psi`` has total correlation ``c``."""
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"target correlation must lie in [0, 1], got {c!r}")
    u = unitary_from_states(phi_state(c), psi, order)
    return transported_pair(u, canonical_pair(), label=f"transport(c={c:.17g})")
