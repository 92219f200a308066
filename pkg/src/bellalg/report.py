from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bellpair import BellPair
from .correlation import correlation_matrix, spectral_norm
from .separability import EPS_MAX, EPS_SEP, classify, restrict
from .states import MixedState, State


@dataclass
class CorrelationReport:
    q: np.ndarray
    norm: Optional[float]
    r: np.ndarray
    s: np.ndarray
    classification: str

    def to_json(self) -> dict:
        return {
            "q": self.q.tolist(),
            "norm": self.norm,
            "r": self.r.tolist(),
            "s": self.s.tolist(),
            "classification": self.classification,
        }


def analyze(state: State, pair: BellPair, eps_sep: float = EPS_SEP,
            eps_max: float = EPS_MAX) -> CorrelationReport:
    """Correlation matrix, total correlation, Bloch vectors and classification.

    Mixed states get Q and the Bloch vectors only; their norm is reported as
    None and they are left unclassified.
    """
    q = correlation_matrix(state, pair)
    br = restrict(state, pair)
    if isinstance(state, MixedState):
        return CorrelationReport(q, None, br.r, br.s, "Unclassified(mixed)")
    cls = classify(state, pair, eps_sep, eps_max)
    return CorrelationReport(q, spectral_norm(q), br.r, br.s, str(cls))
