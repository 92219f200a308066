"""Algebraic two-qubit non-separability: Bell pairs of subalgebras,
correlation matrices and total correlation."""

from .algebra import (
    anticommutator,
    commutator,
    decompose,
    generator_table,
    kron,
    lam,
    pauli,
    rank_of_span,
    reconstruct,
)
from .bellpair import (
    BellPair,
    SubalgebraTriple,
    ValidationReport,
    canonical_pair,
    paper_pair_ab,
    paper_pair_prime,
    transported_pair,
    validate,
)
from .correlation import (
    brute_force_correlation,
    concurrence,
    correlation_matrix,
    spectral_norm,
    total_correlation,
)
from .separability import (
    BlochRestriction,
    Classification,
    Kind,
    classify,
    find_maximally_correlated,
    find_separable,
    restrict,
)
from .states import (
    MixedState,
    PureState,
    abmax_state,
    expectation,
    maxent_state,
    phi_state,
    random_pure,
    w_vector,
)
from .transport import realize_correlation, unitary_from_states

__version__ = "0.1.0"
