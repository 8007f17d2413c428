"""Exceptional Hermite polynomials indexed by integer partitions.

Exact construction (rational arithmetic) of eta_lambda and the family
H^lambda_n, exact verification of their differential identities and
Darboux factorization chains, and a Gauss-Hermite quadrature cross-check
of the orthogonality and norming constants.
"""

from .errors import (
    AdmissibilityError,
    ArgumentError,
    GapDegreeError,
    InconsistencyError,
    InfeasibleGapSetError,
    PartitionValidationError,
    XHermiteError,
)
from .exactpoly import DEG_ZERO, ExactPoly, RatFun, X, count_real_roots, wronskian
from .family import (
    FamilySpec,
    NormingConstant,
    c_constant,
    eta,
    exceptional_hermite,
    hermite,
    norming_constant,
    pi_factor,
)
from .operators import (
    ChainStep,
    build_chain,
    chi,
    spectrum,
    verify_eigen,
    verify_factorization,
)
from .partitions import (
    DegreeSets,
    Partition,
    conjugate,
    degree_sets,
    is_even,
    make_partition,
    partition_from_gapset,
    truncate,
)

__version__ = "0.1.0"
