"""Finite-quotient seminorms and truncated pro-structures for group algebras."""

from .config import Caps, RunConfig, Tolerances, DEFAULT_CAPS, DEFAULT_TOLERANCES
from .errors import (
    CapExceededError,
    DecompositionFailedError,
    PrecisionFailureError,
    QuotientNotFoundError,
    UnsupportedFamilyError,
)
from .finite_group import (
    FiniteGroup,
    Irrep,
    IrrepDecomposition,
    build_finite_group,
    decompose_regular,
    regular_representation,
)
from .group_algebra import (
    DiscreteGroup,
    FiniteDiscrete,
    FreeGroup2,
    GroupAlgebraElement,
    Heisenberg,
    ZPower,
    discrete_group_from_descriptor,
    element_from_jsonable,
)
from .quotients import (
    FiniteQuotient,
    catalog_quotient,
    connecting_map,
    f2_catalog,
    finite_kernel_quotient,
    identity_quotient,
    min_injective_quotient,
    mod_quotient,
    quotient_from_descriptor,
    refine,
)
from .seminorms import (
    SeminormValue,
    SupSeminormReport,
    finite_algebra_norm,
    kappa,
    seminorm,
    seminorm_via_irreps,
    sup_seminorm,
)
from .prostructure import (
    ConsistentFamily,
    SystemTruncation,
    bounded_check,
    check_consistent,
    faithfulness_probe,
    fullness_check,
    phi_truncated,
    pointwise_topology_demo,
)
from .witnesses import (
    GeneratorRep,
    SeparationWitness,
    factor_through_quotient,
    finite_range_check,
    free_group_u3_check,
    heisenberg_irrep,
    heisenberg_separation,
    rf_amen_witness,
)

__version__ = "0.1.0"
