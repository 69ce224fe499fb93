"""Separability criteria from the Bloch representation of density matrices."""

from .bloch import (
    BlochDecomposition,
    CorrelationTensor,
    bipartite_decomposition,
    delta_operator,
    generalized_tensor,
)
from .criteria import (
    CriterionParams,
    CriterionReport,
    build_s_matrix,
    ccnr_check,
    evaluate,
    matricize,
    ppt_check,
    preset,
    proposition1_condition,
    theorem1_check,
    theorem2_best,
    theorem2_check,
)
from .numerics import ContractViolation, NumericalFailure
from .states import (
    DensityMatrix,
    PureState,
    bell_pair,
    density_from_pure,
    ghz_perturbed,
    horodecki_2x4,
    maximally_mixed,
    mix,
    random_separable,
    validate,
)
from .su_basis import GeneratorSet, gell_mann_generators

__version__ = "0.1.0"
