"""Reciprocal bases, co/contravariant components, metrics and coordinate charts."""

from .errors import (
    DegenerateBasis,
    DimensionMismatch,
    FingerprintMismatch,
    InputError,
    NonFinite,
    NotPositiveDefinite,
    NotSymmetric,
    NotUnitBasis,
    NumericalError,
    ObliqueError,
    OutOfDomain,
    RankDeficient,
    SingularGram,
    SingularJacobian,
    VarianceMismatch,
    ZeroTangent,
)
from .euclid3 import Vec3, cross, dot, triple
from .gram import GramMatrix, InverseGram, closed_form_inverse_unit3, determinant_unit3, gram_matrix, invert
from .metric import (
    BasisN,
    ComponentVector,
    MetricKind,
    MetricTensor,
    inverse_metric,
    line_element,
    lower_index,
    metric_from_basis,
    raise_index,
    tangent_normalization_defect,
)
from .reciprocal import (
    Basis3,
    Components3,
    completeness_defect,
    components_via_gram,
    contravariant_components,
    covariant_components,
    duality_defect,
    reciprocal_basis,
    reconstruct,
    scalar_product_mixed,
)
from .variance import Role, Variance

__version__ = "0.1.0"
