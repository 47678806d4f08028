"""Conditional action ("Maxwell instruments"), measurement dilations and entropy bookkeeping."""
from .classical import (
    ClassicalDilation,
    ConditionalMap,
    FiniteDistribution,
    Partition,
    build_classical_dilation,
    marginals,
    pushforward,
)
from .dilation import (
    DilationReport,
    DilationSpec,
    EntropyBalance,
    apply_dilation,
    brute_force_min_entropy,
    build_standard_dilation,
    entropy_balance,
    optimal_unitaries,
    verify_dilation,
)
from .instruments import (
    Instrument,
    QuantumOperation,
    apply_operation,
    dual_apply,
    induced_povm,
    is_demonic,
    is_pure,
    is_sharp,
    luders_instrument,
    maxwell_instrument,
    recover_maxwell_form,
    total_operation,
)
from .linalg import TensorShape, hermitian_eig, partial_trace, polar_decompose, tensor
from .states import (
    DensityOperator,
    Effect,
    ProjectionFamily,
    UnitaryFamily,
    shannon_entropy,
    validate_projection_family,
    vn_entropy,
)

__all__ = [
    "ClassicalDilation",
    "ConditionalMap",
    "DensityOperator",
    "DilationReport",
    "DilationSpec",
    "Effect",
    "EntropyBalance",
    "FiniteDistribution",
    "Instrument",
    "Partition",
    "ProjectionFamily",
    "QuantumOperation",
    "TensorShape",
    "UnitaryFamily",
    "apply_dilation",
    "apply_operation",
    "brute_force_min_entropy",
    "build_classical_dilation",
    "build_standard_dilation",
    "dual_apply",
    "entropy_balance",
    "hermitian_eig",
    "induced_povm",
    "is_demonic",
    "is_pure",
    "is_sharp",
    "luders_instrument",
    "marginals",
    "maxwell_instrument",
    "optimal_unitaries",
    "partial_trace",
    "polar_decompose",
    "pushforward",
    "recover_maxwell_form",
    "shannon_entropy",
    "tensor",
    "total_operation",
    "validate_projection_family",
    "verify_dilation",
    "vn_entropy",
    "__version__",
]

__version__ = "0.1.0"
