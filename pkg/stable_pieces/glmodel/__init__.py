from .brute_force import (
    DoubleCosetCheck,
    ModelConfig,
    PartitionResult,
    brute_force_partition,
    measure_unipotent_quotient,
    model_twisted_pair,
    verify_double_coset,
)
from .classifiers import classify_line_hyperplane, classify_line_pair
from .field import Subquotient, Subspace
from .filtration import Filtration, filtration_type, gl_datum, rel_pos
from .quadruple import (
    ModelRecord,
    ModelSignature,
    Quadruple,
    compact,
    make_quadruple,
    refine,
    signature,
    transport,
    verify_partial_positions,
)

__all__ = [
    "DoubleCosetCheck",
    "Filtration",
    "ModelConfig",
    "ModelRecord",
    "ModelSignature",
    "PartitionResult",
    "Quadruple",
    "Subquotient",
    "Subspace",
    "brute_force_partition",
    "classify_line_hyperplane",
    "classify_line_pair",
    "compact",
    "filtration_type",
    "gl_datum",
    "make_quadruple",
    "measure_unipotent_quotient",
    "model_twisted_pair",
    "refine",
    "rel_pos",
    "signature",
    "transport",
    "verify_double_coset",
    "verify_partial_positions",
]
