"""Exact N-complexes and graded q-differential algebras over Q and Q(zeta_N)."""

from .cochain import (
    BimoduleSpec,
    CopresimplicialSpace,
    SimplicialComplexSpec,
    d_q_from_cofaces,
    dual_product_complex,
    hochschild_complex,
    hochschild_qdga,
    simplicial_forms,
)
from .errors import (
    AxiomViolation,
    InclusionViolation,
    IndeterminateError,
    InputError,
    NotWellDefined,
    QnilError,
    ResourceCapExceeded,
)
from .exact_linalg import ExactMatrix, SubspaceBasis, image_basis, kernel_basis, rank
from .ncomplex import NComplex, StringSpec, hexagon_check, homology, long_sequence_check, string_complex
from .qdga import QDGA, AlgebraSpec, leibniz_check, matrix_qdga, pullback_grading
from .scalars import Scalar, ScalarField, cyclotomic_field, q_factorial, q_generator, q_integer, rational_field
from .universal import extended_complex, induced_homomorphism, tensor_qdga, universal_envelope

__version__ = "0.1.0"
