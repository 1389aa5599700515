"""tolift: lift tolerances of finite algebras to images of congruences.

For any finite algebra A and tolerance T, builds an algebra B satisfying the
same linear identities, a congruence theta of B, and a surjective
homomorphism phi with phi(theta) = T, then verifies every claim
independently.  See the README for the CLI and file formats.
"""

from .algebra import (FiniteAlgebra, IdentityReport, direct_product, evaluate,
                      format_algebra, parse_algebra, satisfies, satisfies_all,
                      subuniverse_closure)
from .complexes import (BlockAlgebra, ComplexAlgebra, LiftResult,
                        VerificationReport, block_algebra, complex_algebra,
                        complex_term_eval, lift, pointwise_term_eval, verify_lift)
from .errors import (CapExceededError, EvalError, LiftInternalError,
                     LiftStructureError, NotAToleranceError, ParseError,
                     SignatureMismatchError, ToliftError)
from .kernels import active_backend
from .liftio import read_lift, write_lift
from .relations import (BinaryRelation, Congruence, ElementMap, Tolerance,
                        enumerate_tolerances, image_under, is_compatible,
                        is_congruence, is_tolerance, kernel, tolerance_generated)
from .terms import (App, Identity, IdentitySet, Signature, Term, Var,
                    is_balanced_linear, is_linear, parse_identity,
                    parse_identity_file, parse_term, print_term,
                    variable_occurrences)

__version__ = "0.1.0"

__all__ = [
    "App", "BinaryRelation", "BlockAlgebra", "CapExceededError",
    "ComplexAlgebra", "Congruence", "ElementMap", "EvalError", "FiniteAlgebra",
    "Identity", "IdentityReport", "IdentitySet", "LiftInternalError",
    "LiftResult", "LiftStructureError", "NotAToleranceError", "ParseError",
    "Signature", "SignatureMismatchError", "Term", "Tolerance", "ToliftError",
    "Var", "VerificationReport", "active_backend", "block_algebra",
    "complex_algebra", "complex_term_eval", "direct_product",
    "enumerate_tolerances", "evaluate", "format_algebra", "image_under",
    "is_balanced_linear", "is_compatible", "is_congruence", "is_linear",
    "is_tolerance", "kernel", "lift", "parse_algebra", "parse_identity",
    "parse_identity_file", "parse_term", "pointwise_term_eval", "print_term",
    "read_lift", "satisfies", "satisfies_all", "subuniverse_closure",
    "tolerance_generated", "variable_occurrences", "verify_lift", "write_lift",
]
