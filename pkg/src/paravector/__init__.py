"""Clifford algebras, the paravector model of conformal spacetime and twistors."""
from .clifford import (
    ConvergenceError,
    Multivector,
    Signature,
    SignatureMismatch,
    commutator,
    conjugation,
    geometric_product,
    grade_involution,
    grade_project,
    inverse,
    metric_pairing,
    mv_exp,
    reversion,
    wedge,
)

__all__ = [
    "ConvergenceError", "Multivector", "Signature", "SignatureMismatch", "commutator",
    "conjugation", "geometric_product", "grade_involution", "grade_project", "inverse",
    "metric_pairing", "mv_exp", "reversion", "wedge",
]
