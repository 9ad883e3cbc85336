"""Exact p-local computer algebra for BP co-operations and the unstable
cobar complex, with a coassociativity solver and closed-form homotopy
group calculators."""

from .algebra import AlgebraConfig, GammaElement
from .cobar import CobarElement, admissible, alpha, desuspend_normalize, differential, excess, push_left
from .comodule import Comodule, formal_sphere, sphere, y7_even
from .plocal import PLocalityViolation, PLocalScalar, nu
from .structure import coproduct, hazewinkel_m, reduced_coproduct, right_unit

__version__ = "0.1.0"

__all__ = [
    "AlgebraConfig",
    "GammaElement",
    "CobarElement",
    "Comodule",
    "PLocalScalar",
    "PLocalityViolation",
    "nu",
    "admissible",
    "alpha",
    "coproduct",
    "desuspend_normalize",
    "differential",
    "excess",
    "formal_sphere",
    "hazewinkel_m",
    "push_left",
    "reduced_coproduct",
    "right_unit",
    "sphere",
    "y7_even",
    "__version__",
]
