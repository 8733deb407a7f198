"""Heegner points and special cycles on non-split Cartan modular curves.

Binary quadratic forms with Cartan congruence conditions, the lattice L_ns
and its discriminant form, Hecke actions on special cycles, and the
coefficient bookkeeping that ties Heegner data to Jacobi forms.
"""

from .cartan import CartanContext, CartanForm, cartan_class_reps, s_invariant, valid_s
from .qforms import QuadForm, Sl2Matrix, act, class_reps, reduce

__version__ = "0.1.0"

__all__ = [
    "CartanContext",
    "CartanForm",
    "QuadForm",
    "Sl2Matrix",
    "act",
    "cartan_class_reps",
    "class_reps",
    "reduce",
    "s_invariant",
    "valid_s",
]
