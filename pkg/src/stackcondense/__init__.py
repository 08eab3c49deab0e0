"""Exact cochain-level computations for fermionic SPT shifts on finite groups.

Modules:

* ``groups``: finite groups as multiplication tables, with presets.
* ``linalg``: bit-packed F_2 linear algebra and exact Q/Z vectors.
* ``cochains`` / ``cohomology``: the normalized bar complex, cup-i products,
  Steenrod squares, Bockstein, coboundary tests and cohomology bases.
* ``supercoh``: supercohomology cocycles and the stack-and-condense shift.
* ``premodular``: SO(n)_1 / Spin(n)_1 tables and condensation of 1 + psi f.
* ``spinflow``: which Spin(n)_1 couple to a spin-G_f background.
"""

from .groups import FiniteGroup, preset
from .cochains import Cochain, CohomologyClass, bockstein, cup, cup_i, differential, steenrod_sq
from .cohomology import cohomology_dim, is_coboundary, named_classes, reduced_kappa
from .supercoh import SupercohCocycle, orbit_period, predicted_period, shift_once, validate_cocycle
from .premodular import condense, deligne_product, identify, so_category, spin_category
from .spinflow import consistent_set, crosscheck_theoremB, feasible, image_of_F

__version__ = "0.1.0"

__all__ = [
    "FiniteGroup", "preset", "Cochain", "CohomologyClass", "bockstein", "cup", "cup_i",
    "differential", "steenrod_sq", "cohomology_dim", "is_coboundary", "named_classes",
    "reduced_kappa", "SupercohCocycle", "orbit_period", "predicted_period", "shift_once",
    "validate_cocycle", "condense", "deligne_product", "identify", "so_category",
    "spin_category", "consistent_set", "crosscheck_theoremB", "feasible", "image_of_F",
]
