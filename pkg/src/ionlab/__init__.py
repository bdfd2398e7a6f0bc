"""Numerical laboratory for atomic excess-charge bounds.

Submodules: ``radial`` (grids and single-profile functionals), ``hartree``
(self-consistent mean-field atom and its critical mass), ``gn`` (sharp
interpolation constant and analytic upper bounds), ``beta`` (symmetrized
kernel functionals, continuum and discrete), ``bounds`` (closed-form bound
formulas and tables), ``report`` (end-to-end reproduction suite).
"""

from . import kernels
from .bounds import (
    Constants,
    DEFAULT_CONSTANTS,
    compare_table,
    crossover_vs_nam,
    hartree_bound,
    lieb_bound,
    main_bound,
    nam_bound,
)
from .errors import IonlabError
from .gn import gn_ratio, nasibov_kn, solve_ground_state
from .hartree import HartreeSolution, SCFConfig, critical_mass, solve
from .radial import RadialGrid, RadialProfile

__version__ = "0.1.0"

__all__ = [
    "Constants",
    "DEFAULT_CONSTANTS",
    "HartreeSolution",
    "IonlabError",
    "RadialGrid",
    "RadialProfile",
    "SCFConfig",
    "compare_table",
    "critical_mass",
    "crossover_vs_nam",
    "gn_ratio",
    "hartree_bound",
    "kernels",
    "lieb_bound",
    "main_bound",
    "nam_bound",
    "nasibov_kn",
    "solve",
    "solve_ground_state",
]
