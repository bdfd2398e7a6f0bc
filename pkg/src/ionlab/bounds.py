"""Closed-form excess-charge bounds and their comparison machinery.

Implemented bounds on the largest bound particle number N of a charge-Z
atom (units hbar = 2m = e = 1):

    lieb      2 Z + 1                      (any statistics)
    nam       1.22 Z + 3 Z^(1/3)           (fermions)
    hartree   5 Z / (4 beta)               (mean-field model)
    main      1.5211 Z + 1 + Z^(1/3) h(Z)  (any statistics)

with h(Z) = (3D/8b)(2 + 1/Z)^(1/3) + (9D^2/32b)(2/Z + 1/Z^2)^(2/3),
D the product of the Lieb-Oxford and interpolation constants and
b = 0.8218 the adopted kernel lower bound. The headline coefficient
1.5211 is frozen as printed in the reference table; the recomputed value
5/(4 b) = 1.52105... is reported alongside. All bounds are strict, so the
largest admissible integer is ceil(bound) - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .hartree import HartreeSolution

_BOUND_ORDER = ("main", "nam", "lieb")  # tie-break preference in tables
PAPER_CROSSOVER_CLAIM = 26


@dataclass(frozen=True)
class Constants:
    """Dimensionless constants feeding the bound formulas.

    ``d_const`` defaults to the printed rounded value 0.4403; build with
    :meth:`resolved` to derive it as c_lo * c_gn instead.
    """

    c_lo: float = 1.57
    c_gn: float = 0.2793
    d_const: float = 0.4403
    beta_lower: float = 0.8218
    beta_upper: float = 0.8705

    def __post_init__(self):
        if min(self.c_lo, self.c_gn, self.beta_lower, self.beta_upper) <= 0:
            raise ValueError("constants must be positive")
        if self.d_const < 0:
            raise ValueError("d_const must be nonnegative")
        if self.beta_lower > self.beta_upper:
            raise ValueError("beta_lower must not exceed beta_upper")

    @classmethod
    def resolved(cls, c_lo: Optional[float] = None, c_gn: Optional[float] = None,
                 d_const: Optional[float] = None,
                 beta_lower: Optional[float] = None) -> "Constants":
        """Apply overrides; D is recomputed as c_lo * c_gn when either is
        overridden without an explicit d_const."""
        base = cls()
        lo = base.c_lo if c_lo is None else c_lo
        gn = base.c_gn if c_gn is None else c_gn
        if d_const is None:
            d_const = lo * gn if (c_lo is not None or c_gn is not None) else base.d_const
        return cls(c_lo=lo, c_gn=gn, d_const=d_const,
                   beta_lower=base.beta_lower if beta_lower is None else beta_lower)


DEFAULT_CONSTANTS = Constants()


def lieb_bound(Z: float) -> float:
    """2 Z + 1."""
    return 2.0 * Z + 1.0


def nam_bound(Z: float) -> float:
    """1.22 Z + 3 Z^(1/3)."""
    return 1.22 * Z + 3.0 * Z ** (1.0 / 3.0)


def hartree_bound(Z: float, c: Constants = DEFAULT_CONSTANTS) -> float:
    """5 Z / (4 beta_lower), about 1.5211 Z with the default constant."""
    return 5.0 * Z / (4.0 * c.beta_lower)


def recomputed_headline(c: Constants = DEFAULT_CONSTANTS) -> float:
    """5/(4 beta_lower), the unrounded linear coefficient of the main bound."""
    return 5.0 / (4.0 * c.beta_lower)


def a_coeff(N: float, Z: float, c: Constants = DEFAULT_CONSTANTS) -> float:
    """(3D/8b)(N/Z)^(1/3) + (9D^2/32b)(N/Z^2)^(2/3)."""
    D, b = c.d_const, c.beta_lower
    return (3.0 * D / (8.0 * b)) * (N / Z) ** (1.0 / 3.0) \
        + (9.0 * D * D / (32.0 * b)) * (N / Z**2) ** (2.0 / 3.0)


def h_of_z(Z: float, c: Constants = DEFAULT_CONSTANTS) -> float:
    """a_coeff evaluated at N = 2Z + 1; strictly decreasing in Z."""
    D, b = c.d_const, c.beta_lower
    return (3.0 * D / (8.0 * b)) * (2.0 + 1.0 / Z) ** (1.0 / 3.0) \
        + (9.0 * D * D / (32.0 * b)) * (2.0 / Z + 1.0 / Z**2) ** (2.0 / 3.0)


def delta_u0(N: float, Z: float, c: Constants = DEFAULT_CONSTANTS) -> Tuple[float, float]:
    """delta = 3 D N^(1/3) / Z and u0 = (delta + sqrt(delta^2 + 4))/2,
    the positive root of u^2 - delta u - 1 = 0."""
    delta = 3.0 * c.d_const * N ** (1.0 / 3.0) / Z
    return delta, 0.5 * (delta + math.sqrt(delta * delta + 4.0))


def main_bound(Z: float, c: Constants = DEFAULT_CONSTANTS) -> float:
    """1.5211 Z + 1 + Z^(1/3) h(Z)."""
    return 1.5211 * Z + 1.0 + Z ** (1.0 / 3.0) * h_of_z(Z, c)


def main_bound_frozen_a(Z: float, a: float = 0.29363) -> float:
    """The fixed-coefficient form 1.5211 Z + 1 + a Z^(1/3) (meant for Z >= 6,
    where a = 0.29363 dominates h(Z))."""
    return 1.5211 * Z + 1.0 + a * Z ** (1.0 / 3.0)


def integer_cap(bound: float) -> int:
    """Largest integer below a strict bound: ceil(bound) - 1."""
    return int(math.ceil(bound)) - 1


@dataclass(frozen=True)
class BoundReport:
    """Per-Z evaluation of the four bounds.

    ``a`` is the error coefficient evaluated self-consistently at
    N = main(Z); ``h_z`` its N = 2Z+1 majorant. Winners are chosen among
    the many-body bounds (lieb, nam, main); the mean-field hartree column
    bounds a different object and is reported for reference only.
    """

    Z: int
    lieb: float
    nam: float
    hartree: float
    main: float
    a: float
    h_z: float
    best_real: str
    best_integer: str
    max_integer: Dict[str, int]

    def csv_row(self) -> dict:
        return {
            "Z": self.Z, "lieb": self.lieb, "nam": self.nam,
            "hartree": self.hartree, "main": self.main,
            "a": self.a, "hZ": self.h_z,
            "best_real": self.best_real, "best_integer": self.best_integer,
        }


def _winner(values: Dict[str, float]) -> str:
    return min(_BOUND_ORDER, key=lambda name: (values[name], _BOUND_ORDER.index(name)))


def compare_table(z_min: int, z_max: int, c: Constants = DEFAULT_CONSTANTS) -> List[BoundReport]:
    """Bound comparison for integer Z in [z_min, z_max]."""
    if not 1 <= z_min <= z_max:
        raise ValueError("need 1 <= z_min <= z_max")
    out = []
    for Z in range(z_min, z_max + 1):
        vals = {"lieb": lieb_bound(Z), "nam": nam_bound(Z), "main": main_bound(Z, c)}
        caps = {name: integer_cap(v) for name, v in vals.items()}
        out.append(BoundReport(
            Z=Z,
            lieb=vals["lieb"],
            nam=vals["nam"],
            hartree=hartree_bound(Z, c),
            main=vals["main"],
            a=a_coeff(vals["main"], Z, c),
            h_z=h_of_z(Z, c),
            best_real=_winner(vals),
            best_integer=_winner({k: float(v) for k, v in caps.items()}),
            max_integer=dict(caps, hartree=integer_cap(hartree_bound(Z, c))),
        ))
    return out


@dataclass(frozen=True)
class CrossoverReport:
    """Largest Z at which the main bound still ties or beats the fermionic one.

    ``claimed`` carries the published headline value for side-by-side
    display; the computed values are not forced to agree with it.
    """

    integer_z: int
    real_z: int
    claimed: int = PAPER_CROSSOVER_CLAIM


def crossover_vs_nam(c: Constants = DEFAULT_CONSTANTS, z_cap: int = 10000) -> CrossoverReport:
    """Scan integer Z for the last point with main <= nam (real and floored)."""
    integer_z = 0
    real_z = 0
    for Z in range(1, z_cap + 1):
        m, n = main_bound(Z, c), nam_bound(Z)
        if m <= n:
            real_z = Z
        if math.floor(m) <= math.floor(n):
            integer_z = Z
    return CrossoverReport(integer_z=integer_z, real_z=real_z)


@dataclass(frozen=True)
class Certificate:
    """Reduced kinetic-slope data for one converged mean-field solution.

    sigma = Z sqrt(N)/3, u = sqrt(K)/sigma, delta = 3 D N^(1/3)/Z, u0 the
    positive root bound, i_moment the first radial moment of the density.
    The certificate holds when u <= u0, and then
    3N/(4 i_moment) <= (Z/4)(1 + delta/2 + delta^2/8).
    """

    sigma: float
    u: float
    delta: float
    u0: float
    i_moment: float

    @property
    def holds(self) -> bool:
        return self.u <= self.u0 * (1.0 + 1e-12)

    def chain_sides(self, N: float, Z: float) -> Tuple[float, float]:
        lhs = 3.0 * N / (4.0 * self.i_moment)
        rhs = 0.25 * Z * (1.0 + self.delta / 2.0 + self.delta**2 / 8.0)
        return lhs, rhs

    @classmethod
    def from_solution(cls, sol: HartreeSolution, c: Constants = DEFAULT_CONSTANTS) -> "Certificate":
        b = sol.breakdown
        sigma = sol.Z * math.sqrt(b.N) / 3.0
        delta, u0 = delta_u0(b.N, sol.Z, c)
        return cls(sigma=sigma, u=math.sqrt(b.K) / sigma, delta=delta, u0=u0,
                   i_moment=b.J)
