"""Variational quantities built on the symmetrized kernel (|x|^2+|y|^2)/|x-y|.

The continuum functional

    F[rho] = (1/2) Int Int rho(x) rho(y) (|x|^2+|y|^2)/|x-y| dx dy
             / [ (Int |x| rho dx) (Int rho dx) ]

is evaluated on radially symmetric densities, where the angular average of
1/|x-y| collapses to 1/max(r, s) (Newton's theorem), so F reduces to a
one-dimensional double quadrature handled with cumulative sums in O(n).
F is invariant under rescaling rho(r/lambda); a spherical shell gives
exactly 1, and the infimum over all densities is known to lie in
[0.8218, 0.8705] (the lower bound is adopted as a constant, not recomputed).

The discrete analogue

    alpha_N = inf over x_1..x_N of
        sum_{i<j} (|x_i|^2+|x_j|^2)/|x_i-x_j| / ((N-1) sum_i |x_i|)

is explored by projected gradient descent in the scale gauge sum|x_i| = N
with multi-start. Minimized values are reported as data; no ordering
against the continuum infimum is asserted (N=2 already gives 1/2 at the
antipodal pair, below the continuum lower bound).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import CoincidentPoints, OptimizerStalled, TailNotConverged, ZeroDensity
from .radial import RadialGrid, RadialProfile

BETA_LOWER = 0.8218
BETA_UPPER_REFERENCE = 0.8705

_GRID_N = 4000
_POLY_EXP_RANGE = (0.0, 40.0)


@dataclass
class TrialDensity:
    """A radial density rho(r) >= 0 (the profile values are the density)."""

    profile: RadialProfile
    params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if np.any(self.profile.values < 0.0):
            raise ValueError("a density must be nonnegative")

    @classmethod
    def poly_exp(cls, a: float, n: int = _GRID_N) -> "TrialDensity":
        """rho = r^a e^(-r) on a grid wide enough for its first moment."""
        if a < -3.0:
            raise ValueError("need a > -3 for finite mass")
        t = (a + 3.0) + 10.0 * np.sqrt(a + 3.0) + 22.0
        grid = RadialGrid.log(n, r_max=10.0 * t)
        return cls(RadialProfile(grid, grid.r**a * np.exp(-grid.r)), {"a": a})

    @classmethod
    def shell(cls, radius: float = 1.0, n: int = _GRID_N) -> "TrialDensity":
        """All mass on the grid node nearest to ``radius`` (a discrete shell)."""
        grid = RadialGrid.log(n, r_max=100.0 * radius)
        vals = np.zeros(grid.n)
        i = int(np.argmin(np.abs(grid.r - radius)))
        vals[i] = 1.0 / grid.w[i]
        return cls(RadialProfile(grid, vals), {"radius": radius})


def beta_functional(rho: TrialDensity) -> float:
    """Evaluate F[rho] by Newton-reduced double quadrature.

    With a_i = w_i r_i^2 rho_i the double sum splits into cumulative sums:
    sum_{ij} a_i a_j (r_i^2 + r_j^2)/max(r_i, r_j) costs O(n).
    """
    p = rho.profile
    g = p.grid
    r = g.r
    a = g.w * r * r * p.values
    total = float(np.sum(a))
    if total <= 0.0:
        raise ZeroDensity("beta_functional of a zero density")
    g.require_tail(r * r * p.values, "beta mass")
    g.require_tail(r**3 * p.values, "beta first moment")
    c0 = np.cumsum(a) - a                    # sum_{j<i} a_j
    c2 = np.cumsum(a * r * r) - a * r * r    # sum_{j<i} a_j r_j^2
    rev1 = (a / r)[::-1]
    d1 = np.cumsum(rev1)[::-1] - a / r       # sum_{j>i} a_j / r_j
    rev2 = (a * r)[::-1]
    d2 = np.cumsum(rev2)[::-1] - a * r       # sum_{j>i} a_j r_j
    pair = np.sum(a * (r * c0 + c2 / r + r * r * d1 + d2))
    diag = np.sum(2.0 * a * a * r)
    first_moment = float(np.sum(a * r))
    return float((pair + diag) / (2.0 * first_moment * total))


@dataclass(frozen=True)
class BetaEstimate:
    """Best value found for the continuum functional over a trial family."""

    beta_upper: float
    family: str
    best_params: Dict[str, float]
    evaluations: Tuple[float, ...]
    beta_lower: float = BETA_LOWER

    def __post_init__(self):
        if self.beta_lower > self.beta_upper + 1e-9:
            raise ValueError("optimized upper value fell below the known lower bound")


FamilySpec = Union[str, Callable[[float], TrialDensity]]


def optimize_beta_upper(family: FamilySpec = "poly-exp", budget: int = 80) -> BetaEstimate:
    """Minimize the functional over a one-parameter family.

    ``family`` is "poly-exp" (rho = r^a e^(-r), a in [0, 40]), "shell"
    (degenerate, value exactly 1), or a callable a -> TrialDensity. The
    budget caps functional evaluations.
    """
    if budget < 6:
        raise OptimizerStalled(f"budget {budget} too small to scan and refine")
    if family == "shell":
        val = beta_functional(TrialDensity.shell())
        return BetaEstimate(val, "shell", {"radius": 1.0}, (val,))

    if callable(family):
        make, name = family, getattr(family, "__name__", "custom")
    else:
        if family != "poly-exp":
            raise ValueError(f"unknown family {family!r}")
        make, name = TrialDensity.poly_exp, "poly-exp"

    lo, hi = _POLY_EXP_RANGE
    evaluations: List[float] = []

    def objective(a: float) -> float:
        val = beta_functional(make(float(a)))
        evaluations.append(val)
        return val

    n_scan = max(5, min(budget // 2, 21))
    scan = np.linspace(lo, hi, n_scan)
    scan_vals = [objective(a) for a in scan]
    ibest = int(np.argmin(scan_vals))
    blo = scan[max(ibest - 1, 0)]
    bhi = scan[min(ibest + 1, n_scan - 1)]
    res = minimize_scalar(
        objective, bounds=(blo, bhi), method="bounded",
        options={"xatol": 1e-5, "maxiter": budget - n_scan},
    )
    if not evaluations:
        raise OptimizerStalled("no functional evaluations performed")
    best = float(min(min(scan_vals), res.fun))
    best_a = float(scan[ibest] if min(scan_vals) <= res.fun else res.x)
    return BetaEstimate(best, name, {"a": best_a}, tuple(evaluations))


# ---------------------------------------------------------------------------
# discrete configurations


@dataclass
class PointConfig:
    """N >= 2 points in R^3, pairwise distinct, not all at the origin."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 2:
            raise ValueError("points must be an (N, 3) array with N >= 2")
        self.points = pts
        norms = np.linalg.norm(pts, axis=1)
        if not np.any(norms > 0.0):
            raise ValueError("points cannot all sit at the origin")
        scale = float(np.max(norms))
        d = _pair_distances(pts)
        if np.min(d) < 1e-12 * scale:
            raise CoincidentPoints("two configuration points coincide")

    @property
    def n(self) -> int:
        return self.points.shape[0]


def _pair_distances(pts: np.ndarray) -> np.ndarray:
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt(np.sum(diff * diff, axis=-1))
    iu = np.triu_indices(pts.shape[0], k=1)
    return d[iu]


def alpha_n_value(cfg: PointConfig) -> float:
    """The configuration quotient
    sum_{i<j} (|x_i|^2+|x_j|^2)/|x_i - x_j| / ((N-1) sum_i |x_i|)."""
    pts = cfg.points
    norms = np.linalg.norm(pts, axis=1)
    iu = np.triu_indices(pts.shape[0], k=1)
    num = np.sum((norms[iu[0]] ** 2 + norms[iu[1]] ** 2) / _pair_distances(pts))
    return float(num / ((cfg.n - 1) * np.sum(norms)))


def _alpha_objective_grad(pts: np.ndarray) -> Tuple[float, np.ndarray]:
    n = pts.shape[0]
    norms = np.linalg.norm(pts, axis=1)
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    np.fill_diagonal(dist, np.inf)
    n2 = norms * norms
    ker = (n2[:, None] + n2[None, :]) / dist
    s_val = 0.5 * np.sum(ker)
    p_val = np.sum(norms)
    q_val = s_val / ((n - 1) * p_val)
    # dS/dx_k = sum_j [ 2 x_k / d_kj - (n_k^2+n_j^2)(x_k-x_j)/d_kj^3 ]
    inv = 1.0 / dist
    grad_s = 2.0 * pts * np.sum(inv, axis=1)[:, None]
    grad_s -= np.sum((ker / dist**2)[:, :, None] * diff, axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        grad_p = np.where(norms[:, None] > 0.0, pts / norms[:, None], 0.0)
    grad_q = (grad_s - q_val * (n - 1) * grad_p) / ((n - 1) * p_val)
    return float(q_val), grad_q


def _project(pts: np.ndarray, n: int) -> np.ndarray:
    total = np.sum(np.linalg.norm(pts, axis=1))
    return pts * (n / total)


@dataclass(frozen=True)
class AlphaNResult:
    value: float
    config: PointConfig
    seeds_used: int


def minimize_alpha_n(n: int, seeds: int = 64, max_iter: int = 400,
                     rng: Optional[np.random.Generator] = None) -> AlphaNResult:
    """Best configuration quotient found by multi-start projected descent.

    The scale gauge sum|x_i| = n is restored after every step (the quotient
    is scale free, so this is pure conditioning); steps that would collapse
    a pair below 1e-9 of the configuration scale are rejected by the
    backtracking line search.
    """
    if n < 2:
        raise ValueError("need at least two points")
    if seeds < 1:
        raise ValueError("need at least one seed")
    rng = rng or np.random.default_rng(20250 + n)
    best_val, best_pts = np.inf, None
    for _ in range(seeds):
        pts = _project(rng.normal(size=(n, 3)), n)
        val, grad = _alpha_objective_grad(pts)
        step = 0.25
        for _ in range(max_iter):
            gnorm2 = float(np.sum(grad * grad))
            if gnorm2 < 1e-24:
                break
            improved = False
            for _ in range(40):
                cand = _project(pts - step * grad, n)
                if np.min(_pair_distances(cand)) < 1e-9:
                    step *= 0.5
                    continue
                cand_val, cand_grad = _alpha_objective_grad(cand)
                if cand_val < val - 1e-4 * step * gnorm2:
                    improved = True
                    break
                step *= 0.5
            if not improved:
                break
            pts, val, grad = cand, cand_val, cand_grad
            step = min(step * 2.0, 1.0)
        if val < best_val:
            best_val, best_pts = val, pts
    if best_pts is None:
        raise OptimizerStalled("all descent starts failed")
    return AlphaNResult(float(best_val), PointConfig(best_pts), seeds)
