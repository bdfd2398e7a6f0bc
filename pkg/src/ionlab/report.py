"""End-to-end reproduction suite: every headline number in one report.

Each check compares computed values against the tabulated references at
fixed tolerances and reports pass/fail with both numbers. Checks that
cannot pass are still evaluated and reported honestly, with a note stating
what the computation shows; nothing is loosened to force agreement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from . import beta as beta_mod
from . import bounds, gn, hartree
from .radial import RadialGrid, cup_ratio, moment, nam_form_ratio, random_smooth_profile, weighted_kinetic
from .radial import kinetic as kinetic_fn

MAIN_TABLE_REFERENCE = {1: 2.9489, 2: 4.4824, 3: 6.0286, 4: 7.5741, 5: 9.1180}
MAIN_TABLE_CAPS = {1: 2, 2: 4, 3: 6, 4: 7, 5: 9}
H6_REFERENCE = 0.29363
CGN_REFERENCE = 0.279271
NASIBOV_REFERENCE = 0.306658
CRITICAL_RATIO_REFERENCE = 1.21
SWEEP_COUNT = 100
SWEEP_SEED = 20240


@dataclass
class CheckResult:
    index: int
    name: str
    passed: bool
    details: List[str] = field(default_factory=list)

    def line(self) -> str:
        return f"[{self.index:2d}] {'PASS' if self.passed else 'FAIL'} {self.name}"

    def render(self) -> str:
        return "\n".join([self.line()] + [f"     {d}" for d in self.details])


@dataclass
class ReproductionReport:
    checks: List[CheckResult]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def render(self) -> str:
        lines = [c.render() for c in self.checks]
        n_fail = sum(not c.passed for c in self.checks)
        lines.append(f"{len(self.checks) - n_fail}/{len(self.checks)} checks passed")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {
            "checks": [
                {"index": c.index, "name": c.name, "passed": c.passed, "details": c.details}
                for c in self.checks
            ],
            "all_passed": self.all_passed,
        }


def _close(x, ref, tol):
    return abs(x - ref) <= tol


def check_main_table(c: bounds.Constants) -> CheckResult:
    details, ok = [], True
    for Z, ref in MAIN_TABLE_REFERENCE.items():
        val = bounds.main_bound(Z, c)
        cap = bounds.integer_cap(val)
        good = _close(val, ref, 2e-3) and cap == MAIN_TABLE_CAPS[Z]
        ok &= good
        details.append(f"main({Z}) = {val:.6f} vs {ref} (tol 2e-3), cap {cap} vs {MAIN_TABLE_CAPS[Z]}")
    return CheckResult(1, "main-bound table Z=1..5", ok, details)


def check_h_function(c: bounds.Constants) -> CheckResult:
    h6 = bounds.h_of_z(6.0, c)
    vals = [bounds.h_of_z(float(Z), c) for Z in range(1, 1001)]
    decreasing = all(a > b for a, b in zip(vals, vals[1:]))
    ok = _close(h6, H6_REFERENCE, 2e-4) and decreasing
    return CheckResult(2, "h(6) value and monotonicity", ok, [
        f"h(6) = {h6:.6f} vs {H6_REFERENCE} (tol 2e-4)",
        f"strictly decreasing on Z=1..1000: {decreasing}",
    ])


def check_gn_constant(state: gn.GNGroundState) -> CheckResult:
    details = [
        f"cgn (direct ratio) = {state.cgn:.6f} vs {CGN_REFERENCE} (tol 1e-3)",
        f"cgn (K-only) = {state.cgn_pohozaev:.6f}, route agreement "
        f"{abs(state.cgn - state.cgn_pohozaev) / state.cgn:.2e} (tol 1e-5)",
        f"M/K = {state.M / state.K:.8f} vs 5/3, P/K = {state.P / state.K:.8f} vs 8/3 (tol 1e-5)",
    ]
    ok_ref = _close(state.cgn, CGN_REFERENCE, 1e-3)
    ok_routes = abs(state.cgn - state.cgn_pohozaev) / state.cgn <= 1e-5
    ok_pohozaev = (abs(state.M / state.K - 5.0 / 3.0) / (5.0 / 3.0) <= 1e-5
                   and abs(state.P / state.K - 8.0 / 3.0) / (8.0 / 3.0) <= 1e-5)
    if not ok_ref:
        details.append(
            "note: simple trials already exceed the tabulated value "
            "(gaussian 0.29921, exponential 0.28805), so the sharp ratio "
            "cannot equal it; the computed sharp constant is the one reported"
        )
    return CheckResult(3, "interpolation sharp constant", ok_ref and ok_routes and ok_pohozaev, details)


def check_nasibov(state: gn.GNGroundState) -> CheckResult:
    kn = gn.nasibov_kn(2.0 / 3.0, 3)
    kn83 = kn ** (8.0 / 3.0)
    closed = 96.0 / 125.0 * (5.0 * math.pi) ** (-1.0 / 3.0)
    ok = (_close(kn83, NASIBOV_REFERENCE, 1e-5)
          and _close(kn83, closed, 1e-10)
          and kn83 > state.cgn)
    return CheckResult(4, "analytic upper bound k_N(2/3,3)^(8/3)", ok, [
        f"k_N^(8/3) = {kn83:.9f} vs {NASIBOV_REFERENCE} (tol 1e-5)",
        f"closed form 96/125 (5 pi)^(-1/3) = {closed:.12f} (tol 1e-10)",
        f"exceeds computed sharp constant {state.cgn:.6f}: {kn83 > state.cgn}",
    ])


def check_critical_mass(criticals: Dict[int, float]) -> CheckResult:
    ratios = {Z: nc / Z for Z, nc in criticals.items()}
    spread = (max(ratios.values()) - min(ratios.values())) / np.mean(list(ratios.values()))
    ok = _close(ratios[1], CRITICAL_RATIO_REFERENCE, 0.02) and spread <= 1e-3
    return CheckResult(5, "critical mass N_c(Z)/Z", ok, [
        f"N_c(1) = {criticals[1]:.5f} vs {CRITICAL_RATIO_REFERENCE} (tol 0.02)",
        "ratios " + ", ".join(f"Z={Z}: {v:.6f}" for Z, v in sorted(ratios.items()))
        + f"; relative spread {spread:.2e} (tol 1e-3)",
    ])


def check_virials(constrained: List[hartree.HartreeSolution],
                  near_critical: List[hartree.HartreeSolution]) -> CheckResult:
    details, ok = [], True
    for sol in constrained + near_critical:
        v1, _ = hartree.virial_residuals(sol)
        good = abs(v1) <= 1e-4
        ok &= good
        details.append(f"Z={sol.Z:g} N={sol.N:.4f}: |2K-A+R|/K = {abs(v1):.2e} (tol 1e-4)")
    for sol in near_critical:
        _, v2 = hartree.virial_residuals(sol)
        b = sol.breakdown
        three_k = abs(3.0 * b.K - b.A) / b.A
        good = abs(v2) <= 1e-2 and three_k <= 1e-2
        ok &= good
        details.append(
            f"Z={sol.Z:g} near-critical: |K-A+2R|/K = {abs(v2):.2e} (tol 1e-2), "
            f"|3K-A|/A = {three_k:.2e} (tol 1e-2)"
        )
    return CheckResult(6, "virial identities", ok, details)


def check_lemma_suite(near_critical: List[hartree.HartreeSolution],
                      c: bounds.Constants) -> CheckResult:
    details, ok = [], True
    for sol in near_critical:
        rep = hartree.lemma_checks(sol)
        cr = cup_ratio(sol.psi)
        cert = hartree.kinetic_certificate(sol, c.d_const)
        good = rep.all_ok and cr <= 1.0 + 1e-6 and cert.holds
        ok &= good
        details.append(
            f"Z={sol.Z:g}: margins A {rep.attraction_margin:.4f}, E {rep.energy_margin:.4f}, "
            f"J {rep.moment_margin:.4f} (all <= 1); cup {cr:.8f} <= 1+1e-6; "
            f"certificate K = {cert.lhs:.4f} <= {cert.rhs:.4f}: {cert.holds}"
        )
    return CheckResult(7, "minimizer lemma suite", ok, details)


def check_sweeps(state: gn.GNGroundState) -> CheckResult:
    grid = RadialGrid.log(4000, r_max=200.0)
    rng = np.random.default_rng(SWEEP_SEED)
    worst = {"nam": np.inf, "wk": np.inf, "gnr": -np.inf, "schwarz": -np.inf}
    for _ in range(SWEEP_COUNT):
        p = random_smooth_profile(grid, rng)
        worst["nam"] = min(worst["nam"], nam_form_ratio(p))
        wk = weighted_kinetic(p)
        scale = kinetic_fn(p) + moment(p, 0)
        worst["wk"] = min(worst["wk"], wk / scale)
        worst["gnr"] = max(worst["gnr"], gn.gn_ratio(p))
        m0, m1, mm1 = moment(p, 0), moment(p, 1), moment(p, -1)
        worst["schwarz"] = max(worst["schwarz"], m0 * m0 / (m1 * mm1))
    ok = (worst["nam"] >= -0.75 - 1e-6 and worst["wk"] >= -1e-8
          and worst["gnr"] <= state.cgn + 1e-4 and worst["schwarz"] <= 1.0 + 1e-10)
    return CheckResult(8, f"inequality sweeps ({SWEEP_COUNT} random profiles)", ok, [
        f"min quadratic-form ratio {worst['nam']:.8f} >= -3/4 - 1e-6",
        f"min weighted kinetic / (K+N) = {worst['wk']:.2e} >= -1e-8",
        f"max interpolation ratio {worst['gnr']:.6f} <= cgn + 1e-4 = {state.cgn + 1e-4:.6f}",
        f"max N^2/(J A/Z) = {worst['schwarz']:.12f} <= 1 + 1e-10",
    ])


def check_beta(budget: int = 60) -> CheckResult:
    est = beta_mod.optimize_beta_upper("poly-exp", budget=budget)
    shell = beta_mod.beta_functional(beta_mod.TrialDensity.shell())
    lo_edge = beta_mod.BETA_LOWER - 1e-3
    hi_edge = beta_mod.BETA_UPPER_REFERENCE + 1e-3
    in_window = lo_edge <= est.beta_upper <= hi_edge
    all_above = min(est.evaluations) >= lo_edge
    shell_ok = abs(shell - 1.0) <= 1e-6
    details = [
        f"family minimum {est.beta_upper:.6f} at a = {est.best_params['a']:.4f}; "
        f"reference interval [{lo_edge:.4f}, {hi_edge:.4f}]",
        f"all {len(est.evaluations)} evaluated densities >= {lo_edge:.4f}: {all_above} "
        f"(min {min(est.evaluations):.6f})",
        f"shell value {shell:.9f} vs 1 (tol 1e-6)",
    ]
    if not in_window:
        details.append(
            "note: the family floor sits at a=0 with value 7/8 = 0.875 exactly "
            "(analytic), above the interval's upper edge; the tabulated 0.8705 "
            "needs a richer trial family"
        )
    return CheckResult(9, "kernel functional over r^a e^(-r)", in_window and all_above and shell_ok, details)


def check_alpha2() -> CheckResult:
    res = beta_mod.minimize_alpha_n(2, seeds=16)
    pts = res.config.points
    norms = np.linalg.norm(pts, axis=1)
    cosang = float(np.dot(pts[0], pts[1]) / (norms[0] * norms[1]))
    antipodal = abs(norms[0] - norms[1]) / max(norms) <= 1e-3 and cosang <= -1.0 + 1e-6
    ok = res.value <= 0.5 + 1e-6 and antipodal
    return CheckResult(10, "two-point configuration quotient", ok, [
        f"minimized value {res.value:.9f} <= 0.5 + 1e-6",
        f"antipodal recovered: |r1-r2|/r = {abs(norms[0] - norms[1]) / max(norms):.2e}, "
        f"cos angle = {cosang:.9f}",
    ])


def check_bosonic_dominance(c: bounds.Constants) -> CheckResult:
    margins = [bounds.lieb_bound(Z) - bounds.main_bound(Z, c) for Z in range(1, 119)]
    ok = all(m > 0 for m in margins)
    return CheckResult(11, "main < 2Z+1 for Z=1..118", ok, [
        f"smallest margin {min(margins):.4f} at Z={1 + int(np.argmin(margins))}",
    ])


def check_crossover(c: bounds.Constants) -> CheckResult:
    cr = bounds.crossover_vs_nam(c)
    ok = 21 <= cr.real_z <= 24
    return CheckResult(12, "crossover against the fermionic bound", ok, [
        f"real-valued crossover Z = {cr.real_z} (expected in [21, 24])",
        f"integer-truncated crossover Z = {cr.integer_z}",
        f"published claim: Z <= {cr.claimed} (displayed, not enforced)",
    ])


def run_reproduction(c: Optional[bounds.Constants] = None,
                     grid_n: Optional[int] = None,
                     r_max: Optional[float] = None) -> ReproductionReport:
    """Run all twelve checks and return the assembled report.

    ``grid_n`` / ``r_max`` pin the mean-field grid (disabling the adaptive
    outer-radius search); truncation failures then surface as
    ``TailNotConverged`` rather than being absorbed.
    """
    c = c or bounds.DEFAULT_CONSTANTS
    pinned = None
    if grid_n is not None or r_max is not None:
        pinned = RadialGrid.log(grid_n or 4000, r_max=r_max or 60.0)

    # constrained solves first: on a pinned coarse grid they fail fast
    constrained: List[hartree.HartreeSolution] = []
    for Z, N in ((1.0, 0.8), (2.0, 1.2)):
        constrained.append(hartree.solve(Z, N, grid=pinned))

    state = gn.solve_ground_state()

    criticals: Dict[int, float] = {}
    near_critical: List[hartree.HartreeSolution] = []
    for Z in (1, 2, 4):
        criticals[Z] = hartree.critical_mass(float(Z))
        near_critical.append(
            hartree.solve(float(Z), 0.999 * criticals[Z], grid=pinned)
        )

    checks = [
        check_main_table(c),
        check_h_function(c),
        check_gn_constant(state),
        check_nasibov(state),
        check_critical_mass(criticals),
        check_virials(constrained, near_critical),
        check_lemma_suite(near_critical, c),
        check_sweeps(state),
        check_beta(),
        check_alpha2(),
        check_bosonic_dominance(c),
        check_crossover(c),
    ]
    return ReproductionReport(checks)
