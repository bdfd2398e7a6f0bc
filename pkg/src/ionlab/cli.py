"""Command-line front end.

One binary with subcommand groups:

    ionlab hartree {solve,critical}
    ionlab gn {compute,nasibov}
    ionlab beta {trial,alpha-n}
    ionlab bounds {table,compare,crossover}
    ionlab reproduce

Documents go to stdout or --output as JSON (CSV for tables); all floats
are emitted with 6 significant digits and identical invocations produce
byte-identical output. Optional config file: key=value lines, overridden
by flags. IONLAB_OUTPUT_DIR prefixes relative output paths. Exit codes:
0 success, 1 numerical failure (message names the stage and tolerance),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

import numpy as np

from . import beta as beta_mod
from . import bounds, gn, hartree, report
from .errors import IonlabError
from .radial import RadialGrid, save_profile

_CONSTANT_KEYS = ("c_lo", "c_gn", "d_const", "beta_lower")
_RANGES = {"c_lo": (1.0, 2.0), "c_gn": (0.1, 0.5), "d_const": (0.0, 1.0),
           "beta_lower": (0.5, 1.0)}


def _round6(obj):
    if isinstance(obj, float):
        return float(f"{obj:.6g}")
    if isinstance(obj, (np.floating,)):
        return float(f"{float(obj):.6g}")
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round6(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round6(v) for v in obj]
    return obj


def _resolve_output(path: Optional[str]):
    if path is None:
        return None
    base = os.environ.get("IONLAB_OUTPUT_DIR", "")
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _emit_json(doc, path: Optional[str]) -> None:
    text = json.dumps(_round6(doc), indent=2, sort_keys=True) + "\n"
    path = _resolve_output(path)
    if path:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(rows, header, path: Optional[str]) -> None:
    def cell(v):
        return f"{v:.6g}" if isinstance(v, float) else str(v)

    lines = [",".join(header)]
    lines += [",".join(cell(row[k]) for k in header) for row in rows]
    text = "\n".join(lines) + "\n"
    path = _resolve_output(path)
    if path:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_common(sp, grid: bool = False):
    sp.add_argument("--config", help="key=value file; flags override it")
    sp.add_argument("--output", help="write the document here instead of stdout")
    sp.add_argument("--format", choices=("csv", "json"), default=None,
                    help="output format (tables default to csv, documents to json)")
    sp.add_argument("--verbose", action="store_true")
    for key in _CONSTANT_KEYS:
        sp.add_argument(f"--{key.replace('_', '-')}", type=float, default=None)
    if grid:
        sp.add_argument("--grid-n", type=int, default=None, help="pin the radial grid size")
        sp.add_argument("--r-max", type=float, default=None, help="pin the outer radius")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ionlab",
                                description="Numerical laboratory for atomic excess-charge bounds")
    sub = p.add_subparsers(dest="group", required=True)

    g = sub.add_parser("hartree", help="self-consistent mean-field atom")
    gs = g.add_subparsers(dest="command", required=True)
    s = gs.add_parser("solve", help="solve at fixed nuclear charge and mass")
    s.add_argument("--z", type=float, required=True)
    s.add_argument("--n", type=float, required=True)
    s.add_argument("--profile-out", help="also write the profile file here")
    _add_common(s, grid=True)
    s = gs.add_parser("critical", help="largest bound mass N_c(Z)")
    s.add_argument("--z", type=float, required=True)
    _add_common(s)

    g = sub.add_parser("gn", help="sharp interpolation constant")
    gs = g.add_subparsers(dest="command", required=True)
    s = gs.add_parser("compute", help="ground state and both constant routes")
    s.add_argument("--shoot-tol", type=float, default=1e-12)
    _add_common(s)
    s = gs.add_parser("nasibov", help="analytic upper bound k_N(rho, d)")
    s.add_argument("--rho", type=float, default=2.0 / 3.0)
    s.add_argument("--d", type=int, default=3)
    _add_common(s)

    g = sub.add_parser("beta", help="symmetrized-kernel functionals")
    gs = g.add_subparsers(dest="command", required=True)
    s = gs.add_parser("trial", help="minimize over a trial density family")
    s.add_argument("--family", default="poly-exp")
    s.add_argument("--budget", type=int, default=80)
    _add_common(s)
    s = gs.add_parser("alpha-n", help="minimize the N-point configuration quotient")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seeds", type=int, default=64)
    _add_common(s)

    g = sub.add_parser("bounds", help="closed-form bound formulas")
    gs = g.add_subparsers(dest="command", required=True)
    s = gs.add_parser("table", help="per-Z comparison table")
    s.add_argument("--zmin", type=int, required=True)
    s.add_argument("--zmax", type=int, required=True)
    _add_common(s)
    s = gs.add_parser("compare", help="winner summary over a Z range")
    s.add_argument("--zmin", type=int, default=1)
    s.add_argument("--zmax", type=int, default=118)
    _add_common(s)
    s = gs.add_parser("crossover", help="largest Z where the new bound beats the fermionic one")
    _add_common(s)

    s = sub.add_parser("reproduce", help="run the full reproduction suite")
    _add_common(s, grid=True)
    return p


def _apply_config(args, parser):
    if not getattr(args, "config", None):
        return
    try:
        with open(args.config, "r", encoding="ascii") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        parser.error(f"cannot read config file: {exc}")
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            parser.error(f"config line is not key=value: {line!r}")
        key, val = (t.strip() for t in line.split("=", 1))
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            continue  # keys for other subcommands are allowed in one file
        if getattr(args, dest) is not None and dest != "format":
            continue  # flags win
        try:
            cur = getattr(args, dest)
            if dest in ("grid_n",):
                setattr(args, dest, int(val))
            elif dest in _CONSTANT_KEYS or dest in ("r_max",):
                setattr(args, dest, float(val))
            elif getattr(args, dest, None) is None:
                setattr(args, dest, val)
            else:
                setattr(args, dest, type(cur)(val))
        except ValueError:
            parser.error(f"bad config value for {key}: {val!r}")


def _constants(args, parser) -> bounds.Constants:
    overrides = {k: getattr(args, k) for k in _CONSTANT_KEYS}
    for key, val in overrides.items():
        if val is None:
            continue
        lo, hi = _RANGES[key]
        if not lo <= val <= hi:
            parser.error(f"--{key.replace('_', '-')} must lie in [{lo:g}, {hi:g}]")
    try:
        return bounds.Constants.resolved(**overrides)
    except ValueError as exc:
        parser.error(str(exc))


def _pinned_grid(args):
    n = getattr(args, "grid_n", None)
    r_max = getattr(args, "r_max", None)
    if n is None and r_max is None:
        return None
    return RadialGrid.log(n or 4000, r_max=r_max or 60.0)


def _run(args, parser) -> int:
    c = _constants(args, parser)
    group, command = args.group, getattr(args, "command", None)

    if group == "hartree" and command == "solve":
        sol = hartree.solve(args.z, args.n, grid=_pinned_grid(args))
        doc = sol.to_dict()
        if args.profile_out:
            path = _resolve_output(args.profile_out)
            save_profile(sol.psi, path)
            doc["profile_file"] = os.path.basename(path)
        _emit_json(doc, args.output)
        return 0

    if group == "hartree" and command == "critical":
        nc = hartree.critical_mass(args.z)
        _emit_json({"Z": args.z, "critical_mass": nc, "ratio": nc / args.z}, args.output)
        return 0

    if group == "gn" and command == "compute":
        st = gn.solve_ground_state(args.shoot_tol)
        _emit_json({
            "u0": st.u0, "K": st.K, "M": st.M, "P": st.P,
            "cgn_ratio": st.cgn, "cgn_pohozaev": st.cgn_pohozaev,
            "nasibov_bound": gn.nasibov_kn(2.0 / 3.0, 3) ** (8.0 / 3.0),
        }, args.output)
        return 0

    if group == "gn" and command == "nasibov":
        kn = gn.nasibov_kn(args.rho, args.d)
        _emit_json({
            "rho": args.rho, "d": args.d,
            "alpha": gn.alpha_exponent(args.rho, args.d),
            "k_n": kn, "power": args.rho + 2.0,
            "k_n_pow": kn ** (args.rho + 2.0),
        }, args.output)
        return 0

    if group == "beta" and command == "trial":
        est = beta_mod.optimize_beta_upper(args.family, budget=args.budget)
        _emit_json({
            "family": est.family, "budget": args.budget,
            "best_value": est.beta_upper, "best_params": est.best_params,
            "evaluations": len(est.evaluations),
            "evaluations_min": min(est.evaluations),
            "reference_interval": [beta_mod.BETA_LOWER, beta_mod.BETA_UPPER_REFERENCE],
        }, args.output)
        return 0

    if group == "beta" and command == "alpha-n":
        res = beta_mod.minimize_alpha_n(args.n, seeds=args.seeds)
        _emit_json({
            "n": args.n, "seeds": res.seeds_used, "value": res.value,
            "points": res.config.points.tolist(),
            "reference_interval": [beta_mod.BETA_LOWER, beta_mod.BETA_UPPER_REFERENCE],
        }, args.output)
        return 0

    if group == "bounds" and command == "table":
        rows = [r.csv_row() for r in bounds.compare_table(args.zmin, args.zmax, c)]
        header = ["Z", "lieb", "nam", "hartree", "main", "a", "hZ", "best_real", "best_integer"]
        if (args.format or "csv") == "csv":
            _emit_csv(rows, header, args.output)
        else:
            _emit_json(rows, args.output)
        return 0

    if group == "bounds" and command == "compare":
        table = bounds.compare_table(args.zmin, args.zmax, c)
        wins = {}
        for r in table:
            wins[r.best_integer] = wins.get(r.best_integer, 0) + 1
        _emit_json({
            "zmin": args.zmin, "zmax": args.zmax,
            "integer_winner_counts": wins,
            "main_strictly_below_lieb": all(r.main < r.lieb for r in table),
            "recomputed_headline": bounds.recomputed_headline(c),
            "frozen_headline": 1.5211,
        }, args.output)
        return 0

    if group == "bounds" and command == "crossover":
        cr = bounds.crossover_vs_nam(c)
        _emit_json({
            "real_z": cr.real_z, "integer_z": cr.integer_z,
            "claimed": cr.claimed,
            "note": "computed crossover displayed beside the published claim",
        }, args.output)
        return 0

    if group == "reproduce":
        rep = report.run_reproduction(c, grid_n=getattr(args, "grid_n", None),
                                      r_max=getattr(args, "r_max", None))
        text = rep.render() + "\n"
        path = _resolve_output(args.output)
        if path:
            with open(path, "w", encoding="ascii") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0 if rep.all_passed else 1

    parser.error("unknown command")
    return 2


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_config(args, parser)
    try:
        return _run(args, parser)
    except IonlabError as exc:
        sys.stderr.write(f"ionlab: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
