"""Command-line front end: JSON/flags in, CSV + JSON (and figures) out.

Exit codes: 0 success, 2 malformed input, 3 numerical failure.  All floats
are printed with 17 significant digits so values round-trip exactly.  When
an output prefix is given, subcommands with tabular results write CSV
files and render companion PNG figures next to them (disable with
--no-plot).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import acceptance
from .balance import balance_residuals_4body, is_balanced, residual_scale
from .continuation import continue_branch
from .degeneracy import degeneracy_gap
from .dynamics import build_relative_equilibrium, integrate_newton, re_angular_momentum
from .forces import NEWTON, PotentialLaw, wc_matrix
from .massspace import MassSystem
from .planar import (
    central_planar_rhombus,
    mass_ratio_scan,
    planar_degenerate_ratio,
    planar_K,
    planar_wc_jacobian_det,
)
from .polytope import HornSpec, bifurcation_vertices, horn_membership, sample_polytope
from .shape import (
    PointConfiguration,
    SquaredDistances,
    Sym3,
    cayley_menger,
    distances_from_points,
    inertia_matrix,
    inertia_trace,
)
from .tetra import mass_cubic, tangent_directions, verify_proportionality

SCHEMA = 1


def _fmt(x) -> float:
    x = float(x)
    if not np.isfinite(x):
        raise NumericalFailure("non-finite value in output")
    return float(f"{x:.17g}")


class InputError(Exception):
    pass


class NumericalFailure(Exception):
    pass


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return _fmt(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _emit_json(payload, path=None):
    payload = {"schema": SCHEMA, **_jsonify(payload)}
    text = json.dumps(payload, indent=2, allow_nan=False)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    print(text)


def _write_csv(path, header, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _load_config(args) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config: {exc}") from exc
        if not isinstance(cfg, dict):
            raise InputError("config must be a JSON object")
    return cfg


def _get_masses(args, cfg) -> MassSystem:
    if getattr(args, "masses", None):
        try:
            vals = [float(v) for v in args.masses.split(",")]
        except ValueError as exc:
            raise InputError(f"bad --masses: {exc}") from exc
    elif "masses" in cfg:
        vals = cfg["masses"]
    else:
        raise InputError("masses required (--masses m1,m2,m3,m4 or config key)")
    try:
        return MassSystem(tuple(vals))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _get_shape(args, cfg, ms) -> SquaredDistances:
    given = []
    if getattr(args, "tetra", False):
        given.append("tetra")
    if getattr(args, "distances2", None):
        given.append("distances2")
    if getattr(args, "points", None):
        given.append("points")
    if len(given) > 1:
        raise InputError(f"give exactly one shape input, got {given}")
    if not given:
        given = [k for k in ("distances2", "points") if k in cfg]
        if len(given) > 1:
            raise InputError("config must carry exactly one of distances2/points")
    if not given:
        raise InputError("a shape is required: --tetra, --distances2 or --points")
    kind = given[0]
    try:
        if kind == "tetra":
            return SquaredDistances(1, 1, 1, 1, 1, 1)
        if kind == "distances2":
            raw = getattr(args, "distances2", None)
            if raw:
                v = [float(x) for x in raw.split(",")]
                return SquaredDistances.from_vec(v)
            d = cfg["distances2"]
            return SquaredDistances(
                a=d["a"], b1=d["b1"], b2=d["b2"], d1=d["d1"], d2=d["d2"], f=d["f"]
            )
        raw = getattr(args, "points", None)
        pts = json.loads(raw) if raw else cfg["points"]
        return distances_from_points(PointConfiguration(np.asarray(pts, float), ms))
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"bad shape input: {exc}") from exc


def _law(args) -> PotentialLaw:
    g = getattr(args, "G", None)
    return PotentialLaw(G=g) if g else NEWTON


def _out_paths(args, stem):
    prefix = getattr(args, "out", None)
    if not prefix:
        return None, None
    return f"{prefix}-{stem}.csv", f"{prefix}-{stem}.png"


def _want_plot(args) -> bool:
    return bool(getattr(args, "out", None)) and not getattr(args, "no_plot", False)


def cmd_matrices(args):
    cfg = _load_config(args)
    ms = _get_masses(args, cfg)
    sd = _get_shape(args, cfg, ms)
    law = _law(args)
    b = inertia_matrix(ms, sd)
    a = wc_matrix(ms, sd, law)
    payload = {
        "masses": list(ms.m),
        "distances2": sd.vec(),
        "inertia": b.matrix(),
        "inertia_eigenvalues": np.sort(b.eigenvalues())[::-1],
        "inertia_trace": inertia_trace(ms, sd),
        "force": a.matrix(),
        "force_eigenvalues": np.sort(a.eigenvalues())[::-1],
        "cayley_menger": cayley_menger(sd),
    }
    _emit_json(payload, f"{args.out}-matrices.json" if args.out else None)
    return 0


def cmd_balance_check(args):
    cfg = _load_config(args)
    ms = _get_masses(args, cfg)
    sd = _get_shape(args, cfg, ms)
    law = _law(args)
    res = balance_residuals_4body(ms, sd, law)
    scale = residual_scale(ms.m, sd, law)
    ok, norm = is_balanced(ms, sd, law, tol=args.tol)
    payload = {
        "residuals": {
            "p123": res.p123, "p124": res.p124, "p134": res.p134, "p234": res.p234,
        },
        "normalized_max": norm,
        "scale": scale,
        "alternating_sum": res.alternating_sum(),
        "balanced": ok,
        "tolerance": args.tol,
    }
    _emit_json(payload, f"{args.out}-balance.json" if args.out else None)
    return 0


def cmd_degeneracy(args):
    cfg = _load_config(args)
    if args.matrix:
        try:
            vals = [float(v) for v in args.matrix.split(",")]
            m = Sym3(*vals)
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad --matrix (need u,v,w,x,y,z): {exc}") from exc
        source = "matrix"
    else:
        ms = _get_masses(args, cfg)
        sd = _get_shape(args, cfg, ms)
        m = (
            inertia_matrix(ms, sd)
            if args.which == "inertia"
            else wc_matrix(ms, sd, _law(args)).sym3()
        )
        source = args.which
    cert = degeneracy_gap(m)
    scale = m.frobenius()
    payload = {
        "source": source,
        "entries": m.entries(),
        "eigenvalues": np.sort(m.eigenvalues())[::-1],
        "gap": cert.gap,
        "gap_relative": cert.gap / max(scale, 1e-300),
        "second_singular_value": cert.second,
        "rotation_vector": [cert.xi, cert.eta, cert.zeta],
        "commutator_residual": cert.residual,
        "degenerate": cert.gap < args.tol * max(scale, 1e-300),
        "tolerance": args.tol,
    }
    _emit_json(payload, f"{args.out}-degeneracy.json" if args.out else None)
    return 0


def cmd_tangents(args):
    cfg = _load_config(args)
    ms = _get_masses(args, cfg)
    cub = mass_cubic(ms)
    tds = tangent_directions(ms)
    rows = []
    for td in tds:
        q, pred = verify_proportionality(ms, td.root)
        rows.append(
            {
                "root": td.root,
                "direction": td.direction,
                "coalescing_pair": td.pair,
                "multiplicity": td.multiplicity,
                "polynomial_residuals": np.abs(q - pred),
            }
        )
    payload = {
        "masses": list(ms.m),
        "cubic_coefficients": [cub.c3, cub.c2, cub.c1, cub.c0],
        "roots": list(cub.roots),
        "tangents": rows,
    }
    _emit_json(payload, f"{args.out}-tangents.json" if args.out else None)
    return 0


def cmd_continue(args):
    cfg = _load_config(args)
    ms = _get_masses(args, cfg)
    br = continue_branch(
        ms,
        args.root,
        steps=args.steps,
        h=args.h,
        adapt=args.adapt,
        sign=args.sign,
        law=_law(args),
    )
    if not br.points:
        raise NumericalFailure(f"no points accepted: {br.truncated}")
    header = [
        "arclength", "a", "b1", "b2", "d1", "d2", "f",
        "lambda1", "lambda2", "lambda3", "gap", "balance_residual", "cayley_menger",
    ]
    rows = []
    for p in br.points:
        lam = [-2.0 * e for e in p.eigenvalues]
        rows.append(
            [p.arclength, *p.s.vec(), *lam, p.gap, p.balance_residual, p.cayley_menger]
        )
    csv_path, png_path = _out_paths(args, f"branch{args.root}")
    if csv_path:
        _write_csv(csv_path, header, rows)
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(f"{v:.17g}" for v in row))
    if _want_plot(args):
        from .report import plot_branch

        arr = np.array(rows)
        plot_branch(
            arr[:, 0], arr[:, 1:7], arr[:, 7:10], png_path,
            title=f"branch {args.root} (root {br.root:.6g})",
        )
    if args.out:
        summary = {
            "root": br.root,
            "points": len(br.points),
            "final_arclength": br.points[-1].arclength,
            "truncated": br.truncated,
            "coalescing_pair": br.points[-1].pair,
        }
        _emit_json(summary, f"{args.out}-branch{args.root}.json")
    return 0


def cmd_simulate(args):
    cfg = _load_config(args)
    ms = _get_masses(args, cfg)
    sd = _get_shape(args, cfg, ms)
    law = _law(args)
    if args.polish:
        from .continuation import polish_point

        sd = polish_point(ms, sd, law)
    pairing = args.pairing
    if pairing not in ("auto", "external"):
        try:
            pairing = tuple(
                tuple(int(c) for c in grp) for grp in pairing.split("|")
            )
        except ValueError as exc:
            raise InputError(f"bad --pairing: {exc}") from exc
    try:
        re = build_relative_equilibrium(ms, sd, pairing=pairing, dim=args.dim, law=law)
    except ValueError as exc:
        raise NumericalFailure(str(exc)) from exc
    t_slow = 2.0 * np.pi / min(f for f in re.freqs if f > 0)
    T = args.periods * t_slow
    dt = t_slow / args.dt_per_period
    rep = integrate_newton(ms, re.X0, re.Omega @ re.X0, T, dt, law)
    am = re_angular_momentum(re)
    csv_path, png_path = _out_paths(args, "trajectory")
    header = ["t", "a", "b1", "b2", "d1", "d2", "f"]
    rows = [[t, *d] for t, d in zip(rep.times, rep.distances)]
    if csv_path:
        _write_csv(csv_path, header, rows)
    if _want_plot(args):
        from .report import plot_simulation

        plot_simulation(rep.times, rep.distances, png_path)
    payload = {
        "frequencies": list(re.freqs),
        "groups": [list(g) for g in re.groups],
        "equilibrium_residual": re.residual,
        "momentum_frequencies": list(am.nu),
        "slow_period": t_slow,
        "steps": rep.steps,
        "dt": rep.dt,
        "distance_drift": rep.distance_drift,
        "energy_drift": rep.energy_drift,
        "momentum_drift": rep.momentum_drift,
        "aborted": rep.aborted,
        "abort_reason": rep.abort_reason,
    }
    _emit_json(payload, f"{args.out}-simulate.json" if args.out else None)
    return 0


def cmd_polytope(args):
    cfg = _load_config(args)
    ms = _get_masses(args, cfg)
    b = inertia_matrix(ms, SquaredDistances(1, 1, 1, 1, 1, 1))
    sig = np.sort(b.eigenvalues())[::-1]
    S0 = np.diag(np.concatenate([sig, np.zeros(3)]))
    pts = sample_polytope(S0, args.samples, seed=args.seed)
    spec = HornSpec.canonical(np.concatenate([sig, np.zeros(3)]))
    violations = 0
    for pt in pts:
        okp, _ = horn_membership(spec, pt, tol=1e-9)
        violations += 0 if okp else 1
    try:
        verts, case = bifurcation_vertices(S0)
        vert_payload = {k: list(v.nu.nu) for k, v in verts.items()}
    except ValueError as exc:
        verts, case, vert_payload = {}, None, {"error": str(exc)}
    csv_path, png_path = _out_paths(args, "frequencies")
    rows = [list(pt.nu) for pt in pts]
    if csv_path:
        _write_csv(csv_path, ["nu1", "nu2", "nu3"], rows)
    if _want_plot(args) and rows:
        from .report import plot_polytope_cloud

        plot_polytope_cloud(
            np.array(rows), {k: v.nu.nu for k, v in verts.items()}, png_path,
            title=f"frequency polytope, masses {list(ms.m)}",
        )
    payload = {
        "inertia_spectrum": list(sig),
        "trace": float(np.sum(sig)),
        "samples": args.samples,
        "seed": args.seed,
        "horn_violations": violations,
        "vertices": vert_payload,
        "case": case,
    }
    _emit_json(payload, f"{args.out}-polytope.json" if args.out else None)
    return 0


def cmd_planar(args):
    law = _law(args)
    gamma = planar_degenerate_ratio(law)
    payload = {"gamma": gamma, "gamma_reciprocal": 1.0 / gamma}
    rows = []
    if args.scan:
        try:
            lo, hi, n = args.scan.split(":")
            ratios = np.linspace(float(lo), float(hi), int(n))
        except ValueError as exc:
            raise InputError(f"bad --scan lo:hi:n: {exc}") from exc
        scan = mass_ratio_scan(ratios, law)
        rows = [[r, d] for r, d in scan]
        csv_path, png_path = _out_paths(args, "scan")
        if csv_path:
            _write_csv(csv_path, ["ratio", "roundness_defect"], rows)
        if _want_plot(args):
            from .report import plot_planar_scan

            arr = np.array(rows)
            plot_planar_scan(
                arr[:, 0], arr[:, 1], [gamma, 1.0, 1.0 / gamma], png_path
            )
        payload["scan_points"] = len(rows)
    if args.m1 is not None:
        m1 = args.m1
        m2 = args.m2 if args.m2 is not None else 1.0
        rh = central_planar_rhombus(m1, m2, law)
        payload["central_rhombus"] = {
            "m1": m1, "m2": m2, "a": rh.a, "b": rh.b, "f": rh.f,
            "K": planar_K(m1, m2, rh.a, rh.b, law),
            "jacobian_det": planar_wc_jacobian_det(m1, m2, rh.a, rh.f, law),
            "roundness_defect": m1 * rh.a - m2 * rh.f,
        }
    _emit_json(payload, f"{args.out}-planar.json" if args.out else None)
    return 0


def cmd_verify_all(args):
    indices = set(args.only) if args.only else None
    results = acceptance.run_all(indices)
    width = max(len(r.name) for r in results)
    all_ok = True
    for r in results:
        flag = "PASS" if r.passed else "FAIL"
        all_ok &= r.passed
        print(f"[{flag}] {r.index:2d} {r.name:<{width}}  ({r.elapsed:6.2f}s)  {r.detail}")
    print("verify-all:", "OK" if all_ok else "FAILURES PRESENT")
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="balcon",
        description=(
            "Balanced 4-body configurations: matrices, degeneracy tests, "
            "bifurcation tangents, curve continuation, relative equilibria, "
            "frequency polytopes."
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, shape=False):
        p.add_argument("--masses", help="comma list m1,m2,m3,m4")
        p.add_argument("--config", help="JSON config path")
        p.add_argument("--out", help="output path prefix (writes CSV/JSON/PNG)")
        p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
        p.add_argument("--seed", type=int, default=0, help="RNG seed")
        p.add_argument("--tol", type=float, default=1e-9, help="decision tolerance")
        p.add_argument("--G", type=float, help="gravitational constant (default 1)")
        if shape:
            p.add_argument("--tetra", action="store_true", help="unit regular tetrahedron")
            p.add_argument(
                "--distances2", help="six squared distances a,b1,b2,d1,d2,f"
            )
            p.add_argument("--points", help="JSON [[x,y,z] x 4]")

    p = sub.add_parser("matrices", help="inertia and force matrices of a shape")
    common(p, shape=True)
    p.set_defaults(func=cmd_matrices)

    p = sub.add_parser("balance-check", help="balance residuals of a shape")
    common(p, shape=True)
    p.set_defaults(func=cmd_balance_check)

    p = sub.add_parser("degeneracy", help="repeated-eigenvalue certificate")
    common(p, shape=True)
    p.add_argument("--matrix", help="six entries u,v,w,x,y,z of a symmetric matrix")
    p.add_argument(
        "--which", choices=("force", "inertia"), default="force",
        help="which matrix to test when a shape is given",
    )
    p.set_defaults(func=cmd_degeneracy)

    p = sub.add_parser("tangents", help="bifurcation directions at the tetrahedron")
    common(p)
    p.set_defaults(func=cmd_tangents)

    p = sub.add_parser("continue", help="continue a curve of degenerate balanced shapes")
    common(p)
    p.add_argument("--root", type=int, required=True, choices=(0, 1, 2))
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--h", type=float, default=1e-3, help="arclength step")
    p.add_argument("--adapt", action="store_true", help="adaptive step control")
    p.add_argument("--sign", type=float, default=1.0, choices=(1.0, -1.0))
    p.set_defaults(func=cmd_continue)

    p = sub.add_parser("simulate", help="build and integrate a relative equilibrium")
    common(p, shape=True)
    p.add_argument("--dim", type=int, default=4, choices=(4, 6))
    p.add_argument(
        "--pairing", default="auto",
        help='"auto", "external" or explicit groups like "01|2"',
    )
    p.add_argument("--periods", type=float, default=3.0)
    p.add_argument("--dt-per-period", type=int, default=20_000, dest="dt_per_period")
    p.add_argument(
        "--polish", action="store_true",
        help="re-solve the balance and degeneracy equations from the given "
        "shape before building (useful for shapes quoted at finite precision)",
    )
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("polytope", help="sample the frequency polytope of the tetrahedron")
    common(p)
    p.add_argument("--samples", type=int, default=10_000)
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("planar", help="planar rhombus diagnostics")
    common(p)
    p.add_argument("--m1", type=float, help="first pair mass")
    p.add_argument("--m2", type=float, help="second pair mass (default 1)")
    p.add_argument("--scan", help="mass-ratio scan lo:hi:n")
    p.set_defaults(func=cmd_planar)

    p = sub.add_parser("verify-all", help="run the acceptance checklist")
    p.add_argument("--only", type=int, nargs="*", help="criterion indices to run")
    p.set_defaults(func=cmd_verify_all)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (NumericalFailure, np.linalg.LinAlgError, RuntimeError) as exc:
        print(json.dumps({"schema": SCHEMA, "error": str(exc)}), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
