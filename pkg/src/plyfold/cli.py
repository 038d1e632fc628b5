"""Command-line entry point: ``plyfold <command> [flags]``.

Exit codes: 0 ok, 1 slope outside tolerance, 2 usage, 3 certification
failure, 4 sweep left its declared regime.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .construct import ConstructionParams, build_multilayer, build_two_fold, choose_boundaries, layer_outlines
from .core import MaterialSpec, PlyfoldError
from .energy import QuadratureSettings, total_energy
from .scaling import (
    RegimeLabel,
    moment_curve,
    optimize_construction,
    regime_of,
    sweep_grid,
    upper_bound,
    verify_scaling,
)
from .svg import plot
from .verify import certify

EXIT_OK, EXIT_SLOPE, EXIT_USAGE, EXIT_CERT, EXIT_REGIME = 0, 1, 2, 3, 4
AXES = ("alpha", "h", "L", "N", "gamma")


class UsageError(Exception):
    pass


def _spec_flags(p: argparse.ArgumentParser, alpha=True):
    p.add_argument("--h", type=float, required=True, help="total thickness")
    p.add_argument("--L", type=float, required=True, help="half-length of the strip")
    p.add_argument("--N", type=int, required=True, help="number of plies")
    p.add_argument("--gamma", type=float, required=True, help="delamination energy per length")
    if alpha:
        p.add_argument("--alpha", type=float, required=True, help="bend angle in radians")
    p.add_argument("--out", default=".", help="output directory")


def _spec(args) -> MaterialSpec:
    try:
        return MaterialSpec(args.h, args.L, args.N, args.gamma)
    except PlyfoldError as exc:
        raise UsageError(str(exc)) from exc


def _comment(args) -> str:
    flags = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    return f"plyfold {__version__} flags: " + " ".join(f"--{k.replace('_', '-')}={v}" for k, v in flags.items())


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_csv(path: Path, comment: str, header, rows, footer=None):
    with path.open("w", newline="") as fh:
        fh.write(f"# {comment}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        if footer:
            fh.write(f"# {footer}\n")


def cmd_construct(args) -> int:
    spec = _spec(args)
    if not (0 < args.alpha <= math.pi / 2):
        raise UsageError("--alpha must lie in (0, pi/2]")
    out = _outdir(args)
    if args.optimize:
        res = optimize_construction(spec, args.alpha, measure=False)
        field, regime = res.field, str(res.regime)
    else:
        missing = [f for f in ("beta", "n", "l_arc") if getattr(args, f) is None]
        if missing:
            raise UsageError("need --optimize or all of --beta --n --l-arc (missing: " + ", ".join("--" + m.replace("_", "-") for m in missing) + ")")
        two = args.alpha > math.pi / 4
        sub = MaterialSpec(spec.h, spec.L / 4, spec.N, spec.gamma, validate=False) if two else spec
        try:
            params = ConstructionParams(args.beta, args.n, args.l_arc, choose_boundaries(sub, args.n))
            build = build_two_fold if two else build_multilayer
            field = build(spec, args.alpha, params, validate=not args.no_validate)
        except PlyfoldError as exc:
            raise UsageError(str(exc)) from exc
        regime = None
    q = QuadratureSettings(nx=args.nx, ny_per_layer=args.ny)
    energy = total_energy(field, q)
    cert = certify(field)
    (out / "field.json").write_text(json.dumps(field.to_dict(), indent=2))
    (out / "certificate.json").write_text(cert.to_json())
    doc = energy.to_dict()
    doc["regime"] = regime
    doc["upper_bound"], doc["analytic_regime"] = upper_bound(spec, args.alpha)
    doc["analytic_regime"] = str(doc["analytic_regime"])
    (out / "energy.json").write_text(json.dumps(doc, indent=2))
    series = [("", c[:, 0], c[:, 1]) for c in layer_outlines(field)]
    (out / "outline.svg").write_text(plot([dict(series=series, title=f"{field.kind}, alpha={args.alpha:g}", xlabel="y1", ylabel="y2")], 1))
    print(
        f"{field.kind}: total={energy.total:.6g} elastic={energy.elastic:.6g} delamination={energy.delamination:.6g}"
        f" regime={regime} analytic={doc['analytic_regime']} certified={cert.certified}"
    )
    if not cert.certified:
        print("failed checks: " + ", ".join(cert.failures), file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


def cmd_moment(args) -> int:
    spec = _spec(args)
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    if not (0 < args.alpha_min < args.alpha_max <= math.pi / 2):
        raise UsageError("need 0 < --alpha-min < --alpha-max <= pi/2")
    if args.scale == "log":
        grid = np.logspace(math.log10(args.alpha_min), math.log10(args.alpha_max), args.points)
    else:
        grid = np.linspace(args.alpha_min, args.alpha_max, args.points)
    grid[-1] = min(grid[-1], math.pi / 2)
    mc = moment_curve(spec, grid, args.mode)
    out = _outdir(args)
    footer = f"crossing,{mc.crossing!r}" if mc.crossing is not None else "crossing,none"
    _write_csv(out / "moment.csv", _comment(args), ["alpha", "energy", "moment", "regime"], [[repr(a), repr(e), repr(m), r] for a, e, m, r in mc.rows()], footer)
    log = args.scale == "log"
    panels = [
        dict(series=[("energy", mc.alpha, mc.energy)], xlog=log, ylog=True, title="energy", xlabel="alpha", ylabel="E"),
        dict(series=[("moment", mc.alpha, mc.moment)], xlog=log, ylog=True, title="moment", xlabel="alpha", ylabel="dE/dalpha"),
    ]
    (out / "moment.svg").write_text(plot(panels))
    print(f"wrote {out / 'moment.csv'}; crossing at {mc.crossing}")
    return EXIT_OK


def cmd_phase_diagram(args) -> int:
    if args.x == args.y:
        raise UsageError("--x and --y must be different axes")
    spec = _spec(args)
    base = {"alpha": args.alpha, "h": spec.h, "L": spec.L, "N": spec.N, "gamma": spec.gamma}

    def axis(lo, hi, pts, name):
        if pts < 1 or lo <= 0 or hi < lo:
            raise UsageError(f"bad range for --{name}")
        g = np.logspace(math.log10(lo), math.log10(hi), pts)
        return g

    xs = axis(args.x_min, args.x_max, args.x_points, "x")
    ys = axis(args.y_min, args.y_max, args.y_points, "y")
    rows = []
    for yv in ys:
        for xv in xs:
            p = dict(base)
            p[args.x], p[args.y] = xv, yv
            try:
                s = MaterialSpec(p["h"], p["L"], int(round(p["N"])), p["gamma"])
                a = float(p["alpha"])
                if not 0 < a <= math.pi / 2:
                    raise PlyfoldError("alpha out of range")
                val, lab = upper_bound(s, a)
                rows.append([repr(float(xv)), repr(float(yv)), str(regime_of(s, a)), repr(val)])
            except PlyfoldError:
                rows.append([repr(float(xv)), repr(float(yv)), "invalid", ""])
    out = _outdir(args)
    _write_csv(out / "phase.csv", _comment(args), [args.x, args.y, "regime", "upper_bound"], rows)
    print(f"wrote {len(rows)} cells to {out / 'phase.csv'}")
    return EXIT_OK


def cmd_verify_scaling(args) -> int:
    spec = _spec(args)
    try:
        regime = RegimeLabel(args.regime)
    except ValueError as exc:
        raise UsageError(f"unknown --regime {args.regime!r}") from exc
    center = {"alpha": args.alpha, "h": spec.h, "L": spec.L, "N": spec.N, "gamma": spec.gamma}[args.sweep]
    try:
        grid = sweep_grid(center, args.decades, args.points, integer=args.sweep == "N")
        if args.sweep == "alpha" and grid[-1] > math.pi / 2:
            raise UsageError("alpha sweep exceeds pi/2")
        rep = verify_scaling(spec, args.alpha, args.sweep, grid, regime)
    except PlyfoldError as exc:
        raise UsageError(str(exc)) from exc
    out = _outdir(args)
    (out / "scaling.json").write_text(rep.to_json())
    (out / "scaling.csv").write_text(rep.to_csv(_comment(args)))
    print(f"slope {rep.slope:.4f} (expected {rep.expected:.4f} +- {rep.tolerance}); regime ok: {rep.regime_ok}")
    if not rep.regime_ok:
        bad = sorted({str(l) for l in rep.labels if str(l) != str(regime)})
        print("sweep left the declared regime: " + ", ".join(bad), file=sys.stderr)
        return EXIT_REGIME
    return EXIT_OK if rep.passed else EXIT_SLOPE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plyfold", description="Folds of delaminating multi-ply strips.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build, measure and certify one fold")
    _spec_flags(c)
    c.add_argument("--beta", type=float)
    c.add_argument("--n", type=int)
    c.add_argument("--l-arc", dest="l_arc", type=float)
    c.add_argument("--optimize", action="store_true")
    c.add_argument("--no-validate", action="store_true", help="skip parameter checks; certification still runs")
    c.add_argument("--nx", type=int, default=2048)
    c.add_argument("--ny", type=int, default=16)
    c.set_defaults(func=cmd_construct)

    m = sub.add_parser("moment", help="energy and moment against alpha")
    _spec_flags(m, alpha=False)
    m.add_argument("--alpha-min", type=float, required=True)
    m.add_argument("--alpha-max", type=float, required=True)
    m.add_argument("--points", type=int, required=True)
    m.add_argument("--mode", choices=("analytic", "measured"), default="analytic")
    m.add_argument("--scale", choices=("log", "linear"), default="log")
    m.set_defaults(func=cmd_moment)

    d = sub.add_parser("phase-diagram", help="regime labels over two swept axes")
    _spec_flags(d)
    d.add_argument("--x", choices=AXES, required=True)
    d.add_argument("--y", choices=AXES, required=True)
    for ax in ("x", "y"):
        d.add_argument(f"--{ax}-min", type=float, required=True)
        d.add_argument(f"--{ax}-max", type=float, required=True)
        d.add_argument(f"--{ax}-points", type=int, default=16)
    d.set_defaults(func=cmd_phase_diagram)

    v = sub.add_parser("verify-scaling", help="fit an energy exponent along a sweep")
    _spec_flags(v)
    v.add_argument("--sweep", choices=AXES, required=True)
    v.add_argument("--regime", required=True, help="|".join(r.value for r in RegimeLabel))
    v.add_argument("--decades", type=float, default=1.0)
    v.add_argument("--points", type=int, default=8)
    v.set_defaults(func=cmd_verify_scaling)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: 2 on bad flags, 0 for --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"plyfold {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
