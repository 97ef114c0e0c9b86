"""Command-line front end: ``cfkernel {eval,validate,coeffs,laplace,transform,grid}``.

Exit status is 0 on success, 1 when a validation or round-trip check
fails and 2 on usage or domain errors.
"""
from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
from pathlib import Path

import numpy as np

from .clifford import GeometricFrame, blade_name, frame_of
from .genfun import genfun_coeffs
from .kernels import HALF_PI, KernelRequest, Strategy, kernel, kernel_closed_even
from .laplace import laplace_kernel, numeric_laplace_check
from .transform import SampledFunction, cft_apply

REPS = {
    "auto": Strategy.AUTO,
    "series": Strategy.SERIES,
    "closed": Strategy.CLOSED_EVEN,
    "integral": Strategy.INTEGRAL,
    "genfun": Strategy.GENFUN,
    "bruteforce": Strategy.BRUTEFORCE,
    "dim2": Strategy.DIM2,
}
REPORT_KEYS = ("m", "p", "u", "v", "t", "rep", "scalar_re", "scalar_im", "bivec_re", "bivec_im", "err_est")
BRUTEFORCE_TMAX = 1.5
BRUTEFORCE_MMAX = 5


class UsageError(Exception):
    pass


def _num(x):
    if x is None:
        return "null"
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return json.dumps(None)
    text = format(x, ".17g")
    return text if any(ch in text for ch in ".en") else text + ".0"


def dumps_report(report):
    """JSON object with floats written to 17 significant digits, keys in fixed order."""
    return "{" + ", ".join(f"{json.dumps(k)}: {_num(report[k])}" for k in REPORT_KEYS) + "}"


def kernel_report(m, p, frame, value):
    return {
        "m": m,
        "p": p,
        "u": float(frame.u),
        "v": float(frame.v),
        "t": float(frame.t),
        "rep": value.rep,
        "scalar_re": complex(value.scalar).real,
        "scalar_im": complex(value.scalar).imag,
        "bivec_re": complex(value.bivector_coeff).real,
        "bivec_im": complex(value.bivector_coeff).imag,
        "err_est": value.err_est,
    }


def _floats(text):
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse {text!r} as a list of numbers") from exc


def _frame_from_args(args):
    if args.x is not None or args.y is not None:
        if args.x is None or args.y is None:
            raise UsageError("--x and --y must be given together")
        x, y = np.array(_floats(args.x)), np.array(_floats(args.y))
        if x.shape != y.shape:
            raise UsageError("--x and --y need the same length")
        return frame_of(x, y)
    if args.u is None or args.v is None:
        raise UsageError("give either --x/--y or --u/--v")
    if args.v < 0:
        raise UsageError("--v must be non-negative")
    return GeometricFrame.from_uv(args.u, args.v)


def _evaluate(m, p, frame, rep, closed_mode="corrected"):
    if rep == "closed" and closed_mode != "corrected":
        return kernel_closed_even(m, frame, normalization=closed_mode)
    return kernel(KernelRequest(m, p, frame, strategy=REPS[rep]))


def cmd_eval(args, out):
    frame = _frame_from_args(args)
    value = _evaluate(args.m, args.p, frame, args.rep, args.closed_mode)
    report = kernel_report(args.m, args.p, frame, value)
    if args.json:
        print(dumps_report(report), file=out)
    else:
        print(f"K_{args.m}^p at p = {args.p}, (u, v, t) = ({frame.u:.6g}, {frame.v:.6g}, {frame.t:.6g}) via {value.rep}", file=out)
        print(f"  scalar   {complex(value.scalar):.15g}", file=out)
        print(f"  bivector {complex(value.bivector_coeff):.15g}  (times x^y)", file=out)
        print(f"  error estimate {value.err_est:.2e}", file=out)
    return 0


def applicable_reps(m, p, t):
    reps = []
    if m == 2:
        reps.append("dim2")
    else:
        reps.append("series")
    half = abs(p - HALF_PI) <= 1e-15
    if m % 4 == 0 and half:
        reps.append("closed")
    if m >= 3 and half:
        reps.append("integral")
    if m % 2 == 0:
        reps.append("genfun")
    if m <= BRUTEFORCE_MMAX and t <= BRUTEFORCE_TMAX:
        reps.append("bruteforce")
    return reps


def random_frames(n, tmax, seed):
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, tmax, n)
    theta = rng.uniform(0.0, math.pi, n)
    return [GeometricFrame.from_uv(ti * math.cos(th), ti * math.sin(th)) for ti, th in zip(t, theta)]


def validate(m, p, trials, seed, tmax):
    """Largest pairwise disagreement over random frames, as ``(diff, pair, frame)``."""
    worst = (0.0, None, None)
    for frame in random_frames(trials, tmax, seed):
        values = {rep: _evaluate(m, p, frame, rep) for rep in applicable_reps(m, p, frame.t)}
        for a, b in itertools.combinations(values, 2):
            d = values[a].max_abs_diff(values[b])
            if d > worst[0] or worst[1] is None:
                worst = (d, (a, b), frame)
    return worst


def cmd_validate(args, out):
    if args.trials < 1 or args.tmax < 0:
        raise UsageError("--trials must be positive and --tmax non-negative")
    diff, pair, frame = validate(args.m, args.p, args.trials, args.seed, args.tmax)
    if pair is None:
        print("only one representation applies; nothing to compare", file=out)
        return 0
    ok = diff <= args.tol
    print(
        f"worst pair {pair[0]} vs {pair[1]}: {diff:.3e} at (u, v) = ({frame.u:.6g}, {frame.v:.6g}) "
        f"[{'ok' if ok else 'FAIL'}, tol {args.tol:.1e}]",
        file=out,
    )
    return 0 if ok else 1


def cmd_coeffs(args, out):
    if args.max_m < 2 or args.max_m % 2:
        raise UsageError("--max-m must be an even number >= 2")
    frame = GeometricFrame.from_uv(args.u, args.v)
    for j, value in enumerate(genfun_coeffs(args.p, frame, args.max_m // 2 - 1)):
        print(dumps_report(kernel_report(2 * j + 2, args.p, frame, value)), file=out)
    return 0


def cmd_laplace(args, out):
    parts = _floats(args.s)
    if len(parts) not in (1, 2):
        raise UsageError("--s takes RE or RE,IM")
    s = complex(parts[0], parts[1] if len(parts) == 2 else 0.0)
    frame = GeometricFrame.from_uv(args.u, args.v)
    closed = laplace_kernel(args.m, args.p, s, frame)
    quad = numeric_laplace_check(args.m, args.p, s, frame)
    diff = closed.max_abs_diff(quad)
    print(f"closed     {complex(closed.scalar):.12g} + ({complex(closed.bivector_coeff):.12g}) x^y", file=out)
    print(f"quadrature {complex(quad.scalar):.12g} + ({complex(quad.bivector_coeff):.12g}) x^y", file=out)
    ok = diff <= args.tol
    print(f"difference {diff:.3e} [{'ok' if ok else 'FAIL'}]", file=out)
    return 0 if ok else 1


def cmd_transform(args, out):
    spec = json.loads(Path(args.input).read_text())
    targets = np.asarray(json.loads(Path(args.targets).read_text()), dtype=float)
    f = SampledFunction.from_spec(spec)
    results = cft_apply(f, args.p, targets)
    payload = {
        "dim": f.dim,
        "p": args.p,
        "grid_order": f.grid_order,
        "results": [
            {
                "y": y.tolist(),
                "coeffs": {blade_name(b): [c.real, c.imag] for b, c in enumerate(F.coeffs) if c != 0},
            }
            for y, F in zip(targets, results)
        ],
    }
    Path(args.out).write_text(json.dumps(payload, indent=2))
    print(f"wrote {len(results)} transformed values to {args.out}", file=out)
    return 0


def cmd_grid(args, out):
    if args.nu < 1 or args.nv < 1 or args.vmin < 0:
        raise UsageError("grid sizes must be positive and v non-negative")
    us = np.linspace(args.umin, args.umax, args.nu)
    vs = np.linspace(args.vmin, args.vmax, args.nv)
    U, V = np.meshgrid(us, vs, indexing="ij")
    value = _evaluate(args.m, args.p, GeometricFrame.from_uv(U, V), args.rep)
    parts = {
        "scalar_re": np.real(value.scalar),
        "scalar_im": np.imag(value.scalar),
        "bivec_re": np.real(value.bivector_coeff),
        "bivec_im": np.imag(value.bivector_coeff),
    }
    prefix = Path(args.out)
    header = "u\\v," + ",".join(format(v, ".17g") for v in vs)
    for name, data in parts.items():
        path = prefix.with_name(f"{prefix.stem}_{name}.csv")
        lines = [header] + [
            format(u, ".17g") + "," + ",".join(format(x, ".17g") for x in row) for u, row in zip(us, data)
        ]
        path.write_text("\n".join(lines) + "\n")
        print(f"wrote {path}", file=out)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="cfkernel", description="Evaluate and cross-check fractional Clifford-Fourier kernels.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def frame_args(sp, vectors=True):
        if vectors:
            sp.add_argument("--x", help="comma-separated vector")
            sp.add_argument("--y", help="comma-separated vector")
        sp.add_argument("--u", type=float, help="inner product (x, y)")
        sp.add_argument("--v", type=float, help="wedge norm |x^y|")

    ev = sub.add_parser("eval", help="evaluate one kernel value")
    ev.add_argument("--m", type=int, required=True)
    ev.add_argument("--p", type=float, required=True)
    frame_args(ev)
    ev.add_argument("--rep", choices=sorted(REPS), default="auto")
    ev.add_argument("--closed-mode", default="corrected", choices=["corrected", "as-printed", "calibrated"])
    ev.add_argument("--json", action="store_true")
    ev.set_defaults(func=cmd_eval)

    va = sub.add_parser("validate", help="compare all applicable representations on random frames")
    va.add_argument("--m", type=int, required=True)
    va.add_argument("--p", type=float, required=True)
    va.add_argument("--trials", type=int, default=50)
    va.add_argument("--seed", type=int, default=0)
    va.add_argument("--tmax", type=float, default=3.0)
    va.add_argument("--tol", type=float, default=1e-8)
    va.set_defaults(func=cmd_validate)

    co = sub.add_parser("coeffs", help="even-dimensional kernels from the generating function")
    co.add_argument("--p", type=float, required=True)
    frame_args(co, vectors=False)
    co.add_argument("--max-m", type=int, default=8)
    co.set_defaults(func=cmd_coeffs)

    la = sub.add_parser("laplace", help="Laplace-domain kernel against quadrature")
    la.add_argument("--m", type=int, required=True)
    la.add_argument("--p", type=float, required=True)
    la.add_argument("--s", required=True, help="RE or RE,IM")
    frame_args(la, vectors=False)
    la.add_argument("--tol", type=float, default=1e-5)
    la.set_defaults(func=cmd_laplace)

    tr = sub.add_parser("transform", help="apply the transform to a sampled function")
    tr.add_argument("--input", required=True)
    tr.add_argument("--p", type=float, default=HALF_PI)
    tr.add_argument("--targets", required=True)
    tr.add_argument("--out", required=True)
    tr.set_defaults(func=cmd_transform)

    gr = sub.add_parser("grid", help="kernel values on a (u, v) grid as CSV")
    gr.add_argument("--m", type=int, required=True)
    gr.add_argument("--p", type=float, required=True)
    gr.add_argument("--umin", type=float, default=-3.0)
    gr.add_argument("--umax", type=float, default=3.0)
    gr.add_argument("--vmin", type=float, default=0.0)
    gr.add_argument("--vmax", type=float, default=3.0)
    gr.add_argument("--nu", type=int, default=61)
    gr.add_argument("--nv", type=int, default=31)
    gr.add_argument("--rep", choices=sorted(REPS), default="auto")
    gr.add_argument("--out", required=True, help="file prefix; one CSV per component")
    gr.set_defaults(func=cmd_grid)
    return parser


def run(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.command in ("coeffs", "laplace") and (args.u is None or args.v is None):
            raise UsageError("--u and --v are required")
        return args.func(args, out)
    except (UsageError, ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"cfkernel: error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"cfkernel: numerical failure: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())
