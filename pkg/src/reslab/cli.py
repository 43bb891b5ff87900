"""Command-line front end.

Every subcommand prints a short summary (plain text, or JSON with
``--json``) and, when ``--out`` is given, writes its CSV/JSON artifacts
atomically into that directory. Exit status is 0 on success, 2 for invalid
input and 3 when a numerical method fails to converge.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Sequence

import numpy as np

from . import airy_model, geometry, resonance, scaling
from .conditions import BoundaryCondition
from .csfun import airy_ai, airy_ai_prime
from .errors import ConvergenceError
from .roots import Rect, find_zeros

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NONCONVERGENCE = 3


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _ArgumentError(f"{self.prog}: error: {message}")


def _real(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return x


def _count(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def write_atomic(path: Path, text: str) -> None:
    """Write ``text`` to a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(args, doc: dict, lines: list[str]) -> None:
    if args.json:
        sys.stdout.write(_dumps(doc))
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _bc(args) -> BoundaryCondition:
    phase = airy_model.SCALED_ROBIN_PHASE if getattr(args, "scaled", False) else None
    if args.bc == "robin":
        return BoundaryCondition.robin(args.gamma, phase)
    if args.gamma != 0.0:
        raise ValueError("--gamma applies only to --bc robin")
    return BoundaryCondition(args.bc)


def _fmt(x: float, digits: int) -> str:
    return f"{x:.{digits}f}"


def _fmt_complex(z: complex, digits: int) -> str:
    sign = "-" if z.imag < 0 else "+"
    return f"{z.real:.{digits}f}{sign}{abs(z.imag):.{digits}f}i"


# ---------------------------------------------------------------------------
# subcommands


def airy_zeros(kind: str, count: int, tol: float = 1e-14) -> list[float]:
    """Magnitudes of the first ``count`` zeros of Ai or Ai'."""
    if not 1 <= count <= 50:
        raise ValueError("count must be between 1 and 50")
    # asymptotic location of the count-th zero, plus a margin
    reach = (3 * math.pi / 8 * (4 * count - 1)) ** (2 / 3) + 1.0
    if kind == "ai":
        f, fp = airy_ai, airy_ai_prime
    else:
        f, fp = airy_ai_prime, lambda z: z * airy_ai(z)
    zeros = find_zeros(f, fp, Rect(-reach, -0.25, -0.5, 0.5), tol)
    mags = sorted(-z.location.real for z in zeros)
    if len(mags) < count:
        raise ConvergenceError(f"found {len(mags)} zeros, expected {count}")
    return mags[:count]


def _cmd_airy_zeros(args) -> int:
    vals = airy_zeros(args.kind, args.count, args.tol)
    _emit(args, {"kind": args.kind, "zeros": vals}, [_fmt(v, args.digits) for v in vals])
    return EXIT_OK


def _cmd_ball(args) -> int:
    window = None if args.window is None else Rect(*args.window)
    query = resonance.ResonanceQuery(args.radius, _bc(args), args.l_min, args.l_max, window, args.tol)
    rset = resonance.ball_resonances(query)
    if args.out:
        write_atomic(Path(args.out) / "resonances.csv", rset.to_csv())
        write_atomic(Path(args.out) / "resonances.json", rset.to_json())
    lines = [f"{e.l} {_fmt_complex(e.zeta, args.digits)} {e.cls} residual={e.residual:.2e}" for e in rset]
    _emit(args, json.loads(rset.to_json()), lines or ["no zeros in window"])
    return EXIT_OK


def _surface(text: str) -> geometry.ParametricSurface:
    name, _, params = text.partition(":")
    vals = [float(p) for p in params.split(",")] if params else []
    if name == "sphere" and len(vals) == 1:
        return geometry.Sphere(vals[0])
    if name == "ellipsoid" and len(vals) == 3:
        return geometry.Ellipsoid(*vals)
    raise ValueError(f"surface must be 'sphere:R' or 'ellipsoid:a,b,c', got {text!r}")


def _cmd_barrier(args) -> int:
    if args.surface is not None:
        k = geometry.min_curvature(_surface(args.surface), args.grid_n)
    else:
        k = args.min_curvature
    S = geometry.barrier_constant(k)
    doc = {"min_curvature": k, "S": S}
    if args.dirichlet:
        doc["S_dirichlet"] = geometry.dirichlet_barrier_constant(k)
    lines = [f"min curvature = {_fmt(k, args.digits)}", f"S = {_fmt(S, args.digits)}"]
    if args.dirichlet:
        lines.append(f"S (Dirichlet) = {_fmt(doc['S_dirichlet'], args.digits)}")
    _emit(args, doc, lines)
    return EXIT_OK


def _read_set(path: str) -> resonance.ResonanceSet:
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json"):
        return resonance.ResonanceSet.from_json(text)
    return resonance.ResonanceSet.from_csv(text)


def _cmd_verify(args) -> int:
    rset = _read_set(args.input)
    S = args.S if args.S is not None else geometry.barrier_constant(args.min_curvature)
    rep = resonance.verify_barrier(rset, S, args.C)
    if args.out:
        write_atomic(Path(args.out) / "barrier.json", rep.to_json())
    doc = rep.to_dict()
    doc["violations"] = [{"l": e.l, "re_zeta": e.zeta.real, "im_zeta": e.zeta.imag} for e in rep.violations]
    lines = [f"S = {_fmt(S, args.digits)}", f"C_fit = {_fmt(rep.C_fit, args.digits)}", f"entries = {rep.n_entries}"]
    if args.C is not None:
        lines.append(f"violations of C = {args.C:g}: {len(rep.violations)}")
    _emit(args, doc, lines)
    return EXIT_OK


def _cmd_fit(args) -> int:
    rset = _read_set(args.input)
    S_fit, stderr = resonance.fit_cubic_slope(rset, args.l_lo, args.l_hi)
    doc = {"S_fit": S_fit, "stderr": stderr, "l_range": [args.l_lo, args.l_hi]}
    _emit(args, doc, [f"S_fit = {S_fit!r}", f"stderr = {stderr!r}"])
    return EXIT_OK


def _cmd_model(args) -> int:
    bc = _bc(args)
    digits = args.digits
    if args.suite is not None:
        rep = airy_model.check_inequalities(args.suite, args.h, args.trials, args.seed)
        name = "inequality_" + args.suite.replace(":", "_") + ".json"
        doc = rep.to_dict()
        lines = [f"{rep.suite} h={args.h:g}: worst margin {rep.worst_margin:.3e} (trial {rep.argmin_trial})"]
        lines += [f"  {k} = {v:.6g}" for k, v in sorted(rep.fitted_constants.items())]
        lines.append("PASS" if rep.passed else "FAIL")
    elif args.eigs is not None:
        vals = airy_model.airy_realization_eigs(bc, args.eigs, args.n)
        name = "eigs.json"
        doc = {"bc": bc.label(), "n": args.n, "eigenvalues": [float(v) for v in vals]}
        lines = [_fmt(v, digits) for v in vals]
    elif args.rayleigh:
        val = airy_model.min_rayleigh(bc, args.h, (args.c_d0, args.c_00), args.n)
        name = "rayleigh.json"
        scaled = val / args.h ** (2.0 / 3.0)
        doc = {"bc": bc.label(), "h": args.h, "n": args.n, "min_rayleigh": val, "scaled": scaled}
        lines = [f"min_rayleigh = {val:.{digits}e}", f"min_rayleigh / h^(2/3) = {_fmt(scaled, digits)}"]
    else:
        T = args.T if args.T is not None else airy_model.model_window(args.h)
        lower = airy_model.LowerOrder(args.c_d, args.c_0, args.c_1, args.c_2)
        spec = airy_model.ModelOperatorSpec(args.h, T, args.r_val, args.q_val, args.eta_weight, lower, bc=bc)
        omega0 = complex(args.omega_re, args.omega_im)
        s = airy_model.sigma_min(airy_model.frozen_operator(spec, args.n), omega0)
        name = "sigma_min.json"
        doc = {
            "bc": bc.label(),
            "h": args.h,
            "T": T,
            "n": args.n,
            "R_val": args.r_val,
            "Q_val": args.q_val,
            "eta_weight": args.eta_weight,
            "omega0": [omega0.real, omega0.imag],
            "sigma_min": s,
            "excess": s - omega0.imag,
        }
        lines = [f"sigma_min = {_fmt(s, digits)}", f"sigma_min - Im omega0 = {s - omega0.imag:.{digits}e}"]
    if args.out:
        write_atomic(Path(args.out) / name, _dumps(doc))
    _emit(args, doc, lines)
    return EXIT_OK


_PRESETS = {
    "identity": lambda R: scaling.HessianField(lambda x: np.eye(3), 3, name="identity"),
    "zero": lambda R: scaling.HessianField(lambda x: np.zeros((3, 3)), 3, name="zero"),
    "ball": scaling.ball_hessian,
}


def _cmd_symbol(args) -> int:
    spec = scaling.ContourSpec(theta=args.theta)
    field_ = _PRESETS[args.hess](args.radius)
    scan = scaling.arg_window_scan(spec, field_, args.delta, args.sample_n, args.radius)
    contour = scaling.check_contour(spec)
    doc = {
        "theta": args.theta,
        "hess": args.hess,
        "delta": args.delta,
        "sample_n": args.sample_n,
        "epsilon": scan.epsilon,
        "worst_point": [float(v) for v in scan.worst_point],
        "worst_xi": [float(v) for v in scan.worst_xi],
        "worst_p": [scan.worst_p.real, scan.worst_p.imag],
        "contour_ok": contour.ok,
    }
    lines = [
        f"epsilon = {scan.epsilon:.{args.digits}e}",
        f"worst p = {_fmt_complex(scan.worst_p, args.digits)}",
        "window " + ("holds" if scan.epsilon > 0 else "FAILS"),
        "contour invariants " + ("hold" if contour.ok else "FAIL"),
    ]
    if args.out:
        write_atomic(Path(args.out) / "symbol.json", _dumps(doc))
    _emit(args, doc, lines)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the summary as JSON")
    common.add_argument("--out", help="directory for CSV/JSON artifacts")
    common.add_argument("--digits", type=_count, default=5, help="decimals in the text summary")
    common.add_argument("--seed", type=_count, default=0)

    bcargs = _Parser(add_help=False)
    bcargs.add_argument("--bc", choices=("dirichlet", "neumann", "robin"), default="neumann")
    bcargs.add_argument("--gamma", type=_real, default=0.0)

    p = _Parser(prog="reslab", description="Resonances of convex obstacles and Airy-model operator bounds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("airy-zeros", parents=[common], help="zeros of Ai or Ai'")
    q.add_argument("--kind", choices=("ai", "ai-prime"), default="ai")
    q.add_argument("--count", type=_count, default=3)
    q.add_argument("--tol", type=_real, default=1e-14)
    q.set_defaults(func=_cmd_airy_zeros)

    q = sub.add_parser("ball", parents=[common, bcargs], help="resonances of a ball")
    q.add_argument("--radius", type=_real, default=1.0)
    q.add_argument("--l-min", type=_count, default=0)
    q.add_argument("--l-max", type=_count, default=10)
    q.add_argument("--tol", type=_real, default=1e-10)
    q.add_argument("--window", type=_real, nargs=4, metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"))
    q.set_defaults(func=_cmd_ball)

    q = sub.add_parser("barrier", parents=[common], help="cubic barrier constant S")
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--min-curvature", type=_real)
    g.add_argument("--surface", help="sphere:R or ellipsoid:a,b,c")
    q.add_argument("--grid-n", type=_count, default=32)
    q.add_argument("--dirichlet", action="store_true", help="also report the Dirichlet analogue")
    q.set_defaults(func=_cmd_barrier)

    q = sub.add_parser("verify", parents=[common], help="check resonances against the barrier")
    q.add_argument("--input", required=True)
    q.add_argument("--S", type=_real)
    q.add_argument("--min-curvature", type=_real, default=1.0)
    q.add_argument("--C", type=_real)
    q.set_defaults(func=_cmd_verify)

    q = sub.add_parser("fit", parents=[common], help="fit the cubic slope of the first string")
    q.add_argument("--input", required=True)
    q.add_argument("--l-lo", type=_count, required=True)
    q.add_argument("--l-hi", type=_count, required=True)
    q.set_defaults(func=_cmd_fit)

    q = sub.add_parser("model", parents=[common, bcargs], help="Airy-model operators")
    mode = q.add_mutually_exclusive_group(required=True)
    mode.add_argument("--suite", choices=airy_model.SUITES)
    mode.add_argument("--eigs", type=_count, metavar="COUNT")
    mode.add_argument("--rayleigh", action="store_true")
    mode.add_argument("--sigma-min", action="store_true")
    q.add_argument("--h", type=_real, default=1e-3)
    q.add_argument("--n", type=_count, default=2000)
    q.add_argument("--trials", type=_count, default=200)
    q.add_argument("--scaled", action="store_true", help="use the scaled Robin phase exp(-i pi/3)")
    q.add_argument("--T", type=_real)
    q.add_argument("--r-val", type=_real, default=1.0)
    q.add_argument("--q-val", type=_real, default=0.5)
    q.add_argument("--eta-weight", type=_real, default=1.0)
    q.add_argument("--omega-re", type=_real, default=1.0)
    q.add_argument("--omega-im", type=_real, default=0.1)
    q.add_argument("--c-d", type=_real, default=0.0)
    q.add_argument("--c-0", type=_real, default=0.0)
    q.add_argument("--c-1", type=_real, default=0.0)
    q.add_argument("--c-2", type=_real, default=0.0)
    q.add_argument("--c-d0", type=_real, default=0.0, help="|D_t u(0)|^2 penalty for --rayleigh")
    q.add_argument("--c-00", type=_real, default=0.0, help="|u(0)|^2 penalty for --rayleigh")
    q.set_defaults(func=_cmd_model)

    q = sub.add_parser("symbol", parents=[common], help="argument window of the scaled symbol")
    q.add_argument("--theta", type=_real, default=0.3)
    q.add_argument("--hess", choices=tuple(_PRESETS), default="ball")
    q.add_argument("--delta", type=_real, default=0.1)
    q.add_argument("--radius", type=_real, default=1.0)
    q.add_argument("--sample-n", type=_count, default=64)
    q.set_defaults(func=_cmd_symbol)
    return p


def dispatch(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _ArgumentError as err:
        print(err, file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConvergenceError as err:
        print(f"reslab: not converged: {err}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ValueError, OSError) as err:
        print(f"reslab: error: {err}", file=sys.stderr)
        return EXIT_INVALID
    except ArithmeticError as err:
        print(f"reslab: not converged: {err}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


def main() -> None:
    sys.exit(dispatch())
