"""Command-line front end.

JSON reports go to stdout, human-readable tables to stderr. Exit codes:
0 success, 1 precision or verification failure, 2 usage or domain error.
"""
from __future__ import annotations

import argparse
import cmath
import json
import math
import os
import re
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import acceptance, curves
from .characters import character_from_json
from .combo import ComboSpec, eval_F, lemma_disc_check
from .emaclaurin import eval_L_em
from .errors import (
    DomainError,
    InvariantViolation,
    LZerosError,
    NonConvergenceError,
    PrecisionError,
    ValidationError,
)
from .fixedpoint import (
    COVER_RADIUS,
    G_coverage_check,
    K_theta,
    compute_partition,
    construct,
    brouwer_radius,
    suff_cond_check,
)
from .lfunc import (
    DEFAULT_PRIME_CUTOFF,
    EvalResult,
    LFunctionSpec,
    dirichlet_spec,
    eval_L,
    eval_L_direct,
    eval_log_L,
    zeta_power_spec,
    zeta_spec,
)
from .zeros import ComboEvaluator, Rectangle, hunt_zeros

CUTOFF_ENV = "LZEROS_PRIME_CUTOFF"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    tol: float
    prime_cutoff: int
    out: Optional[str]
    seed: int

    def __post_init__(self):
        if self.prime_cutoff < 2:
            raise DomainError("prime cutoff must be >= 2")
        if not self.tol > 0:
            raise DomainError("tolerance must be > 0")


def emit(doc) -> str:
    """Canonical JSON: sorted keys, two-space indent; re-serialising a parsed report is identical."""
    text = json.dumps(doc, sort_keys=True, indent=2)
    print(text)
    return text


def note(text: str) -> None:
    print(text, file=sys.stderr)


_COMPLEX = re.compile(r"^\s*([+-]?[\d.]+(?:e[+-]?\d+)?)\s*(?:([+-])\s*([\d.]+(?:e[+-]?\d+)?)?\s*[ij])?\s*$", re.I)


def parse_complex(text: str) -> complex:
    """'2', '2+0i', '1.5-3.25i', '2+i'."""
    m = _COMPLEX.match(text)
    if not m:
        try:
            return complex(text.replace("i", "j"))
        except ValueError:
            raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r}") from None
    re_part = float(m.group(1))
    if m.group(2) is None:
        return complex(re_part, 0.0)
    im = float(m.group(3)) if m.group(3) else 1.0
    return complex(re_part, -im if m.group(2) == "-" else im)


def parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _cplx(z: complex) -> list[float]:
    return [z.real, z.imag]


def default_cutoff() -> int:
    raw = os.environ.get(CUTOFF_ENV)
    if raw is None:
        return DEFAULT_PRIME_CUTOFF
    try:
        return int(float(raw))
    except ValueError:
        raise DomainError(f"{CUTOFF_ENV}={raw!r} is not a number") from None


def build_spec(args) -> LFunctionSpec:
    if args.spec == "zeta":
        return zeta_spec()
    if args.spec == "zeta-power":
        if args.k is None or args.k < 1:
            raise DomainError("--spec zeta-power needs --k >= 1")
        return zeta_power_spec(args.k)
    if args.spec == "char":
        if not args.char_file:
            raise DomainError("--spec char needs --char-file")
        return dirichlet_spec(character_from_json(args.char_file))
    raise DomainError(f"unknown spec {args.spec!r}")


def _config(args) -> RunConfig:
    cutoff = args.prime_cutoff if args.prime_cutoff is not None else default_cutoff()
    return RunConfig(args.command, args.tol, int(cutoff), args.out, args.seed)


# ---------------------------------------------------------------- subcommands

def cmd_eval(args) -> int:
    cfg = _config(args)
    spec = build_spec(args)
    s = args.s
    if not s.real > 1:
        raise DomainError(f"Re(s)={s.real} is not > 1")
    method = "euler" if args.log else args.method
    if args.combo:
        what = f"F_{args.N}"
        if method == "em":
            res = EvalResult(*ComboEvaluator(ComboSpec(spec, args.N))(s))
        else:
            res = eval_F(ComboSpec(spec, args.N), s, cfg.prime_cutoff)
    elif args.log:
        what = "log L"
        res = eval_log_L(spec, s, cfg.prime_cutoff)
    else:
        what = "L"
        if method == "em":
            res = eval_L_em(spec, s)
        elif method == "direct":
            res = eval_L_direct(spec, s, cfg.prime_cutoff)
        else:
            res = eval_L(spec, s, cfg.prime_cutoff)
    if args.strict and res.tail_bound > cfg.tol:
        raise PrecisionError(f"tail bound {res.tail_bound:.3g} exceeds --tol {cfg.tol}")
    note(f"{what}({s}) = {res.value:.12g}  (+- {res.tail_bound:.3g}, {method})")
    emit({"spec": spec.label, "quantity": what, "method": method, "s": _cplx(s), **res.to_json()})
    return EXIT_OK


def cmd_curve(args) -> int:
    if args.r <= 1:
        raise DomainError("curve radius must be > 1")
    if args.samples < 8:
        raise DomainError("--samples must be >= 8")
    arc = curves.figure1_samples(args.r, args.samples)
    if args.out:
        curves.write_figure_csv(arc, args.out)
    else:
        sys.stdout.write("theta,u,v\n")
        for row in zip(arc.theta, arc.u, arc.v):
            sys.stdout.write(",".join(f"{x:.17g}" for x in row) + "\n")
    wind = curves.polyline_winding(arc.u, arc.v)
    vals = [c.value for c in curves.real_axis_crossings(args.r)]
    note(f"r={args.r}: {len(arc)} rows, winding {wind}, real-axis values {vals}")
    if args.out:
        emit({"r": args.r, "rows": len(arc), "winding": wind, "real_axis_values": vals, "out": args.out})
    return EXIT_OK


def cmd_region(args) -> int:
    cfg = _config(args)
    sigmas = args.sigma or list(curves.DEFAULT_SIGMA_GRID)
    bounds = curves.sweep_region_bounds(sigmas, cfg.prime_cutoff)
    verdicts = [curves.verdict_for_k(k, bounds) for k in range(1, 13)]
    note(f"{'sigma':>12} {'lowerReach':>12} {'upperReach':>12}")
    for b in bounds:
        note(f"{b.sigma:12.7f} {b.lower_reach:12.7f} {b.upper_reach:12.7f}")
    note(f"{'k':>3} {'pi/k':>10}  verdict")
    for v in verdicts:
        note(f"{v.k:3d} {v.target:10.6f}  {v.status.value}  (lower {v.lower_used:.6f}, upper {v.upper_used:.6f})")
    emit({"bounds": [b.to_json() for b in bounds], "verdicts": [v.to_json() for v in verdicts]})
    return EXIT_OK


def cmd_verify(args, constants: Optional[dict] = None) -> int:
    try:
        results = acceptance.run_acceptance(args.only, constants)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    for r in results:
        note(r.line())
    failed = [r for r in results if not r.passed]
    if failed:
        note(f"FAILED: criterion {failed[0].number} ({failed[0].name})")
    emit({"results": [r.to_json() for r in results], "passed": not failed})
    return EXIT_FAIL if failed else EXIT_OK


def cmd_zeros(args) -> int:
    cfg = _config(args)
    spec = build_spec(args)
    if args.rect is None or len(args.rect) != 4:
        raise DomainError("--rect needs four numbers sigma_min,sigma_max,t_min,t_max")
    rect = Rectangle(*args.rect)
    dil = tuple(int(x) for x in args.dilations) if args.dilations else ()
    combo = ComboSpec(spec, max(args.N, max(dil) if dil else 2))
    F = ComboEvaluator(combo, dilations=dil)
    res = hunt_zeros(F, rect, grid_n=args.grid, tol=cfg.tol)
    note(f"dilations {F.dilations} over {rect}: {res.candidates} candidates, min |F| {res.min_modulus:.3g}")
    for z in res.zeros:
        note(f"  s = {z.location:.10f}  residual {z.residual:.2e}  winding {z.winding}  certified {z.certified}"
             + (f"  ({z.flag})" if z.flag else ""))
    emit({
        "spec": spec.label,
        "dilations": list(F.dilations),
        "rect": list(args.rect),
        "min_modulus": res.min_modulus,
        "zeros": [z.to_json() for z in res.zeros],
    })
    return EXIT_OK


def cmd_demo(args) -> int:
    """Fixed-point construction at desk scale with a residual table."""
    cfg = _config(args)
    spec = build_spec(args)
    sigma = args.sigma[0] if args.sigma else 1.1
    cutoff = args.prime_cutoff if args.prime_cutoff is not None else 10**4
    thr = compute_partition(spec, sigma, cutoff)
    cover = G_coverage_check(thr.mu1, thr.mu2, thr.mu0, 32)
    if not cover:
        raise InvariantViolation("G boundary does not wind once around the target disc")
    rho = thr.total_sum * COVER_RADIUS
    n = args.samples or 16
    sols = [construct(spec, sigma, 0j, thr)]
    sols += [construct(spec, sigma, rho * cmath.exp(2j * math.pi * j / n), thr) for j in range(n)]
    note(f"p1={thr.p1} p2={thr.p2} mu=({thr.mu1:.6f}, {thr.mu2:.6f}, {thr.mu0:.6f}) S={thr.total_sum:.6f}")
    note(f"{'z':>28} {'theta1':>10} {'theta2':>10} {'residual':>10}")
    for s in sols:
        note(f"{s.z:28.6f} {s.theta1:10.6f} {s.theta2:10.6f} {s.residual:10.2e}")
    radius = brouwer_radius(spec, 2)
    cond = suff_cond_check(spec, sigma, radius, cutoff)
    note(f"radius B+K_theta+pi = {radius:.6f}: needs prime sum >= {cond.required:.3f}, have {cond.prime_sum:.6f}")
    worst = max(s.residual for s in sols)
    doc = {
        "spec": spec.label,
        "sigma": sigma,
        "thresholds": thr.to_json(),
        "coverage": cover,
        "rho": rho,
        "worst_residual": worst,
        "K_theta": K_theta(spec).to_json(),
        "brouwer_radius": radius,
        "radius_condition_holds": cond.holds,
        "targets": [{"z": _cplx(s.z), "theta1": s.theta1, "theta2": s.theta2, "residual": s.residual} for s in sols],
    }
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump([s.to_json() for s in sols], fh, sort_keys=True, indent=2)
    emit(doc)
    return EXIT_OK if worst < 1e-6 else EXIT_FAIL


def cmd_lemma(args) -> int:
    spec = build_spec(args)
    rep = lemma_disc_check(spec, args.N)
    note(f"N={rep.N}: radius {rep.exact_radius or rep.radius} vs centre {rep.center}, contained {rep.contained}")
    emit(rep.to_json())
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", choices=["zeta", "char", "zeta-power"], default="zeta")
    common.add_argument("--char-file", help="JSON character table {modulus, values}")
    common.add_argument("--k", type=int, help="power for --spec zeta-power")
    common.add_argument("--N", type=int, default=2)
    common.add_argument("--prime-cutoff", type=lambda x: int(float(x)),
                        help=f"prime cutoff (default ${CUTOFF_ENV} or {DEFAULT_PRIME_CUTOFF})")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out")
    common.add_argument("--json", action="store_true", help="accepted for symmetry; JSON is always on stdout")

    p = argparse.ArgumentParser(prog="lzeros", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate L, log L or F_N")
    e.add_argument("--s", type=parse_complex, required=True)
    e.add_argument("--combo", action="store_true", help="evaluate F_N(s) = L(s) + ... + L(Ns)")
    e.add_argument("--log", action="store_true", help="evaluate log L(s)")
    e.add_argument("--method", choices=["em", "euler", "direct"], default="em",
                   help="Euler-Maclaurin (default), truncated Euler product, or direct sum up to the cutoff")
    e.add_argument("--strict", action="store_true", help="fail when the tail bound exceeds --tol")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("curve", help="curve data")
    csub = c.add_subparsers(dest="curve_command", required=True)
    f1 = csub.add_parser("fig1", parents=[common], help="CSV of g(r e^{i theta}) over the full circle")
    f1.add_argument("--r", type=float, default=2.0)
    f1.add_argument("--samples", type=int, default=4096)
    f1.set_defaults(func=cmd_curve)

    r = sub.add_parser("region", parents=[common], help="reach bounds and verdicts for k = 1..12")
    r.add_argument("--sigma", type=parse_floats)
    r.set_defaults(func=cmd_region)

    v = sub.add_parser("verify", parents=[common], help="run the acceptance criteria")
    v.add_argument("--only", type=lambda x: x.split(","), help="groups or criterion numbers, comma-separated")
    v.set_defaults(func=cmd_verify)

    z = sub.add_parser("zeros", parents=[common], help="locate and certify zeros in a rectangle")
    z.add_argument("--rect", type=parse_floats, required=True)
    z.add_argument("--dilations", type=parse_floats, help="e.g. 2,3 for L(2s) + L(3s)")
    z.add_argument("--grid", type=int, default=128)
    z.set_defaults(func=cmd_zeros)

    d = sub.add_parser("demo", parents=[common], help="fixed-point construction residual table")
    d.add_argument("--sigma", type=parse_floats)
    d.add_argument("--samples", type=int)
    d.set_defaults(func=cmd_demo)

    lm = sub.add_parser("lemma", parents=[common], help="disc containment for f = L(2s)+...+L(Ns)")
    lm.set_defaults(func=cmd_lemma)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ValidationError) as exc:
        note(f"error: {exc}")
        return EXIT_USAGE
    except (PrecisionError, InvariantViolation, NonConvergenceError, LZerosError) as exc:
        note(f"failure: {exc}")
        return EXIT_FAIL
    except OSError as exc:
        note(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
