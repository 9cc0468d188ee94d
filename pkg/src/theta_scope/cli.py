"""Command-line front end: ``theta-scope <subcommand> [options]``.

Every subcommand prints one JSON document (``sample-image`` prints CSV by
default, ``sweep`` prints one JSON object per line).  Exit codes:

    0   success
    2   a certification subcommand failed its contract
    3   numerically inconclusive
    64  usage error (bad flags or arguments outside an operation's domain)
"""

from __future__ import annotations

import argparse
import importlib.resources
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable

import mpmath
import numpy as np

from . import geometry, jacobi, roots_of_unity, zerofinder
from .core_eval import (
    DomainError,
    PrecisionMode,
    eval_theta,
    eval_theta_dq,
    eval_theta_dx,
    eval_theta_dxx,
    eval_truncation,
)

EXIT_OK = 0
EXIT_CONTRACT = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64

PRECISION_ENV = "THETA_SCOPE_PRECISION"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# serialisation helpers


def num(v) -> Any:
    """JSON-safe number: complex -> {re, im}, non-finite -> null."""
    if v is None:
        return None
    if isinstance(v, (complex, np.complexfloating, mpmath.mpc)):
        c = complex(v)
        return {"re": num(c.real), "im": num(c.imag)}
    f = float(v)
    return f if math.isfinite(f) else None


def load_schema(subcommand: str) -> dict:
    """The JSON schema shipped for a subcommand's output."""
    ref = importlib.resources.files("theta_scope") / "schemas" / f"{subcommand}.json"
    return json.loads(ref.read_text(encoding="utf-8"))


def dumps(obj) -> str:
    return json.dumps(obj, allow_nan=False)


def _precision(args, auto: bool = False) -> PrecisionMode | None:
    choice = args.precision or os.environ.get(PRECISION_ENV)
    if choice is None:
        return None if auto else PrecisionMode.STANDARD
    try:
        return PrecisionMode.coerce(choice)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _x(args) -> complex:
    return complex(args.x_re, args.x_im)


def _certified(cv) -> dict:
    return {
        "value": num(cv.value),
        "tail_bound": num(cv.tail_bound),
        "round_bound": num(cv.round_bound),
        "terms_used": int(cv.terms_used),
        "precision": cv.precision.value,
    }


def _zero(rec: zerofinder.ZeroRecord) -> dict:
    return {
        "q": num(rec.q),
        "location": num(rec.location),
        "residual": num(rec.residual),
        "newton_steps": int(rec.newton_steps),
        "source": rec.source.value,
        "derivative": num(rec.derivative),
    }


def _certificate(c: zerofinder.DiskCertificate) -> dict:
    return {
        "q": num(c.q),
        "radius": num(c.radius),
        "center": num(c.center),
        "winding": int(c.winding),
        "status": c.status.value,
        "min_modulus_lb": num(c.min_modulus_lb),
        "min_modulus_sampled": num(c.min_modulus_sampled),
        "samples": int(c.samples),
        "precision": c.precision.value,
        "diagnostic": c.diagnostic,
    }


# --------------------------------------------------------------------------
# subcommands; each returns (payload, exit code) or a str for CSV/SVG output


def cmd_eval(args):
    mode = _precision(args)
    cv = eval_theta(args.q, _x(args), mode)
    return {"q": num(args.q), "x": num(_x(args)), **_certified(cv)}


_DERIVS = {"dx": eval_theta_dx, "dxx": eval_theta_dxx, "dq": eval_theta_dq}


def cmd_deriv(args):
    cv = _DERIVS[args.kind](args.q, _x(args), _precision(args))
    return {"q": num(args.q), "x": num(_x(args)), "kind": args.kind, **_certified(cv)}


def cmd_truncate(args):
    out = {"q": num(args.q), "n": args.n}
    if args.x_re is not None:
        x = complex(args.x_re, args.x_im or 0.0)
        out["x"] = num(x)
        out["value"] = num(complex(eval_truncation(args.q, x, args.n, _precision(args))))
    rs = zerofinder.truncation_roots(args.q, args.n)
    order = np.argsort(rs.moduli, kind="stable")
    out["converged"] = rs.converged
    out["min_modulus"] = num(rs.moduli.min())
    out["roots"] = [num(r) for r in rs.roots[order]]
    return out


def cmd_certify_disk(args):
    if args.q == 0:
        raise UsageError("q = 0 is excluded: theta(0, .) = 1 has no zeros")
    mode = _precision(args, auto=True)
    center = complex(args.center_re, args.center_im)
    if args.radius == 1.0 and center == 0 and mode is None:
        cert = zerofinder.certify_unit_disk(args.q)
    else:
        if mode is None:
            mode = PrecisionMode.EXTENDED if abs(args.q) >= 0.9 else PrecisionMode.STANDARD
        cert = zerofinder.count_zeros_in_disk(args.q, args.radius, mode, center=center)
    payload = _certificate(cert)
    if not cert.certified:
        return payload, EXIT_INCONCLUSIVE
    # zero-free closed unit disk holds for every 0 < |q| < 1
    if center == 0 and args.radius <= 1.0 and cert.winding != 0:
        return payload, EXIT_CONTRACT
    return payload, EXIT_OK


def cmd_zeros(args):
    if args.q == 0:
        raise UsageError("q = 0 is excluded: theta(0, .) = 1 has no zeros")
    rs = zerofinder.truncation_roots(args.q, args.n)
    seeds = sorted((r for r in rs.roots if abs(r) < args.inside), key=lambda z: (abs(z), z.imag))
    zeros, failed = [], []
    mode = _precision(args)
    for s in seeds:
        try:
            rec = zerofinder.refine_zero(args.q, s, mode, source=zerofinder.ZeroSource.TRUNCATION_ROOT)
        except (zerofinder.NoConvergenceError, zerofinder.DegenerateError):
            failed.append(num(s))
            continue
        zeros.append(_zero(rec))
    return {"q": num(args.q), "n": args.n, "inside": num(args.inside), "zeros": zeros,
            "unrefined_seeds": failed}


def cmd_track(args):
    path = zerofinder.track_zero(args.q_start, args.q_end, complex(args.seed_re, args.seed_im),
                                 args.steps, _precision(args))
    payload = {
        "q_start": num(args.q_start),
        "q_end": num(args.q_end),
        "completed": path.completed,
        "diagnostic": path.diagnostic,
        "path": [_zero(r) for r in path],
    }
    return payload, (EXIT_OK if path.completed else EXIT_INCONCLUSIVE)


def cmd_ek_bound(args):
    return {"q": num(args.q), "n": args.n, "bound": num(zerofinder.enestrom_kakeya_bound(args.q, args.n))}


def cmd_sqrt_disk(args):
    return {"q": num(args.q), "bound": num(zerofinder.sqrt_disk_bound(args.q))}


def cmd_tail_budget(args):
    tb = zerofinder.tail_budget(args.q, args.x_mod, args.n)
    return {"q": num(args.q), "x_modulus": num(args.x_mod), "n": args.n,
            "t0_bound": num(tb.t0_bound), "first_omitted": num(tb.first_omitted), "ratio": num(tb.ratio)}


def cmd_triple_product(args):
    x = _x(args)
    mode = _precision(args)
    prod = jacobi.triple_product(args.q, x, args.tol, mode)
    star = jacobi.eval_theta_star(args.q, x, mode)
    return {
        "q": num(args.q),
        "x": num(x),
        "product": num(prod.value),
        "factors_used": prod.factors_used,
        "tail_bound": num(prod.tail_bound),
        "theta_star": num(star.value),
        "residual": num(jacobi.identity_residual(args.q, x)),
    }


def cmd_unity(args):
    num_poly = roots_of_unity.build_numerator(args.n, args.k)
    out = {
        "n": args.n,
        "k": args.k,
        "period": num_poly.period,
        "self_reciprocal_defect": num(roots_of_unity.check_self_reciprocal(num_poly)),
        "interior_root": num(roots_of_unity.interior_root(num_poly)),
    }
    if args.n % 2 == 0:
        block = roots_of_unity.antiperiodic_block(args.n, args.k)
        out["block_coefficients"] = [num(c) for c in block.coeffs]
        out["block_interior_root"] = num(roots_of_unity.interior_root(block))
    if args.rho is not None:
        rec = roots_of_unity.rouche_neighborhood_zero(args.n, args.k, args.rho)
        out["rho"] = num(args.rho)
        out["nearby_zero"] = num(rec.location)
        out["nearby_residual"] = num(rec.residual)
    return out


def cmd_classify_image(args):
    return geometry.classify_image(args.q, _precision(args), args.resolution).to_dict()


def cmd_sample_image(args):
    q = args.q
    if q in (1.0, -1.0):
        q = int(q)
    s = geometry.sample_circle_image(q, args.resolution, _precision(args))
    if args.format == "csv":
        return geometry.sample_to_csv(s)
    if args.format == "svg":
        return geometry.sample_to_svg(s)
    return {
        "q": num(args.q),
        "samples": len(s),
        "clipped": [[num(a), num(b)] for a, b in s.clipped],
        "phi": [num(p) for p in s.phis],
        "points": [num(p) for p in s.points],
    }


def cmd_nesting(args):
    try:
        nested = geometry.nesting_check(args.q_inner, args.q_outer, args.resolution, _precision(args))
    except geometry.InconclusiveError as exc:
        return {"q_inner": num(args.q_inner), "q_outer": num(args.q_outer), "nested": None,
                "diagnostic": str(exc)}, EXIT_INCONCLUSIVE
    return {"q_inner": num(args.q_inner), "q_outer": num(args.q_outer), "nested": nested, "diagnostic": ""}


def _indicator(v):
    return v if isinstance(v, (bool, int)) else num(v)


def cmd_threshold(args):
    try:
        r = geometry.threshold_search(args.feature, args.q_lo, args.q_hi, args.tol, args.resolution)
    except geometry.BracketError as exc:
        raise UsageError(str(exc)) from None
    return {
        "feature": r.feature,
        "q": num(r.q),
        "q_lo": num(r.q_lo),
        "q_hi": num(r.q_hi),
        "indicator_lo": _indicator(r.indicator_lo),
        "indicator_hi": _indicator(r.indicator_hi),
        "evaluations": r.evaluations,
        "cusp_indicator": num(r.cusp_indicator),
    }


def cmd_hyperbola(args):
    res = geometry.hyperbola_residual(args.resolution)
    return {"resolution": args.resolution, "max_residual": num(res)}


def _sweep_point(q: float) -> dict:
    try:
        cert = zerofinder.certify_unit_disk(q)
    except ArithmeticError as exc:
        return {"q": q, "winding": None, "status": "inconclusive", "min_modulus_lb": None,
                "diagnostic": str(exc)}
    return {"q": q, "winding": cert.winding, "status": cert.status.value,
            "min_modulus_lb": num(cert.min_modulus_lb), "diagnostic": cert.diagnostic}


def sweep_grid(q_min: float, q_max: float, steps: int) -> list[float]:
    grid = np.linspace(q_min, q_max, steps) if steps > 1 else np.array([q_min])
    # rounding removes linspace noise such as -1e-16 in place of 0
    qs = [round(float(q), 12) for q in grid]
    return [q for q in qs if q != 0 and -1 < q < 1]


def cmd_sweep(args):
    if args.q_steps < 1:
        raise UsageError("--q-steps must be >= 1")
    if not (-1 < args.q_min < 1 and -1 < args.q_max < 1):
        raise UsageError("the q grid must lie inside (-1, 1)")
    grid = sweep_grid(args.q_min, args.q_max, args.q_steps)
    if args.workers == 1:
        rows = [_sweep_point(q) for q in grid]
    else:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_point, grid))
    text = "".join(dumps(r) + "\n" for r in rows)
    ok = all(r["status"] == "certified" and r["winding"] == 0 for r in rows)
    return text, (EXIT_OK if ok else EXIT_CONTRACT)


# --------------------------------------------------------------------------
# parser


def _add_q(p, name="--q", required=True, **kw):
    p.add_argument(name, type=float, required=required, **kw)


def _add_x(p):
    p.add_argument("--x-re", type=float, required=True)
    p.add_argument("--x-im", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="theta-scope", description="Partial theta function toolkit.")
    parser.add_argument("--out", help="write output to this file instead of standard output")
    parser.add_argument("--precision", choices=[m.value for m in PrecisionMode],
                        help=f"arithmetic precision (default: ${PRECISION_ENV} or standard)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    cmds: dict[str, Callable] = {}

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--out", default=argparse.SUPPRESS)
        p.add_argument("--precision", choices=[m.value for m in PrecisionMode], default=argparse.SUPPRESS)
        p.set_defaults(func=fn)
        cmds[name] = fn
        return p

    p = add("eval", cmd_eval, "theta(q, x) with its tail bound")
    _add_q(p); _add_x(p)
    p = add("deriv", cmd_deriv, "a derivative of theta")
    _add_q(p); _add_x(p)
    p.add_argument("--kind", choices=sorted(_DERIVS), default="dx")
    p = add("truncate", cmd_truncate, "roots (and optionally a value) of the degree-n truncation")
    _add_q(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x-re", type=float)
    p.add_argument("--x-im", type=float)
    p = add("certify-disk", cmd_certify_disk, "count zeros in a disk by the argument principle")
    _add_q(p)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--center-re", type=float, default=0.0)
    p.add_argument("--center-im", type=float, default=0.0)
    p = add("zeros", cmd_zeros, "zeros of theta seeded by truncation roots")
    _add_q(p)
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--inside", type=float, default=math.inf)
    p = add("track", cmd_track, "follow a zero as q varies")
    _add_q(p, "--q-start"); _add_q(p, "--q-end")
    p.add_argument("--seed-re", type=float, required=True)
    p.add_argument("--seed-im", type=float, default=0.0)
    p.add_argument("--steps", type=int, default=20)
    p = add("ek-bound", cmd_ek_bound, "Enestrom-Kakeya root modulus bound")
    _add_q(p)
    p.add_argument("--n", type=int, required=True)
    p = add("sqrt-disk", cmd_sqrt_disk, "zero-free margin on |x| = 1/sqrt(q)")
    _add_q(p)
    p = add("tail-budget", cmd_tail_budget, "size of the omitted tail of a truncation")
    _add_q(p)
    p.add_argument("--x-mod", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p = add("triple-product", cmd_triple_product, "bilateral theta and its product form")
    _add_q(p); _add_x(p)
    p.add_argument("--tol", type=float, default=1e-15)
    p = add("unity", cmd_unity, "numerator polynomials at a primitive root of unity")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--rho", type=float)
    p = add("classify-image", cmd_classify_image, "shape of the image of the unit circle")
    _add_q(p)
    p.add_argument("--resolution", type=int, default=1024)
    p = add("sample-image", cmd_sample_image, "sampled image of the unit circle")
    _add_q(p)
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    p = add("nesting", cmd_nesting, "is one image enclosed by another")
    _add_q(p, "--q-inner"); _add_q(p, "--q-outer")
    p.add_argument("--resolution", type=int, default=1024)
    p = add("threshold", cmd_threshold, "bisect for a change in curve shape")
    p.add_argument("--feature", choices=sorted(geometry.FEATURES), required=True)
    _add_q(p, "--q-lo"); _add_q(p, "--q-hi")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--resolution", type=int, default=512)
    p = add("hyperbola", cmd_hyperbola, "q = -1 image against its hyperbola")
    p.add_argument("--resolution", type=int, default=4096)
    p = add("sweep", cmd_sweep, "certify the unit disk over a grid of q")
    p.add_argument("--q-min", type=float, required=True)
    p.add_argument("--q-max", type=float, required=True)
    p.add_argument("--q-steps", type=int, required=True)
    p.add_argument("--workers", type=int, default=None)
    parser.commands = cmds
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        result = args.func(args)
    except UsageError as exc:
        print(f"theta-scope: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"theta-scope: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ArithmeticError, geometry.InconclusiveError) as exc:
        print(f"theta-scope: inconclusive: {exc}", file=stderr)
        return EXIT_INCONCLUSIVE
    code = EXIT_OK
    if isinstance(result, tuple):
        result, code = result
    text = result if isinstance(result, str) else dumps(result) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if code == EXIT_CONTRACT:
        print("theta-scope: certification contract failed", file=stderr)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
