"""Command-line front end: ``bspole analyze | roots | integral | residue``.

Exit codes: 0 success, 1 numerical failure, 2 rejected input, 3 some verdict
is Indeterminate.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import __version__
from .bsroots import CandidateRoot, eigenvalue_report, full_bs_roots, milnor_number, representations, window_roots
from .polecriterion import PoleVerdict, Status, classify_roots, symmetry_class, symmetry_rule, thread_count
from .polyring import Poly, PolyError, PolySyntaxError, Weights, check_weights, infer_weights, parse_poly, validate_isolated_singularity
from .quadrature import IntegralResult, QuadratureFailure, Tolerances, singular_integral
from .zetaoracle import BumpSpec2D, FitUnstable, residue_closed_form, residue_numeric_fit

EXIT_OK, EXIT_NUMERIC, EXIT_INPUT, EXIT_INDETERMINATE = 0, 1, 2, 3


class InputRejected(Exception):
    """User-facing input error; maps to exit code 2."""


# ---------------------------------------------------------------------------
# serialization


def emit_json(obj: Any) -> str:
    """JSON with floats at 17 significant digits and stable key order as given."""
    out = io.StringIO()
    _emit(obj, out, 0)
    out.write("\n")
    return out.getvalue()


def _emit(obj: Any, out: io.StringIO, depth: int) -> None:
    pad = "  " * (depth + 1)
    if isinstance(obj, dict):
        if not obj:
            out.write("{}")
            return
        out.write("{\n")
        for n, (k, v) in enumerate(obj.items()):
            out.write(f"{pad}{json.dumps(str(k))}: ")
            _emit(v, out, depth + 1)
            out.write(",\n" if n < len(obj) - 1 else "\n")
        out.write("  " * depth + "}")
    elif isinstance(obj, list):
        if not obj:
            out.write("[]")
            return
        out.write("[\n")
        for n, v in enumerate(obj):
            out.write(pad)
            _emit(v, out, depth + 1)
            out.write(",\n" if n < len(obj) - 1 else "\n")
        out.write("  " * depth + "]")
    elif isinstance(obj, bool) or obj is None:
        out.write(json.dumps(obj))
    elif isinstance(obj, int):
        out.write(str(obj))
    elif isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"cannot serialize non-finite float {obj}")
        text = format(obj, ".17g")
        if not any(c in text for c in ".en"):
            text += ".0"
        out.write(text)
    elif isinstance(obj, Fraction):
        out.write(json.dumps(_rat(obj)))
    elif isinstance(obj, str):
        out.write(json.dumps(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def parse_json(text: str) -> Any:
    return json.loads(text)


def _rat(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _integral_dict(r: IntegralResult) -> dict:
    return {
        "value": float(r.value),
        "abs_error_estimate": float(r.abs_error_estimate),
        "l1_mass": float(r.l1_mass),
        # the estimate compares each segment rule with its half-node rule; not a bound
        "error_model": "empirical",
        "segments": [
            {"lo": s.lo if math.isfinite(s.lo) else ("-inf" if s.lo < 0 else "inf"),
             "hi": s.hi if math.isfinite(s.hi) else ("-inf" if s.hi < 0 else "inf"),
             "method": s.method, "nodes": int(s.nodes)}
            for s in r.segments
        ],
    }


def _verdict_dict(v: PoleVerdict) -> dict:
    ev = []
    for e in v.evidence:
        item: dict = {"j": e.j, "k": e.k, "kind": e.kind, "outcome": e.outcome}
        if e.rule is not None:
            item["rule"] = e.rule
        if e.integral is not None:
            item["integral"] = _integral_dict(e.integral)
            item["zero_threshold"] = float(e.threshold)
        if e.message is not None:
            item["message"] = e.message
        ev.append(item)
    return {"s0": _rat(v.root.s0), "d": v.root.d, "status": v.status.value, "evidence": ev}


def _tol_dict(cfg: Tolerances) -> dict:
    return {
        "rel_err": float(cfg.rel_err),
        "zero_abs": float(cfg.zero_abs),
        "zero_rel": float(cfg.zero_rel),
        "root_width": _rat(cfg.root_width),
    }


def _header(f: Poly, w: Weights, cfg: Tolerances | None = None) -> dict:
    head = {
        "tool": {"name": "bspole", "version": __version__},
        "input": {"polynomial": str(f), "weights": [w.a, w.b, w.m]},
    }
    if cfg is not None:
        head["tolerances"] = _tol_dict(cfg)
    return head


# ---------------------------------------------------------------------------
# input handling


def _load(args) -> tuple[Poly, Weights]:
    try:
        f = parse_poly(args.poly)
        if args.weights:
            w = Weights.parse(args.weights)
            check_weights(f, w)
        elif len(f.support()) == 1:
            # isolation does not depend on the grading, and for x*y, the one
            # isolated monomial, every type (a,b;a+b) gives the same roots
            (p, q), = f.support()
            w = Weights.normalized(1, 1, p + q)
        else:
            w = infer_weights(f)
        validate_isolated_singularity(f, w)
    except PolySyntaxError as exc:
        raise InputRejected(f"PolySyntaxError: {exc}") from exc
    except (PolyError, ValueError) as exc:
        raise InputRejected(f"{type(exc).__name__}: {exc}") from exc
    return f, w


def _tolerances(args) -> Tolerances:
    try:
        return Tolerances(rel_err=args.tol_rel, zero_abs=args.zero_abs, zero_rel=args.zero_rel)
    except ValueError as exc:
        raise InputRejected(str(exc)) from exc


def _root_for(w: Weights, d: int) -> CandidateRoot:
    if not w.a + w.b <= d < w.m:
        raise InputRejected(f"d = {d} is outside the window [{w.a + w.b}, {w.m}) for weights {w}")
    reps = representations(w, d)
    if not reps:
        raise InputRejected(f"d = {d} is not a sum of positive multiples of {w.a} and {w.b}")
    return CandidateRoot(d, w.m, reps)


# ---------------------------------------------------------------------------
# families


def _family_members(name: str, spec: str) -> list[tuple[tuple[int, int], str, Weights]]:
    """``((p1, p2), polynomial, natural weights)`` for each member of a family sweep.

    Natural weights are the unnormalized type; window numerators are reported
    against them so parity statements stay in one convention.
    """
    families: dict[str, Callable[[int, int], tuple[str, tuple[int, int, int]]]] = {
        "xn+ym": lambda n, m: (f"x^{n}+y^{m}", (m, n, n * m)),
        "xm+xyn": lambda m, n: (f"x^{m}+x*y^{n}", (n, m - 1, m * n)),
        "xny+xym": lambda n, m: (f"x^{n}*y+x*y^{m}", (m - 1, n - 1, n * m - 1)),
    }
    if name not in families:
        raise InputRejected(f"unknown family {name!r}; choose from {sorted(families)}")
    ranges = [_parse_range(part) for part in spec.split(",")]
    if len(ranges) == 1:
        ranges = ranges * 2
    if len(ranges) != 2:
        raise InputRejected(f"range {spec!r} must be 'lo..hi' or 'lo..hi,lo..hi'")
    out = []
    for p1 in ranges[0]:
        for p2 in ranges[1]:
            text, natural = families[name](p1, p2)
            out.append(((p1, p2), text, natural))
    return out


def _parse_range(part: str) -> range:
    try:
        lo, hi = (int(x) for x in part.split(".."))
    except ValueError:
        raise InputRejected(f"bad range {part!r}; expected 'lo..hi'") from None
    if lo > hi:
        raise InputRejected(f"empty range {part!r}")
    return range(lo, hi + 1)


def family_rows(name: str, spec: str, cfg: Tolerances, threads: int) -> list[dict]:
    """One row per (member, window root), in parameter order."""
    members = _family_members(name, spec)

    def run(member):
        (p1, p2), text, natural = member
        f = parse_poly(text)
        base = {"family": name, "p1": p1, "p2": p2, "polynomial": str(f)}
        try:
            w = infer_weights(f)
            validate_isolated_singularity(f, w)
        except PolyError as exc:
            return [dict(base, weights="", d=None, natural_d=None, s0="", status="Rejected", rules=type(exc).__name__)]
        verdicts = classify_roots(f, w, window_roots(w), cfg, threads=1)
        rows = []
        for v in verdicts:
            nat_d = -v.root.s0 * natural[2]
            rows.append(dict(
                base,
                weights=f"{w.a},{w.b},{w.m}",
                d=v.root.d,
                natural_d=int(nat_d) if nat_d.denominator == 1 else _rat(nat_d),
                s0=_rat(v.root.s0),
                status=v.status.value,
                rules=";".join(f"({e.j},{e.k}):{e.rule or e.outcome}" for e in v.evidence),
            ))
        return rows

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        chunks = list(pool.map(run, members))
    return [row for chunk in chunks for row in chunk]


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> tuple[dict | list, int]:
    cfg = _tolerances(args)
    threads = thread_count()
    if args.family:
        rows = family_rows(args.family, args.range or "2..6", cfg, threads)
        code = EXIT_INDETERMINATE if any(r["status"] == "Indeterminate" for r in rows) else EXIT_OK
        return rows, code
    if not args.poly:
        raise InputRejected("analyze needs --poly or --family")
    f, w = _load(args)
    sym = symmetry_class(f)
    verdicts = classify_roots(f, w, window_roots(w), cfg, threads=threads)
    report = _header(f, w, cfg)
    report["validation"] = {
        "isolated_singularity": True,
        "milnor_number": milnor_number(f, w),
        "symmetry": sym.flags(),
    }
    report["window_roots"] = [_verdict_dict(v) for v in verdicts]
    report["full_roots"] = [_rat(r) for r in full_bs_roots(f, w)]
    report["eigenvalues"] = [
        {k: (v if not isinstance(v, Fraction) else _rat(v)) for k, v in e.items()}
        for e in eigenvalue_report(f, w, verdicts)
    ]
    code = EXIT_INDETERMINATE if any(v.status is Status.INDETERMINATE for v in verdicts) else EXIT_OK
    return report, code


def cmd_roots(args) -> tuple[dict, int]:
    f, w = _load(args)
    both = not args.window and not args.full
    report = _header(f, w)
    if args.window or both:
        report["window_roots"] = [
            {"s0": _rat(c.s0), "d": c.d, "representations": [[j, k] for j, k in c.representations]}
            for c in window_roots(w)
        ]
    if args.full or both:
        report["full_roots"] = [_rat(r) for r in full_bs_roots(f, w)]
    return report, EXIT_OK


def cmd_integral(args) -> tuple[dict, int]:
    f, w = _load(args)
    cfg = _tolerances(args)
    _require(args, "d", "j", "k")
    c = _root_for(w, args.d)
    if (args.j + 1) * w.a + (args.k + 1) * w.b != args.d:
        raise InputRejected(f"(j+1)*{w.a} + (k+1)*{w.b} = {(args.j + 1) * w.a + (args.k + 1) * w.b} != d = {args.d}")
    res = singular_integral(f, c.s0, args.j, args.k, cfg)
    report = _header(f, w, cfg)
    report["s0"] = _rat(c.s0)
    report["j"], report["k"] = args.j, args.k
    report["integral"] = _integral_dict(res)
    rule = symmetry_rule(symmetry_class(f), args.j, args.k)
    if rule is not None:
        report["note"] = f"{rule} symmetry makes the integrand vanish identically; the exact value is 0"
    return report, EXIT_OK


def cmd_residue(args) -> tuple[dict, int]:
    f, w = _load(args)
    cfg = _tolerances(args)
    _require(args, "d", "i", "j")
    c = _root_for(w, args.d)
    degree = args.bump_degree if args.bump_degree is not None else max(max(r) for r in c.representations)
    if not (0 <= args.i <= degree and 0 <= args.j <= degree):
        raise InputRejected(f"bump indices ({args.i},{args.j}) exceed the bump degree {degree}")
    phi = BumpSpec2D(degree, args.i, args.j)
    closed = residue_closed_form(f, w, args.d, phi, cfg)
    fit = residue_numeric_fit(f, w, args.d, phi)
    scale = max(abs(closed), abs(fit))
    report = _header(f, w, cfg)
    report["s0"] = _rat(c.s0)
    report["bump"] = {"degree": degree, "i": args.i, "j": args.j}
    report["closed_form"] = float(closed)
    report["numeric_fit"] = float(fit)
    report["relative_difference"] = float(abs(closed - fit) / scale) if scale > 0 else 0.0
    return report, EXIT_OK


def _require(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InputRejected("missing " + ", ".join(f"--{n}" for n in missing))


# ---------------------------------------------------------------------------
# output


def render(result: dict | list, fmt: str) -> str:
    if fmt == "json":
        return emit_json(result)
    if fmt == "csv":
        return _csv(result)
    return _text(result)


def _csv(result: dict | list) -> str:
    if isinstance(result, list):
        rows = result
    elif "window_roots" in result and result["window_roots"] and "status" in result["window_roots"][0]:
        poly = result["input"]["polynomial"]
        rows = [
            {
                "polynomial": poly,
                "d": v["d"],
                "s0": v["s0"],
                "status": v["status"],
                "rules": ";".join(f"({e['j']},{e['k']}):{e.get('rule') or e['outcome']}" for e in v["evidence"]),
            }
            for v in result["window_roots"]
        ]
    else:
        rows = [_flatten(result)]
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = json.dumps(v)
        else:
            out[key] = v
    return out


def _text(result: dict | list) -> str:
    lines = []
    if isinstance(result, list):
        for r in result:
            lines.append(f"{r['polynomial']:<16} {str(r['s0']):>8}  {r['status']:<16} {r['rules']}")
        return "\n".join(lines) + "\n"
    if "input" in result:
        w = result["input"]["weights"]
        lines.append(f"f = {result['input']['polynomial']}   type ({w[0]},{w[1]};{w[2]})")
    if "validation" in result:
        val = result["validation"]
        lines.append(f"Milnor number {val['milnor_number']}; symmetry: {', '.join(val['symmetry']) or 'none'}")
    for v in result.get("window_roots", []):
        if "status" in v:
            reps = ", ".join(
                f"({e['j']},{e['k']}) {e['kind']}"
                + (f" {e['rule']}" if "rule" in e else "")
                + (f" {e['integral']['value']:.10g} +- {e['integral']['abs_error_estimate']:.2g}" if "integral" in e else "")
                for e in v["evidence"]
            )
            lines.append(f"  s0 = {v['s0']:>7}  {v['status']:<16} {reps}")
        else:
            lines.append(f"  s0 = {v['s0']:>7}  representations {v['representations']}")
    if "full_roots" in result:
        lines.append("b_f roots: " + ", ".join(result["full_roots"]))
    for e in result.get("eigenvalues", []):
        lines.append(f"  class {e['class']}: case {e['case']}, largest root {e['alpha1']}, status {e['status']}")
    if "integral" in result:
        r = result["integral"]
        lines.append(f"integral at s0 = {result['s0']}, (j,k) = ({result['j']},{result['k']}): "
                     f"{r['value']:.15g} +- {r['abs_error_estimate']:.3g} (L1 mass {r['l1_mass']:.6g})")
        if "note" in result:
            lines.append("note: " + result["note"])
    if "closed_form" in result:
        lines.append(f"residue at s0 = {result['s0']}: closed form {result['closed_form']:.12g}, "
                     f"fit {result['numeric_fit']:.12g}, relative difference {result['relative_difference']:.3g}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bspole", description="Poles of real zeta functions of weighted homogeneous curves.")
    p.add_argument("--version", action="version", version=f"bspole {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, poly_required=True):
        sp.add_argument("--poly", required=poly_required, help='polynomial in x, y, e.g. "x^4+y^3"')
        sp.add_argument("--weights", help="weights a,b,m (needed for single monomials)")
        sp.add_argument("--format", choices=["json", "csv", "text"], default="json")
        sp.add_argument("--tol-rel", type=float, default=Tolerances.rel_err)
        sp.add_argument("--zero-abs", type=float, default=Tolerances.zero_abs)
        sp.add_argument("--zero-rel", type=float, default=Tolerances.zero_rel)

    a = sub.add_parser("analyze", help="classify every root of b_f in (-1, 0)")
    common(a, poly_required=False)
    a.add_argument("--family", help="sweep a family: xn+ym, xm+xyn or xny+xym")
    a.add_argument("--range", help="parameter range, '2..6' or '2..6,2..5'")

    r = sub.add_parser("roots", help="roots of b_f")
    common(r)
    r.add_argument("--window", action="store_true", help="roots in (-1, 0)")
    r.add_argument("--full", action="store_true", help="all roots")

    i = sub.add_parser("integral", help="one criterion integral")
    common(i)
    for name in ("d", "j", "k"):
        i.add_argument(f"--{name}", type=int)

    s = sub.add_parser("residue", help="residue at -d/m, closed form and fit")
    common(s)
    for name in ("d", "i", "j"):
        s.add_argument(f"--{name}", type=int)
    s.add_argument("--bump-degree", type=int, help="degree of the test-function bumps (default: smallest that isolates d)")
    return p


COMMANDS = {"analyze": cmd_analyze, "roots": cmd_roots, "integral": cmd_integral, "residue": cmd_residue}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result, code = COMMANDS[args.command](args)
    except InputRejected as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (QuadratureFailure, FitUnstable) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    sys.stdout.write(render(result, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
