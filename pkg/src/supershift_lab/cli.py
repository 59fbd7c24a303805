"""Command-line front end.

Exit codes: 0 success with every verdict passing, 1 a verdict failed (reports
are still written), 2 usage error, 3 numeric error.  Diagnostics go to stderr
as one line ``ERROR <code> <message>``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

from . import TOOL_NAME, __version__
from .errors import LabError
from .numkernel import FunctionSpec, PrecisionPolicy

ENV_PRECISION = "SUPERSHIFT_LAB_PRECISION"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Output:
    result: Dict[str, Any]
    verdict: str
    bits_used: int
    thresholds: Dict[str, Any]
    csv_header: List[str]
    csv_rows: List[List[Any]] = field(default_factory=list)


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def _arg(parse: Callable, text: str):
    """Run a text parser; malformed input is a usage error, not a numeric one."""
    try:
        return parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _eps_list(text: str):
    """Comma-separated perturbation specs; ``list:`` entries keep their own commas."""
    from .sampling import FAMILIES, EpsilonSpec

    specs: List[str] = []
    for tok in text.split(","):
        tok = tok.strip()
        head = tok.partition(":")[0]
        if head in FAMILIES or not specs:
            specs.append(tok)
        else:
            specs[-1] += "," + tok
    return [_arg(EpsilonSpec.parse, s) for s in specs]


def _coeffs(text: str) -> List[Fraction]:
    try:
        return [Fraction(v.strip()) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad coefficient list {text!r}") from None


def _pair(text: str) -> tuple:
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad interval {text!r}; expected lo,hi") from None
    return lo, hi


def _load_psi(args) -> FunctionSpec:
    from .supershift import catalog

    if getattr(args, "catalog", None):
        cat = catalog()
        if args.catalog not in cat:
            raise UsageError(f"unknown catalog entry {args.catalog!r}; choose from {sorted(cat)}")
        return cat[args.catalog]
    text = args.psi
    if text is None:
        raise UsageError("one of --psi or --catalog is required")
    if not text.lstrip().startswith("{"):
        try:
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.psi}: {exc.strerror}") from None
    try:
        return FunctionSpec.from_json(text)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"bad function spec: {exc}") from None


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_superosc(args, policy: PrecisionPolicy) -> Output:
    from .reports import parse_grid2d, parse_ints, parse_range
    from .superosc import eval_closed, eval_sum, result_bits, sum_bits, superosc_convergence

    a = float(args.a)
    xs, ladder, fams = _arg(parse_range, args.x), _arg(parse_ints, args.n), _eps_list(args.eps)
    reports = [superosc_convergence(a, xs, ladder, f, policy) for f in fams]
    rows = [[f.label, N, "convergence", r.sup_errors[i], r.bits_used]
            for f, r in zip(fams, reports) for i, N in enumerate(ladder)]
    ok = all(r.passed for r in reports)
    result: Dict[str, Any] = {"reports": [r.to_dict() for r in reports],
                              "verdict_invariant": len({r.verdict for r in reports}) == 1}
    bits_used = max(r.bits_used for r in reports)
    if args.dual_z:
        worst_ok, table = True, []
        for f in fams:
            for N in ladder:
                e = f.at(N)
                for z in _arg(parse_grid2d, args.dual_z):
                    s, c = eval_sum(N, e, a, z, policy), eval_closed(N, e, a, z, policy)
                    bits = sum_bits(N, e, a, z, policy)
                    eff = result_bits(N, e, a, z, policy)
                    rel = float(abs(s - c) / max(abs(c), 2.0**-1074))
                    good = rel <= 2.0 ** (8 - eff)
                    worst_ok &= good
                    bits_used = max(bits_used, bits)
                    table.append({"eps": f.label, "N": N, "z": [z.real, z.imag],
                                  "rel_diff": rel, "bits": bits, "ok": good})
                    rows.append([f.label, N, f"dual z={z.real!r}{z.imag:+}j", rel, bits])
        result["dual_form"] = table
        ok &= worst_ok
    return Output(result, "pass" if ok else "fail", bits_used, reports[0].thresholds,
                  ["eps", "N", "check", "value", "bits"], rows)


def cmd_bernstein(args, policy: PrecisionPolicy) -> Output:
    from .bernstein import BernsteinParams, bernstein_eval, newton_bits, newton_residual, newton_tolerance
    from .numkernel import mp_hex
    from .reports import parse_grid2d, parse_ints
    from .sampling import EpsilonSpec

    psi = _load_psi(args)
    eps = _arg(EpsilonSpec.parse, args.eps)
    rows, table, ok, bits_used = [], [], True, 0
    for N in _arg(parse_ints, args.n):
        p = BernsteinParams(N, eps.at(N), args.bprime)
        for b in _arg(parse_grid2d, args.b):
            val = bernstein_eval(psi, p, b, policy)
            res = newton_residual(psi, p, b, policy)
            nb = newton_bits(N, b, policy)
            tol = newton_tolerance(N, b, policy)
            ok &= res <= tol
            bits_used = max(bits_used, nb)
            rh, ih = mp_hex(val.real), mp_hex(val.imag)
            table.append({"N": N, "b": [b.real, b.imag], "value": [float(val.real), float(val.imag)],
                          "value_hex": [rh, ih], "newton_residual": res, "tolerance": tol})
            rows.append([N, b.real, b.imag, float(val.real), float(val.imag), rh, ih, res, tol])
    return Output({"psi": psi.to_dict(), "eps": eps.label, "b_prime": args.bprime, "values": table},
                  "pass" if ok else "fail", bits_used,
                  {"newton_relative_residual": "<= 2**(16 - effective bits)"},
                  ["N", "b_re", "b_im", "re", "im", "re_hex", "im_hex", "newton_residual",
                   "tolerance"], rows)


def cmd_regions(args, policy: PrecisionPolicy) -> Output:
    from .errors import AmbiguousError
    from .regions import AnalyticityDomain, classify, lemniscate_value, q_constant, wA_contains
    from .reports import parse_grid2d

    zs = _arg(parse_grid2d, args.z)
    if args.kind == "lemniscate":
        cs = _arg(lambda t: [float(v) for v in t.split(",")], args.c)
        rows, table = [], []
        for c in cs:
            for z in zs:
                try:
                    where = classify(c, z, args.resolution).value
                except AmbiguousError:
                    where = "Ambiguous"
                phi = lemniscate_value(c, z)
                table.append({"c": c, "z": [z.real, z.imag], "phi": phi, "loop": where})
                rows.append([c, z.real, z.imag, phi, where])
        result: Dict[str, Any] = {"points": table}
        if args.q_loop:
            from .regions import Loop

            loop = Loop.LEFT if args.q_loop == "left" else Loop.RIGHT
            result["q"] = q_constant(cs, zs, loop, args.resolution)
        return Output(result, "n/a", 53, {"boundary_tolerance": 2.0**-20},
                      ["c", "re", "im", "phi", "loop"], rows)
    dom = AnalyticityDomain(*_pair(args.interval))
    rows = [[z.real, z.imag, wA_contains(dom, z, args.resolution)] for z in zs]
    result = {"interval": [dom.lo, dom.hi], "outer_bound": dom.outer_bound(),
              "points": [{"z": [r[0], r[1]], "inside": r[2]} for r in rows]}
    return Output(result, "n/a", 53, {}, ["re", "im", "inside"], rows)


def cmd_kantorovich(args, policy: PrecisionPolicy) -> Output:
    from .kantorovich import make_target, two_limit_experiment
    from .reports import parse_complex, parse_ints

    target = make_target(_coeffs(args.gminus), _coeffs(args.gplus))
    ladder = _arg(parse_ints, args.n)
    zm, zp = _arg(parse_complex, args.zminus), _arg(parse_complex, args.zplus)
    reps = [two_limit_experiment(target, zm, zp, args.bprime, ladder, f, policy, args.eta, args.jobs)
            for f in _eps_list(args.eps)]
    rows = []
    for r in reps:
        for side, vals, hexes, rep, wrong in (
                ("minus", r.values_minus, r.hex_minus, r.left, r.wrong_limit_minus),
                ("plus", r.values_plus, r.hex_plus, r.right, r.wrong_limit_plus)):
            for i, N in enumerate(ladder):
                rows.append([r.eps, side, N, vals[i].real, vals[i].imag, hexes[i][0], hexes[i][1],
                             rep.sup_errors[i], wrong[i]])
    ok = all(r.passed for r in reps)
    return Output({"target": target.to_dict(), "experiments": [r.to_dict() for r in reps]},
                  "pass" if ok else "fail",
                  max(max(r.left.bits_used, r.right.bits_used) for r in reps),
                  reps[0].left.thresholds,
                  ["eps", "side", "N", "re", "im", "re_hex", "im_hex", "err_to_limit",
                   "err_to_other_limit"], rows)


def cmd_supershift(args, policy: PrecisionPolicy) -> Output:
    from . import supershift as ss

    psi = _load_psi(args)
    if args.action == "convolve":
        out = ss.convolve(psi, args.support, args.nodes)
    elif args.action == "primitive":
        out = ss.primitive(psi, args.a0)
    elif args.action == "multiply":
        out = ss.multiply_by_identity(psi)
    else:
        return _supershift_check(args, psi, policy)
    return Output({"spec": out.to_dict()}, "n/a", 53, {}, [], [])


def _supershift_check(args, psi: FunctionSpec, policy: PrecisionPolicy) -> Output:
    from . import supershift as ss
    from .reports import parse_ints

    dom = ss.DomainA(*_pair(args.interval))
    grid = dom.grid(args.grid_step)
    rep = ss.tcsp_check(psi, dom, grid, _arg(parse_ints, args.n), _eps_list(args.eps), policy, args.jobs)
    result = rep.to_dict()
    if args.probe_fit or args.probe_test:
        if not (args.probe_fit and args.probe_test):
            raise UsageError("--probe-fit and --probe-test go together")
        probe = ss.analyticity_probe(psi, _pair(args.probe_fit), _pair(args.probe_test))
        result["analyticity_probe"] = {**probe.__dict__, "ratio": probe.ratio,
                                       "non_analytic": probe.non_analytic}
    rows = [[N, lab, rep.per_family[lab][i]] for i, N in enumerate(rep.N_ladder)
            for lab in rep.families]
    rows += [[N, "max", rep.family_max[i]] for i, N in enumerate(rep.N_ladder)]
    return Output(result, rep.verdict, rep.bits_used, rep.thresholds, ["N", "eps", "sup_error"], rows)


def cmd_evolve(args, policy: PrecisionPolicy) -> Output:
    from .evolve import evolution_samples
    from .reports import ConvergenceReport, describe_range, parse_ints, parse_range

    ts, xs, ladder = _arg(parse_range, args.t), _arg(parse_range, args.x), _arg(parse_ints, args.n)
    samples = evolution_samples(args.potential, args.a, ts, xs, ladder, policy, args.jobs)
    per = len(ts) * len(xs)
    errors = [max(s.abs_err for s in samples[i * per:(i + 1) * per]) for i in range(len(ladder))]
    from .evolve import EvolutionPoint, _bits

    bits = max(_bits(EvolutionPoint(0.0, 0.0, args.a, N), policy) for N in ladder)
    rep = ConvergenceReport(ladder, errors, {"t": describe_range(ts), "x": describe_range(xs),
                                             "a": args.a, "potential": args.potential}, bits,
                            label=f"{args.potential} evolution")
    rows = [[s.potential, s.N, s.t, s.x, s.value.real, s.value.imag, s.abs_err,
             s.value_hex[0], s.value_hex[1]] for s in samples]
    result = {"report": rep.to_dict(),
              "samples": [{"N": s.N, "t": s.t, "x": s.x, "value": [s.value.real, s.value.imag],
                           "value_hex": list(s.value_hex), "abs_err": s.abs_err} for s in samples]}
    return Output(result, rep.verdict, bits, rep.thresholds,
                  ["potential", "N", "t", "x", "re", "im", "abs_err_vs_limit", "re_hex", "im_hex"],
                  rows)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--precision", default="auto",
                   help=f"'auto' or a fixed bit count (overridden by ${ENV_PRECISION})")
    g.add_argument("--jobs", type=int, default=1, help="worker processes, 0 = one per CPU")
    g.add_argument("--out", help="output path (stdout when omitted)")
    g.add_argument("--format", choices=("csv", "json", "both"),
                   help="default: from the --out suffix, else json")

    p = _Parser(prog=TOOL_NAME, description="Superoscillation and supershift experiments.")
    p.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("superosc", parents=[common], help="T_N convergence and dual-form check")
    s.add_argument("--a", required=True, type=float)
    s.add_argument("--x", required=True, help="start:end:step")
    s.add_argument("--n", required=True, help="comma-separated ladder")
    s.add_argument("--eps", default="zero")
    s.add_argument("--dual-z", help="complex grid re_range x im_range for the sum/closed-form check")
    s.set_defaults(handler=cmd_superosc)

    s = sub.add_parser("bernstein", parents=[common], help="perturbed Bernstein sums and Newton form")
    _psi_args(s)
    s.add_argument("--n", required=True)
    s.add_argument("--b", required=True, help="complex grid re_range x im_range")
    s.add_argument("--bprime", type=float, default=0.0)
    s.add_argument("--eps", default="zero")
    s.set_defaults(handler=cmd_bernstein)

    s = sub.add_parser("regions", parents=[common], help="lemniscate loops and W_A membership")
    s.add_argument("kind", choices=("lemniscate", "wa"))
    s.add_argument("--z", required=True, help="complex grid re_range x im_range")
    s.add_argument("--c", default="0.5", help="comma-separated lemniscate parameters")
    s.add_argument("--interval", default="-2,2")
    s.add_argument("--resolution", type=int, default=64)
    s.add_argument("--q-loop", choices=("left", "right"),
                   help="also compute max Phi_c over the grid, requiring this loop")
    s.set_defaults(handler=cmd_regions)

    s = sub.add_parser("kantorovich", parents=[common], help="two-limit experiment")
    s.add_argument("--gminus", required=True, help="coefficients, ascending powers")
    s.add_argument("--gplus", required=True)
    s.add_argument("--zminus", default="0.1,0")
    s.add_argument("--zplus", default="0.9,0")
    s.add_argument("--bprime", type=float, default=0.0)
    s.add_argument("--eta", type=float, default=0.05)
    s.add_argument("--n", default="50,100,200,400")
    s.add_argument("--eps", default="zero")
    s.set_defaults(handler=cmd_kantorovich)

    s = sub.add_parser("supershift", parents=[common], help="TCSP check and preserving operations")
    s.add_argument("action", choices=("check", "convolve", "primitive", "multiply"))
    _psi_args(s)
    s.add_argument("--interval", default="-2.5,2.5")
    s.add_argument("--grid-step", type=float, default=0.25)
    s.add_argument("--n", default="25,50,100,200")
    s.add_argument("--eps", default="zero,c_over_N:1")
    s.add_argument("--support", type=float, default=0.25)
    s.add_argument("--nodes", type=int, default=64)
    s.add_argument("--a0", type=float, default=0.0)
    s.add_argument("--probe-fit", help="lo,hi of the one-sided fit (check only)")
    s.add_argument("--probe-test", help="lo,hi where the fit is tested (check only)")
    s.set_defaults(handler=cmd_supershift)

    s = sub.add_parser("evolve", parents=[common], help="free and harmonic evolutions")
    s.add_argument("--potential", choices=("free", "harmonic"), required=True)
    s.add_argument("--a", type=float, required=True)
    s.add_argument("--t", required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--n", required=True)
    s.set_defaults(handler=cmd_evolve)
    return p


def _psi_args(s):
    s.add_argument("--psi", help="function spec: JSON file or inline JSON")
    s.add_argument("--catalog", help="built-in target name instead of --psi")


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _config(args, policy: PrecisionPolicy) -> Dict[str, Any]:
    # the worker count is left out: outputs must not depend on it
    skip = {"handler", "jobs", "out", "format"}
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    cfg["precision"] = policy.to_dict()
    return cfg


def _formats(args) -> List[str]:
    if args.format == "both":
        return ["json", "csv"]
    if args.format:
        return [args.format]
    if args.out and args.out.lower().endswith(".csv"):
        return ["csv"]
    return ["json"]


def render_json(out: Output, cfg: Dict[str, Any]) -> str:
    doc = {"tool": TOOL_NAME, "version": __version__, "command": cfg.get("command"),
           "precision": cfg.get("precision"), "config": cfg, "bits_used": out.bits_used,
           "thresholds": out.thresholds, "verdict": out.verdict, "result": out.result}
    return json.dumps(_clean(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _clean(v):
    """JSON-safe copy: non-finite floats become strings, tuples become lists."""
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, complex):
        return [_clean(v.real), _clean(v.imag)]
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return v


def render_csv(out: Output) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(out.csv_header)
    for row in out.csv_rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _paths(path: str, formats: Sequence[str]) -> Dict[str, str]:
    if len(formats) == 1:
        return {formats[0]: path}
    base, ext = os.path.splitext(path)
    if ext.lower() not in (".json", ".csv"):
        base = path
    return {f: f"{base}.{f}" for f in formats}


def _check_writable(path: str):
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
        raise UsageError(f"output directory {parent} is not writable")


def emit(out: Output, args, cfg) -> None:
    formats = _formats(args)
    if out.csv_header == [] and "csv" in formats:
        if args.format in ("csv", "both"):
            raise UsageError("this command only writes a JSON function spec")
        formats = ["json"]
    texts = {f: (render_json(out, cfg) if f == "json" else render_csv(out)) for f in formats}
    if args.command == "supershift" and args.action != "check":
        texts["json"] = json.dumps(out.result["spec"], sort_keys=True, indent=2) + "\n"
    if not args.out:
        for f in formats:
            sys.stdout.write(texts[f])
        return
    for f, path in _paths(args.out, formats).items():
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(texts[f])
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _policy(args) -> PrecisionPolicy:
    text = os.environ.get(ENV_PRECISION) or args.precision
    try:
        return PrecisionPolicy.parse(text)
    except LabError as exc:
        raise UsageError(str(exc)) from None


_NEGATIVE = re.compile(r"^-[\d.]")


def _attach_negatives(argv: Sequence[str]) -> List[str]:
    """Bind values such as ``-1:1:0.5`` to the preceding option."""
    out: List[str] = []
    for tok in argv:
        prev = out[-1] if out else ""
        if _NEGATIVE.match(tok) and prev.startswith("--") and "=" not in prev:
            out[-1] = f"{prev}={tok}"
        else:
            out.append(tok)
    return out


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_negatives(argv))
    if args.jobs < 0:
        raise UsageError("--jobs must be >= 0")
    if args.out:
        _check_writable(args.out)
    policy = _policy(args)
    handler: Callable = args.handler
    out = handler(args, policy)
    emit(out, args, _config(args, policy))
    return 1 if out.verdict == "fail" else 0


def _report(code: str, exc: BaseException) -> None:
    msg = " ".join(str(exc).split()) or type(exc).__name__
    sys.stderr.write(f"ERROR {code} {msg}\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        return run(argv)
    except UsageError as exc:
        _report("USAGE", exc)
        return 2
    except LabError as exc:
        _report(exc.code, exc)
        return 3
    except (ArithmeticError, OverflowError) as exc:
        _report("NUMERIC", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
