"""Command-line interface: ``eval``, ``verify`` and ``scan``.

Complex values are written ``re`` or ``re+imj`` (for example ``1.2-0.3j``).
Exit codes: 0 success, 1 failed identity checks, 2 evaluation error
(domain, pole, convergence), 64 usage error, 74 I/O error.
"""
import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .errors import DomainError, LiouvilleError
from .numerics import DEFAULT_SETTINGS, QuadSettings, as_finite_complex
from .specialfn import LiouvilleParams, double_sine, log_double_gamma
from .structure_constants import (BulkBoundaryArgs, KernelArgs,
                                  ReflectionArgs, ThreePointArgs,
                                  boundary_3pt, bulk_boundary, fusion_kernel,
                                  g_hos, h_pt, j_hos, j_pt, modular_kernel,
                                  r_fzz)
from .verify import run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_EVAL = 2
EXIT_USAGE = 64
EXIT_IO = 74

POLE_KINDS = {"PoleEncountered", "PoleCollision", "PoleTooClose"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_complex(text):
    """Parse ``re`` or ``re+imj``; ``inf`` and ``-inf`` are accepted."""
    try:
        return complex(text.strip().replace(" ", ""))
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}") from None


def _parse_list(text):
    return [parse_complex(t) for t in text.split(",")]


# ---------------------------------------------------------------------------
# Targets
# ---------------------------------------------------------------------------
# Each target lists its scalar parameters; list-valued flags are spread over
# numbered names (``--beta a,b,c`` gives beta1, beta2, beta3).

def _p(P):
    return LiouvilleParams(P["gamma"].real)


def _triple(P, name):
    return tuple(P[f"{name}{i}"] for i in (1, 2, 3))


def _three_point(P):
    return ThreePointArgs(_triple(P, "beta"), _triple(P, "sigma"))


def _bulk_boundary(P):
    return BulkBoundaryArgs(P["alpha"], P["beta"], P["sigma"])


def _eval_hpt(P, s):
    return h_pt(_three_point(P), _p(P), s, full_output=True)


def _eval_jpt(P, s):
    res = j_pt(_three_point(P), _p(P), s, full_output=True)
    return res.value, res.error


def _eval_ghos(P, s):
    return g_hos(_bulk_boundary(P), _p(P), s, full_output=True)


def _eval_jhos(P, s):
    res = j_hos(_bulk_boundary(P), _p(P), s, full_output=True)
    return res.value, res.error


def _eval_rfzz(P, s):
    a = ReflectionArgs(P["beta"], P["sigma1"], P["sigma2"])
    return r_fzz(a, _p(P), s), None


def _eval_dgamma(P, s):
    return np.exp(log_double_gamma(P["x"], _p(P), s)), None


def _eval_dsine(P, s):
    return double_sine(P["x"], _p(P)), None


def _eval_fusion(P, s):
    k = KernelArgs(tuple(P[f"alpha_prime{i}"] for i in (1, 2, 3, 4)),
                   P["P"], P["P_prime"])
    return fusion_kernel(k, _p(P), s), None


def _eval_modular(P, s):
    k = KernelArgs((P["alpha_prime"],), P["P"], P["P_prime"])
    return modular_kernel(k, _p(P), s), None


def _real_position(v):
    if v.imag != 0:
        raise UsageError("boundary positions must be real")
    return v.real


def _eval_corr3(P, s):
    pos = [_real_position(v) for v in _triple(P, "s")]
    return boundary_3pt(*pos, _three_point(P), _p(P), s), None


def _eval_corrbb(P, s):
    return bulk_boundary(P["z"], _real_position(P["s0"]), P["alpha"],
                         P["beta"], P["sigma"], _p(P), s), None


_TRIPLE_BS = ["beta1", "beta2", "beta3", "sigma1", "sigma2", "sigma3"]

TARGETS = {
    "hpt": (_eval_hpt, _TRIPLE_BS),
    "jpt": (_eval_jpt, _TRIPLE_BS),
    "ghos": (_eval_ghos, ["alpha", "beta", "sigma"]),
    "jhos": (_eval_jhos, ["alpha", "beta", "sigma"]),
    "rfzz": (_eval_rfzz, ["beta", "sigma1", "sigma2"]),
    "dgamma": (_eval_dgamma, ["x"]),
    "dsine": (_eval_dsine, ["x"]),
    "fusion": (_eval_fusion, ["alpha_prime1", "alpha_prime2", "alpha_prime3",
                              "alpha_prime4", "P", "P_prime"]),
    "modular": (_eval_modular, ["alpha_prime", "P", "P_prime"]),
    "corr3": (_eval_corr3, ["s1", "s2", "s3"] + _TRIPLE_BS),
    "corrbb": (_eval_corrbb, ["z", "s0", "alpha", "beta", "sigma"]),
}

# flag name -> parameter base name
_FLAGS = {"beta": "beta", "sigma": "sigma", "alpha": "alpha", "x": "x",
          "alpha_prime": "alpha_prime", "P": "P", "P_prime": "P_prime",
          "positions": "s", "z": "z", "s0": "s0"}


def collect_params(target, args, skip=()):
    """Map the parameter flags of ``args`` onto the names ``target`` needs.

    Names in ``skip`` may be missing (they are supplied by a scan).
    """
    names = TARGETS[target][1]
    P = {}
    if args.gamma is not None:
        P["gamma"] = complex(args.gamma)
    for flag, base in _FLAGS.items():
        text = getattr(args, flag, None)
        if text is None:
            continue
        values = _parse_list(text)
        if base in names:
            if len(values) != 1:
                raise UsageError(f"--{flag.replace('_', '-')} takes one value "
                                 f"for target {target}")
            P[base] = values[0]
            continue
        numbered = [n for n in names if n[:-1] == base and n[-1] in "1234"]
        if not numbered:
            raise UsageError(f"--{flag.replace('_', '-')} is not a parameter "
                             f"of target {target}")
        if len(values) != len(numbered):
            raise UsageError(f"--{flag.replace('_', '-')} needs "
                             f"{len(numbered)} comma-separated values")
        P.update(zip(numbered, values))
    required = ["gamma"] + names
    missing = [n for n in required if n not in P and n not in skip]
    if missing:
        raise UsageError(f"missing parameters for {target}: "
                         + ", ".join(missing))
    return {n: P[n] for n in required if n in P}


def evaluate_target(target, P, settings=DEFAULT_SETTINGS):
    """Evaluate ``target`` at the parameter dictionary ``P``.

    Returns ``(value, err_est)``; ``err_est`` is None for closed forms.
    """
    P = {k: complex(v) for k, v in P.items()}
    if not 0 < P["gamma"].real < 2 or P["gamma"].imag != 0:
        raise DomainError("gamma must be real and in (0, 2)",
                          {"gamma": str(P["gamma"])})
    value, err = TARGETS[target][0](P, settings)
    value = as_finite_complex(value, target)
    if err is not None:
        err = float(err)
        if not np.isfinite(err):
            err = None
    return value, err


def _cx(z):
    return {"re": float(z.real), "im": float(z.imag)}


def _fmt_complex(z):
    return f"{z.real!r}{z.imag:+}j"


def _settings(args):
    if args.tol is None:
        return DEFAULT_SETTINGS
    return QuadSettings(args.tol, min(DEFAULT_SETTINGS.abs_tol, args.tol))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_eval(args):
    P = collect_params(args.target, args)
    try:
        value, err = evaluate_target(args.target, P, _settings(args))
    except LiouvilleError as exc:
        if args.format == "json":
            print(json.dumps({"error": exc.to_dict()}, sort_keys=True),
                  file=sys.stderr)
        else:
            print(f"error: {exc.kind}: {exc.message}", file=sys.stderr)
        return EXIT_EVAL
    if args.format == "json":
        print(json.dumps({"target": args.target,
                          "params": {k: _cx(v) for k, v in P.items()},
                          "value": _cx(value), "err_est": err}))
    else:
        line = f"{args.target} = {_fmt_complex(value)}"
        if err is not None:
            line += f"  (err_est {err:.3g})"
        print(line)
    return EXIT_OK


def _report_json(reports, timings):
    return json.dumps([r.to_dict(timings) for r in reports], indent=2) + "\n"


def cmd_verify(args):
    gammas = [float(g) for g in args.gamma_list.split(",") if g.strip()]
    tol = args.tol
    reports = run_suite(gammas, args.cases, args.seed, tol, jobs=args.jobs)
    text = _report_json(reports, args.timings)
    if args.report:
        try:
            with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    failed = [r for r in reports if not r.passed]
    out = sys.stderr if not args.report else sys.stdout
    for r in failed:
        detail = (r.error["kind"] if r.error
                  else f"rel_err={r.rel_err:.3g} tol={r.tol:.3g}")
        print(f"FAIL {r.identity_name} {r.params_hash()[:12]} {detail}",
              file=out)
    print(f"{len(reports) - len(failed)}/{len(reports)} identity checks "
          "passed", file=out)
    return EXIT_OK if not failed else EXIT_FAIL


def _scan_point(task):
    target, P, settings = task
    try:
        value, err = evaluate_target(target, P, settings)
    except LiouvilleError as exc:
        return None, None, "pole" if exc.kind in POLE_KINDS else "error"
    return value, err, "ok"


def scan_rows(target, vary, grid, fixed, settings=DEFAULT_SETTINGS, jobs=1):
    """Evaluate ``target`` along ``grid`` in parameter ``vary``.

    Returns ``(param, value, err_est, status)`` rows in grid order.
    """
    tasks = [(target, dict(fixed, **{vary: complex(v)}), settings)
             for v in grid]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_point, tasks))
    else:
        results = [_scan_point(t) for t in tasks]
    return [(float(v),) + res for v, res in zip(grid, results)]


def format_scan_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["param", "value_re", "value_im", "err_est", "status"])
    for param, value, err, status in rows:
        if value is None:
            w.writerow([repr(param), "", "", "", status])
        else:
            w.writerow([repr(param), repr(value.real), repr(value.imag),
                        "" if err is None else repr(err), status])
    return buf.getvalue()


def cmd_scan(args):
    target = args.target
    vary = args.vary
    if args.count < 2:
        raise UsageError("--count must be at least 2")
    names = ["gamma"] + TARGETS[target][1]
    if vary not in names:
        raise UsageError(f"{vary!r} is not a scalar parameter of {target}; "
                         "choose from " + ", ".join(names))
    fixed = collect_params(target, args, skip=(vary,))
    if vary in fixed:
        raise UsageError(f"{vary!r} is both varied and fixed")
    grid = np.linspace(args.start, args.stop, args.count)
    rows = scan_rows(target, vary, grid, fixed, _settings(args), args.jobs)
    text = format_scan_csv(rows)
    if args.output in (None, "-"):
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _add_param_flags(sp):
    g = sp.add_argument_group("parameters (complex values as re or re+imj)")
    g.add_argument("--gamma", type=float)
    g.add_argument("--beta", help="one value or three comma-separated")
    g.add_argument("--sigma", help="one, two or three comma-separated")
    g.add_argument("--alpha")
    g.add_argument("--x")
    g.add_argument("--alpha-prime", dest="alpha_prime",
                   help="kernel weights: four (fusion) or one (modular)")
    g.add_argument("--P", dest="P")
    g.add_argument("--P-prime", dest="P_prime")
    g.add_argument("--positions", help="three boundary positions (corr3); "
                   "one may be inf")
    g.add_argument("--z", help="bulk point in the upper half-plane (corrbb)")
    g.add_argument("--s0", help="boundary point (corrbb)")
    sp.add_argument("--tol", type=float,
                    help="relative quadrature tolerance (default 1e-11)")


def build_parser():
    parser = _Parser(prog="liouville-bcft",
                     description=__doc__.splitlines()[0],
                     epilog="Complex literals use the form re+imj, "
                     "e.g. 1.1+0.2j.")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    ev = sub.add_parser("eval", help="evaluate one quantity")
    ev.add_argument("target", choices=sorted(TARGETS))
    _add_param_flags(ev)
    ev.add_argument("--format", choices=["json", "text"], default="text")
    ev.set_defaults(func=cmd_eval)

    ve = sub.add_parser("verify", help="run the identity suite")
    ve.add_argument("--gamma-list", default="1.2",
                    help="comma-separated gamma values (default 1.2)")
    ve.add_argument("--cases", type=int, default=5,
                    help="random draws per identity family and gamma")
    ve.add_argument("--seed", type=int, default=42)
    ve.add_argument("--tol", type=float,
                    help="override every identity tolerance")
    ve.add_argument("--report", help="write the JSON report here "
                    "(default stdout)")
    ve.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    ve.add_argument("--timings", action="store_true",
                    help="record wall-clock times (reports are then not "
                    "byte-reproducible)")
    ve.set_defaults(func=cmd_verify)

    sc = sub.add_parser("scan", help="evaluate along a linear grid, CSV out")
    sc.add_argument("target", choices=sorted(TARGETS))
    sc.add_argument("--vary", required=True,
                    help="scalar parameter name, e.g. beta, beta1, sigma2, x")
    sc.add_argument("--start", type=float, required=True)
    sc.add_argument("--stop", type=float, required=True)
    sc.add_argument("--count", type=int, required=True)
    sc.add_argument("--output", "-o", help="CSV path (default stdout)")
    sc.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    _add_param_flags(sc)
    sc.set_defaults(func=cmd_scan)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
