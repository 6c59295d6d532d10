"""Command-line front end.

Subcommands: eval, zeros, certify, scan-double, verify-bounds, c0, audit.
Numeric results go to stdout as JSON (default) or CSV (--format csv); logs
and progress go to stderr.  Exit codes: 0 success / all checks passed,
1 a checked property failed (bound violation, failing certificate or
suite), 2 usage or parse error, 3 numerical failure (non-convergence,
contour too close to a zero).

Complex flags accept "a+bi" or "a+bj" syntax; PTHETA_PRECISION=extended
switches scalar series accumulation to 80-bit arithmetic where available.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import bounds, core, sweep, zeros

__all__ = ["main", "run"]

_EXIT_OK = 0
_EXIT_CHECK_FAILED = 1
_EXIT_USAGE = 2
_EXIT_NUMERICAL = 3


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j").replace("I", "j")
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _complex_dict(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _emit(payload, fmt: str, csv_rows=None) -> None:
    if fmt == "csv" and csv_rows is not None:
        header, rows = csv_rows
        print(",".join(header))
        for row in rows:
            print(",".join(str(v) for v in row))
    else:
        print(json.dumps(payload))


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ptheta",
        description="partial theta function evaluation, zero location, "
                    "disk certification, and inequality suites")
    sub = p.add_subparsers(dest="command", required=True)

    def add_format(sp):
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("eval", help="evaluate theta and its relatives at one point")
    sp.add_argument("--q", type=parse_complex, required=True)
    sp.add_argument("--x", type=parse_complex, required=True)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--function", default="auto",
                    choices=("auto", "theta", "theta-dx", "g", "thetastar-series",
                             "thetastar-product", "theta-identity"))
    add_format(sp)

    sp = sub.add_parser("zeros", help="locate all zeros out to ring k-max")
    sp.add_argument("--q", type=parse_complex, required=True)
    sp.add_argument("--k-max", type=int, required=True)
    sp.add_argument("--tol", type=float, default=1e-10)
    add_format(sp)

    sp = sub.add_parser("certify", help="sampled disk certificate about mu_s")
    sp.add_argument("--q", type=parse_complex, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--regime", default="auto", choices=("auto", "n-band", "half-q"))
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--samples", type=int, default=4096)
    add_format(sp)

    sp = sub.add_parser("scan-double", help="sweep a q interval for double zeros")
    sp.add_argument("--q-min", type=float, required=True)
    sp.add_argument("--q-max", type=float, required=True)
    sp.add_argument("--q-steps", type=int, default=60)
    sp.add_argument("--x-min", type=float, default=-24.0)
    sp.add_argument("--x-max", type=float, default=-4.0)
    sp.add_argument("--x-steps", type=int, default=30)
    sp.add_argument("--output", required=True)
    sp.add_argument("--tol", type=float, default=1e-11)
    sp.add_argument("--parallelism", type=int, default=1)
    add_format(sp)

    sp = sub.add_parser("verify-bounds", help="run randomized inequality suites")
    sp.add_argument("--suite", default="all",
                    choices=("all",) + bounds.SUITE_NAMES)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    add_format(sp)

    sp = sub.add_parser("c0", help="bisection value of the no-multiple-zero modulus")
    sp.add_argument("--tol", type=float, default=1e-10)
    add_format(sp)

    sp = sub.add_parser("audit", help="recheck a records file against the 8^11 bound")
    sp.add_argument("--records", required=True)
    add_format(sp)
    return p


def _cmd_eval(args) -> int:
    fn = {
        "auto": core.eval_theta_auto,
        "theta": core.eval_theta,
        "theta-dx": core.eval_theta_dx,
        "g": core.eval_G,
        "thetastar-series": core.eval_thetastar_series,
        "thetastar-product": core.eval_thetastar_product,
        "theta-identity": core.eval_theta_via_identity,
    }[args.function]
    res = fn(args.q, args.x, args.tol)
    lm = res.value.log_modulus
    representable = lm == -math.inf or lm <= 709.5
    payload = {
        "function": args.function,
        "value": _complex_dict(res.value.to_complex()) if representable else None,
        "log_modulus": lm,
        "argument": res.value.argument,
        "tail_log": res.tail_bound,
        "terms_used": res.terms_used,
    }
    _emit(payload, args.format,
          (("log_modulus", "argument", "tail_log", "terms_used"),
           [(lm, res.value.argument, res.tail_bound, res.terms_used)]))
    return _EXIT_OK


def _cmd_zeros(args) -> int:
    recs = zeros.zeros_up_to_k(args.q, args.k_max, tol=args.tol)
    payload = [{
        "q": _complex_dict(r.q.value),
        "location": _complex_dict(r.location),
        "multiplicity": r.multiplicity,
        "residual_log": r.residual,
        "newton_iterations": r.newton_iterations,
        "seed": r.seed,
    } for r in recs]
    rows = [(r.location.real, r.location.imag, r.multiplicity, r.residual,
             r.newton_iterations, r.seed) for r in recs]
    _emit(payload, args.format,
          (("location_re", "location_im", "multiplicity", "residual_log",
            "newton_iterations", "seed"), rows))
    return _EXIT_OK


def _cmd_certify(args) -> int:
    cert = bounds.certify_disk_rouche(args.q, args.s, regime=args.regime,
                                      n=args.n, samples=args.samples)
    d = cert.to_json_dict()
    _emit(d, args.format, (tuple(d.keys()), [tuple(d.values())]))
    return _EXIT_OK if cert.passed else _EXIT_CHECK_FAILED


def _cmd_scan_double(args) -> int:
    import numpy as np

    config = sweep.SweepConfig(
        q_region=sweep.RealInterval(args.q_min, args.q_max),
        q_steps=args.q_steps,
        seed_strategy=sweep.SeedStrategy(
            kind="explicit",
            seeds=tuple(np.linspace(args.x_min, args.x_max, args.x_steps))),
        newton_tol=args.tol,
        output_path=args.output,
        parallelism=args.parallelism,
    )
    records = sweep.sweep_double_zeros(config)
    summary = sweep.audit(args.output)
    payload = {
        "records": summary.records_total,
        "bound_violations": summary.bound_violations,
        "max_modulus": summary.max_multiple_zero_modulus,
        "output": args.output,
    }
    _emit(payload, args.format, (tuple(payload.keys()), [tuple(payload.values())]))
    return _EXIT_OK if summary.bound_violations == 0 else _EXIT_CHECK_FAILED


def _cmd_verify_bounds(args) -> int:
    names = bounds.SUITE_NAMES if args.suite == "all" else (args.suite,)
    failures = 0
    total = 0
    for name in names:
        reports = bounds.run_suite(name, trials=args.trials, seed=args.seed)
        total += len(reports)
        for rep in reports:
            if args.format == "csv":
                print(f"{rep.name},{rep.lhs},{rep.rhs},{rep.margin},{rep.passed}")
            else:
                print(json.dumps(rep.to_json_dict()))
            failures += 0 if rep.passed else 1
    print(f"suites={len(names)} reports={total} failures={failures}", file=sys.stderr)
    return _EXIT_OK if failures == 0 else _EXIT_CHECK_FAILED


def _cmd_c0(args) -> int:
    _emit({"c0": core.compute_c0(args.tol)}, args.format,
          (("c0",), [(core.compute_c0(args.tol),)]))
    return _EXIT_OK


def _cmd_audit(args) -> int:
    summary = sweep.audit(args.records)
    d = summary.to_json_dict()
    rows = [(q, z, dist) for q, z, dist in summary.trend_sequence]
    _emit(d, args.format, (("q", "zeta", "dist_to_minus_e_pi"), rows))
    return _EXIT_OK if summary.bound_violations == 0 else _EXIT_CHECK_FAILED


_DISPATCH = {
    "eval": _cmd_eval,
    "zeros": _cmd_zeros,
    "certify": _cmd_certify,
    "scan-double": _cmd_scan_double,
    "verify-bounds": _cmd_verify_bounds,
    "c0": _cmd_c0,
    "audit": _cmd_audit,
}


def run(argv) -> int:
    """Parse argv, dispatch, and return the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else _EXIT_USAGE
    try:
        return _DISPATCH[args.command](args)
    except core.DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return _EXIT_USAGE
    except (core.ConvergenceError, core.ContourError, core.CountMismatchError,
            core.OverflowRiskError, core.RecordParseError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return _EXIT_NUMERICAL


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
