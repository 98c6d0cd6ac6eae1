"""Command-line interface: ``girthforge <command> ...``.

Exit codes: 0 success, 1 acceptance failure (a threshold or audit did not
hold), 2 usage or input error, 3 internal or numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .cycles import analyze, verify_rlt
from .errors import (
    CapacityError,
    EnumerationBudgetError,
    GirthforgeError,
    PipelineError,
    SamplingFailureError,
    SolverError,
)
from .experiment import ExperimentSpec, run_experiment
from .fixer import FixParams, fix, verify_fix
from .io import FORMATS, convert, dumps, jsonable, read_graph, read_signing, write_graph, write_signing
from .lifts import LiftPipelineConfig, lift_pipeline, random_signing, two_lift
from .sampler import SamplerConfig, sample
from .spectral import full_spectrum, signed_spectral_radius, spectrum_summary

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

# Errors that mean the computation ran but could not finish, not bad input.
_INTERNAL = (SolverError, SamplingFailureError, EnumerationBudgetError, CapacityError, PipelineError)


def _emit(obj, out: str | None) -> None:
    text = json.dumps(jsonable(obj), indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_sample(args) -> int:
    g = sample(SamplerConfig(args.n, args.d, args.seed, args.mode))
    if args.out:
        write_graph(g, args.out, args.format)
    else:
        print(dumps(g, args.format or "json"))
    return EXIT_OK


def cmd_analyze(args) -> int:
    g = read_graph(args.input)
    report = analyze(g, args.cycles_up_to, with_cycles=not args.counts_only).to_dict()
    status = EXIT_OK
    if args.check_rlt:
        r, lam, tau = args.check_rlt
        ok, detail = verify_rlt(g, int(r), lam, int(tau))
        report["rlt"] = detail
        status = EXIT_OK if ok else EXIT_FAIL
    _emit(report, args.out)
    return status


def cmd_spectrum(args) -> int:
    g = read_graph(args.input)
    if args.signing:
        w = read_signing(args.signing)
        out = {"signed_spectral_radius": signed_spectral_radius(g, w)}
        if args.full:
            out["spectrum"] = full_spectrum(g, w)
    else:
        out = spectrum_summary(g, tol=args.tol).to_dict()
        if args.full:
            out["spectrum"] = full_spectrum(g)
    _emit(out, args.out)
    return EXIT_OK


def cmd_fix(args) -> int:
    g = read_graph(args.input)
    params = FixParams(args.r, force=args.force, mark_radius=args.mark_radius)
    out, plan = fix(g, params)
    write_graph(out, args.out)
    if args.plan:
        _emit(plan.to_dict(), args.plan)
    if args.verify:
        audit = verify_fix(g, out, plan)
        print(json.dumps(jsonable(audit), indent=2))
        if not (audit["regular"] and audit["girth_ok"]):
            return EXIT_FAIL
    return EXIT_OK


def cmd_lift(args) -> int:
    g = read_graph(args.input)
    if args.signing:
        w = read_signing(args.signing)
    elif args.seed is not None:
        w = random_signing(g, args.seed)
        if args.save_signing:
            write_signing(w, args.save_signing)
    else:
        raise ValueError("lift needs --signing or --seed")
    write_graph(two_lift(g, w), args.out)
    return EXIT_OK


def cmd_pipeline(args) -> int:
    cfg = LiftPipelineConfig(args.target_n, args.d, args.epsilon, args.c, args.seed,
                             max_retries_per_lift=args.max_retries, fix_radius=args.fix_radius)
    g, prov = lift_pipeline(cfg)
    write_graph(g, args.out)
    if args.log:
        _emit(prov, args.log)
    res = prov["result"]
    print(json.dumps(jsonable(res)))
    ok = res["regular"] and res["lambda"] <= 2 * (args.d - 1) ** 0.5 + args.epsilon
    return EXIT_OK if ok else EXIT_FAIL


def cmd_experiment(args) -> int:
    spec = ExperimentSpec.load(args.spec)
    if args.out_dir:
        spec.out_dir = args.out_dir
    report = run_experiment(spec, workers=args.workers)
    for key, chk in report["thresholds"].items():
        flag = "PASS" if chk["passed"] else "FAIL"
        print(f"{flag} {key}: {chk['observed']:.3f} (need {chk['required']:.3f})")
    print(f"report written to {Path(spec.out_dir) / 'report.json'}")
    if report["all_failed"]:
        return EXIT_INTERNAL
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_convert(args) -> int:
    convert(args.input, args.out, args.format, args.src_format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="girthforge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="draw a random d-regular graph")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mode", choices=["config", "simple", "configuration", "uniform-simple"], default="config")
    s.add_argument("--out")
    s.add_argument("--format", choices=FORMATS)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("analyze", help="girth, bicycle-free radius, short cycles")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--cycles-up-to", type=int)
    s.add_argument("--counts-only", action="store_true", help="omit the cycle list")
    s.add_argument("--check-rlt", nargs=3, type=float, metavar=("R", "LAMBDA", "TAU"),
                   help="exit 1 unless the graph is an (R, LAMBDA, TAU)-graph")
    s.add_argument("--out")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("spectrum", help="extremal or full adjacency spectrum")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--signing")
    s.add_argument("--full", action="store_true")
    s.add_argument("--tol", type=float)
    s.add_argument("--out")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("fix", help="remove cycles of length <= r")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--force", action="store_true", help="proceed when preconditions fail")
    s.add_argument("--mark-radius", type=int)
    s.add_argument("--out", required=True)
    s.add_argument("--plan")
    s.add_argument("--verify", action="store_true", help="audit the output; exit 1 on failure")
    s.set_defaults(func=cmd_fix)

    s = sub.add_parser("lift", help="2-lift by an edge signing")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--signing")
    s.add_argument("--seed", type=int, help="draw a random signing instead")
    s.add_argument("--save-signing")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("pipeline", help="sample, fix and lift up to a target size")
    s.add_argument("--target-n", type=int, required=True)
    s.add_argument("--d", type=int, default=3)
    s.add_argument("--epsilon", type=float, default=0.3)
    s.add_argument("--c", type=float, default=0.2)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-retries", type=int, default=100)
    s.add_argument("--fix-radius", type=int)
    s.add_argument("--out", required=True)
    s.add_argument("--log")
    s.set_defaults(func=cmd_pipeline)

    s = sub.add_parser("experiment", help="run a JSON experiment spec")
    s.add_argument("--spec", required=True)
    s.add_argument("--out-dir")
    s.add_argument("--workers", type=int)
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("convert", help="convert between graph formats")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--format", choices=FORMATS)
    s.add_argument("--from", dest="src_format", choices=("json", "edgelist"))
    s.set_defaults(func=cmd_convert)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except _INTERNAL as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (GirthforgeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
