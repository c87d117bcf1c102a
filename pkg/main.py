"""
Trinomial Sieve command line.

    tsieve {classify,bounds,search,diagnose,verify} [--input FILE|-] [--preset NAME]
           [--max-degree N] [--jobs N] [--eps P/Q] [--timing] [--output FILE]

A job is a JSON object:

    {
      "field":    {"poly": [c0, c1, ...], "root": {"re": ["lo", "hi"], "im": ["lo", "hi"]}},
      "elements": [["a0", "a1", ...], ...],
      "search":   {"max_degree": 200, "emit_binomials": true, "parallel_width": 4},
      "bounds":   {"d": 1, "h_omega": "0", "h_tilde": "0"},
      "corollary": {"d": 1, "nu": 2, "h_alpha": "0"},
      "diagnose": {"m": 5, "n": 1, "m_prime": 7, "n_prime": 2, "indices": [0, 1, 2]},
      "hits":     [{"m": 5, "n": 1, "A": [...], "B": [...]}],
      "eps":      "1/9007199254740992"
    }

"poly" lists the integer coefficients of the defining polynomial, constant
first; the root rectangle must isolate exactly one of its roots. Without
"field" the ambient field is Q. Elements are coordinate vectors in the power
basis of the field generator. Every rational is a string "p/q" or "p".

Exit codes: 0 success, 1 input error, 2 internal soundness failure.
"""

import argparse
import json
import sys
from typing import List, Optional

from tsieve_config import SieveConfig, load_environment, parse_eps, setup_logging
from tsieve_error_handler import EXIT_INPUT, EXIT_OK, InputError, error_reporter, exit_code_for
from tsieve_jobs import MODES, JobOptions, parse_job, parse_job_document, run_job
from tsieve_presets import PRESETS, preset_job


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsieve",
        description="Find and certify the trinomials X^m + A X^n + B vanishing on a finite set of algebraic numbers.",
        epilog=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("command", choices=MODES, help="what to do with the job")
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--input", "-i", default="-", help="job file, or - for stdin (default)")
    source.add_argument("--preset", choices=sorted(PRESETS), help="run a built-in job instead of reading one")
    parser.add_argument("--max-degree", type=int, default=None, help="search cap on m (default: job, then env, then 200)")
    parser.add_argument("--jobs", "-j", type=int, default=None, help="worker processes (default: job, then TRINOMIAL_SIEVE_JOBS)")
    parser.add_argument("--eps", default=None, help="enclosure width for heights, as P/Q")
    parser.add_argument("--timing", action="store_true", help="add wall-clock timing to the output, and error statistics to error reports")
    parser.add_argument("--output", "-o", default=None, help="write the JSON here instead of stdout")
    return parser


def _read_job(args):
    if args.preset:
        document = preset_job(args.preset)
        document["mode"] = args.command
        return parse_job_document(document)
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    spec = parse_job(text)
    return spec.model_copy(update={"mode": args.command})


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    load_environment()
    try:
        config = SieveConfig()
    except Exception as e:
        print(f"ERROR - {e}", file=sys.stderr)
        return exit_code_for(e)
    setup_logging(config)

    try:
        if args.max_degree is not None and args.max_degree < 2:
            raise InputError(f"--max-degree must be at least 2, got {args.max_degree}")
        if args.jobs is not None and args.jobs < 1:
            raise InputError(f"--jobs must be positive, got {args.jobs}")
        options = JobOptions(
            jobs=args.jobs,
            default_jobs=config.jobs,
            max_degree=args.max_degree,
            eps=parse_eps(args.eps) if args.eps else None,
            timing=args.timing,
            default_max_degree=config.max_degree,
            default_eps=config.eps,
        )
        spec = _read_job(args)
        output, ok = run_job(spec, options)
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(output)
        else:
            sys.stdout.write(output)
        return EXIT_OK if ok else EXIT_INPUT
    except Exception as e:
        info = error_reporter.handle_error(e, {"command": args.command})
        payload = {"error": info.to_json()}
        if args.timing:
            payload["error_statistics"] = error_reporter.get_error_statistics()
        print(json.dumps(payload, indent=2), file=sys.stderr)
        return info.exit_code


if __name__ == "__main__":
    sys.exit(main())
