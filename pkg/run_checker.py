import argparse
import json
import logging
import os
import sys

if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument('command',
                        type=str,
                        help='One of ["verify-tiling", "verify-spectral", "construct-spectrum", '
                             '"construct-complement", "classes", "search-complement", "search-spectrum", '
                             '"check-1d", "selftest"]')
    parser.add_argument('--input', '-i',
                        type=str,
                        default=None,
                        help="JSON job file. Reads stdin when omitted (not needed for selftest).")
    parser.add_argument('--json', '-j',
                        action="store_true",
                        help='Emit the machine-readable report instead of the table.')
    parser.add_argument('--bound', '-b',
                        type=int,
                        default=None,
                        help="Largest group order any whole-group scan may visit.")
    parser.add_argument('--search_bound', '-sb',
                        type=int,
                        default=None,
                        help="Largest group order the complement and spectrum searches may visit.")
    parser.add_argument('--scan-n', '-s',
                        dest="scan_n",
                        type=str,
                        default=None,
                        help='Modulus range A..B for search-complement on points of Z^d.')
    parser.add_argument('--strict',
                        action="store_true",
                        help='Reject coordinates outside [0, n) instead of reducing them.')
    parser.add_argument('--recheck',
                        action="store_true",
                        help='Treat the input as a machine report and re-verify its certificates.')
    args = parser.parse_args()

    if args.bound is not None:
        os.environ["PRIME_TILES_ENUMERATION_BOUND"] = str(args.bound)
    if args.search_bound is not None:
        os.environ["PRIME_TILES_SEARCH_BOUND"] = str(args.search_bound)

    logging.basicConfig(level=logging.INFO)

    from prime_tiles.cli import parse_input, recheck_report, run

    if args.input is not None:
        with open(args.input) as f:
            text = f.read()
    elif args.command == "selftest":
        text = ""
    else:
        text = sys.stdin.read()

    try:
        if args.recheck:
            ok = recheck_report(json.loads(text))
            print("certificates reproduced" if ok else "certificates NOT reproduced")
            sys.exit(0 if ok else 1)
        job = parse_input(
            text,
            command=args.command,
            strict=args.strict,
            bound=args.bound,
            search_bound=args.search_bound,
            output_format="json" if args.json else "table",
            scan_n=args.scan_n,
        )
    except ValueError as e:
        logging.error(f"invalid input: {e}")
        sys.exit(2)

    report = run(job)
    print(report.to_json() if job.output_format == "json" else report.render_table())
    sys.exit(report.exit_code)
