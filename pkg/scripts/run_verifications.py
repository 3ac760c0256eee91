"""Run every randomized verification at full size and write one JSON report.

    python scripts/run_verifications.py --out results/verifications.json
"""

import argparse
import json
import sys
import time

from shatterlab.experiments import RUNS


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--only", nargs="+", choices=sorted(RUNS), default=sorted(RUNS))
    ap.add_argument("--out")
    args = ap.parse_args()

    report = {}
    for name in args.only:
        t = time.perf_counter()
        r = RUNS[name](seed=args.seed)
        print(f"{name:10s} violations={r['violations']:<4d} {time.perf_counter() - t:6.1f}s", file=sys.stderr)
        report[name] = r
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 3 if any(r["violations"] for r in report.values()) else 0


if __name__ == "__main__":
    sys.exit(main())
