"""Empirical failure rate of the tightest-rectangle learner as m grows.

Emits ``#schema=1`` CSV with one row per sample size; the row at
m = ceil((4/eps) ln(4/delta)) is flagged.
"""

import argparse
import csv
import sys

from shatterlab.pacsim import PlaneDistribution, Rectangle, rect_sample_complexity, run_rectangle_trials


def main() -> int:
    ap = argparse.ArgumentParser(description="failure rate against sample size")
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--sizes", type=int, nargs="+", default=[5, 10, 20, 40, 60, 80, 100, 148, 200])
    args = ap.parse_args()

    target = Rectangle(0.25, 0.75, 0.25, 0.75)
    dist = PlaneDistribution.uniform_box()
    m_star = rect_sample_complexity(args.eps, args.delta)
    out = csv.writer(sys.stdout, lineterminator="\n")
    sys.stdout.write("#schema=1\n")
    out.writerow(["m", "trials", "failures", "failure_rate", "mean_error", "is_bound"])
    for m in sorted(set(args.sizes) | {m_star}):
        r = run_rectangle_trials(target, dist, args.eps, args.delta, m, args.trials, args.seed)
        out.writerow([m, r.trials, r.failures, r.empirical_failure_rate, r.mean_error, int(m == m_star)])
    return 0


if __name__ == "__main__":
    sys.exit(main())
