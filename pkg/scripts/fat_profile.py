"""fat_eps against eps for a few classes, as plot-ready CSV.

The classes are the piecewise-linear trace family, the index-encoding class
over a 4-point powerset and seeded random grid-valued classes.
"""

import argparse
import sys

import numpy as np

from shatterlab.core import ConceptClass, FiniteSpace
from shatterlab.generators import continuous_trace_family, random_function_class
from shatterlab.pacsim import build_counterexample_class
from shatterlab.shatter import fat_dimension


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5])
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    classes = {
        "trace-family-4": continuous_trace_family(4),
        "index-encoding-4": build_counterexample_class(ConceptClass.powerset(FiniteSpace.uniform(4))).functions,
    }
    for i in range(3):
        classes[f"random-{i}"] = random_function_class(rng, FiniteSpace.uniform(6), 40, levels=10)

    print("#schema=1")
    print("class,eps,fat,certificate")
    for name, F in classes.items():
        for eps in args.eps:
            r = fat_dimension(F, eps)
            print(f"{name},{eps},{r.value},{' '.join(map(str, r.certificate.indices))}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
