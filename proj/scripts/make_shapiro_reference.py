"""Regenerate tests/data/shapiro_reference.csv from scipy.stats.shapiro.

Each row holds a sample and the W / p-value scipy reports for it. Samples
are written with 17 significant digits so the C++ side reads back the
exact same doubles.
"""
import csv
import sys

import numpy as np
from scipy import stats


def main(path):
    rows = []
    # 20 standard-normal samples of size 100, seeds 1..20.
    for seed in range(1, 21):
        x = np.random.default_rng(seed).standard_normal(100)
        rows.append((f"normal100_s{seed}", x))
    # A spread of sizes covering every branch of the p-value approximation.
    for n in (3, 4, 5, 6, 7, 11, 12, 20, 50, 500, 2000):
        x = np.random.default_rng(1000 + n).standard_normal(n)
        rows.append((f"normal{n}", x))
    for n in (10, 100):
        x = np.exp(np.random.default_rng(2000 + n).standard_normal(n))
        rows.append((f"lognormal{n}", x))
        x = np.random.default_rng(3000 + n).uniform(size=n)
        rows.append((f"uniform{n}", x))

    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["id", "n", "w", "p", "values"])
        for name, x in rows:
            res = stats.shapiro(x)
            out.writerow([name, len(x), f"{res.statistic:.17g}",
                          f"{res.pvalue:.17g}",
                          " ".join(f"{v:.17g}" for v in x)])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/shapiro_reference.csv")
