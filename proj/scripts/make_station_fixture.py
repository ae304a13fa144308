"""Write tests/data/stations.csv: synthetic annual series in station format."""
import csv
import pathlib

import numpy as np


def ar1(rng, k, n):
    x = np.empty(n)
    x[0] = rng.standard_normal()
    for i in range(1, n):
        x[i] = k * x[i - 1] + np.sqrt(1 - k * k) * rng.standard_normal()
    return x


def main():
    rng = np.random.default_rng(42)
    rows = []
    # trend plus moderately autocorrelated residuals
    a = 100 + 0.8 * np.arange(90) + 10 * ar1(rng, 0.3, 90)
    rows += [("SYN001", "Synthetic creek", 1930 + t, v) for t, v in enumerate(a)]
    # short, strongly persistent series
    b = 50 + 5 * ar1(rng, 0.7, 25)
    rows += [("SYN002", "Synthetic river", 1990 + t, v) for t, v in enumerate(b)]
    # MA(1) with negative lag-1 correlation: upper bound below zero, excluded
    e = np.random.default_rng(7).standard_normal(61)
    c = 20 + e[1:] - 0.95 * e[:-1]
    rows += [("SYN003", "Negative brook", 1970 + t, v) for t, v in enumerate(c)]
    out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data" / "stations.csv"
    with out.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["station_id", "river", "t", "value"])
        for sid, river, t, v in rows:
            w.writerow([sid, river, t, f"{v:.6f}"])


if __name__ == "__main__":
    main()
