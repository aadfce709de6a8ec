"""Tail analysis of a loss table: power-law fit, concentration, capped mean.

Usage: python scripts/tail_report.py [losses.csv] [--column loss_usd]
       python scripts/tail_report.py            # bundled 60-row loss table

The bundled table mixes documented exploit magnitudes with an illustrative
tail, so treat its numbers as a demo, not as research output.
"""

import argparse
import csv
from importlib import resources

from breakglass.losstail import (
    attach_p_value,
    fit_power_law,
    pareto_curve,
    tail_expected_loss,
)


def read_losses(path: str, column: str) -> list[float]:
    with open(path, newline="", encoding="utf-8") as handle:
        return [float(row[column]) for row in csv.DictReader(handle) if row[column]]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("losses", nargs="?", default=None)
    parser.add_argument("--column", default="loss_usd")
    parser.add_argument("--xmin", type=float, default=None)
    parser.add_argument("--bootstrap", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    path = args.losses or str(
        resources.files("breakglass").joinpath("data/losses_top60.csv")
    )
    losses = read_losses(path, args.column)
    print(f"{len(losses)} losses from {path}")

    fit = fit_power_law(losses, xmin=args.xmin)
    fit = attach_p_value(losses, fit, n_boot=args.bootstrap, seed=args.seed)
    print(
        f"power-law tail: alpha={fit.alpha:.3f} xmin=${fit.xmin:,.0f} "
        f"n_tail={fit.n_tail} D={fit.ks_statistic:.3f} p={fit.p_value:.3f}"
    )

    curve = pareto_curve(losses)
    for k in (1, 5, 10, 20):
        if k <= len(curve.points):
            print(f"top {k:>2} incidents carry {curve.points[k - 1][1]:.1%} of losses")

    for cap_multiple in (10, 100, 1000):
        cap = cap_multiple * fit.xmin
        mean = tail_expected_loss(fit, cap)
        print(f"capped tail mean (cap={cap_multiple}x xmin): ${mean:,.0f}")


if __name__ == "__main__":
    main()
