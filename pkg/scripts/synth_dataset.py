"""Emit a synthetic incident dataset shaped like the published aggregates.

Usage: python scripts/synth_dataset.py [out.csv] [--seed N]

Row-level content is generated and non-authoritative; only the four layer
counts (10/94/601/130) and layer loss totals ($61.80B/$7.41B/$9.60B/$7.51B)
are meaningful, and those are exact by construction.
"""

import argparse

from breakglass.incidents import stratify, synthesize_reference_dataset, write_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", nargs="?", default="synthetic_incidents.csv")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    records = synthesize_reference_dataset(seed=args.seed)
    write_csv(records, args.out)
    summary = stratify(records)
    print(f"wrote {args.out}: {summary.total.count} rows")
    for name in ("systemic", "non_addressable", "eligible", "intervened"):
        layer = getattr(summary, name)
        print(f"  {name:<16} {layer.count:>4}  ${layer.loss_usd:,.0f}")


if __name__ == "__main__":
    main()
