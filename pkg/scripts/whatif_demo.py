"""End-to-end what-if walkthrough on the bundled fixture scenario.

Usage: python scripts/whatif_demo.py [--scenario fixture|sweep|path.json]

Ranks the 15-cell design space, shows how the winner moves as sentiment and
culture change, and locates the sentiment break-even between the top two
cells.
"""

import argparse
import dataclasses

from breakglass import scenario as scenario_mod
from breakglass.costs import breakeven_sentiment, rank_design_space, sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", default="fixture")
    args = parser.parse_args()

    doc = scenario_mod.load(args.scenario)
    space = doc.space()
    ranked = rank_design_space(space, doc.threat, doc.market, doc.blast_on_trigger_only)

    print(f"scenario: {args.scenario} (sentiment={doc.market.mean_sentiment:+.3f}, "
          f"culture={doc.market.culture_multiplier:g})")
    print("\nranked design space:")
    for i, (arch, cost) in enumerate(ranked, start=1):
        print(f"  {i:>2}. {arch.scope.value}/{arch.authority.value:<15} "
              f"${cost.total_usd:>18,.0f}  "
              f"(standing {cost.standing_cost_usd:,.0f} | "
              f"containment {cost.expected_containment_loss_usd:,.0f} | "
              f"blast {cost.expected_blast_cost_usd:,.0f})")

    print("\nbest cell across the sentiment range:")
    for row in sweep("mean_sentiment", -1.0, 1.0, 9, doc.threat, doc.market, space,
                     doc.blast_on_trigger_only):
        print(f"  sentiment {row.value:+.2f} -> {row.best.scope.value}/"
              f"{row.best.authority.value} (${row.best_cost.total_usd:,.0f})")

    print("\nbest cell across the culture multiplier range:")
    for row in sweep("culture_multiplier", 0.1, 5.0, 9, doc.threat, doc.market, space,
                     doc.blast_on_trigger_only):
        print(f"  culture {row.value:>4.2f} -> {row.best.scope.value}/"
              f"{row.best.authority.value} (${row.best_cost.total_usd:,.0f})")

    a, b = ranked[0][0], ranked[1][0]
    crossing = breakeven_sentiment(a, b, doc.threat, doc.market,
                                   doc.blast_on_trigger_only)
    if crossing is not None:
        print(f"\n{a.label} and {b.label} swap order at sentiment {crossing:+.4f}")
    else:
        print(f"\n{a.label} stays ahead of {b.label} across the whole "
              f"sentiment range")
    base = doc.market
    for s in (-0.5, 0.0, 0.5):
        ctx = dataclasses.replace(base, mean_sentiment=s)
        best = rank_design_space(space, doc.threat, ctx, doc.blast_on_trigger_only)[0]
        print(f"  at sentiment {s:+.1f}: best = {best[0].label} "
              f"(${best[1].total_usd:,.0f})")


if __name__ == "__main__":
    main()
