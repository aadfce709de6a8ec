"""Command-line interface. Every subcommand maps 1:1 onto a library call.

Exit codes: 0 success, 1 domain/data errors (with one machine-parseable
``error: code=... field=... message=...`` line on stderr), 2 usage errors.
"""

from __future__ import annotations

import functools
import json
import sys
from importlib import resources
from pathlib import Path

import click

from . import __version__, reporting, scenario as scenario_mod
from .errors import (
    BreakglassError,
    DegenerateError,
    DomainError,
    InsufficientDataError,
    SchemaError,
)
from .incidents import (
    attack_vector_stats,
    authority_stats,
    ingest as ingest_table,
    scope_authority_matrix,
    stratify as stratify_records,
    to_csv_text,
)
from .losstail import attach_p_value, fit_power_law
from .sentiment import aggregate, cost_multiplier, score_post
from .simulator import SimConfig, simulate as run_simulation
from .taxonomy import (
    AUTHORITY_ORDER,
    AuthorityMode,
    Calibration,
    DEFAULT_CALIBRATION,
    SCOPE_ORDER,
    ScopeLevel,
    load_calibration,
)

BUNDLED_TABLES = {
    "sample": "data/incidents_sample.csv",
    "interventions": "data/interventions_52.csv",
    "losses": "data/losses_top60.csv",
}


def _resolve_table(name_or_path: str) -> str:
    if name_or_path in BUNDLED_TABLES:
        return str(resources.files("breakglass").joinpath(BUNDLED_TABLES[name_or_path]))
    return name_or_path


def _error_code(exc: BreakglassError) -> tuple[str, str]:
    if isinstance(exc, DomainError):
        return "domain", exc.field
    if isinstance(exc, SchemaError):
        return "schema", "-"
    if isinstance(exc, DegenerateError):
        return "degenerate", "-"
    if isinstance(exc, InsufficientDataError):
        return "insufficient_data", "-"
    return "error", "-"


def fails_cleanly(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except BreakglassError as exc:
            code, field = _error_code(exc)
            message = getattr(exc, "message", str(exc))
            click.echo(f"error: code={code} field={field} message={message}", err=True)
            sys.exit(1)
        except FileNotFoundError as exc:
            click.echo(f"error: code=io field=- message={exc}", err=True)
            sys.exit(1)

    return wrapper


def _load_cal(path: str | None) -> Calibration:
    return load_calibration(path) if path else DEFAULT_CALIBRATION


def _parse_cell(text: str) -> tuple[ScopeLevel, AuthorityMode]:
    scope, sep, auth = text.partition("/")
    if not sep:
        raise DomainError("cell", f"expected scope/authority, got {text!r}")
    return ScopeLevel.parse(scope), AuthorityMode.parse(auth)


@click.group()
@click.version_option(version=__version__)
def main():
    """Emergency-override design support: rank, price, and stress-test
    intervention architectures."""


@main.command()
@click.option("--calibration", "calibration_path", type=click.Path(exists=True))
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@fails_cleanly
def defaults(calibration_path, fmt):
    """Print the calibration-default table with provenance notes."""
    payload = reporting.defaults_payload(_load_cal(calibration_path))
    if fmt == "json":
        click.echo(reporting.canonical_json(payload))
        return
    click.echo(f"calibration {payload['calibration_version']} ({payload['source']})")
    header = (
        f"{'scope':<9} {'authority':<15} {'time_min':>10}  {'discount':>9}  "
        f"{'fraction':>9}  notes"
    )
    click.echo(header)
    click.echo("-" * len(header))
    for row in payload["rows"]:
        click.echo(
            f"{row['scope']:<9} {row['authority']:<15} "
            f"{row['containment_time_min']:>10g}  {row['discount_rate']:>9g}  "
            f"{row['scope_fraction']:>9g}  time: {row['containment_time_note']}; "
            f"discount: {row['discount_rate_note']}"
        )


def _scenario_command(fn):
    fn = click.option("--scenario", "scenario_ref", required=True,
                      help="Scenario file path, or a bundled name (fixture, sweep).")(fn)
    fn = click.option("--calibration", "calibration_path", type=click.Path(exists=True))(fn)
    return fn


@main.command()
@_scenario_command
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@fails_cleanly
def rank(scenario_ref, calibration_path, fmt):
    """Rank every architecture in the scenario's design space by total cost."""
    doc = scenario_mod.load(scenario_ref)
    payload = reporting.rank_payload(doc, _load_cal(calibration_path))
    if fmt == "json":
        click.echo(reporting.canonical_json(payload))
    else:
        click.echo(reporting.rank_table_text(payload))


@main.command()
@_scenario_command
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@fails_cleanly
def evaluate(scenario_ref, calibration_path, fmt):
    """Cost breakdown for every architecture, in design-space order."""
    doc = scenario_mod.load(scenario_ref)
    payload = reporting.evaluate_payload(doc, _load_cal(calibration_path))
    if fmt == "json":
        click.echo(reporting.canonical_json(payload))
    else:
        click.echo(reporting.rank_table_text(payload))


@main.command()
@_scenario_command
@click.option("--a", "cell_a", required=True, help="First cell, e.g. account/signer_set")
@click.option("--b", "cell_b", required=True, help="Second cell")
@fails_cleanly
def breakeven(scenario_ref, calibration_path, cell_a, cell_b):
    """Sentiment at which two architectures swap cost order."""
    doc = scenario_mod.load(scenario_ref)
    payload = reporting.breakeven_payload(
        doc, _parse_cell(cell_a), _parse_cell(cell_b), _load_cal(calibration_path)
    )
    click.echo(reporting.canonical_json(payload))


@main.command()
@_scenario_command
@click.option("--param", required=True,
              help="mean_sentiment, culture_multiplier, market_cap_usd, "
                   "daily_volume_usd, probability:<label> or damage_rate:<label>")
@click.option("--start", type=float, required=True)
@click.option("--stop", type=float, required=True)
@click.option("--steps", type=int, required=True)
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@fails_cleanly
def sweep(scenario_ref, calibration_path, param, start, stop, steps, fmt):
    """Best architecture across a parameter grid."""
    doc = scenario_mod.load(scenario_ref)
    payload = reporting.sweep_payload(
        doc, param, start, stop, steps, _load_cal(calibration_path)
    )
    if fmt == "json":
        click.echo(reporting.canonical_json(payload))
        return
    click.echo(f"{'value':>14}  {'best cell':<26} {'total_usd':>20}")
    for row in payload["rows"]:
        cell = f"{row['best']['scope']}/{row['best']['authority']}"
        click.echo(
            f"{row['value']:>14.6g}  {cell:<26} "
            f"{reporting.format_usd(row['cost']['total_usd']):>20}"
        )


@main.command()
@_scenario_command
@click.option("--cell", required=True, help="Architecture cell, e.g. account/delegated_body")
@click.option("--trials", type=int, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--jitter", type=float, default=0.0)
@click.option("--trigger-only-blast", is_flag=True, default=None,
              help="Override the scenario's blast accounting flag.")
@click.option("--partitions", type=int, default=1)
@fails_cleanly
def simulate(scenario_ref, calibration_path, cell, trials, seed, jitter,
             trigger_only_blast, partitions):
    """Monte Carlo cost distribution for one architecture."""
    doc = scenario_mod.load(scenario_ref)
    scope, authority = _parse_cell(cell)
    space = {arch.cell: arch for arch in doc.space(_load_cal(calibration_path))}
    arch = space[(scope, authority)]
    flag = doc.blast_on_trigger_only if trigger_only_blast is None else bool(trigger_only_blast)
    cfg = SimConfig(
        n_trials=trials,
        seed=seed,
        time_jitter=jitter,
        blast_on_trigger_only=flag,
        n_partitions=partitions,
    )
    result = run_simulation(arch, doc.threat, doc.market, cfg)
    click.echo(reporting.canonical_json(result.as_dict()))


def _read_losses(path: str, column: str) -> list[float]:
    resolved = Path(_resolve_table(path))
    text = resolved.read_text(encoding="utf-8")
    if resolved.suffix.lower() == ".json":
        data = json.loads(text)
        if not isinstance(data, list):
            raise SchemaError("JSON losses file must be a flat array of numbers")
        return [float(v) for v in data]
    import csv as _csv
    import io as _io

    reader = _csv.DictReader(_io.StringIO(text))
    if reader.fieldnames is None or column not in reader.fieldnames:
        raise SchemaError(f"column {column!r} not found in {path}")
    return [float(row[column]) for row in reader if row[column].strip()]


@main.command()
@click.option("--losses", "losses_path", required=True,
              help="CSV with a loss column, JSON array, or bundled name (losses).")
@click.option("--column", default="loss_usd", show_default=True)
@click.option("--xmin", type=float, default=None,
              help="Tail threshold; omit to select it by KS minimization.")
@click.option("--bootstrap", "n_boot", type=int, default=None,
              help="Bootstrap replicates for the p-value (>= 100).")
@click.option("--seed", type=int, default=0, show_default=True)
@fails_cleanly
def fit(losses_path, column, xmin, n_boot, seed):
    """Fit a power law to the loss tail."""
    losses = _read_losses(losses_path, column)
    result = fit_power_law(losses, xmin=xmin)
    if n_boot is not None:
        result = attach_p_value(losses, result, n_boot=n_boot, seed=seed)
    click.echo(
        reporting.canonical_json(
            {
                "alpha": result.alpha,
                "xmin": result.xmin,
                "n_tail": result.n_tail,
                "ks_statistic": result.ks_statistic,
                "p_value": result.p_value,
            }
        )
    )


@main.command()
@click.option("--data", "data_path", required=True,
              help="Incident CSV/JSON path or bundled name (sample, interventions).")
@click.option("--out", "out_path", default=None,
              help="Write the parsed records back out (CSV).")
@click.option("--strict", is_flag=True, help="Exit nonzero if any row fails.")
@fails_cleanly
def ingest(data_path, out_path, strict):
    """Parse an incident table, reporting every rejected row."""
    result = ingest_table(_resolve_table(data_path))
    click.echo(f"parsed {len(result.records)} records, {len(result.errors)} rejected")
    for err in result.errors:
        click.echo(f"row {err.row}: {err.field}: {err.message}", err=True)
    if out_path:
        Path(out_path).write_text(to_csv_text(result.records), encoding="utf-8")
        click.echo(f"wrote {out_path}")
    if strict and result.errors:
        sys.exit(1)


@main.command()
@click.option("--data", "data_path", required=True)
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@fails_cleanly
def stratify(data_path, fmt):
    """Split an incident table into the four layers."""
    result = ingest_table(_resolve_table(data_path))
    summary = stratify_records(result.records)
    layers = {
        "systemic": summary.systemic,
        "non_addressable": summary.non_addressable,
        "eligible": summary.eligible,
        "intervened": summary.intervened,
    }
    if fmt == "json":
        click.echo(
            reporting.canonical_json(
                {
                    name: {"count": st.count, "loss_usd": st.loss_usd}
                    for name, st in layers.items()
                }
            )
        )
        return
    click.echo(f"{'layer':<16} {'count':>6} {'loss_usd':>22}")
    for name, st in layers.items():
        click.echo(f"{name:<16} {st.count:>6} {reporting.format_usd(st.loss_usd):>22}")


@main.command()
@click.option("--data", "data_path", required=True)
@click.option("--by", "group", type=click.Choice(["authority", "matrix", "vectors", "all"]),
              default="all")
@fails_cleanly
def stats(data_path, group):
    """Authority, grid, and attack-vector statistics for an incident table."""
    result = ingest_table(_resolve_table(data_path))
    records = result.records
    if group in ("authority", "all"):
        click.echo("authority performance (intervened rows):")
        click.echo(
            f"  {'authority':<15} {'count':>5} {'share':>7} {'median_min':>11} "
            f"{'success':>8} {'prevented_usd':>18}"
        )
        for mode, st in authority_stats(records).items():
            share = f"{st.share:.1%}" if st.share is not None else "-"
            median = f"{st.median_time_to_contain_min:g}" if st.median_time_to_contain_min is not None else "-"
            rate = f"{st.success_rate:.1%}" if st.success_rate is not None else "-"
            click.echo(
                f"  {mode.value:<15} {st.count:>5} {share:>7} {median:>11} "
                f"{rate:>8} {reporting.format_usd(st.loss_prevented_usd):>18}"
            )
    if group in ("matrix", "all"):
        click.echo("scope x authority (count, success):")
        matrix = scope_authority_matrix(records)
        header = "  " + f"{'':<10}" + "".join(f"{a.value:>20}" for a in AUTHORITY_ORDER)
        click.echo(header)
        for scope in SCOPE_ORDER:
            cells = []
            for mode in AUTHORITY_ORDER:
                st = matrix[(scope, mode)]
                rate = f"{st.success_rate:.0%}" if st.success_rate is not None else "-"
                cells.append(f"{st.count:>12} {rate:>7}")
            click.echo(f"  {scope.value:<10}" + "".join(cells))
    if group in ("vectors", "all"):
        click.echo("attack vectors:")
        for vector, st in attack_vector_stats(records).items():
            click.echo(
                f"  {vector:<20} {st.count:>5} {reporting.format_usd(st.loss_usd):>22}"
            )


@main.command()
@click.option("--posts", "posts_path", type=click.Path(exists=True), default=None,
              help="Text file, one post per line, scored with the bundled lexicon.")
@click.option("--scores", "scores_json", default=None,
              help="JSON array of precomputed compound scores.")
@fails_cleanly
def sentiment(posts_path, scores_json):
    """Aggregate community sentiment into a standing-cost multiplier."""
    if (posts_path is None) == (scores_json is None):
        raise click.UsageError("provide exactly one of --posts or --scores")
    if posts_path:
        lines = [l for l in Path(posts_path).read_text("utf-8").splitlines() if l.strip()]
        values = [score_post(line) for line in lines]
    else:
        values = [float(v) for v in json.loads(scores_json)]
    mean = aggregate(values)
    click.echo(
        reporting.canonical_json(
            {
                "count": len(values),
                "mean_compound": mean,
                "cost_multiplier": cost_multiplier(mean),
            }
        )
    )


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8322, show_default=True)
@click.option("--calibration", "calibration_path", type=click.Path(exists=True))
@fails_cleanly
def serve(host, port, calibration_path):
    """Run the JSON service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(_load_cal(calibration_path)), host=host, port=port)


if __name__ == "__main__":
    main()
