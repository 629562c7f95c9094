"""Operator command line: ingest fixtures, build the knowledge base, report, serve.

Configuration precedence: flags beat CHIPVULN_* environment variables, which
beat the JSON config file given via --config, which beats built-in defaults.
Exit codes: 0 success, 1 validation rejects, 2 usage errors.
"""

from __future__ import annotations

import json
import sys
from datetime import date
from pathlib import Path

import click

from . import analytics
from .analytics import AnalyticsConfig
from .augment import load_key_terms
from .domain import DomainError, VantagePoint
from .ingest import (
    ParseError,
    parse_aosp_bulletin,
    parse_cm_bulletin,
    parse_chipset_release_dates,
    parse_device_catalog,
    parse_nvd_record,
    parse_oem_changelog,
    read_document,
)
from .kb import KnowledgeBase
from .picker import PickRequest, PickRequestError, pick_devices
from .serialize import canonical_json, parse_date

SOURCE_KINDS = tuple(v.value for v in VantagePoint)


def _load_config_file(ctx: click.Context, param, value):
    if value:
        defaults = json.loads(Path(value).read_text(encoding="utf-8"))
        ctx.default_map = dict(defaults)
    return value


@click.group(context_settings={"auto_envvar_prefix": "CHIPVULN"})
@click.option(
    "--config",
    type=click.Path(exists=True, dir_okay=False),
    callback=_load_config_file,
    expose_value=False,
    is_eager=True,
    help="JSON config file; keys match option names.",
)
@click.option("--store", default="chipvulnkb.sqlite", show_default=True, help="Store path.")
@click.option("--key-terms", "key_terms", type=click.Path(), default=None,
              help="Key-term table file (defaults to the shipped table).")
@click.option("--data-dir", type=click.Path(), default=None,
              help="Base directory for relative document paths.")
@click.pass_context
def main(ctx, store, key_terms, data_dir):
    """Chipset vulnerability knowledge base."""
    ctx.ensure_object(dict)
    ctx.obj["store"] = store
    ctx.obj["key_terms"] = key_terms
    ctx.obj["data_dir"] = data_dir


def _open_kb(ctx) -> KnowledgeBase:
    terms = load_key_terms(ctx.obj["key_terms"]) if ctx.obj["key_terms"] else None
    return KnowledgeBase(ctx.obj["store"], key_terms=terms)


def _resolve_path(ctx, path: str) -> Path:
    candidate = Path(path)
    data_dir = ctx.obj.get("data_dir")
    if not candidate.is_absolute() and data_dir:
        in_data = Path(data_dir) / candidate
        if in_data.exists():
            return in_data
    return candidate


def _parse_document(kind: VantagePoint, doc, kb: KnowledgeBase | None):
    """Run the right parser; returns (entities, issues) without storing."""
    if kind.category is not None and kind.category.value == "CmBulletin":
        return parse_cm_bulletin(doc, kind.manufacturer)
    if kind == VantagePoint.NVD:
        record, issues = parse_nvd_record(doc)
        return ([record] if record else []), issues
    if kind == VantagePoint.AOSP_BULLETIN:
        return [parse_aosp_bulletin(doc)], []
    if kind.oem is not None:
        return parse_oem_changelog(doc, kind.oem)
    if kind == VantagePoint.DEVICE_CATALOG:
        chipset_dates = {}
        if kb is not None:
            chipset_dates = {
                model: date.fromisoformat(release)
                for model, release in kb.conn.execute(
                    "SELECT model_number, release_date FROM chipsets"
                    " WHERE release_date IS NOT NULL"
                )
            }
        return parse_device_catalog(doc, chipset_dates)
    if kind == VantagePoint.CHIPSET_RELEASE_DATES:
        return parse_chipset_release_dates(doc)
    raise click.UsageError(f"no parser for source kind {kind.value}")


def _store_entities(kb: KnowledgeBase, kind: VantagePoint, entities) -> int:
    from .domain import (
        AospBulletin,
        ChipsetModel,
        DeviceUpdate,
        SmartphoneModel,
        VantagePointRecord,
    )

    stored = 0
    for entity in entities:
        if isinstance(entity, VantagePointRecord):
            kb.upsert_vulnerability(entity)
        elif isinstance(entity, ChipsetModel):
            kb.register_chipset(entity)
        elif isinstance(entity, SmartphoneModel):
            kb.register_smartphone(entity)
        elif isinstance(entity, DeviceUpdate):
            kb.register_update(entity)
        elif isinstance(entity, AospBulletin):
            kb.register_aosp_bulletin(entity)
        else:
            raise click.ClickException(f"unexpected entity {entity!r}")
        stored += 1
    return stored


def _print_issues(issues) -> int:
    rejects = 0
    for issue in issues:
        rejects += issue.severity == "reject"
        click.echo(
            f"  [{issue.severity}] {issue.field}: {issue.rule} ({issue.raw_value})",
            err=True,
        )
    return rejects


@main.command()
@click.option("--source", "kind", required=True, type=click.Choice(SOURCE_KINDS))
@click.argument("paths", nargs=-1, required=True, type=click.Path())
@click.pass_context
def ingest(ctx, kind, paths):
    """Parse recorded documents and store the extracted entities."""
    vantage = VantagePoint(kind)
    kb = _open_kb(ctx)
    rejects = 0
    for path in paths:
        resolved = _resolve_path(ctx, path)
        try:
            doc = read_document(resolved, vantage)
            entities, issues = _parse_document(vantage, doc, kb)
        except (ParseError, DomainError, OSError) as exc:
            raise click.ClickException(f"{resolved}: {exc}") from exc
        stored = _store_entities(kb, vantage, entities)
        click.echo(f"{resolved}: stored {stored} entities", err=True)
        rejects += _print_issues(issues)
    kb.close()
    if rejects:
        click.echo(f"{rejects} reject-level issues", err=True)
        ctx.exit(1)


@main.command()
@click.option("--source", "kind", required=True, type=click.Choice(SOURCE_KINDS))
@click.argument("path", type=click.Path())
@click.pass_context
def validate(ctx, kind, path):
    """Dry-run a parser and print its validation issues."""
    vantage = VantagePoint(kind)
    resolved = _resolve_path(ctx, path)
    try:
        doc = read_document(resolved, vantage)
        entities, issues = _parse_document(vantage, doc, None)
    except (ParseError, DomainError, OSError) as exc:
        raise click.ClickException(f"{resolved}: {exc}") from exc
    click.echo(f"{resolved}: {len(entities)} entities")
    rejects = _print_issues(issues)
    if rejects:
        ctx.exit(1)


@main.command()
@click.pass_context
def augment(ctx):
    """Recompute component, location, attribution and dates for every CVE."""
    kb = _open_kb(ctx)
    count = kb.augment_all()
    kb.close()
    click.echo(f"re-derived {count} vulnerabilities", err=True)


@main.command()
@click.pass_context
def link(ctx):
    """Resolve chipset strings into foreign-key links."""
    kb = _open_kb(ctx)
    report = kb.link_all()
    kb.close()
    click.echo(
        f"created {report.links_created} vulnerability-chipset links; "
        f"{report.devices_resolved} devices resolved; "
        f"{len(report.unresolved)} unresolved strings; "
        f"{len(report.devices_unresolved)} unresolved devices",
        err=True,
    )


def _analytics_options(fn):
    fn = click.option("--cutoff-date", default=None, help="Unmitigated-report cutoff date.")(fn)
    fn = click.option("--window-days", type=int, default=None, help="Propagation window.")(fn)
    fn = click.option("--threshold-days", type=int, default=None, help="Disclosure threshold.")(fn)
    fn = click.option(
        "--mode",
        type=click.Choice(["strict", "paper"]),
        default=None,
        help="Discovery attribution mode (strict keeps Unknown separate).",
    )(fn)
    return fn


def _build_config(cutoff_date, window_days, threshold_days, mode) -> AnalyticsConfig:
    base = AnalyticsConfig()
    return AnalyticsConfig(
        cutoff_date=parse_date(cutoff_date) if cutoff_date else base.cutoff_date,
        window_days=window_days if window_days is not None else base.window_days,
        threshold_days=threshold_days if threshold_days is not None else base.threshold_days,
        discovery_mode=mode or base.discovery_mode,
    )


@main.command()
@click.argument("rq", type=click.Choice(["rq1", "rq2", "rq3", "rq4", "all"]))
@click.option("--format", "fmt", type=click.Choice(["text", "machine"]), default="text")
@_analytics_options
@click.pass_context
def report(ctx, rq, fmt, cutoff_date, window_days, threshold_days, mode):
    """Compute lifecycle reports from the current knowledge base."""
    kb = _open_kb(ctx)
    snap = kb.snapshot()
    kb.close()
    config = _build_config(cutoff_date, window_days, threshold_days, mode)
    payload = analytics.report_bundle(rq, snap, config)
    if fmt == "machine":
        click.echo(canonical_json(payload))
    else:
        click.echo(analytics.render_text(payload))


@main.command()
@click.argument("cve")
@click.option("--format", "fmt", type=click.Choice(["text", "machine"]), default="text")
@click.pass_context
def impact(ctx, cve, fmt):
    """Affected chipsets, devices and per-OEM counts for one CVE."""
    kb = _open_kb(ctx)
    snap = kb.snapshot()
    kb.close()
    try:
        payload = analytics.impact_report(cve, snap)
    except (analytics.UnknownCveError, DomainError) as exc:
        raise click.ClickException(f"unknown CVE: {exc}") from exc
    if fmt == "machine":
        click.echo(canonical_json(payload))
    else:
        click.echo(analytics.render_text(payload))


@main.command()
@click.option("--k", "k", type=int, required=True, help="Number of devices to select.")
@click.option("--oem", "oems", multiple=True, help="Restrict to these OEMs.")
@click.option("--cm", "cms", multiple=True, help="Restrict to these chipset manufacturers.")
@click.option("--released-from", default=None)
@click.option("--released-to", default=None)
@click.option("--lock", "locked", multiple=True, help="Pre-selected device ids.")
@click.option("--format", "fmt", type=click.Choice(["text", "machine"]), default="text")
@click.pass_context
def pick(ctx, k, oems, cms, released_from, released_to, locked, fmt):
    """Greedy coverage-maximizing device selection."""
    kb = _open_kb(ctx)
    snap = kb.snapshot()
    kb.close()
    payload = {"k": k, "locked": list(locked)}
    if oems:
        payload["oems"] = list(oems)
    if cms:
        payload["manufacturers"] = list(cms)
    if released_from:
        payload["released_from"] = released_from
    if released_to:
        payload["released_to"] = released_to
    try:
        result = pick_devices(PickRequest.from_payload(payload), snap)
    except PickRequestError as exc:
        raise click.UsageError(str(exc)) from exc
    if fmt == "machine":
        click.echo(canonical_json(result.to_payload()))
    else:
        click.echo(analytics.render_text(result.to_payload()))


@main.command()
@click.argument("path", type=click.Path())
@click.pass_context
def export(ctx, path):
    """Write the knowledge base as per-table line-delimited JSON."""
    kb = _open_kb(ctx)
    kb.export_dir(path)
    kb.close()
    click.echo(f"exported to {path}", err=True)


@main.command("import")
@click.argument("path", type=click.Path(exists=True, file_okay=False))
@click.pass_context
def import_kb(ctx, path):
    """Load a previous export into the store."""
    kb = _open_kb(ctx)
    kb.import_dir(path)
    kb.close()
    click.echo(f"imported from {path}", err=True)


@main.command()
@click.option("--bind", default="127.0.0.1:8300", show_default=True)
@click.option("--cors-origin", "cors_origins", multiple=True, default=("*",))
@_analytics_options
@click.pass_context
def serve(ctx, bind, cors_origins, cutoff_date, window_days, threshold_days, mode):
    """Serve the HTTP API over the current knowledge base snapshot."""
    import uvicorn

    from .api import create_app

    kb = _open_kb(ctx)
    snap = kb.snapshot()
    kb.close()
    config = _build_config(cutoff_date, window_days, threshold_days, mode)
    app = create_app(snap, config, tuple(cors_origins))
    host, _, port = bind.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))


if __name__ == "__main__":
    sys.exit(main())
