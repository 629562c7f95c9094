"""Parsers for per-device OEM update changelogs (HTML and JSON families)."""

from __future__ import annotations

import json
from datetime import date

from ..domain import CveId, DeviceUpdate, DomainError
from ..htmlutil import parse_html, table_rows
from ..serialize import parse_date
from .base import ParseError, SourceDocument, ValidationIssue, check_cve, split_list

_DEVICE_PREFIX = "Security updates for "
_GRID_HEADER = ["Release date", "Security patch level", "Fixed CVEs"]


def parse_oem_changelog(
    doc: SourceDocument, oem: str
) -> tuple[list[DeviceUpdate], list[ValidationIssue]]:
    if doc.format == "json":
        return _parse_json(doc, oem)
    return _parse_html(doc, oem)


def _parse_json(doc: SourceDocument, oem: str):
    try:
        payload = json.loads(doc.body)
        device = payload["device"]
        raw_updates = payload["updates"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(f"not a device changelog document: {exc}") from exc

    updates: list[DeviceUpdate] = []
    issues: list[ValidationIssue] = []
    for raw in raw_updates:
        released = str(raw.get("released", ""))
        spl = str(raw.get("spl", "") or "")
        cves = [str(c) for c in raw.get("cves", [])]
        update = _build_update(oem, device, released, spl, cves, issues)
        if update is not None:
            updates.append(update)
    return updates, issues


def _parse_html(doc: SourceDocument, oem: str):
    root = parse_html(doc.body)
    heading = root.find("h1")
    if heading is None or not heading.text().startswith(_DEVICE_PREFIX):
        raise ParseError(f"no heading starting with {_DEVICE_PREFIX!r}")
    device = heading.text()[len(_DEVICE_PREFIX) :].strip()

    for table in root.find_all("table"):
        rows = table_rows(table)
        if not rows or rows[0] != _GRID_HEADER:
            continue
        updates: list[DeviceUpdate] = []
        issues: list[ValidationIssue] = []
        for row in rows[1:]:
            if len(row) != 3:
                issues.append(ValidationIssue.reject("row", "cell-count", " | ".join(row)))
                continue
            released, spl, cves_raw = row
            update = _build_update(
                oem, device, released, spl, list(split_list(cves_raw)), issues
            )
            if update is not None:
                updates.append(update)
        return updates, issues
    raise ParseError(f"no update table with header {_GRID_HEADER!r}")


def _build_update(
    oem: str,
    device: str,
    released: str,
    spl: str,
    cves: list[str],
    issues: list[ValidationIssue],
) -> DeviceUpdate | None:
    local: list[ValidationIssue] = []

    release_date: date | None = None
    try:
        release_date = parse_date(released)
    except DomainError as exc:
        local.append(ValidationIssue.reject("release_date", exc.rule, released))

    spl_date: date | None = None
    if spl.strip() and spl.strip() != "-":
        try:
            spl_date = parse_date(spl.strip())
        except DomainError as exc:
            local.append(ValidationIssue.reject("spl_date", exc.rule, spl))

    explicit: set[CveId] = set()
    for raw_cve in cves:
        cve = check_cve(raw_cve, local)
        if cve is not None:
            explicit.add(cve)

    if not explicit and spl_date is None and not any(i.severity == "reject" for i in local):
        local.append(
            ValidationIssue.reject("evidence", "update-evidence", f"{device} {released}")
        )

    issues.extend(local)
    if any(i.severity == "reject" for i in local) or release_date is None:
        return None
    return DeviceUpdate(
        oem=oem,
        device_name=device,
        release_date=release_date,
        explicit_cves=frozenset(explicit),
        spl_date=spl_date,
    )
