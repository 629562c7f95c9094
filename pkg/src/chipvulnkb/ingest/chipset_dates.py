"""Parser for chipset release-date tables."""

from __future__ import annotations

import re
from datetime import date

from ..domain import ChipsetModel, DomainError, Manufacturer, normalize_chipset_name
from ..htmlutil import parse_html, table_rows
from ..serialize import parse_date
from .base import ParseError, SourceDocument, ValidationIssue

_HEADER = ["Manufacturer", "Model", "Marketing name", "Released"]

_QUARTER = re.compile(r"^Q([1-4])\s+(\d{4})$")


def release_date_from_text(raw: str) -> date:
    """Parse an exact date or a quarter; quarters map to their first day."""
    text = raw.strip()
    m = _QUARTER.match(text)
    if m:
        quarter, year = int(m.group(1)), int(m.group(2))
        return date(year, (quarter - 1) * 3 + 1, 1)
    return parse_date(text, rule="release-date-format")


def parse_chipset_release_dates(
    doc: SourceDocument,
) -> tuple[list[ChipsetModel], list[ValidationIssue]]:
    root = parse_html(doc.body)
    for table in root.find_all("table"):
        rows = table_rows(table)
        if rows and rows[0] == _HEADER:
            return _parse_rows(rows[1:])
    raise ParseError(f"no release-date table with header {_HEADER!r}")


def _parse_rows(rows: list[list[str]]):
    chipsets: list[ChipsetModel] = []
    issues: list[ValidationIssue] = []
    for row in rows:
        if len(row) != 4:
            issues.append(ValidationIssue.reject("row", "cell-count", " | ".join(row)))
            continue
        manufacturer_raw, model_raw, marketing, released = (c.strip() for c in row)
        try:
            manufacturer = Manufacturer(manufacturer_raw)
        except ValueError:
            issues.append(
                ValidationIssue.reject("manufacturer", "manufacturer-unknown", manufacturer_raw)
            )
            continue
        if not released:
            issues.append(ValidationIssue.reject("release_date", "date-missing", model_raw))
            continue
        try:
            release = release_date_from_text(released)
        except DomainError as exc:
            issues.append(ValidationIssue.reject("release_date", exc.rule, released))
            continue
        try:
            model_number = normalize_chipset_name(model_raw)
        except DomainError as exc:
            issues.append(ValidationIssue.reject("model", exc.rule, model_raw))
            continue
        chipsets.append(
            ChipsetModel(
                manufacturer=manufacturer,
                model_number=model_number,
                release_date=release,
                marketing_name=marketing or None,
            )
        )
    return chipsets, issues
