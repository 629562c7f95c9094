"""Parser for the smartphone catalog (device, OEM, chipset, release date)."""

from __future__ import annotations

from datetime import date
from typing import Mapping

from ..domain import DomainError, SmartphoneModel, normalize_chipset_name
from ..htmlutil import parse_html, table_rows
from ..serialize import parse_date
from .base import ParseError, SourceDocument, ValidationIssue

_HEADER = ["Device", "OEM", "Chipset", "Released"]

# OEMs with no release since this date are treated as defunct and excluded,
# so stale devices do not bias update metrics.
OEM_ACTIVITY_CUTOFF = date(2022, 1, 1)


def parse_device_catalog(
    doc: SourceDocument,
    chipset_release_dates: Mapping[str, date] | None = None,
) -> tuple[list[SmartphoneModel], list[ValidationIssue]]:
    """Extract smartphone models, flagging devices of inactive OEMs.

    ``chipset_release_dates`` (normalized model number -> release date), when
    provided, enables the plausibility warning for devices released before
    their chipset existed.
    """
    root = parse_html(doc.body)
    for table in root.find_all("table"):
        rows = table_rows(table)
        if rows and rows[0] == _HEADER:
            return _parse_rows(rows[1:], chipset_release_dates or {})
    raise ParseError(f"no catalog table with header {_HEADER!r}")


def _parse_rows(rows: list[list[str]], chipset_dates: Mapping[str, date]):
    issues: list[ValidationIssue] = []
    parsed: list[SmartphoneModel] = []
    latest_release: dict[str, date] = {}

    for row in rows:
        if len(row) != 4:
            issues.append(ValidationIssue.reject("row", "cell-count", " | ".join(row)))
            continue
        device, oem, chipset, released = (cell.strip() for cell in row)
        if not chipset:
            issues.append(ValidationIssue.reject("chipset", "chipset-missing", device))
            continue
        try:
            release_date = parse_date(released)
        except DomainError as exc:
            issues.append(ValidationIssue.reject("release_date", exc.rule, released))
            continue
        try:
            normalized = normalize_chipset_name(chipset)
        except DomainError as exc:
            issues.append(ValidationIssue.reject("chipset", exc.rule, chipset))
            continue

        chipset_release = chipset_dates.get(normalized)
        if chipset_release is not None and release_date < chipset_release:
            issues.append(
                ValidationIssue.warn(
                    "release_date", "device-predates-chipset", f"{device} {released}"
                )
            )

        parsed.append(
            SmartphoneModel(
                oem=oem, device_name=device, chipset_string=chipset, release_date=release_date
            )
        )
        if oem not in latest_release or release_date > latest_release[oem]:
            latest_release[oem] = release_date

    models: list[SmartphoneModel] = []
    for model in parsed:
        if latest_release[model.oem] < OEM_ACTIVITY_CUTOFF:
            issues.append(
                ValidationIssue.warn(
                    "oem", "oem-inactive", f"{model.oem} {model.device_name}"
                )
            )
            continue
        models.append(model)
    return models, issues
