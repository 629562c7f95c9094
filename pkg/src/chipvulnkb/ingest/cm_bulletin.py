"""Parsers for the chipset manufacturer security-bulletin families.

Each manufacturer publishes a recurring HTML structure; extraction is keyed
on the literal field labels of that structure. Two dialects cover the four
CMs: per-entry field tables (label cell followed by value cell) and a single
grid table with one header row and one row per CVE. Unknown labels are
surfaced as reject issues so structural changes never pass silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

from ..domain import (
    Manufacturer,
    SourceCategory,
    VantagePoint,
    VantagePointRecord,
)
from ..htmlutil import Element, parse_html, table_rows
from ..serialize import parse_date
from .base import (
    ParseError,
    SourceDocument,
    ValidationIssue,
    check_cve,
    check_publication_date,
    check_severity,
    split_list,
)


@dataclass(frozen=True)
class BulletinDialect:
    vantage_point: VantagePoint
    layout: str  # "field-table" | "grid"
    labels: dict[str, str]  # literal label -> canonical descriptor

    @property
    def identifier_label(self) -> str:
        return next(k for k, v in self.labels.items() if v == "identifier")


_QUALCOMM = BulletinDialect(
    VantagePoint.QUALCOMM_BULLETIN,
    "field-table",
    {
        "CVE ID": "identifier",
        "Date Published": "publication_date",
        "Technology Area": "component",
        "CVSS Score": "severity",
        "CVSS Version": "severity_version",
        "Severity Rating": "severity_label",
        "Description": "description",
        "Affected Chipsets": "affected_chipsets",
        "Discovery": "discovery",
        "Reported By": "credit",
        "Date Reported": "report_date",
    },
)

_SAMSUNG_SEMI = BulletinDialect(
    VantagePoint.SAMSUNG_SEMI_BULLETIN,
    "field-table",
    {
        "CVE ID": "identifier",
        "Release Date": "publication_date",
        "Affected Component": "component",
        "CVSS Base Score": "severity",
        "Severity": "severity_label",
        "Description": "description",
        "Affected Models": "affected_chipsets",
        "Reported By": "credit",
        "Reported On": "report_date",
    },
)

_MEDIATEK = BulletinDialect(
    VantagePoint.MEDIATEK_BULLETIN,
    "grid",
    {
        "CVE": "identifier",
        "Severity": "severity_label",
        "CVSS Score": "severity",
        "Published": "publication_date",
        "Affected Chipsets": "affected_chipsets",
        "Component": "component",
        "Description": "description",
        "Acknowledged": "credit",
    },
)

_SAMSUNG_MOBILE = BulletinDialect(
    VantagePoint.SAMSUNG_MOBILE_BULLETIN,
    "grid",
    {
        "CVE ID": "identifier",
        "Severity": "severity_label",
        "CVSS Score": "severity",
        "Published": "publication_date",
        "Affected Chipsets": "affected_chipsets",
        "Component": "component",
        "Description": "description",
        "Credit": "credit",
        "Reported On": "report_date",
    },
)

_UNISOC = BulletinDialect(
    VantagePoint.UNISOC_BULLETIN,
    "grid",
    {
        "CVE ID": "identifier",
        "Severity Score": "severity",
        "Published": "publication_date",
        "Affected Chipsets": "affected_chipsets",
        "Module": "component",
        "Description": "description",
        "Acknowledgement": "credit",
    },
)

DIALECTS: dict[Manufacturer, tuple[BulletinDialect, ...]] = {
    Manufacturer.QUALCOMM: (_QUALCOMM,),
    Manufacturer.MEDIATEK: (_MEDIATEK,),
    Manufacturer.SAMSUNG: (_SAMSUNG_MOBILE, _SAMSUNG_SEMI),
    Manufacturer.UNISOC: (_UNISOC,),
}


def dialect_for(vantage_point: VantagePoint) -> BulletinDialect:
    for dialects in DIALECTS.values():
        for dialect in dialects:
            if dialect.vantage_point == vantage_point:
                return dialect
    raise ParseError(f"{vantage_point.value} is not a CM bulletin family")


def parse_cm_bulletin(
    doc: SourceDocument, cm: Manufacturer
) -> tuple[list[VantagePointRecord], list[ValidationIssue]]:
    """Extract one record per CVE entry from a CM bulletin capture."""
    dialect = dialect_for(doc.vantage_point)
    if dialect.vantage_point.manufacturer != cm:
        raise ParseError(
            f"document family {doc.vantage_point.value} does not belong to {cm.value}"
        )
    root = parse_html(doc.body)
    if dialect.layout == "field-table":
        entries = _field_table_entries(root, dialect)
    else:
        entries = _grid_entries(root, dialect)

    records: list[VantagePointRecord] = []
    issues: list[ValidationIssue] = []
    for fields, entry_issues in entries:
        issues.extend(entry_issues)
        if any(i.severity == "reject" for i in entry_issues):
            continue
        record = _build_record(fields, dialect, cm, issues)
        if record is not None:
            records.append(record)
    return records, issues


Entry = tuple[dict[str, str], list[ValidationIssue]]


def _field_table_entries(root: Element, dialect: BulletinDialect) -> list[Entry]:
    anchor = dialect.identifier_label
    entries: list[Entry] = []
    saw_anchor = False
    for table in root.find_all("table"):
        rows = table_rows(table)
        labelled = [row for row in rows if len(row) >= 2]
        if not any(row[0] == anchor for row in labelled):
            continue
        saw_anchor = True
        fields: dict[str, str] = {}
        entry_issues: list[ValidationIssue] = []
        for row in labelled:
            label, value = row[0], row[1]
            descriptor = dialect.labels.get(label)
            if descriptor is None:
                entry_issues.append(
                    ValidationIssue.reject("labels", "unknown-label", label)
                )
                continue
            fields[descriptor] = value
        entries.append((fields, entry_issues))
    if not saw_anchor:
        raise ParseError(f"no table containing the label {anchor!r}")
    return entries


def _grid_entries(root: Element, dialect: BulletinDialect) -> list[Entry]:
    anchor = dialect.identifier_label
    for table in root.find_all("table"):
        rows = table_rows(table)
        if not rows or anchor not in rows[0]:
            continue
        header = rows[0]
        header_issues: list[ValidationIssue] = [
            ValidationIssue.reject("labels", "unknown-label", label)
            for label in header
            if label not in dialect.labels
        ]
        descriptors = [dialect.labels.get(label) for label in header]
        entries: list[Entry] = []
        for row in rows[1:]:
            fields: dict[str, str] = {}
            entry_issues = list(header_issues)
            if len(row) != len(header):
                entry_issues.append(
                    ValidationIssue.reject("row", "cell-count", " | ".join(row))
                )
            for descriptor, value in zip(descriptors, row):
                if descriptor is not None:
                    fields[descriptor] = value
            entries.append((fields, entry_issues))
        return entries
    raise ParseError(f"no table with a header containing {anchor!r}")


def _build_record(
    fields: dict[str, str],
    dialect: BulletinDialect,
    cm: Manufacturer,
    issues: list[ValidationIssue],
) -> VantagePointRecord | None:
    entry_issues: list[ValidationIssue] = []

    cve = None
    if "identifier" not in fields:
        entry_issues.append(ValidationIssue.reject("cve", "missing-label", ""))
    else:
        cve = check_cve(fields["identifier"], entry_issues)

    publication = None
    if "publication_date" not in fields:
        entry_issues.append(
            ValidationIssue.reject("publication_date", "missing-label", "")
        )
    else:
        publication = check_publication_date(fields["publication_date"], entry_issues)

    severity = check_severity(fields.get("severity", ""), entry_issues)

    internal_flag = None
    discovery = fields.get("discovery", "").strip()
    if discovery:
        if discovery not in ("Internal", "External"):
            entry_issues.append(
                ValidationIssue.reject("discovery", "discovery-value", discovery)
            )
        else:
            internal_flag = discovery == "Internal"

    report_date: date | None = None
    raw_report = fields.get("report_date", "").strip()
    if raw_report:
        try:
            report_date = parse_date(raw_report)
        except Exception:
            entry_issues.append(
                ValidationIssue.reject("report_date", "date-format", raw_report)
            )

    issues.extend(entry_issues)
    if any(i.severity == "reject" for i in entry_issues) or cve is None or publication is None:
        return None

    return VantagePointRecord(
        source=SourceCategory.CM_BULLETIN,
        vantage_point=dialect.vantage_point,
        cve=cve,
        publication_date=publication,
        description=fields.get("description", ""),
        severity=severity,
        severity_version=fields.get("severity_version", "").strip() or None,
        severity_label=fields.get("severity_label", "").strip() or None,
        affected_chipset_strings=split_list(fields.get("affected_chipsets", "")),
        component_raw=fields.get("component", "").strip() or None,
        credit=fields.get("credit", "").strip() or None,
        internal_flag=internal_flag,
        report_date=report_date,
        manufacturer=cm,
    )
