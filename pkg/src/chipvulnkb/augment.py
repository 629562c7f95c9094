"""Component/location normalization via key terms and discovery attribution.

Chipset manufacturers name the same functionality differently (Mediatek's TEE
is "Kinibi", Qualcomm's is "QSEE"); a curated per-CM key-term table maps those
names onto the common component nomenclature and, where the term implies it,
onto a firmware/driver location. Matching is case-insensitive substring with
longest-match precedence; length ties across different targets are a curation
error, never silently resolved.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from importlib import resources
from pathlib import Path

from .domain import (
    Attribution,
    Component,
    ComponentKeyTerm,
    DomainError,
    Location,
    Manufacturer,
    SourceCategory,
    VantagePointRecord,
    Vulnerability,
)


class AmbiguityError(ValueError):
    """Two equally long key terms point at different targets."""

    def __init__(self, text: str, terms: list[str]):
        super().__init__(
            f"ambiguous key terms for {text!r}: {', '.join(sorted(terms))}; "
            "curate the key-term table to resolve"
        )
        self.terms = sorted(terms)


class UnresolvablePatchDate(ValueError):
    """No CM bulletin record exists, so the patch date cannot be resolved."""


@dataclass(frozen=True)
class KeyTermTable:
    entries: tuple[ComponentKeyTerm, ...]

    def __post_init__(self):
        seen: dict[tuple[str, str], ComponentKeyTerm] = {}
        for entry in self.entries:
            key = (entry.manufacturer.value, entry.term.casefold())
            if key in seen:
                raise DomainError(
                    "key-term-duplicate",
                    f"duplicate key term {entry.term!r} for {entry.manufacturer.value}",
                )
            seen[key] = entry
        reachable = {entry.component for entry in self.entries}
        missing = set(Component) - reachable
        if missing:
            raise DomainError(
                "key-term-coverage",
                "components unreachable from the key-term table: "
                + ", ".join(sorted(c.value for c in missing)),
            )

    def for_manufacturer(self, cm: Manufacturer) -> list[ComponentKeyTerm]:
        return [e for e in self.entries if e.manufacturer == cm]


def load_key_terms(path: str | Path | None = None) -> KeyTermTable:
    """Load the key-term table; defaults to the curated table shipped in-package.

    File format: ``manufacturer | term | component | location?`` per line,
    ``#`` starts a comment, blank lines ignored.
    """
    if path is None:
        text = (
            resources.files("chipvulnkb").joinpath("data/key_terms.txt").read_text("utf-8")
        )
    else:
        text = Path(path).read_text(encoding="utf-8")
    entries: list[ComponentKeyTerm] = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [part.strip() for part in line.split("|")]
        if len(parts) not in (3, 4):
            raise DomainError(
                "key-term-format", f"line {lineno}: expected 3 or 4 fields, got {len(parts)}"
            )
        manufacturer = Manufacturer(parts[0])
        component = Component(parts[2])
        location = None
        if len(parts) == 4 and parts[3] and parts[3] != "-":
            location = Location(parts[3])
            if location == Location.UNKNOWN:
                raise DomainError(
                    "key-term-location", f"line {lineno}: Unknown is not a storable location"
                )
        entries.append(ComponentKeyTerm(manufacturer, parts[1], component, location))
    return KeyTermTable(tuple(entries))


def _longest_match(
    text: str, candidates: list[ComponentKeyTerm], target: str
) -> ComponentKeyTerm | None:
    folded = text.casefold()
    matches = [e for e in candidates if e.term.casefold() in folded]
    if not matches:
        return None
    best_len = max(len(e.term) for e in matches)
    best = [e for e in matches if len(e.term) == best_len]
    targets = {getattr(e, target) for e in best}
    if len(targets) > 1:
        raise AmbiguityError(text, [e.term for e in best])
    return best[0]


def classify_component(
    component_raw: str, cm: Manufacturer, table: KeyTermTable
) -> Component | None:
    """Map a CM-specific component string onto the common nomenclature.

    Returns None when no key term of that CM matches (the Unknown outcome).
    """
    if not component_raw:
        return None
    winner = _longest_match(component_raw, table.for_manufacturer(cm), "component")
    return winner.component if winner else None


def classify_location(text: str, cm: Manufacturer, table: KeyTermTable) -> Location:
    if not text:
        return Location.UNKNOWN
    candidates = [e for e in table.for_manufacturer(cm) if e.location is not None]
    winner = _longest_match(text, candidates, "location")
    return winner.location if winner else Location.UNKNOWN


def classify_discovery(record: VantagePointRecord, cm: Manufacturer) -> Attribution:
    """Attribute a CM bulletin record to internal or external discovery.

    Qualcomm states the distinction explicitly; the other CMs credit external
    discoverers by name but never their own employees, so a named credit means
    external and anything else stays Unknown.
    """
    if record.source != SourceCategory.CM_BULLETIN:
        raise DomainError(
            "discovery-source", "discovery attribution applies to CM bulletin records"
        )
    if cm == Manufacturer.QUALCOMM and record.internal_flag is not None:
        return Attribution.INTERNAL if record.internal_flag else Attribution.EXTERNAL
    if record.credit:
        return Attribution.EXTERNAL
    return Attribution.UNKNOWN


def resolve_patch_date(vuln: Vulnerability) -> date:
    """Earliest CM bulletin publication date; the patch date used everywhere."""
    dates = [
        r.publication_date
        for r in vuln.records
        if r.source == SourceCategory.CM_BULLETIN
    ]
    if not dates:
        raise UnresolvablePatchDate(f"{vuln.cve} has no CM bulletin record")
    return min(dates)


def derive_fields(
    records: tuple[VantagePointRecord, ...], table: KeyTermTable
) -> dict:
    """Recompute all derived vulnerability fields from the stored records.

    Deterministic in the record set (records are ordered by publication date
    first), hence idempotent under re-runs.
    """
    ordered = sorted(
        records, key=lambda r: (r.publication_date, r.vantage_point.value, str(r.cve))
    )
    cm_records = [r for r in ordered if r.source == SourceCategory.CM_BULLETIN]

    patch_date = min((r.publication_date for r in cm_records), default=None)
    report_dates = [r.report_date for r in cm_records if r.report_date is not None]
    report_date = min(report_dates, default=None)

    cm = None
    if cm_records:
        cm = cm_records[0].manufacturer

    component: Component | None = None
    for record in cm_records:
        if record.component_raw and record.manufacturer:
            component = classify_component(record.component_raw, record.manufacturer, table)
            if component is not None:
                break

    location = Location.UNKNOWN
    for record in ordered:
        record_cm = record.manufacturer or cm
        if record_cm is None:
            continue
        text = " ".join(filter(None, (record.component_raw, record.description)))
        location = classify_location(text, record_cm, table)
        if location != Location.UNKNOWN:
            break

    attribution = Attribution.UNKNOWN
    seen = {
        classify_discovery(r, r.manufacturer)
        for r in cm_records
        if r.manufacturer is not None
    }
    if Attribution.EXTERNAL in seen:
        attribution = Attribution.EXTERNAL
    elif Attribution.INTERNAL in seen:
        attribution = Attribution.INTERNAL

    return {
        "component": component,
        "location": location,
        "attribution": attribution,
        "patch_date": patch_date,
        "report_date": report_date,
    }
