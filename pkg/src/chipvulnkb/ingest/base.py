"""Recorded documents, per-field plausibility checks, and the fetch boundary."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from pathlib import Path

from ..domain import (
    CveId,
    DomainError,
    EARLIEST_PLAUSIBLE_DATE,
    VantagePoint,
    validate_cve,
)
from ..serialize import parse_date


class ParseError(ValueError):
    """Document does not match the expected structure of its vantage point."""


@dataclass(frozen=True, slots=True)
class SourceDocument:
    vantage_point: VantagePoint
    retrieved_at: date
    body: str
    format: str

    def __post_init__(self):
        if not self.body:
            raise DomainError("document-empty", "document body is empty")
        if self.format != self.vantage_point.format:
            raise DomainError(
                "document-format",
                f"{self.vantage_point.value} documents are {self.vantage_point.format}, "
                f"got {self.format}",
            )


@dataclass(frozen=True, slots=True)
class ValidationIssue:
    field: str
    rule: str
    raw_value: str
    severity: str  # "reject" | "warn"

    @classmethod
    def reject(cls, field: str, rule: str, raw_value: str) -> "ValidationIssue":
        return cls(field, rule, raw_value, "reject")

    @classmethod
    def warn(cls, field: str, rule: str, raw_value: str) -> "ValidationIssue":
        return cls(field, rule, raw_value, "warn")


def read_document(path: str | Path, vantage_point: VantagePoint) -> SourceDocument:
    """Load a recorded document from disk.

    This is the pluggable fetch boundary: live collection would produce the
    same SourceDocument values from URLs instead of files.
    """
    path = Path(path)
    body = path.read_text(encoding="utf-8")
    fmt = "json" if path.suffix.lower() == ".json" else "html"
    return SourceDocument(vantage_point, date.today(), body, fmt)


def check_cve(raw: str, issues: list[ValidationIssue]) -> CveId | None:
    try:
        return validate_cve(raw)
    except DomainError as exc:
        issues.append(ValidationIssue.reject("cve", exc.rule, raw))
        return None


def check_severity(raw: str, issues: list[ValidationIssue]) -> float | None:
    text = raw.strip()
    if not text or text in ("-", "N/A", "NA"):
        return None
    try:
        score = round(float(text), 1)
    except ValueError:
        issues.append(ValidationIssue.reject("severity", "severity-number", raw))
        return None
    if not 0.0 <= score <= 10.0:
        issues.append(ValidationIssue.reject("severity", "severity-range", raw))
        return None
    return score


def check_publication_date(raw: str, issues: list[ValidationIssue]) -> date | None:
    try:
        value = parse_date(raw)
    except DomainError as exc:
        issues.append(ValidationIssue.reject("publication_date", exc.rule, raw))
        return None
    if value < EARLIEST_PLAUSIBLE_DATE:
        issues.append(
            ValidationIssue.reject("publication_date", "publication-date-window", raw)
        )
        return None
    if value > date.today():
        issues.append(
            ValidationIssue.reject("publication_date", "publication-date-future", raw)
        )
        return None
    return value


def split_list(raw: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in raw.split(",") if part.strip())
