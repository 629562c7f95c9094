"""Parser for single-CVE NVD feed documents (API 2.0 JSON shape)."""

from __future__ import annotations

import json

from ..domain import SourceCategory, VantagePoint, VantagePointRecord
from .base import ParseError, SourceDocument, ValidationIssue, check_cve, check_publication_date

# Preference order: v3.x metrics supersede v2 when both are present.
_METRIC_KEYS = (
    ("cvssMetricV31", "3.1"),
    ("cvssMetricV30", "3.0"),
    ("cvssMetricV2", "2.0"),
)


def parse_nvd_record(
    doc: SourceDocument,
) -> tuple[VantagePointRecord | None, list[ValidationIssue]]:
    try:
        payload = json.loads(doc.body)
        entry = payload["vulnerabilities"][0]["cve"]
    except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
        raise ParseError(f"not a single-CVE NVD feed document: {exc}") from exc

    issues: list[ValidationIssue] = []
    cve = check_cve(str(entry.get("id", "")), issues)

    published = None
    raw_published = str(entry.get("published", ""))
    if raw_published:
        published = check_publication_date(raw_published.split("T")[0], issues)
    else:
        issues.append(ValidationIssue.reject("publication_date", "missing-field", ""))

    description = ""
    for item in entry.get("descriptions", []):
        if item.get("lang") == "en":
            description = item.get("value", "")
            break

    severity = None
    severity_version = None
    metrics = entry.get("metrics", {})
    for key, version in _METRIC_KEYS:
        candidates = metrics.get(key) or []
        if candidates:
            raw_score = candidates[0].get("cvssData", {}).get("baseScore")
            if raw_score is None:
                continue
            score = round(float(raw_score), 1)
            if not 0.0 <= score <= 10.0:
                issues.append(
                    ValidationIssue.reject("severity", "severity-range", str(raw_score))
                )
            else:
                severity = score
                severity_version = version
            break

    chipset_strings = _cpe_products(entry)
    if not chipset_strings:
        # Not every chipset vulnerability carries a CPE; absence is noteworthy
        # but not disqualifying.
        issues.append(ValidationIssue.warn("affected_chipsets", "cpe-missing", ""))

    if any(i.severity == "reject" for i in issues) or cve is None or published is None:
        return None, issues

    record = VantagePointRecord(
        source=SourceCategory.NVD,
        vantage_point=VantagePoint.NVD,
        cve=cve,
        publication_date=published,
        description=description,
        severity=severity,
        severity_version=severity_version,
        affected_chipset_strings=chipset_strings,
    )
    return record, issues


def _cpe_products(entry: dict) -> tuple[str, ...]:
    products: list[str] = []
    for config in entry.get("configurations", []):
        for node in config.get("nodes", []):
            for match in node.get("cpeMatch", []):
                criteria = match.get("criteria", "")
                parts = criteria.split(":")
                if len(parts) < 5 or parts[0] != "cpe":
                    continue
                product = parts[4]
                if product.endswith("_firmware"):
                    product = product[: -len("_firmware")]
                if product and product not in products:
                    products.append(product)
    return tuple(products)
