"""Canonical serialization shared by golden fixtures, exports, reports and the API.

One format everywhere: JSON with sorted keys and compact separators, dates as
ISO strings, sets as sorted lists. Line-delimited variants put one record per
line. Byte-stable so exports and API payloads can be diffed.
"""

from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass
from datetime import date
from enum import Enum
from typing import Any, Iterable


def jsonable(value: Any) -> Any:
    """Convert domain values into plain JSON-serializable structures."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, date):
        return value.isoformat()
    if is_dataclass(value) and not isinstance(value, type):
        return jsonable(asdict(value))
    if isinstance(value, dict):
        return {_key(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted(jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if value is None or isinstance(value, (str, int, float, bool)):
        return value
    return str(value)


def _key(k: Any) -> str:
    if isinstance(k, Enum):
        return str(k.value)
    return str(k)


def canonical_json(value: Any) -> str:
    return json.dumps(jsonable(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_json_pretty(value: Any) -> str:
    return json.dumps(jsonable(value), sort_keys=True, indent=2, ensure_ascii=False)


def canonical_jsonl(records: Iterable[Any]) -> str:
    """One canonical JSON document per line; trailing newline when non-empty."""
    lines = [canonical_json(r) for r in records]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_date(text: str, rule: str = "date-format") -> date:
    from .domain import DomainError

    try:
        return date.fromisoformat(text.strip())
    except ValueError as exc:
        raise DomainError(rule, f"not a calendar date: {text!r}") from exc


def entity_payload(entity) -> dict:
    """Flat, key-sorted projection of an ingested entity for golden files."""
    from .domain import (
        AospBulletin,
        ChipsetModel,
        DeviceUpdate,
        SmartphoneModel,
        VantagePointRecord,
    )

    if isinstance(entity, VantagePointRecord):
        return {
            "kind": "record",
            "cve": str(entity.cve),
            "source": entity.source.value,
            "vantage_point": entity.vantage_point.value,
            "manufacturer": entity.manufacturer.value if entity.manufacturer else None,
            "publication_date": entity.publication_date.isoformat(),
            "description": entity.description,
            "severity": entity.severity,
            "severity_version": entity.severity_version,
            "severity_label": entity.severity_label,
            "affected_chipset_strings": list(entity.affected_chipset_strings),
            "component_raw": entity.component_raw,
            "credit": entity.credit,
            "internal_flag": entity.internal_flag,
            "report_date": entity.report_date.isoformat() if entity.report_date else None,
        }
    if isinstance(entity, ChipsetModel):
        return {
            "kind": "chipset",
            "manufacturer": entity.manufacturer.value,
            "model_number": entity.model_number,
            "release_date": entity.release_date.isoformat() if entity.release_date else None,
            "marketing_name": entity.marketing_name,
        }
    if isinstance(entity, SmartphoneModel):
        return {
            "kind": "smartphone",
            "oem": entity.oem,
            "device_name": entity.device_name,
            "chipset_string": entity.chipset_string,
            "release_date": entity.release_date.isoformat(),
        }
    if isinstance(entity, DeviceUpdate):
        return {
            "kind": "device_update",
            "oem": entity.oem,
            "device_name": entity.device_name,
            "release_date": entity.release_date.isoformat(),
            "explicit_cves": sorted(str(c) for c in entity.explicit_cves),
            "spl_date": entity.spl_date.isoformat() if entity.spl_date else None,
        }
    if isinstance(entity, AospBulletin):
        return {
            "kind": "aosp_bulletin",
            "spl_date": entity.spl_date.isoformat(),
            "cves": sorted(str(c) for c in entity.cves),
        }
    raise TypeError(f"no golden projection for {type(entity).__name__}")
