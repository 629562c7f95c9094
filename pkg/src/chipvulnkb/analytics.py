"""Lifecycle metrics over a knowledge-base snapshot.

Four report families: where vulnerabilities are introduced, who discovers
them, when patches appear and how consistent the published information is,
and how device updates roll out. Every metric follows the set definitions
documented in the README; day counts are calendar-day differences.

Reports carry a ``live_dataset_reference`` block: values observed on the
full production data set, emitted for context only since desk-scale corpora
cannot reproduce them.
"""

from __future__ import annotations

import math
from datetime import date, timedelta

from .domain import (
    Attribution,
    ChipsetKey,
    Component,
    Location,
    Manufacturer,
    SmartphoneModel,
    SourceCategory,
    Vulnerability,
    validate_cve,
)
from .kb import Snapshot
from .stats import (
    DegenerateDataError,
    SampleGroup,
    five_number_summary,
    kruskal_wallis,
    quantile,
)

DEFAULT_UNMITIGATED_CUTOFF = date(2023, 1, 1)
DEFAULT_PROPAGATION_WINDOW_DAYS = 365
DEFAULT_DISCLOSURE_THRESHOLD_DAYS = 90


class NotAffectedError(ValueError):
    """Predicate asked about a chipset the vulnerability is not linked to."""


class MissingReleaseDateError(ValueError):
    """An affected chipset has no release date; the predicate is undefined."""


class UnknownCveError(KeyError):
    pass


def _release_date(snap: Snapshot, key: ChipsetKey) -> date:
    chipset = snap.chipsets.get(key)
    if chipset is None or chipset.release_date is None:
        raise MissingReleaseDateError(f"chipset {key} has no release date")
    return chipset.release_date


def newly_introduced(vuln: Vulnerability, chipset: ChipsetKey, snap: Snapshot) -> bool:
    """True iff no chipset affected by the vulnerability was released earlier."""
    if chipset not in vuln.affected_chipsets:
        raise NotAffectedError(f"{vuln.cve} does not affect {chipset}")
    own = _release_date(snap, chipset)
    return all(_release_date(snap, other) >= own for other in vuln.affected_chipsets)


def persists_into(vuln: Vulnerability, chipset: ChipsetKey, snap: Snapshot) -> bool:
    """Inherited and still unpatched when the chipset shipped."""
    if vuln.patch_date is None:
        raise MissingReleaseDateError(f"{vuln.cve} has no resolvable patch date")
    return (
        chipset in vuln.affected_chipsets
        and not newly_introduced(vuln, chipset, snap)
        and _release_date(snap, chipset) <= vuln.patch_date
    )


def _rq1_excluded(snap: Snapshot) -> set[str]:
    """CVEs excluded from introduction metrics: an affected chipset lacks a date."""
    excluded = set()
    for cve, vuln in snap.vulnerabilities.items():
        for key in vuln.affected_chipsets:
            chipset = snap.chipsets.get(key)
            if chipset is None or chipset.release_date is None:
                excluded.add(cve)
                break
    return excluded


def _next_chipset(snap: Snapshot, chipset: ChipsetKey):
    """Earliest strictly later release by the same CM; date ties are skipped."""
    own = snap.chipsets[chipset]
    if own.release_date is None:
        return None
    candidates = [
        c
        for c in snap.chipsets.values()
        if c.manufacturer == own.manufacturer
        and c.release_date is not None
        and c.release_date > own.release_date
    ]
    if not candidates:
        return None
    return min(candidates, key=lambda c: (c.release_date, c.model_number))


def introduction_report(snap: Snapshot) -> dict:
    excluded = _rq1_excluded(snap)
    per_chipset = []
    new_shares, inherited_shares, totals, removed_shares = [], [], [], []

    for key in sorted(snap.chipsets):
        chipset = snap.chipsets[key]
        if chipset.release_date is None:
            continue
        counted = [
            cve for cve in sorted(snap.vulns_of_chipset(key)) if cve not in excluded
        ]
        if not counted:
            continue
        new = sum(
            1
            for cve in counted
            if newly_introduced(snap.vulnerabilities[cve], key, snap)
        )
        total = len(counted)
        inherited = total - new

        removed_block = None
        successor = _next_chipset(snap, key)
        if successor is not None:
            dated = [
                cve
                for cve in counted
                if snap.vulnerabilities[cve].patch_date is not None
            ]
            removed = sum(
                1
                for cve in dated
                if snap.vulnerabilities[cve].patch_date <= successor.release_date
            )
            removed_block = {
                "next_model": successor.model_number,
                "next_release_date": successor.release_date,
                "evaluated": len(dated),
                "removed": removed,
                "removed_share": removed / len(dated) if dated else None,
            }
            if dated:
                removed_shares.append(removed / len(dated))

        new_share = new / total
        per_chipset.append(
            {
                "manufacturer": chipset.manufacturer,
                "model_number": chipset.model_number,
                "release_date": chipset.release_date,
                "total": total,
                "newly_introduced": new,
                "inherited": inherited,
                "new_share": new_share,
                "inherited_share": 1.0 - new_share,
                "removed_before_next": removed_block,
            }
        )
        totals.append(total)
        new_shares.append(new_share)
        inherited_shares.append(1.0 - new_share)

    aggregate = None
    if per_chipset:
        aggregate = {
            "chipset_count": len(per_chipset),
            "mean_total": sum(totals) / len(totals),
            "median_total": quantile(totals, 0.5),
            "mean_new_share": sum(new_shares) / len(new_shares),
            "median_new_share": quantile(new_shares, 0.5),
            "mean_inherited_share": sum(inherited_shares) / len(inherited_shares),
            "median_inherited_share": quantile(inherited_shares, 0.5),
            "mean_removed_share": (
                sum(removed_shares) / len(removed_shares) if removed_shares else None
            ),
        }

    dateless = sorted(
        f"{key[0]}/{key[1]}"
        for key, chipset in snap.chipsets.items()
        if chipset.release_date is None
    )
    return {
        "per_chipset": per_chipset,
        "aggregate": aggregate,
        "data_quality": {
            "excluded_vulnerabilities": sorted(excluded),
            "chipsets_without_release_date": dateless,
        },
        "live_dataset_reference": {
            "mean_total": 204,
            "median_total": 149,
            "inherited_share": 0.93,
            "new_share": 0.07,
            "removed_before_next_share": 0.09,
        },
    }


def _attribution_in_mode(vuln: Vulnerability, mode: str) -> Attribution:
    if (
        mode == "paper"
        and vuln.attribution == Attribution.UNKNOWN
        and vuln.manufacturer is not None
        and vuln.manufacturer != Manufacturer.QUALCOMM
    ):
        # Upper-bound-internal reading: uncredited entries of CMs that only
        # name external discoverers count as internal.
        return Attribution.INTERNAL
    return vuln.attribution


def discovery_report(snap: Snapshot, mode: str = "strict") -> dict:
    if mode not in ("strict", "paper"):
        raise ValueError(f"unknown discovery mode {mode!r}")

    cm_year: dict[tuple[str, int], dict[str, int]] = {}
    component_rows: dict[Component, dict[str, list[int]]] = {}
    unknown_component = 0

    for cve in sorted(snap.vulnerabilities):
        vuln = snap.vulnerabilities[cve]
        cm = vuln.manufacturer
        if cm is None:
            continue
        attribution = _attribution_in_mode(vuln, mode)
        bucket = cm_year.setdefault(
            (cm.value, vuln.cve.year),
            {"total": 0, "internal": 0, "external": 0, "unknown": 0},
        )
        bucket["total"] += 1
        bucket[attribution.value.lower()] += 1

        if vuln.component is None:
            unknown_component += 1
        else:
            row = component_rows.setdefault(vuln.component, {})
            counts = row.setdefault(cm.value, [0, 0])
            counts[0] += 1
            if attribution == Attribution.INTERNAL:
                counts[1] += 1

    per_cm_year = [
        {
            "manufacturer": cm,
            "year": year,
            "total": counts["total"],
            "internal": counts["internal"],
            "external": counts["external"],
            "unknown": counts["unknown"],
            "internal_share": counts["internal"] / counts["total"],
        }
        for (cm, year), counts in sorted(cm_year.items())
    ]

    per_component = []
    for component, by_cm in component_rows.items():
        total = sum(counts[0] for counts in by_cm.values())
        per_component.append(
            {
                "component": component,
                "total": total,
                "per_cm": {
                    cm: {
                        "count": counts[0],
                        "internal_share": counts[1] / counts[0],
                    }
                    for cm, counts in sorted(by_cm.items())
                },
            }
        )
    per_component.sort(key=lambda row: (-row["total"], row["component"].value))

    return {
        "mode": mode,
        "per_cm_year": per_cm_year,
        "per_component": per_component,
        "data_quality": {"unknown_component": unknown_component},
        "live_dataset_reference": {
            "qualcomm_2023_internal_share": 0.57,
            "mediatek_2023_internal_share": 0.10,
            "unisoc_2023_internal_share": 0.07,
            "samsung_2023_internal_share": 0.60,
        },
    }


def severity_by_location(snap: Snapshot) -> dict:
    groups: dict[Location, list[float]] = {Location.FIRMWARE: [], Location.DRIVER: []}
    for vuln in snap.vulnerabilities.values():
        if vuln.location == Location.UNKNOWN:
            continue
        score = vuln.nist_severity()
        if score is None:
            continue
        groups[vuln.location].append(score)

    payload: dict = {"groups": {}, "test": None, "median_difference": None, "notice": None}
    for location, values in groups.items():
        payload["groups"][location.value] = (
            {"n": len(values), "summary": five_number_summary(values)} if values else None
        )

    firmware, driver = groups[Location.FIRMWARE], groups[Location.DRIVER]
    if not firmware or not driver:
        payload["notice"] = "a location group is empty; rank test skipped"
        return payload

    payload["median_difference"] = quantile(firmware, 0.5) - quantile(driver, 0.5)
    try:
        h, p = kruskal_wallis(
            [SampleGroup("Firmware", tuple(firmware)), SampleGroup("Driver", tuple(driver))]
        )
        payload["test"] = {"h": h, "p": p, "significant_at_0_05": p < 0.05}
    except DegenerateDataError:
        payload["test"] = {"h": 0.0, "p": 1.0, "significant_at_0_05": False}
    payload["live_dataset_reference"] = {"firmware_driver_median_difference": 0.8}
    return payload


def patch_latency_report(
    snap: Snapshot, threshold_days: int = DEFAULT_DISCLOSURE_THRESHOLD_DAYS
) -> dict:
    per_cm: dict[str, list[int]] = {}
    data_errors = []
    for cve in sorted(snap.vulnerabilities):
        vuln = snap.vulnerabilities[cve]
        if vuln.report_date is None or vuln.patch_date is None:
            continue
        days = (vuln.patch_date - vuln.report_date).days
        if days < 0:
            data_errors.append({"cve": cve, "days": days})
            continue
        cm = vuln.manufacturer.value if vuln.manufacturer else "unknown"
        per_cm.setdefault(cm, []).append(days)

    def block(days: list[int]) -> dict:
        return {
            "n": len(days),
            "compliant_share": sum(1 for d in days if d <= threshold_days) / len(days),
            "median_days": quantile(days, 0.5),
            "quantile_95_days": quantile(days, 0.95),
            "summary": five_number_summary(days),
        }

    all_days = [d for days in per_cm.values() for d in days]
    return {
        "threshold_days": threshold_days,
        "per_cm": {cm: block(days) for cm, days in sorted(per_cm.items())},
        "overall": block(all_days) if all_days else None,
        "data_errors": data_errors,
        "live_dataset_reference": {
            "samsung_compliant_share": 0.469,
            "qualcomm_compliant_share": 0.199,
            "samsung_quantile_95_days": 185,
            "qualcomm_quantile_95_days": 348,
        },
    }


def availability_matrix(
    snap: Snapshot,
    window_days: int = DEFAULT_PROPAGATION_WINDOW_DAYS,
    period: tuple[date, date] | None = None,
) -> dict:
    rows: dict[str, dict[str, int]] = {}
    for vuln in snap.vulnerabilities.values():
        if vuln.patch_date is None or vuln.manufacturer is None:
            continue
        if period is not None and not (period[0] <= vuln.patch_date <= period[1]):
            continue
        deadline = vuln.patch_date + timedelta(days=window_days)
        nvd_dates = [
            r.publication_date
            for r in vuln.records
            if r.source == SourceCategory.NVD
        ]
        in_nvd = bool(nvd_dates) and min(nvd_dates) <= deadline
        first_spl = snap._first_spl_with.get(str(vuln.cve))
        in_aosp = first_spl is not None and first_spl <= deadline
        row = rows.setdefault(
            vuln.manufacturer.value, {"n": 0, "nvd": 0, "aosp": 0}
        )
        row["n"] += 1
        row["nvd"] += int(in_nvd)
        row["aosp"] += int(in_aosp)

    per_cm = {
        cm: {
            "n": row["n"],
            "cm_website": 1.0,  # the defining universe: every counted CVE is CM-published
            "nvd": row["nvd"] / row["n"],
            "aosp": row["aosp"] / row["n"],
        }
        for cm, row in sorted(rows.items())
    }
    return {
        "window_days": window_days,
        "period": (
            {"start": period[0], "end": period[1]} if period is not None else None
        ),
        "per_cm": per_cm,
        "live_dataset_reference": {
            "period": {"start": "2022-06-01", "end": "2023-05-31"},
            "aosp": {"Samsung": 0.0, "Qualcomm": 0.84, "Unisoc": 0.21, "Mediatek": 0.15},
            "nvd": {"Samsung": 0.91, "Qualcomm": 1.0, "Unisoc": 1.0, "Mediatek": 1.0},
        },
    }


def severity_consistency(snap: Snapshot) -> dict:
    lower = equal = higher = 0
    for vuln in snap.vulnerabilities.values():
        cm_score = vuln.cm_severity()
        nist_score = vuln.nist_severity()
        if cm_score is None or nist_score is None:
            continue
        if nist_score < cm_score:
            lower += 1
        elif nist_score > cm_score:
            higher += 1
        else:
            equal += 1
    n = lower + equal + higher
    return {
        "n": n,
        "nist_lower_share": lower / n if n else None,
        "equal_share": equal / n if n else None,
        "nist_higher_share": higher / n if n else None,
        "live_dataset_reference": {
            "n": 2249,
            "nist_lower_share": 0.10,
            "nist_higher_share": 0.15,
        },
    }


def _eligible_for_update_analysis(
    snap: Snapshot, vuln: Vulnerability, cutoff: date
) -> list[SmartphoneModel] | None:
    """Affected phones with update info, when the vulnerability qualifies."""
    if vuln.patch_date is None or vuln.patch_date >= cutoff:
        return None
    with_info = [
        s for s in snap.affected_smartphones(vuln) if snap.has_update_info(s)
    ]
    if not with_info:
        return None
    if not any(s.release_date <= vuln.patch_date for s in with_info):
        return None
    return with_info


def unmitigated_vulnerabilities(
    snap: Snapshot, cutoff: date = DEFAULT_UNMITIGATED_CUTOFF
) -> set[str]:
    """CVEs that qualified for an update but never appeared in any changelog."""
    result = set()
    for cve, vuln in snap.vulnerabilities.items():
        phones = _eligible_for_update_analysis(snap, vuln, cutoff)
        if phones is None:
            continue
        if all(not snap.mitigating_updates(vuln, s) for s in phones):
            result.add(cve)
    return result


def unmitigated_report(snap: Snapshot, cutoff: date = DEFAULT_UNMITIGATED_CUTOFF) -> dict:
    eligible = {
        cve
        for cve, vuln in snap.vulnerabilities.items()
        if _eligible_for_update_analysis(snap, vuln, cutoff) is not None
    }
    unmitigated = unmitigated_vulnerabilities(snap, cutoff)
    mitigated = eligible - unmitigated
    return {
        "cutoff": cutoff,
        "eligible": len(eligible),
        "mitigated": len(mitigated),
        "mitigated_share": len(mitigated) / len(eligible) if eligible else None,
        "unmitigated": len(unmitigated),
        "unmitigated_share": len(unmitigated) / len(eligible) if eligible else None,
        "unmitigated_cves": sorted(unmitigated),
        "live_dataset_reference": {
            "eligible": 1546,
            "mitigated": 951,
            "unmitigated": 631,
            "note": (
                "published mitigated/unmitigated counts do not sum to the "
                "published eligible total; both are reproduced verbatim"
            ),
        },
    }


def update_timeline_values(
    snap: Snapshot,
) -> tuple[list[int], list[int], list[int], list[dict]]:
    """Raw day counts behind the update-timeline report.

    Returns sorted (latencies, spreads, first-to-half delays, data errors).
    Latency per (vulnerability, phone) pair is the phone's earliest mitigating
    update minus the patch date; negative pairs are data errors and excluded
    from latencies but their update dates still count for spread.
    """
    latencies: list[int] = []
    data_errors: list[dict] = []
    spreads: list[int] = []
    first_to_half: list[int] = []

    for cve in sorted(snap.vulnerabilities):
        vuln = snap.vulnerabilities[cve]
        if vuln.patch_date is None:
            continue
        earliest_updates: list[date] = []
        for phone in sorted(snap.affected_smartphones(vuln), key=lambda s: s.key):
            updates = snap.mitigating_updates(vuln, phone)
            if not updates:
                continue
            earliest = updates[0].release_date
            earliest_updates.append(earliest)
            days = (earliest - vuln.patch_date).days
            if days < 0:
                data_errors.append(
                    {"cve": cve, "device": phone.device_id, "days": days}
                )
            else:
                latencies.append(days)
        if earliest_updates:
            ordered = sorted(earliest_updates)
            spreads.append((ordered[-1] - ordered[0]).days)
            half_index = math.ceil(len(ordered) / 2) - 1
            first_to_half.append((ordered[half_index] - ordered[0]).days)
    return sorted(latencies), sorted(spreads), sorted(first_to_half), data_errors


def update_timeline_report(snap: Snapshot) -> dict:
    latencies, spreads, first_to_half, data_errors = update_timeline_values(snap)

    def block(values: list[int]) -> dict | None:
        if not values:
            return None
        return {
            "n": len(values),
            "quantile_25_days": quantile(values, 0.25),
            "median_days": quantile(values, 0.5),
            "quantile_95_days": quantile(values, 0.95),
            "summary": five_number_summary(values),
        }

    return {
        "pairs": len(latencies),
        "latency": block(latencies),
        "spread": block(spreads),
        "first_to_half": block(first_to_half),
        "data_errors": data_errors,
        "live_dataset_reference": {
            "quantile_25_days": 44,
            "median_days": 71,
            "quantile_95_days": 266,
            "median_spread_days": 182,
            "median_first_to_half_days": 32,
        },
    }


def affected_count_distribution(snap: Snapshot) -> dict:
    per_cm: dict[str, list[int]] = {}
    for cve in sorted(snap.vulnerabilities):
        vuln = snap.vulnerabilities[cve]
        if vuln.manufacturer is None:
            continue
        per_cm.setdefault(vuln.manufacturer.value, []).append(
            len(snap.affected_smartphones(vuln))
        )
    return {
        "per_cm": {
            cm: {"n": len(counts), "summary": five_number_summary(counts)}
            for cm, counts in sorted(per_cm.items())
        },
        "live_dataset_reference": {
            "mediatek_median": 652,
            "mediatek_max": 2222,
            "qualcomm_median": 277,
            "qualcomm_max": 1730,
        },
    }


def impact_report(cve_text: str, snap: Snapshot) -> dict:
    cve = str(validate_cve(cve_text))
    vuln = snap.vulnerabilities.get(cve)
    if vuln is None:
        raise UnknownCveError(cve)
    phones = sorted(snap.affected_smartphones(vuln), key=lambda s: s.device_id)
    per_oem: dict[str, int] = {}
    for phone in phones:
        per_oem[phone.oem] = per_oem.get(phone.oem, 0) + 1
    return {
        "cve": cve,
        "component": vuln.component.value if vuln.component else "Unknown",
        "location": vuln.location,
        "attribution": vuln.attribution,
        "patch_date": vuln.patch_date,
        "report_date": vuln.report_date,
        "affected_chipsets": [
            {"manufacturer": m, "model_number": n}
            for m, n in sorted(vuln.affected_chipsets)
        ],
        "affected_smartphone_count": len(phones),
        "affected_smartphones": [p.device_id for p in phones],
        "per_oem": dict(sorted(per_oem.items())),
        "records": [
            {
                "vantage_point": r.vantage_point,
                "source": r.source,
                "publication_date": r.publication_date,
                "severity": r.severity,
                "severity_version": r.severity_version,
                "severity_label": r.severity_label,
                "description": r.description,
                "affected_chipset_strings": list(r.affected_chipset_strings),
                "credit": r.credit,
                "internal_flag": r.internal_flag,
                "report_date": r.report_date,
            }
            for r in sorted(
                vuln.records, key=lambda r: (r.publication_date, r.vantage_point.value)
            )
        ],
        "warning": None if vuln.affected_chipsets else "no chipset links resolved",
    }


# -- report registry (shared by CLI and API so serializations are identical) --


from dataclasses import dataclass as _dataclass


@_dataclass(frozen=True)
class AnalyticsConfig:
    cutoff_date: date = DEFAULT_UNMITIGATED_CUTOFF
    window_days: int = DEFAULT_PROPAGATION_WINDOW_DAYS
    threshold_days: int = DEFAULT_DISCLOSURE_THRESHOLD_DAYS
    discovery_mode: str = "strict"
    period_start: date | None = None
    period_end: date | None = None

    @property
    def period(self) -> tuple[date, date] | None:
        if self.period_start is not None and self.period_end is not None:
            return (self.period_start, self.period_end)
        return None


METRIC_NAMES = (
    "introduction",
    "discovery",
    "severity",
    "patch-latency",
    "availability",
    "consistency",
    "unmitigated",
    "update-timeline",
    "affected-distribution",
)

RQ_METRICS = {
    "rq1": ("introduction",),
    "rq2": ("discovery",),
    "rq3": ("severity", "patch-latency", "availability", "consistency"),
    "rq4": ("unmitigated", "update-timeline", "affected-distribution"),
}


def run_metric(name: str, snap: Snapshot, config: AnalyticsConfig | None = None) -> dict:
    config = config or AnalyticsConfig()
    if name == "introduction":
        return introduction_report(snap)
    if name == "discovery":
        return discovery_report(snap, config.discovery_mode)
    if name == "severity":
        return severity_by_location(snap)
    if name == "patch-latency":
        return patch_latency_report(snap, config.threshold_days)
    if name == "availability":
        return availability_matrix(snap, config.window_days, config.period)
    if name == "consistency":
        return severity_consistency(snap)
    if name == "unmitigated":
        return unmitigated_report(snap, config.cutoff_date)
    if name == "update-timeline":
        return update_timeline_report(snap)
    if name == "affected-distribution":
        return affected_count_distribution(snap)
    raise KeyError(name)


def report_bundle(rq: str, snap: Snapshot, config: AnalyticsConfig | None = None) -> dict:
    if rq == "all":
        return {
            key: {name: run_metric(name, snap, config) for name in names}
            for key, names in RQ_METRICS.items()
        }
    if rq not in RQ_METRICS:
        raise KeyError(rq)
    return {rq: {name: run_metric(name, snap, config) for name in RQ_METRICS[rq]}}


# -- plain-text rendering ------------------------------------------------------


def render_text(payload, indent: int = 0) -> str:
    """Generic tabular text rendering of a report payload."""
    from .serialize import jsonable

    return "\n".join(_render_lines(jsonable(payload), indent))


def _render_lines(value, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        keys = sorted({k for item in value for k in item})
        if all(_scalar(item.get(k)) for item in value for k in keys):
            return _render_table(value, keys, indent)
    if isinstance(value, dict):
        lines = []
        for key in value:
            inner = value[key]
            if _scalar(inner):
                lines.append(f"{pad}{key}: {_format_scalar(inner)}")
            else:
                lines.append(f"{pad}{key}:")
                lines.extend(_render_lines(inner, indent + 1))
        return lines
    if isinstance(value, list):
        lines = []
        for item in value:
            if _scalar(item):
                lines.append(f"{pad}- {_format_scalar(item)}")
            else:
                lines.append(f"{pad}-")
                lines.extend(_render_lines(item, indent + 1))
        return lines
    return [f"{pad}{_format_scalar(value)}"]


def _render_table(rows: list[dict], keys: list[str], indent: int) -> list[str]:
    pad = "  " * indent
    table = [keys] + [[_format_scalar(row.get(k)) for k in keys] for row in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(keys))]
    lines = []
    for i, line in enumerate(table):
        lines.append(pad + "  ".join(cell.ljust(widths[j]) for j, cell in enumerate(line)).rstrip())
        if i == 0:
            lines.append(pad + "  ".join("-" * w for w in widths))
    return lines


def _scalar(value) -> bool:
    return value is None or isinstance(value, (str, int, float, bool))


def _format_scalar(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.4g}"
    return str(value)
