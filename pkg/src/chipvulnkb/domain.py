"""Canonical domain types, identifier normalization and controlled vocabularies."""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date
from enum import Enum


class DomainError(ValueError):
    """Raised when a value violates a domain rule; `rule` names the rule."""

    def __init__(self, rule: str, message: str):
        super().__init__(message)
        self.rule = rule


class Manufacturer(str, Enum):
    QUALCOMM = "Qualcomm"
    MEDIATEK = "Mediatek"
    SAMSUNG = "Samsung"
    UNISOC = "Unisoc"


class Component(str, Enum):
    BLUETOOTH = "Bluetooth"
    WIFI = "WiFi"
    CELLULAR = "Cellular"
    GPU = "GPU"
    VISION = "Vision"
    NFC = "NFC"
    BOOT = "Boot"
    POSITION = "Position"
    AUDIO = "Audio"
    VIRTUALIZATION = "Virtualization"
    MACHINE_LEARNING = "MachineLearning"
    TRUST = "Trust"
    POWER = "Power"
    IPC = "IPC"
    MEMORY_MANAGEMENT = "MemoryManagement"
    DEBUG = "Debug"

    @property
    def display_name(self) -> str:
        return _COMPONENT_DISPLAY.get(self, self.value)


_COMPONENT_DISPLAY = {
    Component.MACHINE_LEARNING: "Machine learning",
    Component.MEMORY_MANAGEMENT: "Memory management",
}


class Location(str, Enum):
    FIRMWARE = "Firmware"
    DRIVER = "Driver"
    UNKNOWN = "Unknown"


class Attribution(str, Enum):
    INTERNAL = "Internal"
    EXTERNAL = "External"
    UNKNOWN = "Unknown"


class SourceCategory(str, Enum):
    """Which of the four publication channels a record came from."""

    CM_BULLETIN = "CmBulletin"
    NVD = "Nvd"
    AOSP_BULLETIN = "AospBulletin"
    OEM_CHANGELOG = "OemChangelog"


class VantagePoint(str, Enum):
    """Concrete document families the ingestion layer understands."""

    QUALCOMM_BULLETIN = "qualcomm-bulletin"
    MEDIATEK_BULLETIN = "mediatek-bulletin"
    SAMSUNG_MOBILE_BULLETIN = "samsung-mobile-bulletin"
    SAMSUNG_SEMI_BULLETIN = "samsung-semi-bulletin"
    UNISOC_BULLETIN = "unisoc-bulletin"
    NVD = "nvd"
    AOSP_BULLETIN = "aosp-bulletin"
    SAMSUNG_UPDATES = "samsung-updates"
    XIAOMI_UPDATES = "xiaomi-updates"
    TECNO_UPDATES = "tecno-updates"
    DEVICE_CATALOG = "device-catalog"
    CHIPSET_RELEASE_DATES = "chipset-release-dates"

    @property
    def format(self) -> str:
        """Expected document format (``html`` or ``json``) for this family."""
        return "json" if self in _JSON_VANTAGE_POINTS else "html"

    @property
    def category(self) -> SourceCategory | None:
        return _VANTAGE_CATEGORY.get(self)

    @property
    def manufacturer(self) -> Manufacturer | None:
        return _VANTAGE_CM.get(self)

    @property
    def oem(self) -> str | None:
        return _VANTAGE_OEM.get(self)


# The Unisoc portal is script-rendered; we ingest pre-rendered HTML captures.
_JSON_VANTAGE_POINTS = frozenset({VantagePoint.NVD, VantagePoint.TECNO_UPDATES})

_VANTAGE_CATEGORY = {
    VantagePoint.QUALCOMM_BULLETIN: SourceCategory.CM_BULLETIN,
    VantagePoint.MEDIATEK_BULLETIN: SourceCategory.CM_BULLETIN,
    VantagePoint.SAMSUNG_MOBILE_BULLETIN: SourceCategory.CM_BULLETIN,
    VantagePoint.SAMSUNG_SEMI_BULLETIN: SourceCategory.CM_BULLETIN,
    VantagePoint.UNISOC_BULLETIN: SourceCategory.CM_BULLETIN,
    VantagePoint.NVD: SourceCategory.NVD,
    VantagePoint.AOSP_BULLETIN: SourceCategory.AOSP_BULLETIN,
    VantagePoint.SAMSUNG_UPDATES: SourceCategory.OEM_CHANGELOG,
    VantagePoint.XIAOMI_UPDATES: SourceCategory.OEM_CHANGELOG,
    VantagePoint.TECNO_UPDATES: SourceCategory.OEM_CHANGELOG,
}

_VANTAGE_CM = {
    VantagePoint.QUALCOMM_BULLETIN: Manufacturer.QUALCOMM,
    VantagePoint.MEDIATEK_BULLETIN: Manufacturer.MEDIATEK,
    VantagePoint.SAMSUNG_MOBILE_BULLETIN: Manufacturer.SAMSUNG,
    VantagePoint.SAMSUNG_SEMI_BULLETIN: Manufacturer.SAMSUNG,
    VantagePoint.UNISOC_BULLETIN: Manufacturer.UNISOC,
}

_VANTAGE_OEM = {
    VantagePoint.SAMSUNG_UPDATES: "Samsung",
    VantagePoint.XIAOMI_UPDATES: "Xiaomi",
    VantagePoint.TECNO_UPDATES: "Tecno",
}


_CVE_RE = re.compile(r"^CVE-(\d{4})-(\d{4,})$")

# Earliest chipset in scope; publication dates before this are implausible.
EARLIEST_PLAUSIBLE_DATE = date(2009, 9, 1)
CVE_MIN_YEAR = 1999


@dataclass(frozen=True, order=True, slots=True)
class CveId:
    year: int
    sequence: str

    def __str__(self) -> str:
        return f"CVE-{self.year}-{self.sequence}"


def validate_cve(text: str, today: date | None = None) -> CveId:
    """Parse a CVE identifier, case-folding first.

    Accepts a string iff it matches ``CVE-<YEAR>-<NUM>`` with a four-digit
    year between 1999 and the current calendar year and a numeric part of
    at least four digits.
    """
    folded = text.strip().upper()
    m = _CVE_RE.match(folded)
    if m is None:
        raise DomainError("cve-pattern", f"not a CVE-<YEAR>-<NUM> identifier: {text!r}")
    year = int(m.group(1))
    current_year = (today or date.today()).year
    if year > current_year:
        raise DomainError("cve-year-future", f"CVE year {year} lies in the future")
    if year < CVE_MIN_YEAR:
        raise DomainError("cve-year-range", f"CVE year {year} predates {CVE_MIN_YEAR}")
    return CveId(year, m.group(2))


# Marketing line names that prefix model numbers in catalogs and bulletins.
VENDOR_PREFIX_WORDS = frozenset({"SNAPDRAGON", "EXYNOS", "HELIO", "DIMENSITY", "TIGER"})


def normalize_chipset_name(raw: str) -> str:
    """Normalize a chipset model string into its join key.

    Uppercases, removes hyphens and whitespace, and drops marketing line
    prefixes (Snapdragon, Exynos, Helio, Dimensity, Tiger). Idempotent.
    """
    if not raw or not raw.strip():
        raise DomainError("chipset-name-empty", "chipset name is empty")
    tokens = raw.upper().replace("-", " ").split()
    tokens = [t for t in tokens if t not in VENDOR_PREFIX_WORDS]
    normalized = "".join(tokens)
    if not normalized:
        raise DomainError(
            "chipset-name-empty-after-normalization",
            f"nothing left of {raw!r} after normalization",
        )
    return normalized


def split_marketing_prefix(raw: str) -> tuple[str, str | None]:
    """Split a raw chipset string into (normalized model number, marketing prefix).

    ``"Snapdragon SM8475"`` keeps ``SM8475`` as the join key and records
    ``Snapdragon`` as a display alias.
    """
    normalized = normalize_chipset_name(raw)
    stripped = [
        t for t in raw.replace("-", " ").split() if t.upper() in VENDOR_PREFIX_WORDS
    ]
    return normalized, (" ".join(stripped) or None)


ChipsetKey = tuple[str, str]  # (manufacturer value, normalized model number)
DeviceKey = tuple[str, str]  # (oem, device name)


@dataclass(frozen=True, slots=True)
class ChipsetModel:
    manufacturer: Manufacturer
    model_number: str
    release_date: date | None = None
    marketing_name: str | None = None

    def __post_init__(self):
        if not self.model_number:
            raise DomainError("chipset-name-empty", "model_number must be non-empty")

    @property
    def key(self) -> ChipsetKey:
        return (self.manufacturer.value, self.model_number)


@dataclass(frozen=True, slots=True)
class SmartphoneModel:
    oem: str
    device_name: str
    chipset_string: str
    release_date: date
    chipset: ChipsetKey | None = None

    @property
    def key(self) -> DeviceKey:
        return (self.oem, self.device_name)

    @property
    def device_id(self) -> str:
        """URL-safe identifier used by the API and CLI."""
        return device_id(self.oem, self.device_name)


def device_id(oem: str, device_name: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", f"{oem} {device_name}".lower()).strip("-")
    return slug


@dataclass(frozen=True, slots=True)
class VantagePointRecord:
    """One vantage point's raw view of one vulnerability."""

    source: SourceCategory
    vantage_point: VantagePoint
    cve: CveId
    publication_date: date
    description: str = ""
    severity: float | None = None
    severity_version: str | None = None
    severity_label: str | None = None
    affected_chipset_strings: tuple[str, ...] = ()
    component_raw: str | None = None
    credit: str | None = None
    internal_flag: bool | None = None
    report_date: date | None = None
    manufacturer: Manufacturer | None = None

    def __post_init__(self):
        if self.severity is not None and not 0.0 <= self.severity <= 10.0:
            raise DomainError(
                "severity-range", f"severity {self.severity} outside [0.0, 10.0]"
            )
        if self.publication_date < EARLIEST_PLAUSIBLE_DATE:
            raise DomainError(
                "publication-date-window",
                f"publication date {self.publication_date} predates "
                f"{EARLIEST_PLAUSIBLE_DATE}",
            )

    @property
    def natural_key(self) -> tuple[str, str, str]:
        return (str(self.cve), self.vantage_point.value, self.publication_date.isoformat())


@dataclass(frozen=True, slots=True)
class Vulnerability:
    """Canonical CVE-keyed entity with derived lifecycle fields."""

    cve: CveId
    records: tuple[VantagePointRecord, ...] = ()
    component: Component | None = None
    location: Location = Location.UNKNOWN
    attribution: Attribution = Attribution.UNKNOWN
    report_date: date | None = None
    patch_date: date | None = None
    affected_chipsets: frozenset[ChipsetKey] = frozenset()

    @property
    def manufacturer(self) -> Manufacturer | None:
        """CM that published the vulnerability (earliest CM bulletin record)."""
        cm_records = [r for r in self.records if r.source == SourceCategory.CM_BULLETIN]
        if not cm_records:
            return None
        earliest = min(cm_records, key=lambda r: (r.publication_date, r.vantage_point.value))
        return earliest.manufacturer

    def nist_severity(self) -> float | None:
        scores = [
            r.severity
            for r in sorted(self.records, key=lambda r: r.publication_date)
            if r.source == SourceCategory.NVD and r.severity is not None
        ]
        return scores[0] if scores else None

    def cm_severity(self) -> float | None:
        scored = [
            r
            for r in self.records
            if r.source == SourceCategory.CM_BULLETIN and r.severity is not None
        ]
        if not scored:
            return None
        earliest = min(scored, key=lambda r: (r.publication_date, r.vantage_point.value))
        return earliest.severity


@dataclass(frozen=True, slots=True)
class DeviceUpdate:
    oem: str
    device_name: str
    release_date: date
    explicit_cves: frozenset[CveId] = frozenset()
    spl_date: date | None = None

    def __post_init__(self):
        if not self.explicit_cves and self.spl_date is None:
            raise DomainError(
                "update-evidence",
                "device update carries neither explicit CVEs nor an SPL date",
            )

    @property
    def device_key(self) -> DeviceKey:
        return (self.oem, self.device_name)


@dataclass(frozen=True, slots=True)
class AospBulletin:
    spl_date: date
    cves: frozenset[CveId] = frozenset()

    def __post_init__(self):
        if self.spl_date.day != 1:
            raise DomainError(
                "spl-first-of-month",
                f"SPL date {self.spl_date} is not the first day of a month",
            )


@dataclass(frozen=True, slots=True)
class ComponentKeyTerm:
    manufacturer: Manufacturer
    term: str
    component: Component
    location: Location | None = None

    def __post_init__(self):
        if not self.term.strip():
            raise DomainError("key-term-empty", "key term must be non-empty")
