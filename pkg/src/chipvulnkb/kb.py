"""Relational knowledge base: persistence, entity resolution and set queries.

Backed by an embedded SQLite store whose tables mirror the domain types plus
two link tables (vulnerability-to-chipset, smartphone-to-chipset). Ingestion
is the single writer; analytics and the API read from an immutable in-memory
snapshot. All merge rules are commutative and idempotent so replaying the
same inputs in any order produces the same store.
"""

from __future__ import annotations

import json
import sqlite3
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from .augment import KeyTermTable, derive_fields, load_key_terms
from .domain import (
    AospBulletin,
    ChipsetKey,
    ChipsetModel,
    CveId,
    DeviceKey,
    DeviceUpdate,
    Location,
    Attribution,
    Component,
    Manufacturer,
    SmartphoneModel,
    SourceCategory,
    VantagePoint,
    VantagePointRecord,
    Vulnerability,
    normalize_chipset_name,
    validate_cve,
)
from .serialize import canonical_json, canonical_jsonl

_SCHEMA = """
CREATE TABLE IF NOT EXISTS chipsets (
    manufacturer TEXT NOT NULL,
    model_number TEXT NOT NULL,
    release_date TEXT,
    marketing_name TEXT,
    PRIMARY KEY (manufacturer, model_number)
);
CREATE TABLE IF NOT EXISTS smartphones (
    oem TEXT NOT NULL,
    device_name TEXT NOT NULL,
    chipset_string TEXT NOT NULL,
    release_date TEXT NOT NULL,
    chipset_manufacturer TEXT,
    chipset_model TEXT,
    PRIMARY KEY (oem, device_name),
    FOREIGN KEY (chipset_manufacturer, chipset_model)
        REFERENCES chipsets (manufacturer, model_number)
);
CREATE TABLE IF NOT EXISTS vulnerabilities (
    cve TEXT PRIMARY KEY,
    component TEXT,
    location TEXT NOT NULL DEFAULT 'Unknown',
    attribution TEXT NOT NULL DEFAULT 'Unknown',
    report_date TEXT,
    patch_date TEXT
);
CREATE TABLE IF NOT EXISTS records (
    cve TEXT NOT NULL REFERENCES vulnerabilities (cve),
    vantage_point TEXT NOT NULL,
    publication_date TEXT NOT NULL,
    source TEXT NOT NULL,
    manufacturer TEXT,
    severity REAL,
    severity_version TEXT,
    severity_label TEXT,
    description TEXT NOT NULL DEFAULT '',
    affected_chipset_strings TEXT NOT NULL DEFAULT '[]',
    component_raw TEXT,
    credit TEXT,
    internal_flag INTEGER,
    report_date TEXT,
    PRIMARY KEY (cve, vantage_point, publication_date)
);
CREATE TABLE IF NOT EXISTS device_updates (
    oem TEXT NOT NULL,
    device_name TEXT NOT NULL,
    release_date TEXT NOT NULL,
    explicit_cves TEXT NOT NULL DEFAULT '[]',
    spl_date TEXT,
    PRIMARY KEY (oem, device_name, release_date)
);
CREATE TABLE IF NOT EXISTS aosp_bulletins (
    spl_date TEXT PRIMARY KEY,
    cves TEXT NOT NULL DEFAULT '[]'
);
CREATE TABLE IF NOT EXISTS vulnerability_chipsets (
    cve TEXT NOT NULL REFERENCES vulnerabilities (cve),
    manufacturer TEXT NOT NULL,
    model_number TEXT NOT NULL,
    source_string TEXT NOT NULL,
    PRIMARY KEY (cve, manufacturer, model_number)
);
CREATE TABLE IF NOT EXISTS unresolved_chipset_strings (
    cve TEXT NOT NULL,
    raw_string TEXT NOT NULL,
    vantage_point TEXT NOT NULL,
    PRIMARY KEY (cve, raw_string, vantage_point)
);
"""

EXPORT_TABLES = (
    "chipsets",
    "smartphones",
    "vulnerabilities",
    "records",
    "device_updates",
    "aosp_bulletins",
    "vulnerability_chipsets",
    "unresolved_chipset_strings",
)


@dataclass(frozen=True, slots=True)
class LinkReport:
    links_created: int
    unresolved: tuple[tuple[str, str, str], ...]  # (cve, raw string, vantage point)
    devices_resolved: int
    devices_unresolved: tuple[str, ...]


class KnowledgeBase:
    """Single-writer store; call :meth:`snapshot` for read-side queries."""

    def __init__(self, path: str | Path = ":memory:", key_terms: KeyTermTable | None = None):
        self.path = str(path)
        self.conn = sqlite3.connect(self.path)
        self.conn.execute("PRAGMA foreign_keys = ON")
        self.conn.executescript(_SCHEMA)
        self.key_terms = key_terms or load_key_terms()

    def close(self) -> None:
        self.conn.close()

    # -- registration (commutative merges keyed on natural identity) --------

    def register_chipset(self, chipset: ChipsetModel) -> None:
        row = self.conn.execute(
            "SELECT release_date, marketing_name FROM chipsets"
            " WHERE manufacturer = ? AND model_number = ?",
            (chipset.manufacturer.value, chipset.model_number),
        ).fetchone()
        release = chipset.release_date.isoformat() if chipset.release_date else None
        marketing = chipset.marketing_name
        if row:
            release = _min_opt(release, row[0])
            marketing = _min_opt(marketing, row[1])
        self.conn.execute(
            "INSERT OR REPLACE INTO chipsets VALUES (?, ?, ?, ?)",
            (chipset.manufacturer.value, chipset.model_number, release, marketing),
        )
        self.conn.commit()

    def register_smartphone(self, phone: SmartphoneModel) -> None:
        row = self.conn.execute(
            "SELECT chipset_string, release_date FROM smartphones"
            " WHERE oem = ? AND device_name = ?",
            (phone.oem, phone.device_name),
        ).fetchone()
        chipset_string = phone.chipset_string
        release = phone.release_date.isoformat()
        if row:
            chipset_string = _min_opt(chipset_string, row[0])
            release = _min_opt(release, row[1])
        self.conn.execute(
            "INSERT OR REPLACE INTO smartphones VALUES (?, ?, ?, ?, NULL, NULL)",
            (phone.oem, phone.device_name, chipset_string, release),
        )
        self.conn.commit()

    def register_update(self, update: DeviceUpdate) -> None:
        row = self.conn.execute(
            "SELECT explicit_cves, spl_date FROM device_updates"
            " WHERE oem = ? AND device_name = ? AND release_date = ?",
            (update.oem, update.device_name, update.release_date.isoformat()),
        ).fetchone()
        cves = {str(c) for c in update.explicit_cves}
        spl = update.spl_date.isoformat() if update.spl_date else None
        if row:
            cves |= set(json.loads(row[0]))
            spl = _max_opt(spl, row[1])
        self.conn.execute(
            "INSERT OR REPLACE INTO device_updates VALUES (?, ?, ?, ?, ?)",
            (
                update.oem,
                update.device_name,
                update.release_date.isoformat(),
                json.dumps(sorted(cves)),
                spl,
            ),
        )
        self.conn.commit()

    def register_aosp_bulletin(self, bulletin: AospBulletin) -> None:
        row = self.conn.execute(
            "SELECT cves FROM aosp_bulletins WHERE spl_date = ?",
            (bulletin.spl_date.isoformat(),),
        ).fetchone()
        cves = {str(c) for c in bulletin.cves}
        if row:
            cves |= set(json.loads(row[0]))
        self.conn.execute(
            "INSERT OR REPLACE INTO aosp_bulletins VALUES (?, ?)",
            (bulletin.spl_date.isoformat(), json.dumps(sorted(cves))),
        )
        self.conn.commit()

    # -- vulnerabilities -----------------------------------------------------

    def upsert_vulnerability(self, record: VantagePointRecord) -> Vulnerability:
        """Store one vantage point's view, then recompute the derived fields.

        Keyed on the CVE; the record replaces this source's record under its
        natural key (cve, vantage point, publication date), so re-inserting an
        identical record is a no-op.
        """
        cve = str(record.cve)
        self.conn.execute(
            "INSERT OR IGNORE INTO vulnerabilities (cve) VALUES (?)", (cve,)
        )
        self.conn.execute(
            "INSERT OR REPLACE INTO records VALUES (?,?,?,?,?,?,?,?,?,?,?,?,?,?)",
            (
                cve,
                record.vantage_point.value,
                record.publication_date.isoformat(),
                record.source.value,
                record.manufacturer.value if record.manufacturer else None,
                record.severity,
                record.severity_version,
                record.severity_label,
                record.description,
                json.dumps(list(record.affected_chipset_strings)),
                record.component_raw,
                record.credit,
                None if record.internal_flag is None else int(record.internal_flag),
                record.report_date.isoformat() if record.report_date else None,
            ),
        )
        self._rederive(cve)
        self.conn.commit()
        return self._load_vulnerability(cve)

    def augment_all(self) -> int:
        """Recompute derived fields for every vulnerability; returns the count."""
        cves = [r[0] for r in self.conn.execute("SELECT cve FROM vulnerabilities")]
        for cve in cves:
            self._rederive(cve)
        self.conn.commit()
        return len(cves)

    def _rederive(self, cve: str) -> None:
        records = self._records_for(cve)
        derived = derive_fields(tuple(records), self.key_terms)
        self.conn.execute(
            "UPDATE vulnerabilities SET component = ?, location = ?, attribution = ?,"
            " report_date = ?, patch_date = ? WHERE cve = ?",
            (
                derived["component"].value if derived["component"] else None,
                derived["location"].value,
                derived["attribution"].value,
                derived["report_date"].isoformat() if derived["report_date"] else None,
                derived["patch_date"].isoformat() if derived["patch_date"] else None,
                cve,
            ),
        )

    # -- linking -------------------------------------------------------------

    def link_vulnerability_chipsets(self, cve: CveId | str) -> int:
        """Resolve affected-chipset strings to chipset rows; returns new links.

        CM bulletin strings match only that CM's chipsets; NVD strings match
        across all CMs. Unmatched strings are preserved verbatim for curation.
        """
        cve = str(cve)
        chipsets = {
            (m, n): None
            for m, n in self.conn.execute(
                "SELECT manufacturer, model_number FROM chipsets"
            )
        }
        created = 0
        for record in self._records_for(cve):
            for raw in record.affected_chipset_strings:
                try:
                    normalized = normalize_chipset_name(raw)
                except Exception:
                    self._note_unresolved(cve, raw, record.vantage_point.value)
                    continue
                if record.source == SourceCategory.CM_BULLETIN and record.manufacturer:
                    candidates = [(record.manufacturer.value, normalized)]
                else:
                    candidates = [
                        (m.value, normalized) for m in Manufacturer
                    ]
                matched = [key for key in candidates if key in chipsets]
                if not matched:
                    self._note_unresolved(cve, raw, record.vantage_point.value)
                    continue
                for manufacturer, model in matched:
                    cursor = self.conn.execute(
                        "INSERT OR IGNORE INTO vulnerability_chipsets VALUES (?, ?, ?, ?)",
                        (cve, manufacturer, model, raw),
                    )
                    created += cursor.rowcount
        self.conn.commit()
        return created

    def _note_unresolved(self, cve: str, raw: str, vantage_point: str) -> None:
        self.conn.execute(
            "INSERT OR IGNORE INTO unresolved_chipset_strings VALUES (?, ?, ?)",
            (cve, raw, vantage_point),
        )

    def resolve_smartphone_chipsets(self) -> tuple[int, list[str]]:
        """Assign the chipset foreign key for every smartphone; returns
        (resolved count, unresolved device ids)."""
        chipset_keys = set(
            self.conn.execute("SELECT manufacturer, model_number FROM chipsets")
        )
        resolved = 0
        unresolved: list[str] = []
        rows = list(
            self.conn.execute("SELECT oem, device_name, chipset_string FROM smartphones")
        )
        for oem, device_name, chipset_string in rows:
            try:
                normalized = normalize_chipset_name(chipset_string)
            except Exception:
                unresolved.append(f"{oem}/{device_name}")
                continue
            matches = [key for key in sorted(chipset_keys) if key[1] == normalized]
            if len(matches) == 1:
                self.conn.execute(
                    "UPDATE smartphones SET chipset_manufacturer = ?, chipset_model = ?"
                    " WHERE oem = ? AND device_name = ?",
                    (*matches[0], oem, device_name),
                )
                resolved += 1
            else:
                # Zero or several CMs share the model number: ambiguous, report.
                unresolved.append(f"{oem}/{device_name}")
        self.conn.commit()
        return resolved, unresolved

    def link_all(self) -> LinkReport:
        links = 0
        for (cve,) in list(self.conn.execute("SELECT cve FROM vulnerabilities")):
            links += self.link_vulnerability_chipsets(cve)
        devices_resolved, devices_unresolved = self.resolve_smartphone_chipsets()
        unresolved = tuple(
            (c, s, v)
            for c, s, v in self.conn.execute(
                "SELECT cve, raw_string, vantage_point FROM unresolved_chipset_strings"
                " ORDER BY cve, raw_string, vantage_point"
            )
        )
        return LinkReport(links, unresolved, devices_resolved, tuple(devices_unresolved))

    # -- loading -------------------------------------------------------------

    def _records_for(self, cve: str) -> list[VantagePointRecord]:
        rows = self.conn.execute(
            "SELECT cve, vantage_point, publication_date, source, manufacturer,"
            " severity, severity_version, severity_label, description,"
            " affected_chipset_strings, component_raw, credit, internal_flag, report_date"
            " FROM records WHERE cve = ? ORDER BY publication_date, vantage_point",
            (cve,),
        ).fetchall()
        return [_record_from_row(row) for row in rows]

    def _load_vulnerability(self, cve: str) -> Vulnerability:
        row = self.conn.execute(
            "SELECT cve, component, location, attribution, report_date, patch_date"
            " FROM vulnerabilities WHERE cve = ?",
            (cve,),
        ).fetchone()
        if row is None:
            raise KeyError(cve)
        links = frozenset(
            (m, n)
            for m, n in self.conn.execute(
                "SELECT manufacturer, model_number FROM vulnerability_chipsets"
                " WHERE cve = ?",
                (cve,),
            )
        )
        return _vulnerability_from_row(row, tuple(self._records_for(cve)), links)

    def snapshot(self) -> "Snapshot":
        return Snapshot.from_kb(self)

    # -- export / import -----------------------------------------------------

    def export_dir(self, directory: str | Path) -> None:
        """Write every table as line-delimited canonical JSON, rows in key order."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for table in EXPORT_TABLES:
            rows = self._table_rows(table)
            (directory / f"{table}.jsonl").write_text(
                canonical_jsonl(rows), encoding="utf-8"
            )

    def _table_rows(self, table: str) -> list[dict]:
        cursor = self.conn.execute(f"SELECT * FROM {table}")
        columns = [c[0] for c in cursor.description]
        rows = []
        for values in cursor.fetchall():
            row = dict(zip(columns, values))
            for key in ("affected_chipset_strings", "explicit_cves", "cves"):
                if isinstance(row.get(key), str):
                    row[key] = json.loads(row[key])
            rows.append(row)
        rows.sort(key=canonical_json)
        return rows

    def import_dir(self, directory: str | Path) -> None:
        """Load a previous export into an empty store."""
        directory = Path(directory)
        for table in EXPORT_TABLES:
            path = directory / f"{table}.jsonl"
            if not path.exists():
                continue
            for line in path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                row = json.loads(line)
                for key in ("affected_chipset_strings", "explicit_cves", "cves"):
                    if key in row:
                        row[key] = json.dumps(row[key])
                columns = sorted(row)
                self.conn.execute(
                    f"INSERT OR REPLACE INTO {table} ({', '.join(columns)})"
                    f" VALUES ({', '.join('?' for _ in columns)})",
                    [row[c] for c in columns],
                )
        self.conn.commit()


def _min_opt(a, b):
    values = [v for v in (a, b) if v is not None]
    return min(values) if values else None


def _max_opt(a, b):
    values = [v for v in (a, b) if v is not None]
    return max(values) if values else None


def _record_from_row(row) -> VantagePointRecord:
    (
        cve,
        vantage_point,
        publication_date,
        source,
        manufacturer,
        severity,
        severity_version,
        severity_label,
        description,
        affected,
        component_raw,
        credit,
        internal_flag,
        report_date,
    ) = row
    return VantagePointRecord(
        source=SourceCategory(source),
        vantage_point=VantagePoint(vantage_point),
        cve=validate_cve(cve),
        publication_date=date.fromisoformat(publication_date),
        description=description,
        severity=severity,
        severity_version=severity_version,
        severity_label=severity_label,
        affected_chipset_strings=tuple(json.loads(affected)),
        component_raw=component_raw,
        credit=credit,
        internal_flag=None if internal_flag is None else bool(internal_flag),
        report_date=date.fromisoformat(report_date) if report_date else None,
        manufacturer=Manufacturer(manufacturer) if manufacturer else None,
    )


def _vulnerability_from_row(row, records, links) -> Vulnerability:
    cve, component, location, attribution, report_date, patch_date = row
    return Vulnerability(
        cve=validate_cve(cve),
        records=records,
        component=Component(component) if component else None,
        location=Location(location),
        attribution=Attribution(attribution),
        report_date=date.fromisoformat(report_date) if report_date else None,
        patch_date=date.fromisoformat(patch_date) if patch_date else None,
        affected_chipsets=links,
    )


@dataclass
class Snapshot:
    """Immutable read view with the traversal queries used by analytics."""

    chipsets: dict[ChipsetKey, ChipsetModel]
    smartphones: dict[DeviceKey, SmartphoneModel]
    vulnerabilities: dict[str, Vulnerability]
    updates: dict[DeviceKey, tuple[DeviceUpdate, ...]]
    aosp_bulletins: tuple[AospBulletin, ...]
    unresolved_strings: tuple[tuple[str, str, str], ...]
    devices_by_chipset: dict[ChipsetKey, tuple[DeviceKey, ...]] = field(default_factory=dict)
    vulns_by_chipset: dict[ChipsetKey, frozenset[str]] = field(default_factory=dict)
    _first_spl_with: dict[str, date] = field(default_factory=dict)

    @classmethod
    def from_kb(cls, kb: KnowledgeBase) -> "Snapshot":
        chipsets = {}
        for m, n, release, marketing in kb.conn.execute(
            "SELECT manufacturer, model_number, release_date, marketing_name FROM chipsets"
        ):
            chipsets[(m, n)] = ChipsetModel(
                Manufacturer(m),
                n,
                date.fromisoformat(release) if release else None,
                marketing,
            )

        smartphones = {}
        for oem, name, chipset_string, release, cm, model in kb.conn.execute(
            "SELECT oem, device_name, chipset_string, release_date,"
            " chipset_manufacturer, chipset_model FROM smartphones"
        ):
            smartphones[(oem, name)] = SmartphoneModel(
                oem=oem,
                device_name=name,
                chipset_string=chipset_string,
                release_date=date.fromisoformat(release),
                chipset=(cm, model) if cm else None,
            )

        vulnerabilities = {}
        link_rows = kb.conn.execute(
            "SELECT cve, manufacturer, model_number FROM vulnerability_chipsets"
        ).fetchall()
        links_by_cve: dict[str, set[ChipsetKey]] = {}
        for cve, m, n in link_rows:
            links_by_cve.setdefault(cve, set()).add((m, n))
        for row in kb.conn.execute(
            "SELECT cve, component, location, attribution, report_date, patch_date"
            " FROM vulnerabilities"
        ):
            cve = row[0]
            vulnerabilities[cve] = _vulnerability_from_row(
                row,
                tuple(kb._records_for(cve)),
                frozenset(links_by_cve.get(cve, set())),
            )

        updates: dict[DeviceKey, list[DeviceUpdate]] = {}
        for oem, name, release, cves, spl in kb.conn.execute(
            "SELECT oem, device_name, release_date, explicit_cves, spl_date"
            " FROM device_updates"
        ):
            updates.setdefault((oem, name), []).append(
                DeviceUpdate(
                    oem=oem,
                    device_name=name,
                    release_date=date.fromisoformat(release),
                    explicit_cves=frozenset(validate_cve(c) for c in json.loads(cves)),
                    spl_date=date.fromisoformat(spl) if spl else None,
                )
            )

        bulletins = tuple(
            AospBulletin(
                spl_date=date.fromisoformat(spl),
                cves=frozenset(validate_cve(c) for c in json.loads(cves)),
            )
            for spl, cves in kb.conn.execute(
                "SELECT spl_date, cves FROM aosp_bulletins ORDER BY spl_date"
            )
        )

        unresolved = tuple(
            (c, s, v)
            for c, s, v in kb.conn.execute(
                "SELECT cve, raw_string, vantage_point FROM unresolved_chipset_strings"
                " ORDER BY cve, raw_string, vantage_point"
            )
        )

        return cls(
            chipsets=chipsets,
            smartphones=smartphones,
            vulnerabilities=vulnerabilities,
            updates={k: tuple(sorted(v, key=lambda u: u.release_date)) for k, v in updates.items()},
            aosp_bulletins=bulletins,
            unresolved_strings=unresolved,
        ).build_indexes()

    def build_indexes(self) -> "Snapshot":
        by_chipset: dict[ChipsetKey, list[DeviceKey]] = {}
        for key, phone in sorted(self.smartphones.items()):
            if phone.chipset is not None:
                by_chipset.setdefault(phone.chipset, []).append(key)
        self.devices_by_chipset = {k: tuple(v) for k, v in by_chipset.items()}

        vulns: dict[ChipsetKey, set[str]] = {}
        for cve, vuln in self.vulnerabilities.items():
            for chipset in vuln.affected_chipsets:
                vulns.setdefault(chipset, set()).add(cve)
        self.vulns_by_chipset = {k: frozenset(v) for k, v in vulns.items()}

        first_spl: dict[str, date] = {}
        for bulletin in self.aosp_bulletins:
            for cve in bulletin.cves:
                key = str(cve)
                if key not in first_spl or bulletin.spl_date < first_spl[key]:
                    first_spl[key] = bulletin.spl_date
        self._first_spl_with = first_spl
        return self

    # -- set queries ----------------------------------------------------------

    def vulns_of_chipset(self, chipset: ChipsetKey) -> frozenset[str]:
        """V(c): identifiers of vulnerabilities linked to the chipset."""
        return self.vulns_by_chipset.get(chipset, frozenset())

    def affected_smartphones(self, vuln: Vulnerability) -> set[SmartphoneModel]:
        """Devices whose chipset is affected: {s | v in V(B(s))}."""
        devices: set[SmartphoneModel] = set()
        for chipset in vuln.affected_chipsets:
            for key in self.devices_by_chipset.get(chipset, ()):
                devices.add(self.smartphones[key])
        return devices

    def mitigating_updates(
        self, vuln: Vulnerability, phone: SmartphoneModel
    ) -> list[DeviceUpdate]:
        """Updates of the phone that mitigate the vulnerability.

        An update mitigates either by listing the CVE explicitly or by
        referencing an SPL at or after the first AOSP bulletin listing it.
        """
        first_spl = self._first_spl_with.get(str(vuln.cve))
        result = []
        for update in self.updates.get(phone.key, ()):
            if vuln.cve in update.explicit_cves:
                result.append(update)
            elif (
                update.spl_date is not None
                and first_spl is not None
                and first_spl <= update.spl_date
            ):
                result.append(update)
        return sorted(result, key=lambda u: u.release_date)

    def has_update_info(self, phone: SmartphoneModel) -> bool:
        return bool(self.updates.get(phone.key))
