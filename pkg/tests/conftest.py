import sys
from datetime import date
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chipvulnkb.domain import (
    ChipsetModel,
    CveId,
    Manufacturer,
    SmartphoneModel,
    SourceCategory,
    VantagePoint,
    VantagePointRecord,
)
from chipvulnkb.kb import KnowledgeBase

FIXTURES = Path(__file__).parent.parent / "fixtures"


def d(text: str) -> date:
    return date.fromisoformat(text)


def cm_record(
    cve,
    published,
    cm=Manufacturer.QUALCOMM,
    vantage=VantagePoint.QUALCOMM_BULLETIN,
    chipsets=(),
    severity=None,
    component_raw=None,
    credit=None,
    internal=None,
    reported=None,
    description="",
):
    return VantagePointRecord(
        source=SourceCategory.CM_BULLETIN,
        vantage_point=vantage,
        cve=CveId(int(cve.split("-")[1]), cve.split("-")[2]),
        publication_date=d(published),
        description=description,
        severity=severity,
        affected_chipset_strings=tuple(chipsets),
        component_raw=component_raw,
        credit=credit,
        internal_flag=internal,
        report_date=d(reported) if reported else None,
        manufacturer=cm,
    )


def nvd_record(cve, published, chipsets=(), severity=None, description=""):
    return VantagePointRecord(
        source=SourceCategory.NVD,
        vantage_point=VantagePoint.NVD,
        cve=CveId(int(cve.split("-")[1]), cve.split("-")[2]),
        publication_date=d(published),
        description=description,
        severity=severity,
        severity_version="3.1" if severity is not None else None,
        affected_chipset_strings=tuple(chipsets),
    )


def build_kb(
    chipsets=(),
    phones=(),
    records=(),
    updates=(),
    bulletins=(),
    path=":memory:",
) -> KnowledgeBase:
    kb = KnowledgeBase(path)
    for chipset in chipsets:
        kb.register_chipset(chipset)
    for phone in phones:
        kb.register_smartphone(phone)
    for record in records:
        kb.upsert_vulnerability(record)
    for update in updates:
        kb.register_update(update)
    for bulletin in bulletins:
        kb.register_aosp_bulletin(bulletin)
    kb.link_all()
    return kb


@pytest.fixture
def toy_kb():
    """The minimal three-chipset instance used by the worked examples.

    C1 (rel 2020-01-01) carries v1 and v3; C2 (rel 2021-01-01) carries v1
    and v2; phones s1 -> C1, s2/s3 -> C2.
    """
    c1 = ChipsetModel(Manufacturer.QUALCOMM, "C100", d("2020-01-01"))
    c2 = ChipsetModel(Manufacturer.QUALCOMM, "C200", d("2021-01-01"))
    kb = build_kb(
        chipsets=[c1, c2],
        phones=[
            SmartphoneModel("Acme", "S1", "C100", d("2020-05-01")),
            SmartphoneModel("Acme", "S2", "C200", d("2021-02-01")),
            SmartphoneModel("Bolt", "S3", "C200", d("2021-04-01")),
        ],
        records=[
            cm_record("CVE-2021-1001", "2021-06-01", chipsets=("C100", "C200")),
            cm_record("CVE-2021-1002", "2021-09-01", chipsets=("C200",)),
            cm_record("CVE-2020-1003", "2020-03-02", chipsets=("C100",)),
        ],
    )
    yield kb
    kb.close()


@pytest.fixture
def toy_snapshot(toy_kb):
    return toy_kb.snapshot()
