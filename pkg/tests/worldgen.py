"""Random instance generator: builds a plain oracle World and the matching
knowledge base, so pipeline results can be compared against brute force."""

from __future__ import annotations

import random
from datetime import date, timedelta

from chipvulnkb.domain import (
    AospBulletin,
    ChipsetModel,
    DeviceUpdate,
    Manufacturer,
    SmartphoneModel,
    validate_cve,
)
from chipvulnkb.kb import KnowledgeBase

from conftest import cm_record, nvd_record
from oracle import World

_CMS = (Manufacturer.QUALCOMM, Manufacturer.MEDIATEK)


def random_world(
    rng: random.Random,
    max_chipsets: int = 8,
    max_vulns: int = 30,
    max_phones: int = 20,
) -> tuple[World, KnowledgeBase]:
    world = World()
    kb = KnowledgeBase()

    n_chipsets = rng.randint(1, max_chipsets)
    chipset_cm: dict[str, Manufacturer] = {}
    release_pool = [date(2018, 1, 1) + timedelta(days=90 * i) for i in range(16)]
    for i in range(n_chipsets):
        model = f"CH{i}"
        cm = rng.choice(_CMS)
        # draw from a small pool so release-date ties actually occur
        release = rng.choice(release_pool)
        chipset_cm[model] = cm
        world.chipset_release[model] = release
        kb.register_chipset(ChipsetModel(cm, model, release))

    n_vulns = rng.randint(1, max_vulns)
    for i in range(n_vulns):
        patch = date(2019, 1, 1) + timedelta(days=rng.randint(0, 1800))
        cve = f"CVE-{patch.year}-{1000 + i}"
        cm = rng.choice(_CMS)
        own_models = [m for m, c in chipset_cm.items() if c == cm]
        other_models = [m for m, c in chipset_cm.items() if c != cm]
        cm_affected = (
            rng.sample(own_models, rng.randint(1, len(own_models))) if own_models else []
        )
        extra = (
            rng.sample(other_models, rng.randint(0, min(2, len(other_models))))
            if other_models and rng.random() < 0.3
            else []
        )
        if not cm_affected and not extra:
            extra = [rng.choice(list(chipset_cm))]
        world.vuln_affects[cve] = set(cm_affected) | set(extra)
        world.vuln_patch[cve] = patch
        world.vuln_cm[cve] = cm.value

        internal = rng.choice([True, False]) if cm == Manufacturer.QUALCOMM else None
        credit = rng.choice([None, "Reporter A", "Lab B"]) if internal is not True else None
        world.vuln_internal_flag[cve] = internal
        world.vuln_credit[cve] = credit

        cm_severity = round(rng.uniform(2, 10), 1) if rng.random() < 0.8 else None
        world.cm_severity[cve] = cm_severity

        report = None
        if rng.random() < 0.6:
            # mostly before the patch; occasionally after it (a data error)
            report = patch - timedelta(days=rng.randint(-15, 400))
            report = max(report, date(2018, 1, 1))
        world.vuln_report[cve] = report

        kb.upsert_vulnerability(
            cm_record(
                cve,
                patch.isoformat(),
                cm=cm,
                chipsets=tuple(cm_affected),
                severity=cm_severity,
                credit=credit,
                internal=internal,
                reported=report.isoformat() if report else None,
            )
        )
        if extra or rng.random() < 0.5:
            nvd_pub = patch + timedelta(days=rng.randint(0, 500))
            nvd_severity = round(rng.uniform(2, 10), 1) if rng.random() < 0.8 else None
            world.nvd_pub[cve] = nvd_pub
            world.nvd_severity[cve] = nvd_severity
            kb.upsert_vulnerability(
                nvd_record(
                    cve,
                    nvd_pub.isoformat(),
                    chipsets=tuple(extra),
                    severity=nvd_severity,
                )
            )

    n_phones = rng.randint(1, max_phones)
    cves = sorted(world.vuln_affects)
    for i in range(n_phones):
        phone = f"oem{i % 3}-p{i}"
        chipset = rng.choice(sorted(chipset_cm))
        release = date(2019, 1, 1) + timedelta(days=rng.randint(0, 1500))
        world.phone_chipset[phone] = chipset
        world.phone_release[phone] = release
        kb.register_smartphone(
            SmartphoneModel(f"oem{i % 3}", f"p{i}", chipset, release)
        )

    spl_pool = [date(2019 + y, m, 1) for y in range(5) for m in (2, 6, 10)]
    for spl in rng.sample(spl_pool, rng.randint(0, 4)):
        listed = set(rng.sample(cves, rng.randint(0, min(6, len(cves)))))
        world.bulletins.append((spl, listed))
        kb.register_aosp_bulletin(
            AospBulletin(spl, frozenset(validate_cve(c) for c in listed))
        )

    for phone in world.phone_chipset:
        oem, name = phone.split("-", 1)
        world.phone_updates[phone] = []
        for _ in range(rng.randint(0, 3)):
            released = date(2019, 6, 1) + timedelta(days=rng.randint(0, 1700))
            explicit = set(rng.sample(cves, rng.randint(0, min(3, len(cves)))))
            spl = rng.choice(spl_pool) if rng.random() < 0.5 else None
            if not explicit and spl is None:
                spl = rng.choice(spl_pool)
            world.phone_updates[phone].append((released, explicit, spl))
            kb.register_update(
                DeviceUpdate(
                    oem,
                    name,
                    released,
                    frozenset(validate_cve(c) for c in explicit),
                    spl,
                )
            )

    kb.link_all()
    return world, kb
