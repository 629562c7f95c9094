import pytest

from chipvulnkb.analytics import (
    MissingReleaseDateError,
    NotAffectedError,
    UnknownCveError,
    affected_count_distribution,
    availability_matrix,
    discovery_report,
    impact_report,
    introduction_report,
    newly_introduced,
    patch_latency_report,
    persists_into,
    severity_by_location,
    severity_consistency,
    unmitigated_report,
    unmitigated_vulnerabilities,
    update_timeline_report,
)
from chipvulnkb.domain import (
    AospBulletin,
    ChipsetModel,
    DeviceUpdate,
    Manufacturer,
    SmartphoneModel,
    VantagePoint,
    validate_cve,
)
from chipvulnkb.kb import KnowledgeBase

from conftest import build_kb, cm_record, d, nvd_record

C1 = ("Qualcomm", "C100")
C2 = ("Qualcomm", "C200")


class TestIntroductionPredicates:
    def test_earlier_release_decides_newly(self, toy_snapshot):
        v1 = toy_snapshot.vulnerabilities["CVE-2021-1001"]
        assert newly_introduced(v1, C1, toy_snapshot) is True
        assert newly_introduced(v1, C2, toy_snapshot) is False

    def test_single_chipset_is_newly(self, toy_snapshot):
        v3 = toy_snapshot.vulnerabilities["CVE-2020-1003"]
        assert newly_introduced(v3, C1, toy_snapshot) is True

    def test_shared_release_date_newly_for_both(self):
        kb = build_kb(
            chipsets=[
                ChipsetModel(Manufacturer.QUALCOMM, "A", d("2020-01-01")),
                ChipsetModel(Manufacturer.QUALCOMM, "B", d("2020-01-01")),
            ],
            records=[cm_record("CVE-2021-0001", "2021-02-01", chipsets=("A", "B"))],
        )
        snap = kb.snapshot()
        vuln = snap.vulnerabilities["CVE-2021-0001"]
        assert newly_introduced(vuln, ("Qualcomm", "A"), snap)
        assert newly_introduced(vuln, ("Qualcomm", "B"), snap)

    def test_not_affected_is_precondition_error(self, toy_snapshot):
        v2 = toy_snapshot.vulnerabilities["CVE-2021-1002"]
        with pytest.raises(NotAffectedError):
            newly_introduced(v2, C1, toy_snapshot)

    def test_missing_release_date_raises_for_exclusion(self):
        kb = build_kb(
            chipsets=[ChipsetModel(Manufacturer.QUALCOMM, "A", None)],
            records=[cm_record("CVE-2021-0001", "2021-02-01", chipsets=("A",))],
        )
        snap = kb.snapshot()
        with pytest.raises(MissingReleaseDateError):
            newly_introduced(snap.vulnerabilities["CVE-2021-0001"], ("Qualcomm", "A"), snap)

    def test_persists_examples(self, toy_snapshot):
        v1 = toy_snapshot.vulnerabilities["CVE-2021-1001"]
        v2 = toy_snapshot.vulnerabilities["CVE-2021-1002"]
        v3 = toy_snapshot.vulnerabilities["CVE-2020-1003"]
        assert persists_into(v1, C2, toy_snapshot) is True  # patched after C2 shipped
        assert persists_into(v3, C2, toy_snapshot) is False  # membership fails
        assert persists_into(v2, C2, toy_snapshot) is False  # newly introduced there


class TestIntroductionReport:
    def test_toy_counts(self, toy_snapshot):
        report = introduction_report(toy_snapshot)
        rows = {row["model_number"]: row for row in report["per_chipset"]}
        assert rows["C100"]["total"] == 2 and rows["C100"]["newly_introduced"] == 2
        assert rows["C200"]["total"] == 2 and rows["C200"]["newly_introduced"] == 1
        assert rows["C200"]["inherited"] == 1

    def test_partition_invariant(self, toy_snapshot):
        report = introduction_report(toy_snapshot)
        for row in report["per_chipset"]:
            assert row["newly_introduced"] + row["inherited"] == row["total"]
            assert 0.0 <= row["new_share"] <= 1.0

    def test_empty_kb(self):
        kb = KnowledgeBase()
        report = introduction_report(kb.snapshot())
        assert report["per_chipset"] == [] and report["aggregate"] is None

    def test_removed_before_next_skips_release_ties(self):
        # two chipsets share a release date; the next model is the strictly later one
        kb = build_kb(
            chipsets=[
                ChipsetModel(Manufacturer.QUALCOMM, "A", d("2020-01-01")),
                ChipsetModel(Manufacturer.QUALCOMM, "B", d("2020-01-01")),
                ChipsetModel(Manufacturer.QUALCOMM, "C", d("2021-01-01")),
            ],
            records=[cm_record("CVE-2020-0001", "2020-06-01", chipsets=("A",))],
        )
        report = introduction_report(kb.snapshot())
        row = next(r for r in report["per_chipset"] if r["model_number"] == "A")
        assert row["removed_before_next"]["next_model"] == "C"
        assert row["removed_before_next"]["removed"] == 1

    def test_vuln_with_dateless_chipset_excluded_and_listed(self):
        kb = build_kb(
            chipsets=[
                ChipsetModel(Manufacturer.QUALCOMM, "A", d("2020-01-01")),
                ChipsetModel(Manufacturer.QUALCOMM, "NODATE", None),
            ],
            records=[
                cm_record("CVE-2021-0001", "2021-02-01", chipsets=("A", "NODATE")),
                cm_record("CVE-2021-0002", "2021-03-01", chipsets=("A",)),
            ],
        )
        report = introduction_report(kb.snapshot())
        assert report["data_quality"]["excluded_vulnerabilities"] == ["CVE-2021-0001"]
        row = next(r for r in report["per_chipset"] if r["model_number"] == "A")
        assert row["total"] == 1


class TestDiscoveryReport:
    @pytest.fixture
    def snap(self):
        kb = build_kb(
            records=[
                cm_record("CVE-2023-0001", "2023-02-01", internal=True),
                cm_record("CVE-2023-0002", "2023-03-01", internal=False, credit="P1"),
                cm_record("CVE-2023-0003", "2023-04-01", internal=False, credit="P2"),
                cm_record("CVE-2023-0004", "2023-05-01", internal=False, credit="P3"),
            ]
        )
        return kb.snapshot()

    def test_year_totals_and_internal_fraction(self, snap):
        report = discovery_report(snap)
        (row,) = report["per_cm_year"]
        assert row == {
            "manufacturer": "Qualcomm",
            "year": 2023,
            "total": 4,
            "internal": 1,
            "external": 3,
            "unknown": 0,
            "internal_share": 0.25,
        }

    def test_zero_rows_omitted(self, snap):
        report = discovery_report(snap)
        assert len(report["per_cm_year"]) == 1

    def test_paper_mode_counts_unknown_as_internal_for_non_qualcomm(self):
        kb = build_kb(
            records=[
                cm_record("CVE-2023-0001", "2023-02-01", cm=Manufacturer.UNISOC,
                          vantage=VantagePoint.UNISOC_BULLETIN),
            ]
        )
        snap = kb.snapshot()
        strict = discovery_report(snap, "strict")
        upper = discovery_report(snap, "paper")
        assert strict["per_cm_year"][0]["internal"] == 0
        assert strict["per_cm_year"][0]["unknown"] == 1
        assert upper["per_cm_year"][0]["internal"] == 1


class TestSeverityByLocation:
    def test_median_difference(self):
        # groups mirroring the published box medians 7.8 vs 7.0
        kb = build_kb(records=_located_records([7.5, 7.8, 9.1], [5.5, 7.0, 7.8]))
        payload = severity_by_location(kb.snapshot())
        assert payload["median_difference"] == pytest.approx(0.8)

    def test_identical_groups_h_zero_p_one(self):
        kb = build_kb(records=_located_records([5.0, 5.0], [5.0, 5.0]))
        payload = severity_by_location(kb.snapshot())
        assert payload["test"] == {"h": 0.0, "p": 1.0, "significant_at_0_05": False}

    def test_separated_groups(self):
        kb = build_kb(records=_located_records([9.0, 9.0, 9.0], [5.0, 5.0, 5.0]))
        payload = severity_by_location(kb.snapshot())
        assert payload["groups"]["Firmware"]["summary"]["median"] == 9.0
        assert payload["groups"]["Driver"]["summary"]["median"] == 5.0
        assert payload["median_difference"] == 4.0
        import scipy.stats

        ref_h, ref_p = scipy.stats.kruskal([9.0, 9.0, 9.0], [5.0, 5.0, 5.0])
        assert payload["test"]["h"] == pytest.approx(ref_h, abs=1e-9)
        assert payload["test"]["p"] == pytest.approx(ref_p, abs=1e-9)

    def test_empty_group_skips_test_with_notice(self):
        kb = build_kb(records=_located_records([9.0], []))
        payload = severity_by_location(kb.snapshot())
        assert payload["test"] is None
        assert "skipped" in payload["notice"]


class TestPatchLatency:
    def test_day_counts(self):
        kb = build_kb(
            records=[
                cm_record("CVE-2021-0001", "2021-03-31", reported="2021-01-01"),
                cm_record("CVE-2021-0002", "2021-05-05", reported="2021-05-05"),
            ]
        )
        payload = patch_latency_report(kb.snapshot())
        assert payload["overall"]["n"] == 2
        assert payload["overall"]["summary"]["max"] == 89  # compliant
        assert payload["overall"]["summary"]["min"] == 0
        assert payload["overall"]["compliant_share"] == 1.0

    def test_negative_day_count_is_data_error(self):
        kb = build_kb(
            records=[cm_record("CVE-2021-0001", "2021-01-01", reported="2021-06-01")]
        )
        payload = patch_latency_report(kb.snapshot())
        assert payload["overall"] is None
        assert payload["data_errors"] == [{"cve": "CVE-2021-0001", "days": -151}]

    def test_vulns_without_report_date_excluded(self):
        kb = build_kb(records=[cm_record("CVE-2021-0001", "2021-01-01")])
        payload = patch_latency_report(kb.snapshot())
        assert payload["overall"] is None


class TestAvailability:
    def test_aosp_share(self):
        records = []
        bulletins = [
            AospBulletin(d("2022-02-01"), frozenset({validate_cve("CVE-2022-0001")})),
            AospBulletin(d("2022-03-01"), frozenset({validate_cve("CVE-2022-0002")})),
        ]
        for i in range(1, 5):
            records.append(cm_record(f"CVE-2022-000{i}", "2022-01-10"))
            records.append(nvd_record(f"CVE-2022-000{i}", "2022-01-20"))
        kb = build_kb(records=records, bulletins=bulletins)
        payload = availability_matrix(kb.snapshot())
        row = payload["per_cm"]["Qualcomm"]
        assert row["n"] == 4
        assert row["aosp"] == 0.5
        assert row["nvd"] == 1.0
        assert row["cm_website"] == 1.0

    def test_window_cuts_off_late_propagation(self):
        kb = build_kb(
            records=[
                cm_record("CVE-2020-0001", "2020-01-01"),
                nvd_record("CVE-2020-0001", "2021-06-01"),
            ]
        )
        payload = availability_matrix(kb.snapshot(), window_days=365)
        assert payload["per_cm"]["Qualcomm"]["nvd"] == 0.0

    def test_period_filter_and_empty_matrix(self):
        kb = build_kb(records=[cm_record("CVE-2020-0001", "2020-01-01")])
        payload = availability_matrix(
            kb.snapshot(), period=(d("2022-06-01"), d("2023-05-31"))
        )
        assert payload["per_cm"] == {}


class TestConsistency:
    def test_three_way_comparison(self):
        kb = build_kb(
            records=[
                cm_record("CVE-2022-0001", "2022-01-01", severity=7.5),
                nvd_record("CVE-2022-0001", "2022-01-10", severity=7.5),
                cm_record("CVE-2022-0002", "2022-01-01", severity=7.5),
                nvd_record("CVE-2022-0002", "2022-01-10", severity=9.8),
                cm_record("CVE-2022-0003", "2022-01-01", severity=9.0),
                nvd_record("CVE-2022-0003", "2022-01-10", severity=5.0),
                cm_record("CVE-2022-0004", "2022-01-01"),  # no CM score: excluded
                nvd_record("CVE-2022-0004", "2022-01-10", severity=5.0),
            ]
        )
        payload = severity_consistency(kb.snapshot())
        assert payload["n"] == 3
        assert payload["equal_share"] == pytest.approx(1 / 3)
        assert payload["nist_higher_share"] == pytest.approx(1 / 3)
        assert payload["nist_lower_share"] == pytest.approx(1 / 3)
        total = (
            payload["equal_share"] + payload["nist_higher_share"] + payload["nist_lower_share"]
        )
        assert total == pytest.approx(1.0)


def _update_world(**kwargs):
    """One chipset, two phones (one with updates), one vulnerability."""
    chipset = ChipsetModel(Manufacturer.QUALCOMM, "SM1", d("2020-01-01"))
    phones = [
        SmartphoneModel("Acme", "S1", "SM1", d("2020-06-01")),
        SmartphoneModel("Acme", "S2", "SM1", d("2021-06-01")),
    ]
    defaults = dict(
        chipsets=[chipset],
        phones=phones,
        records=[cm_record("CVE-2022-0001", "2022-01-01", chipsets=("SM1",))],
        updates=[],
        bulletins=[],
    )
    defaults.update(kwargs)
    return build_kb(**defaults)


class TestUnmitigated:
    def test_meeting_all_four_criteria(self):
        kb = _update_world(
            updates=[DeviceUpdate("Acme", "S1", d("2022-06-01"), spl_date=d("2022-05-01"))]
        )
        snap = kb.snapshot()
        assert unmitigated_vulnerabilities(snap) == {"CVE-2022-0001"}

    def test_changelog_listing_excludes(self):
        kb = _update_world(
            updates=[
                DeviceUpdate(
                    "Acme",
                    "S1",
                    d("2022-06-01"),
                    explicit_cves=frozenset({validate_cve("CVE-2022-0001")}),
                )
            ]
        )
        assert unmitigated_vulnerabilities(kb.snapshot()) == set()

    def test_publication_after_cutoff_excludes(self):
        kb = _update_world(
            records=[cm_record("CVE-2023-0001", "2023-06-01", chipsets=("SM1",))],
            updates=[DeviceUpdate("Acme", "S1", d("2023-07-01"), spl_date=d("2023-06-01"))],
        )
        assert unmitigated_vulnerabilities(kb.snapshot()) == set()

    def test_no_update_info_excludes(self):
        kb = _update_world(updates=[])
        assert unmitigated_vulnerabilities(kb.snapshot()) == set()

    def test_vuln_published_before_phone_release_excluded(self):
        kb = _update_world(
            records=[cm_record("CVE-2020-0001", "2020-02-01", chipsets=("SM1",))],
            updates=[DeviceUpdate("Acme", "S1", d("2022-06-01"), spl_date=d("2022-05-01"))],
        )
        # S1 released 2020-06-01, after publication: criterion iii fails
        assert unmitigated_vulnerabilities(kb.snapshot()) == set()

    def test_adding_update_never_grows_set(self):
        kb = _update_world(
            updates=[DeviceUpdate("Acme", "S1", d("2022-06-01"), spl_date=d("2022-05-01"))]
        )
        before = unmitigated_vulnerabilities(kb.snapshot())
        kb.register_update(
            DeviceUpdate(
                "Acme",
                "S1",
                d("2022-07-01"),
                explicit_cves=frozenset({validate_cve("CVE-2022-0001")}),
            )
        )
        after = unmitigated_vulnerabilities(kb.snapshot())
        assert after <= before

    def test_report_counts(self):
        kb = _update_world(
            updates=[DeviceUpdate("Acme", "S1", d("2022-06-01"), spl_date=d("2022-05-01"))]
        )
        payload = unmitigated_report(kb.snapshot())
        assert payload["eligible"] == 1
        assert payload["unmitigated"] == 1
        assert payload["mitigated"] == 0
        assert payload["unmitigated_cves"] == ["CVE-2022-0001"]


class TestUpdateTimeline:
    def test_worked_example(self):
        kb = _update_world(
            phones=[
                SmartphoneModel("Acme", "S1", "SM1", d("2020-06-01")),
                SmartphoneModel("Acme", "S2", "SM1", d("2020-07-01")),
            ],
            updates=[
                DeviceUpdate(
                    "Acme", "S1", d("2022-02-01"),
                    explicit_cves=frozenset({validate_cve("CVE-2022-0001")}),
                ),
                DeviceUpdate(
                    "Acme", "S2", d("2022-04-01"),
                    explicit_cves=frozenset({validate_cve("CVE-2022-0001")}),
                ),
            ],
        )
        payload = update_timeline_report(kb.snapshot())
        assert payload["pairs"] == 2
        assert payload["latency"]["summary"]["min"] == 31
        assert payload["latency"]["summary"]["max"] == 90
        assert payload["spread"]["summary"]["max"] == 59
        assert payload["first_to_half"]["summary"]["max"] == 0

    def test_single_phone_spread_zero(self):
        kb = _update_world(
            updates=[
                DeviceUpdate(
                    "Acme", "S1", d("2022-03-01"),
                    explicit_cves=frozenset({validate_cve("CVE-2022-0001")}),
                )
            ]
        )
        payload = update_timeline_report(kb.snapshot())
        assert payload["spread"]["summary"]["max"] == 0

    def test_negative_latency_is_data_error(self):
        kb = _update_world(
            updates=[
                DeviceUpdate(
                    "Acme", "S1", d("2021-06-01"),
                    explicit_cves=frozenset({validate_cve("CVE-2022-0001")}),
                )
            ]
        )
        payload = update_timeline_report(kb.snapshot())
        assert payload["pairs"] == 0
        assert payload["data_errors"][0]["days"] == -214


class TestAffectedDistribution:
    def test_toy_distribution(self, toy_snapshot):
        payload = affected_count_distribution(toy_snapshot)
        summary = payload["per_cm"]["Qualcomm"]
        assert summary["n"] == 3  # v1, v2, v3
        assert summary["summary"]["max"] == 3  # v1 reaches all three phones

    def test_cm_without_vulns_omitted(self, toy_snapshot):
        payload = affected_count_distribution(toy_snapshot)
        assert "Mediatek" not in payload["per_cm"]


class TestImpactReport:
    def test_toy_impact(self, toy_snapshot):
        payload = impact_report("CVE-2021-1001", toy_snapshot)
        assert len(payload["affected_chipsets"]) == 2
        assert payload["affected_smartphone_count"] == 3
        assert payload["per_oem"] == {"Acme": 2, "Bolt": 1}
        assert payload["warning"] is None

    def test_unlinked_cve_warns(self):
        kb = build_kb(records=[cm_record("CVE-2022-0001", "2022-01-01")])
        payload = impact_report("CVE-2022-0001", kb.snapshot())
        assert payload["affected_smartphone_count"] == 0
        assert payload["warning"] == "no chipset links resolved"

    def test_unknown_cve_raises(self, toy_snapshot):
        with pytest.raises(UnknownCveError):
            impact_report("CVE-1999-9999", toy_snapshot)

    def test_adding_link_never_shrinks_affected(self, toy_kb):
        snap = toy_kb.snapshot()
        before = snap.affected_smartphones(snap.vulnerabilities["CVE-2021-1002"])
        toy_kb.conn.execute(
            "INSERT INTO vulnerability_chipsets VALUES (?, ?, ?, ?)",
            ("CVE-2021-1002", "Qualcomm", "C100", "manual"),
        )
        toy_kb.conn.commit()
        snap2 = toy_kb.snapshot()
        after = snap2.affected_smartphones(snap2.vulnerabilities["CVE-2021-1002"])
        assert {p.key for p in before} <= {p.key for p in after}


def _located_records(firmware_scores, driver_scores):
    records = []
    seq = 1000
    for score in firmware_scores:
        cve = f"CVE-2022-{seq}"
        records.append(
            cm_record(cve, "2022-01-01", component_raw="WLAN Firmware",
                      description="issue in WLAN firmware")
        )
        records.append(nvd_record(cve, "2022-01-05", severity=score))
        seq += 1
    for score in driver_scores:
        cve = f"CVE-2022-{seq}"
        records.append(
            cm_record(cve, "2022-01-01", component_raw="Graphics Driver",
                      description="issue in the graphics driver")
        )
        records.append(nvd_record(cve, "2022-01-05", severity=score))
        seq += 1
    return records


class TestOracleEquivalenceRq2Rq3:
    """The remaining reports against brute force on random instances."""

    def test_reports_match_brute_force(self):
        import random

        import oracle
        from worldgen import random_world
        from chipvulnkb.stats import quantile

        for seed in range(200, 230):
            world, kb = random_world(random.Random(seed))
            snap = kb.snapshot()

            report = discovery_report(snap, "strict")
            rows = {
                (row["manufacturer"], row["year"]): row for row in report["per_cm_year"]
            }
            expected = oracle.discovery_counts(world)
            assert set(rows) == set(expected)
            for key, counts in expected.items():
                for field in ("total", "internal", "external", "unknown"):
                    assert rows[key][field] == counts[field], (seed, key, field)

            lower, equal, higher = oracle.consistency_counts(world)
            payload = severity_consistency(snap)
            n = lower + equal + higher
            assert payload["n"] == n
            if n:
                assert payload["nist_lower_share"] == lower / n
                assert payload["equal_share"] == equal / n
                assert payload["nist_higher_share"] == higher / n

            latency = patch_latency_report(snap)
            expected_days = oracle.latency_days(world)
            assert set(latency["per_cm"]) == set(expected_days)
            for cm, days in expected_days.items():
                block = latency["per_cm"][cm]
                assert block["n"] == len(days)
                assert block["summary"]["min"] == days[0]
                assert block["summary"]["max"] == days[-1]
                assert block["median_days"] == quantile(days, 0.5)
                assert block["quantile_95_days"] == quantile(days, 0.95)
                assert block["compliant_share"] == (
                    sum(1 for day in days if day <= 90) / len(days)
                )

            availability = availability_matrix(snap)
            expected_rows = oracle.availability_counts(world)
            assert set(availability["per_cm"]) == set(expected_rows)
            for cm, (count, nvd_hits, aosp_hits) in expected_rows.items():
                row = availability["per_cm"][cm]
                assert row["n"] == count
                assert row["nvd"] == nvd_hits / count
                assert row["aosp"] == aosp_hits / count
                assert row["cm_website"] == 1.0
            kb.close()
