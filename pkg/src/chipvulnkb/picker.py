"""Device selection maximizing distinct-vulnerability coverage.

Researchers evaluating discovery techniques want devices whose chipsets share
as few vulnerabilities as possible. Exact maximum coverage is NP-hard, so the
picker runs deterministic greedy selection with a documented tie-breaking
chain; the classic (1 - 1/e) guarantee applies and the test suite checks it
against exhaustive search on small instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

from .domain import Manufacturer, SmartphoneModel
from .kb import Snapshot
from .serialize import parse_date


class PickRequestError(ValueError):
    pass


@dataclass(frozen=True)
class PickRequest:
    k: int
    oems: tuple[str, ...] | None = None
    manufacturers: tuple[Manufacturer, ...] | None = None
    released_from: date | None = None
    released_to: date | None = None
    locked: tuple[str, ...] = ()

    def __post_init__(self):
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 1:
            raise PickRequestError("k must be a positive integer")

    @classmethod
    def from_payload(cls, payload: dict) -> "PickRequest":
        if not isinstance(payload, dict):
            raise PickRequestError("request body must be an object")
        known = {"k", "oems", "manufacturers", "released_from", "released_to", "locked"}
        unknown = set(payload) - known
        if unknown:
            raise PickRequestError(f"unknown fields: {', '.join(sorted(unknown))}")
        if "k" not in payload:
            raise PickRequestError("k is required")

        def str_list(name) -> tuple[str, ...] | None:
            value = payload.get(name)
            if value is None:
                return None
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                raise PickRequestError(f"{name} must be a list of strings")
            return tuple(value)

        manufacturers = None
        if str_list("manufacturers") is not None:
            try:
                manufacturers = tuple(Manufacturer(v) for v in payload["manufacturers"])
            except ValueError as exc:
                raise PickRequestError(str(exc)) from None

        def opt_date(name) -> date | None:
            value = payload.get(name)
            if value is None:
                return None
            try:
                return parse_date(str(value))
            except Exception as exc:
                raise PickRequestError(f"{name}: {exc}") from None

        return cls(
            k=payload["k"],
            oems=str_list("oems"),
            manufacturers=manufacturers,
            released_from=opt_date("released_from"),
            released_to=opt_date("released_to"),
            locked=str_list("locked") or (),
        )


@dataclass(frozen=True)
class PickResult:
    selection: tuple[dict, ...]
    total_covered: int
    overlap_matrix: tuple[tuple[int, ...], ...]
    candidate_count: int
    truncated: bool

    def to_payload(self) -> dict:
        return {
            "selection": list(self.selection),
            "total_covered": self.total_covered,
            "overlap_matrix": [list(row) for row in self.overlap_matrix],
            "candidate_count": self.candidate_count,
            "truncated": self.truncated,
        }


def _device_index(snap: Snapshot) -> dict[str, SmartphoneModel]:
    return {phone.device_id: phone for phone in snap.smartphones.values()}


def _passes_filters(phone: SmartphoneModel, req: PickRequest) -> bool:
    if phone.chipset is None:
        return False
    if req.oems is not None and phone.oem not in req.oems:
        return False
    if req.manufacturers is not None and phone.chipset[0] not in {
        m.value for m in req.manufacturers
    }:
        return False
    if req.released_from is not None and phone.release_date < req.released_from:
        return False
    if req.released_to is not None and phone.release_date > req.released_to:
        return False
    return True


def coverage_delta(selection_ids: list[str], candidate_id: str, snap: Snapshot) -> int:
    """Vulnerabilities the candidate's chipset adds over the selection's union."""
    index = _device_index(snap)
    try:
        candidate = index[candidate_id]
    except KeyError:
        raise PickRequestError(f"unknown device {candidate_id!r}") from None
    covered: set[str] = set()
    for device_id in selection_ids:
        try:
            phone = index[device_id]
        except KeyError:
            raise PickRequestError(f"unknown device {device_id!r}") from None
        if phone.chipset is not None:
            covered |= snap.vulns_of_chipset(phone.chipset)
    if candidate.chipset is None:
        return 0
    return len(snap.vulns_of_chipset(candidate.chipset) - covered)


def pick_devices(req: PickRequest, snap: Snapshot) -> PickResult:
    """Greedy maximum-coverage selection of ``k`` devices.

    Locked devices seed the selection. Each greedy step adds the candidate
    adding the most uncovered vulnerabilities; ties fall through to fewer
    vulnerabilities shared with the current selection, newer release date,
    then device name.
    """
    index = _device_index(snap)
    locked_phones: list[SmartphoneModel] = []
    for device_id in req.locked:
        phone = index.get(device_id)
        if phone is None:
            raise PickRequestError(f"unknown locked device {device_id!r}")
        if not _passes_filters(phone, req):
            raise PickRequestError(
                f"locked device {device_id!r} does not satisfy the filters"
            )
        locked_phones.append(phone)
    if len(locked_phones) > req.k:
        raise PickRequestError("more locked devices than k")

    candidates = [
        phone
        for phone in sorted(snap.smartphones.values(), key=lambda p: p.device_id)
        if _passes_filters(phone, req) and phone.device_id not in req.locked
    ]
    if not candidates and not locked_phones:
        raise PickRequestError("no devices match the filters")

    def coverage(phone: SmartphoneModel) -> frozenset[str]:
        return snap.vulns_of_chipset(phone.chipset) if phone.chipset else frozenset()

    selection: list[tuple[SmartphoneModel, bool, int]] = []
    covered: set[str] = set()
    for phone in locked_phones:
        gain = len(coverage(phone) - covered)
        covered |= coverage(phone)
        selection.append((phone, True, gain))

    while len(selection) < req.k and candidates:
        best = None
        best_key = None
        for phone in candidates:
            cov = coverage(phone)
            gain = len(cov - covered)
            shared = len(cov & covered)
            # Larger gain, then fewer shared, then newer, then name.
            key = (-gain, shared, -phone.release_date.toordinal(), phone.device_name, phone.oem)
            if best_key is None or key < best_key:
                best, best_key = phone, key
        selection.append((best, False, -best_key[0]))
        covered |= coverage(best)
        candidates.remove(best)

    covs = [coverage(phone) for phone, _, _ in selection]
    overlap = tuple(
        tuple(len(covs[i] & covs[j]) for j in range(len(covs)))
        for i in range(len(covs))
    )
    entries = tuple(
        {
            "device_id": phone.device_id,
            "oem": phone.oem,
            "device_name": phone.device_name,
            "chipset": {"manufacturer": phone.chipset[0], "model_number": phone.chipset[1]}
            if phone.chipset
            else None,
            "release_date": phone.release_date.isoformat(),
            "locked": locked,
            "marginal_gain": gain,
            "coverage": len(cov),
        }
        for (phone, locked, gain), cov in zip(selection, covs)
    )
    return PickResult(
        selection=entries,
        total_covered=len(covered),
        overlap_matrix=overlap,
        candidate_count=len(candidates) + len(selection),
        truncated=len(selection) < req.k,
    )
