"""Read-only HTTP API over a knowledge-base snapshot.

Serves the browsing endpoints, every metrics report, and the device picker.
All payloads are the canonical JSON serialization, byte-identical to a direct
invocation of the corresponding analytics call, so clients can trust that the
API never recomputes or reshapes numbers. Snapshot replacement is one
attribute assignment and therefore atomic for in-flight readers.
"""

from __future__ import annotations

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import analytics
from .analytics import AnalyticsConfig, METRIC_NAMES, UnknownCveError
from .domain import DomainError, Manufacturer
from .kb import Snapshot
from .picker import PickRequest, PickRequestError, coverage_delta, pick_devices
from .serialize import canonical_json

DEFAULT_PAGE_LIMIT = 100
MAX_PAGE_LIMIT = 1000


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        {"status": status, "code": code, "message": message}, status_code=status
    )


def _canonical(payload) -> Response:
    return Response(content=canonical_json(payload), media_type="application/json")


def _page(request: Request) -> tuple[int, int] | JSONResponse:
    try:
        limit = int(request.query_params.get("limit", DEFAULT_PAGE_LIMIT))
        offset = int(request.query_params.get("offset", 0))
    except ValueError:
        return _error(400, "bad_request", "limit and offset must be integers")
    if limit < 1 or limit > MAX_PAGE_LIMIT or offset < 0:
        return _error(400, "bad_request", "limit or offset out of range")
    return limit, offset


def create_app(
    snapshot: Snapshot,
    config: AnalyticsConfig | None = None,
    cors_origins: tuple[str, ...] = ("*",),
) -> FastAPI:
    app = FastAPI(title="chipvulnkb", docs_url=None, redoc_url=None)
    app.state.snapshot = snapshot
    app.state.config = config or AnalyticsConfig()
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    def snap() -> Snapshot:
        return app.state.snapshot

    @app.get("/health")
    def health():
        current = snap()
        return _canonical(
            {
                "status": "ok",
                "chipsets": len(current.chipsets),
                "smartphones": len(current.smartphones),
                "vulnerabilities": len(current.vulnerabilities),
            }
        )

    @app.get("/chipsets")
    def chipsets(request: Request):
        page = _page(request)
        if isinstance(page, JSONResponse):
            return page
        limit, offset = page
        current = snap()
        rows = [
            {
                "manufacturer": c.manufacturer,
                "model_number": c.model_number,
                "release_date": c.release_date,
                "marketing_name": c.marketing_name,
                "vulnerability_count": len(current.vulns_of_chipset(c.key)),
                "device_count": len(current.devices_by_chipset.get(c.key, ())),
            }
            for _, c in sorted(current.chipsets.items())
        ]
        return _canonical(
            {"total": len(rows), "offset": offset, "items": rows[offset : offset + limit]}
        )

    @app.get("/chipsets/{manufacturer}/{model}")
    def chipset_detail(manufacturer: str, model: str):
        current = snap()
        try:
            cm = Manufacturer(manufacturer)
        except ValueError:
            return _error(404, "not_found", f"unknown manufacturer {manufacturer!r}")
        chipset = current.chipsets.get((cm.value, model))
        if chipset is None:
            return _error(404, "not_found", f"unknown chipset {manufacturer}/{model}")
        devices = [
            current.smartphones[key].device_id
            for key in current.devices_by_chipset.get(chipset.key, ())
        ]
        return _canonical(
            {
                "manufacturer": chipset.manufacturer,
                "model_number": chipset.model_number,
                "release_date": chipset.release_date,
                "marketing_name": chipset.marketing_name,
                "vulnerabilities": sorted(current.vulns_of_chipset(chipset.key)),
                "devices": sorted(devices),
            }
        )

    @app.get("/devices")
    def devices(request: Request):
        page = _page(request)
        if isinstance(page, JSONResponse):
            return page
        limit, offset = page
        current = snap()
        rows = [
            {
                "device_id": p.device_id,
                "oem": p.oem,
                "device_name": p.device_name,
                "chipset": {"manufacturer": p.chipset[0], "model_number": p.chipset[1]}
                if p.chipset
                else None,
                "release_date": p.release_date,
            }
            for p in sorted(current.smartphones.values(), key=lambda p: p.device_id)
        ]
        return _canonical(
            {"total": len(rows), "offset": offset, "items": rows[offset : offset + limit]}
        )

    @app.get("/devices/{device_id}")
    def device_detail(device_id: str):
        current = snap()
        matches = [p for p in current.smartphones.values() if p.device_id == device_id]
        if not matches:
            return _error(404, "not_found", f"unknown device {device_id!r}")
        phone = matches[0]
        vulns = (
            sorted(current.vulns_of_chipset(phone.chipset)) if phone.chipset else []
        )
        timelines = {}
        for cve in vulns:
            updates = current.mitigating_updates(current.vulnerabilities[cve], phone)
            if updates:
                timelines[cve] = updates[0].release_date
        return _canonical(
            {
                "device_id": phone.device_id,
                "oem": phone.oem,
                "device_name": phone.device_name,
                "chipset": {"manufacturer": phone.chipset[0], "model_number": phone.chipset[1]}
                if phone.chipset
                else None,
                "release_date": phone.release_date,
                "updates": [
                    {
                        "release_date": u.release_date,
                        "spl_date": u.spl_date,
                        "explicit_cves": sorted(str(c) for c in u.explicit_cves),
                    }
                    for u in current.updates.get(phone.key, ())
                ],
                "vulnerabilities": vulns,
                "first_mitigation": timelines,
            }
        )

    @app.get("/vulnerabilities/{cve}")
    def vulnerability_detail(cve: str):
        try:
            payload = analytics.impact_report(cve, snap())
        except (UnknownCveError, DomainError):
            return _error(404, "not_found", f"unknown vulnerability {cve!r}")
        return _canonical(payload)

    @app.get("/metrics/{name}")
    def metric(name: str):
        if name not in METRIC_NAMES:
            return _error(404, "not_found", f"unknown metric {name!r}")
        return _canonical(analytics.run_metric(name, snap(), app.state.config))

    @app.post("/pick")
    async def pick(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "bad_request", "body is not valid JSON")
        try:
            result = pick_devices(PickRequest.from_payload(body), snap())
        except PickRequestError as exc:
            return _error(400, "bad_request", str(exc))
        return _canonical(result.to_payload())

    @app.post("/pick/delta")
    async def pick_delta(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "bad_request", "body is not valid JSON")
        if not isinstance(body, dict):
            return _error(400, "bad_request", "body must be an object")
        selection = body.get("selection", [])
        candidate = body.get("candidate")
        if not isinstance(selection, list) or not isinstance(candidate, str):
            return _error(
                400, "bad_request", "selection must be a list and candidate a string"
            )
        try:
            delta = coverage_delta([str(s) for s in selection], candidate, snap())
        except PickRequestError as exc:
            return _error(400, "bad_request", str(exc))
        return _canonical({"candidate": candidate, "delta": delta})

    return app


def swap_snapshot(app: FastAPI, snapshot: Snapshot) -> None:
    """Atomically replace the snapshot served to new requests."""
    app.state.snapshot = snapshot
