"""Record live API responses into frontend/test/fixtures/.

The browser dashboard is a dumb client: its tests compare rendered
strings against these recorded payloads, so regenerating them after an
API change keeps the two sides honest. Run from the repository root:

    python3 scripts/record_ui_fixtures.py
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from robaudit.api import create_app

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures"

ALL_H = "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"
ZERO = "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N"
DEBUG_HEADER = "CVSS:3.1/AV:L/AC:L/PR:N/UI:N/S:C/C:H/I:H/A:N"
MITM_LINK = "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:N"


def _record(client: TestClient) -> dict[str, object]:
    base = "/api/v1"
    document = client.post(f"{base}/projects", json={
        "name": "delivery drone field audit",
        "platform": "quadrotor mk3",
        "environment": "drone"}).json()
    project_id = document["project"]["id"]
    revision = document["project"]["revision"]

    def post(path: str, **payload):
        nonlocal revision
        response = client.post(f"{base}/projects/{project_id}{path}",
                               json={"revision": revision, **payload})
        assert response.status_code < 400, response.text
        body = response.json()
        revision = body["project"]["revision"]
        return body

    radio_asset = post("/assets", category="exposed-service",
                       attributes={"host": "10.20.0.7"})
    asset_id = radio_asset["created_id"]
    radio = post("/surface", asset_id=asset_id, layer=1,
                 kind="wireless-interface", locator="wlan0",
                 auth="none", encrypted="no")
    control = post("/surface", asset_id=asset_id, layer=2,
                   kind="api", locator="udp/14550 control channel")
    debug = post("/surface", asset_id=asset_id, layer=5,
                 kind="physical-port", locator="uart J4")
    post("/phase:advance", auditor="field team")
    post("/findings", phase_recorded="vuln-analysis",
         surface_item_id=debug["created_id"],
         threat_slug="io-interface-exposure",
         title="unfused debug header on the flight controller",
         vector=DEBUG_HEADER)
    post("/findings", phase_recorded="vuln-analysis",
         surface_item_id=radio["created_id"], threat_slug="mitm",
         title="command link accepts unauthenticated peers",
         vector=MITM_LINK)
    post("/findings", phase_recorded="vuln-analysis",
         surface_item_id=control["created_id"], threat_slug="jamming",
         title="control channel has no frequency-hop fallback")

    # A deliberately stale write so the conflict body is a real response.
    conflict = client.post(
        f"{base}/projects/{project_id}/assets",
        json={"revision": 1, "category": "exposed-service",
              "attributes": {"host": "10.20.0.99"}})
    assert conflict.status_code == 409

    return {
        "catalog.json": client.get(f"{base}/catalog").json(),
        "environments.json": client.get(f"{base}/environments").json(),
        "project.json": client.get(f"{base}/projects/{project_id}").json(),
        "projects_list.json": client.get(f"{base}/projects").json(),
        "surface.json": client.get(
            f"{base}/projects/{project_id}/surface").json(),
        "findings_ranked.json": client.get(
            f"{base}/projects/{project_id}/findings",
            params={"ranked": "true"}).json(),
        "score_all_h.json": client.post(
            f"{base}/score", json={"vector": ALL_H}).json(),
        "score_zero.json": client.post(
            f"{base}/score", json={"vector": ZERO}).json(),
        "error_conflict.json": conflict.json(),
        "error_malformed_vector.json": client.post(
            f"{base}/score", json={"vector": "CVSS:3.1/AV:?"}).json(),
    }


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as store_dir:
        with TestClient(create_app(store_dir)) as client:
            fixtures = _record(client)
    for name, payload in fixtures.items():
        path = FIXTURE_DIR / name
        path.write_text(
            json.dumps(payload, ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8")
        print(f"wrote {path.relative_to(Path.cwd())}")


if __name__ == "__main__":
    main()
