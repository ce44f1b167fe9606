"""Command-line client: output shapes, exit codes, and parity with HTTP."""

import json
import re

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from robaudit.api import create_app
from robaudit.cli import main
from robaudit.reporting import export_project
from robaudit.store import ProjectStore

ALL_H = "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"

TWO_PORT_XML = """<nmaprun scanner="nmap">
  <host><address addr="192.168.1.10" addrtype="ipv4"/>
    <ports>
      <port protocol="tcp" portid="22"><state state="open"/>
        <service name="ssh" version="7.2p2"/></port>
      <port protocol="tcp" portid="80"><state state="open"/>
        <service name="http"/></port>
    </ports>
  </host>
</nmaprun>
"""


@pytest.fixture
def invoke(tmp_path):
    runner = CliRunner()
    store = tmp_path / "store"

    def _invoke(*args, expect=0, **kwargs):
        result = runner.invoke(main, ["--store", str(store), *args], **kwargs)
        if expect is not None:
            assert result.exit_code == expect, result.output
        return result

    _invoke.store_dir = store
    return _invoke


def _json(result):
    return json.loads(result.stdout)


def _stderr_code(result):
    return json.loads(result.stderr)["code"]


def _new_project(invoke, name="cli audit", environment="academic-prototype"):
    result = invoke("project", "new", name, "--platform", "rig",
                    "--environment", environment)
    return _json(result)["id"]


def _created_id(result):
    match = re.search(r"\b(?:ast|srf|aut|fnd)_[0-9a-f]+\b", result.stdout)
    assert match, result.stdout
    return match.group(0)


def _add_surface(invoke, project_id, locator="tcp/22", kind="network-port",
                 layer="1"):
    asset = invoke("project", "add-asset", project_id,
                   "--category", "exposed-service",
                   "--attr", "host=10.0.0.2")
    asset_id = _created_id(asset)
    item = invoke("project", "add-surface", project_id, "--asset", asset_id,
                  "--layer", layer, "--kind", kind, "--locator", locator)
    return _created_id(item)


class TestScore:
    def test_scrambled_vector_scored_and_canonicalized(self, invoke):
        result = invoke(
            "score", "CVSS:3.0/A:H/C:H/I:H/S:U/UI:N/PR:N/AC:L/AV:N")
        assert _json(result) == {
            "score": 9.8, "severity": "Critical", "vector": ALL_H}

    def test_malformed_vector_exits_2(self, invoke):
        result = invoke("score", "CVSS:3.1/AV:N/AC:?", expect=2)
        assert _stderr_code(result) == "malformed_vector"

    def test_unknown_prefix_exits_2(self, invoke):
        result = invoke("score", "CVSS:2.0/AV:N", expect=2)
        assert _stderr_code(result) == "unknown_prefix"


class TestCatalog:
    def test_dump_json(self, invoke):
        result = invoke("catalog", "dump")
        catalog = json.loads(result.stdout)
        assert len(catalog["threats"]) == 16
        assert "Suplantación" in result.stdout  # accents stay readable

    def test_dump_markdown(self, invoke):
        result = invoke("catalog", "dump", "--format", "markdown")
        assert result.stdout.startswith("# Threat catalog")
        assert "## Top-5 defense strategies" in result.stdout


class TestProjectCommands:
    def test_new_prints_summary(self, invoke):
        result = invoke("project", "new", "demo", "--platform", "rig",
                        "--environment", "drone")
        summary = _json(result)
        assert summary["id"].startswith("prj_")
        assert summary["phase"] == "recon"
        assert summary["revision"] == 1

    def test_list_and_show(self, invoke):
        project_id = _new_project(invoke)
        listing = _json(invoke("project", "list"))
        assert [p["id"] for p in listing["projects"]] == [project_id]
        assert listing["projects"][0]["findings"] == 0
        shown = invoke("project", "show", project_id)
        document = json.loads(shown.stdout)
        assert document["schema_version"] == "1.0.0"
        assert shown.stdout.endswith("\n")

    def test_show_to_file_matches_stdout(self, invoke, tmp_path):
        project_id = _new_project(invoke)
        out_file = tmp_path / "doc.json"
        invoke("project", "show", project_id, "--output", str(out_file))
        shown = invoke("project", "show", project_id)
        assert out_file.read_bytes().decode("utf-8") == shown.stdout

    def test_show_unknown_exits_1(self, invoke):
        result = invoke("project", "show", "prj_missing", expect=1)
        assert _stderr_code(result) == "not_found"

    def test_add_asset_and_surface(self, invoke):
        project_id = _new_project(invoke)
        item_id = _add_surface(invoke, project_id)
        document = json.loads(invoke("project", "show", project_id).stdout)
        item, = document["project"]["surface"]
        assert item["id"] == item_id
        assert item["locator"] == "tcp/22"

    def test_bad_attr_pair_exits_2(self, invoke):
        project_id = _new_project(invoke)
        result = invoke("project", "add-asset", project_id,
                        "--category", "exposed-service",
                        "--attr", "hostonly", expect=2)
        assert _stderr_code(result) == "validation_error"

    def test_duplicate_surface_exits_1(self, invoke):
        project_id = _new_project(invoke)
        _add_surface(invoke, project_id)
        asset = invoke("project", "add-asset", project_id,
                       "--category", "exposed-service",
                       "--attr", "host=10.0.0.9")
        result = invoke("project", "add-surface", project_id,
                        "--asset", _created_id(asset), "--layer", "2",
                        "--kind", "network-port", "--locator", "tcp/22",
                        expect=1)
        assert _stderr_code(result) == "duplicate_surface_item"

    def test_update_surface_and_owasp(self, invoke):
        project_id = _new_project(invoke)
        item_id = _add_surface(invoke, project_id, locator="controller.apk",
                               kind="mobile-app", layer="4")
        invoke("project", "update-surface", project_id, item_id,
               "--auth", "weak", "--encrypted", "no",
               "--attr", "store=sideloaded")
        invoke("project", "set-owasp", project_id, "--app-item", item_id,
               "--code", "M3", "--status", "fail",
               "--note", "telemetry over plain HTTP")
        document = json.loads(invoke("project", "show", project_id).stdout)
        item, = document["project"]["surface"]
        assert item["auth"] == "weak"
        assert item["attributes"]["store"] == "sideloaded"
        checklist, = document["project"]["owasp_checklists"]
        assert checklist["app_surface_item_id"] == item_id
        assert checklist["entries"]["M3"] == {
            "status": "fail", "note": "telemetry over plain HTTP"}

    def test_stale_revision_exits_1_conflict(self, invoke):
        project_id = _new_project(invoke)
        invoke("project", "add-asset", project_id,
               "--category", "exposed-service", "--attr", "host=a")
        result = invoke("project", "add-asset", project_id,
                        "--category", "exposed-service", "--attr", "host=b",
                        "--revision", "1", expect=1)
        assert _stderr_code(result) == "conflict"


class TestPhase:
    def test_full_walk_then_terminal(self, invoke):
        project_id = _new_project(invoke)
        for _ in range(4):
            invoke("phase", "next", project_id, "--auditor", "sam")
        result = invoke("phase", "next", project_id, expect=1)
        assert _stderr_code(result) == "already_final"

    def test_recon_ops_after_advance_exit_3(self, invoke):
        project_id = _new_project(invoke)
        invoke("phase", "next", project_id)
        result = invoke("project", "add-asset", project_id,
                        "--category", "exposed-service",
                        "--attr", "host=late", expect=3)
        assert _stderr_code(result) == "phase_violation"

    def test_revisit_reopens_then_forward_target_exits_2(self, invoke):
        project_id = _new_project(invoke)
        invoke("phase", "next", project_id)
        invoke("phase", "revisit", project_id, "recon",
               "--reason", "missed a radio")
        invoke("project", "add-asset", project_id,
               "--category", "exposed-service", "--attr", "host=radio")
        result = invoke("phase", "revisit", project_id, "report", expect=2)
        assert _stderr_code(result) == "invalid_target"


class TestFindingFlow:
    def _ready(self, invoke):
        project_id = _new_project(invoke, environment="drone")
        item_id = _add_surface(invoke, project_id)
        invoke("phase", "next", project_id)
        added = invoke("finding", "add", project_id,
                       "--phase-recorded", "vuln-analysis",
                       "--surface-item", item_id,
                       "--threat", "password-cracking",
                       "--title", "weak creds", "--vector", ALL_H)
        return project_id, _created_id(added)

    def test_add_confirm_status_note_link(self, invoke):
        project_id, finding_id = self._ready(invoke)
        invoke("finding", "confirm", project_id, finding_id)
        document = json.loads(invoke("project", "show", project_id).stdout)
        item_id = document["project"]["surface"][0]["id"]
        second = _created_id(invoke(
            "finding", "add", project_id, "--phase-recorded",
            "vuln-analysis", "--surface-item", item_id,
            "--threat", "mitm", "--title", "cleartext"))
        invoke("finding", "link", project_id, finding_id, second)
        invoke("phase", "next", project_id)
        invoke("phase", "next", project_id)
        invoke("finding", "note", project_id, finding_id,
               "rotate credentials")
        invoke("finding", "status", project_id, second, "accepted")
        listing = _json(invoke("finding", "list", project_id))
        by_id = {f["id"]: f for f in listing["findings"]}
        assert by_id[finding_id]["status"] == "confirmed"
        assert by_id[second]["status"] == "accepted"

    def test_exploit_inside_window(self, invoke):
        project_id, finding_id = self._ready(invoke)
        invoke("phase", "next", project_id)
        window = invoke("auth", "add", project_id, "--granted-by", "owner",
                        "--start", "2025-03-10T09:00:00Z",
                        "--end", "2025-03-14T18:00:00Z")
        invoke("finding", "exploit", project_id, finding_id,
               "--authorization", _created_id(window),
               "--executed-at", "2025-03-11T10:00:00Z",
               "--technique", "hydra")
        listing = _json(invoke("finding", "list", project_id))
        assert listing["findings"][0]["status"] == "confirmed"

    def test_exploit_outside_window_exits_1(self, invoke):
        project_id, finding_id = self._ready(invoke)
        invoke("phase", "next", project_id)
        window = invoke("auth", "add", project_id, "--granted-by", "owner",
                        "--start", "2025-03-10T09:00:00Z",
                        "--end", "2025-03-14T18:00:00Z")
        result = invoke("finding", "exploit", project_id, finding_id,
                        "--authorization", _created_id(window),
                        "--executed-at", "2025-03-14T18:00:01Z",
                        "--technique", "hydra", expect=1)
        assert _stderr_code(result) == "authorization_gate_violation"

    def test_ranked_listing(self, invoke):
        project_id, _ = self._ready(invoke)
        listing = _json(invoke("finding", "list", project_id, "--ranked"))
        assert listing["ranked"] is True
        entry, = listing["findings"]
        assert entry["rank"] == 1
        assert entry["severity"] == "Critical"
        assert entry["weight_label"] == "Medium"  # drone / software-firmware
        assert entry["domain"] == "software-firmware"


class TestIngest:
    def test_portscan_from_file(self, invoke, tmp_path):
        project_id = _new_project(invoke)
        scan = tmp_path / "scan.xml"
        scan.write_text(TWO_PORT_XML, encoding="utf-8")
        result = invoke("ingest", "portscan", str(scan),
                        "--project", project_id)
        report, = _json(result)["merge_reports"]
        assert (report["created"], report["updated"]) == (2, 0)

    def test_portscan_from_stdin(self, invoke):
        project_id = _new_project(invoke)
        result = invoke("ingest", "portscan", "-", "--project", project_id,
                        input=TWO_PORT_XML)
        report, = _json(result)["merge_reports"]
        assert report["created"] == 2

    def test_interfaces_from_file(self, invoke, tmp_path):
        project_id = _new_project(invoke)
        listing = tmp_path / "ifaces.txt"
        listing.write_text("wlan0 aa:bb:cc:dd:ee:ff 192.168.12.1/24\n",
                           encoding="utf-8")
        invoke("ingest", "interfaces", str(listing), "--project", project_id)
        document = json.loads(invoke("project", "show", project_id).stdout)
        item, = document["project"]["surface"]
        assert item["kind"] == "wireless-interface"

    def test_malformed_xml_exits_2(self, invoke):
        project_id = _new_project(invoke)
        result = invoke("ingest", "portscan", "-", "--project", project_id,
                        input="<nmaprun><host>", expect=2)
        assert _stderr_code(result) == "xml_syntax_error"


class TestReportCompare:
    def test_report_markdown_and_json(self, invoke):
        project_id = _new_project(invoke)
        markdown = invoke("report", "--project", project_id)
        assert "# Security audit report" in markdown.stdout
        data = _json(invoke("report", "--project", project_id,
                            "--format", "json"))
        assert data["draft"] is True

    def test_report_to_file(self, invoke, tmp_path):
        project_id = _new_project(invoke)
        target = tmp_path / "report.md"
        invoke("report", "--project", project_id, "--output", str(target))
        assert target.read_text(encoding="utf-8").startswith("# Security")

    def test_compare_two_projects(self, invoke):
        first = _new_project(invoke, name="alpha")
        second = _new_project(invoke, name="beta")
        result = invoke("compare", first, second)
        assert "Fase de auditoría" in result.stdout
        data = _json(invoke("compare", first, second, "--format", "json"))
        assert data["header"] == ["Fase de auditoría", "rig", "rig"]

    def test_compare_requires_ids(self, invoke):
        invoke("compare", expect=2)

    def test_compare_unknown_exits_1(self, invoke):
        result = invoke("compare", "prj_missing", expect=1)
        assert _stderr_code(result) == "not_found"


class TestFixtures:
    def test_load_and_relist(self, invoke):
        loaded = _json(invoke("fixtures", "load"))["loaded"]
        assert len(loaded) == 4
        listing = _json(invoke("project", "list"))
        assert {p["id"] for p in listing["projects"]} == set(loaded)
        # Reloading mints fresh ids, so the store simply gains four more.
        again = _json(invoke("fixtures", "load"))["loaded"]
        assert not set(again) & set(loaded)
        assert len(_json(invoke("project", "list"))["projects"]) == 8


_ID_PATTERN = re.compile(r"\b(?:prj|ast|srf|aut|fnd)_[0-9a-f]+\b")
_TS_PATTERN = re.compile(r"\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(?:\.\d+)?Z")


def _normalize(document_bytes):
    """Replace ids (in first-seen order) and timestamps with placeholders."""
    text = document_bytes.decode("utf-8")
    seen = {}

    def replace_id(match):
        return seen.setdefault(match.group(0), f"id{len(seen)}")

    text = _ID_PATTERN.sub(replace_id, text)
    return _TS_PATTERN.sub("TS", text)


class TestApiParity:
    def test_same_workflow_yields_same_document(self, invoke, tmp_path):
        # Drive one copy of the workflow through the CLI.
        project_id = _new_project(invoke, name="parity", environment="drone")
        item_id = _add_surface(invoke, project_id)
        invoke("phase", "next", project_id)
        finding = invoke("finding", "add", project_id,
                         "--phase-recorded", "vuln-analysis",
                         "--surface-item", item_id,
                         "--threat", "password-cracking",
                         "--title", "weak creds", "--vector", ALL_H)
        finding_id = _created_id(finding)
        invoke("phase", "next", project_id)
        window = invoke("auth", "add", project_id, "--granted-by", "owner",
                        "--start", "2025-03-10T09:00:00Z",
                        "--end", "2025-03-14T18:00:00Z")
        invoke("finding", "exploit", project_id, finding_id,
               "--authorization", _created_id(window),
               "--executed-at", "2025-03-11T10:00:00Z",
               "--technique", "hydra")
        invoke("phase", "next", project_id)
        invoke("finding", "note", project_id, finding_id,
               "rotate credentials")
        invoke("phase", "next", project_id)
        cli_store = ProjectStore(invoke.store_dir)
        cli_document = export_project(cli_store.load(project_id))

        # Drive the identical workflow through the HTTP API.
        app = create_app(tmp_path / "api-store")
        with TestClient(app) as client:
            base = "/api/v1"
            doc = client.post(f"{base}/projects", json={
                "name": "parity", "platform": "rig",
                "environment": "drone"}).json()
            pid = doc["project"]["id"]

            def post(path, **payload):
                response = client.post(
                    f"{base}/projects/{pid}{path}",
                    json={"revision": post.revision, **payload})
                assert response.status_code < 400, response.text
                body = response.json()
                post.revision = body["project"]["revision"]
                return body

            post.revision = doc["project"]["revision"]
            asset = post("/assets", category="exposed-service",
                         attributes={"host": "10.0.0.2"})
            item = post("/surface", asset_id=asset["created_id"], layer=1,
                        kind="network-port", locator="tcp/22")
            post("/phase:advance")
            api_finding = post("/findings", phase_recorded="vuln-analysis",
                               surface_item_id=item["created_id"],
                               threat_slug="password-cracking",
                               title="weak creds", vector=ALL_H)
            post("/phase:advance")
            auth = post("/authorizations", granted_by="owner",
                        start="2025-03-10T09:00:00Z",
                        end="2025-03-14T18:00:00Z")
            post(f"/findings/{api_finding['created_id']}/exploitation",
                 authorization_id=auth["created_id"],
                 executed_at="2025-03-11T10:00:00Z", technique="hydra")
            post("/phase:advance")
            post(f"/findings/{api_finding['created_id']}/notes",
                 note="rotate credentials")
            post("/phase:advance")
        api_store = ProjectStore(tmp_path / "api-store")
        api_document = export_project(api_store.load(pid))

        assert _normalize(cli_document) == _normalize(api_document)
