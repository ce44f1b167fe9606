"""Project state: assets, surface items, checklists, integrity checks."""

import pytest

from robaudit.errors import (
    DuplicateSurfaceItemError,
    IntegrityError,
    NotFoundError,
    PhaseViolationError,
    ValidationError,
)
from robaudit.model import (
    AssetCategory,
    AuthLevel,
    EncryptionState,
    EnvironmentClass,
    FindingStatus,
    Layer,
    OWASP_CODES,
    OwaspStatus,
    Phase,
    PhaseEvent,
    SurfaceKind,
    asset_add,
    new_id,
    owasp_set,
    parse_timestamp,
    phase_index,
    project_create,
    surface_add,
    surface_order,
    surface_update,
    utc_now,
    validate_project,
)
from robaudit.workflow import (
    authorization_add,
    exploitation_record,
    finding_add,
    phase_advance,
)


def _project():
    return project_create("bench audit", "test rig",
                          EnvironmentClass.ACADEMIC_PROTOTYPE)


def _asset(project, category=AssetCategory.EXPOSED_SERVICE):
    return asset_add(project, category, {"host": "10.0.0.2"})


class TestProjectCreate:
    def test_initial_state(self):
        project = _project()
        assert project.phase.current is Phase.RECON
        assert project.revision == 1
        assert len(project.phase.history) == 1
        assert project.phase.history[0].action == "create"
        assert project.phase.revisit_flags == []
        assert project.id.startswith("prj_")
        validate_project(project)

    def test_name_and_platform_stripped(self):
        project = project_create("  spot audit  ", "  Spot  ",
                                 EnvironmentClass.MOBILE_PUBLIC)
        assert project.name == "spot audit"
        assert project.platform == "Spot"

    def test_blank_name_rejected(self):
        with pytest.raises(ValidationError):
            project_create("   ", "rig", EnvironmentClass.MOBILE_PUBLIC)

    def test_environment_must_be_enum(self):
        with pytest.raises(ValidationError):
            project_create("a", "b", "military-critical")


class TestAssets:
    def test_add_bumps_revision_and_copies_attributes(self):
        project = _project()
        attrs = {"host": "10.0.0.2"}
        asset = asset_add(project, AssetCategory.EXPOSED_SERVICE, attrs)
        attrs["host"] = "changed"
        assert asset.attributes == {"host": "10.0.0.2"}
        assert project.revision == 2
        assert project.assets == [asset]

    def test_empty_attributes_rejected(self):
        with pytest.raises(ValidationError):
            asset_add(_project(), AssetCategory.SOFTWARE_FIRMWARE, {})

    def test_empty_attribute_key_rejected(self):
        with pytest.raises(ValidationError):
            asset_add(_project(), AssetCategory.SOFTWARE_FIRMWARE, {"": "x"})

    def test_category_must_be_enum(self):
        with pytest.raises(ValidationError):
            asset_add(_project(), "software", {"a": "b"})

    def test_requires_open_recon(self):
        project = _project()
        phase_advance(project)
        with pytest.raises(PhaseViolationError):
            _asset(project)


class TestSurface:
    def test_add_and_duplicate_key(self):
        project = _project()
        asset = _asset(project)
        surface_add(project, asset.id, Layer.L1, SurfaceKind.NETWORK_PORT,
                    "tcp/22")
        with pytest.raises(DuplicateSurfaceItemError):
            surface_add(project, asset.id, Layer.L2,
                        SurfaceKind.NETWORK_PORT, "tcp/22")

    def test_same_locator_different_kind_allowed(self):
        project = _project()
        asset = _asset(project)
        surface_add(project, asset.id, Layer.L1, SurfaceKind.NETWORK_PORT,
                    "tcp/22")
        surface_add(project, asset.id, Layer.L1, SurfaceKind.API, "tcp/22")
        assert len(project.surface) == 2
        validate_project(project)

    def test_locator_stripped(self):
        project = _project()
        asset = _asset(project)
        item = surface_add(project, asset.id, Layer.L1,
                           SurfaceKind.NETWORK_PORT, "  tcp/80 ")
        assert item.locator == "tcp/80"

    def test_unknown_asset_rejected(self):
        with pytest.raises(NotFoundError):
            surface_add(_project(), "ast_missing", Layer.L1,
                        SurfaceKind.NETWORK_PORT, "tcp/22")

    def test_blank_locator_rejected(self):
        project = _project()
        asset = _asset(project)
        with pytest.raises(ValidationError):
            surface_add(project, asset.id, Layer.L1,
                        SurfaceKind.NETWORK_PORT, "   ")

    def test_mobile_app_gets_full_checklist(self):
        project = _project()
        asset = _asset(project, AssetCategory.EXTERNAL_APP)
        item = surface_add(project, asset.id, Layer.L4,
                           SurfaceKind.MOBILE_APP, "com.vendor.app")
        checklist = project.checklist_for(item.id)
        assert sorted(checklist.entries) == sorted(OWASP_CODES)
        assert all(e.status is OwaspStatus.NOT_ASSESSED
                   for e in checklist.entries.values())
        validate_project(project)

    def test_non_app_item_gets_no_checklist(self):
        project = _project()
        asset = _asset(project)
        surface_add(project, asset.id, Layer.L1, SurfaceKind.NETWORK_PORT,
                    "tcp/22")
        assert project.owasp_checklists == []

    def test_update_assessment_fields(self):
        project = _project()
        asset = _asset(project)
        item = surface_add(project, asset.id, Layer.L1,
                           SurfaceKind.NETWORK_PORT, "tcp/22")
        before = project.revision
        updated = surface_update(project, item.id, auth=AuthLevel.WEAK,
                                 encrypted=EncryptionState.YES,
                                 attributes={"service": "ssh"})
        assert updated.auth is AuthLevel.WEAK
        assert updated.encrypted is EncryptionState.YES
        assert updated.attributes["service"] == "ssh"
        assert project.revision == before + 1

    def test_update_unknown_item(self):
        with pytest.raises(NotFoundError):
            surface_update(_project(), "srf_missing", auth=AuthLevel.NONE)

    def test_order_outside_in_and_pure(self):
        project = _project()
        asset = _asset(project)
        inner = surface_add(project, asset.id, Layer.L5,
                            SurfaceKind.PHYSICAL_PORT, "uart J4")
        outer = surface_add(project, asset.id, Layer.L1,
                            SurfaceKind.NETWORK_PORT, "tcp/80")
        middle = surface_add(project, asset.id, Layer.L3,
                             SurfaceKind.API, "ros2-dds:domain0")
        ordered = surface_order(project)
        assert [i.id for i in ordered] == [outer.id, middle.id, inner.id]
        assert [i.id for i in project.surface] == [inner.id, outer.id,
                                                   middle.id]

    def test_order_ties_break_on_kind_then_locator(self):
        project = _project()
        asset = _asset(project)
        b = surface_add(project, asset.id, Layer.L1,
                        SurfaceKind.NETWORK_PORT, "tcp/443")
        a = surface_add(project, asset.id, Layer.L1,
                        SurfaceKind.NETWORK_PORT, "tcp/22")
        api = surface_add(project, asset.id, Layer.L1, SurfaceKind.API,
                          "http://host/api")
        ordered = surface_order(project)
        assert [i.id for i in ordered] == [api.id, a.id, b.id]


class TestOwaspAssessment:
    def _app_item(self, project):
        asset = _asset(project, AssetCategory.EXTERNAL_APP)
        return surface_add(project, asset.id, Layer.L4,
                           SurfaceKind.MOBILE_APP, "com.vendor.app")

    def test_set_entry(self):
        project = _project()
        item = self._app_item(project)
        owasp_set(project, item.id, "M3", OwaspStatus.FAIL,
                  note="cleartext credentials")
        entry = project.checklist_for(item.id).entries["M3"]
        assert entry.status is OwaspStatus.FAIL
        assert entry.note == "cleartext credentials"

    def test_unknown_code_rejected(self):
        project = _project()
        item = self._app_item(project)
        with pytest.raises(NotFoundError):
            owasp_set(project, item.id, "M11", OwaspStatus.PASS)

    def test_non_app_item_rejected(self):
        project = _project()
        asset = _asset(project)
        port = surface_add(project, asset.id, Layer.L1,
                           SurfaceKind.NETWORK_PORT, "tcp/22")
        with pytest.raises(NotFoundError):
            owasp_set(project, port.id, "M1", OwaspStatus.PASS)


class TestTimestamps:
    def test_z_suffix_and_offset_forms(self):
        assert parse_timestamp("2025-03-10T09:00:00Z") == parse_timestamp(
            "2025-03-10T09:00:00+00:00")
        assert parse_timestamp("2025-03-10T10:00:00+01:00") == \
            parse_timestamp("2025-03-10T09:00:00Z")

    @pytest.mark.parametrize("text", [
        "2025-03-10T09:00:00",  # no offset
        "not a date",
        "2025-13-40T09:00:00Z",
        12345,
    ])
    def test_rejections(self, text):
        with pytest.raises(ValidationError):
            parse_timestamp(text)

    def test_utc_now_round_trips(self):
        now = utc_now()
        assert now.endswith("Z")
        parse_timestamp(now)

    def test_new_id_prefix_and_uniqueness(self):
        ids = {new_id("x") for _ in range(200)}
        assert len(ids) == 200
        assert all(i.startswith("x_") for i in ids)


class TestIntegrityChecks:
    def _exploited_project(self):
        project = _project()
        asset = _asset(project)
        item = surface_add(project, asset.id, Layer.L1,
                           SurfaceKind.NETWORK_PORT, "tcp/22")
        phase_advance(project)
        finding = finding_add(project, Phase.VULN_ANALYSIS, item.id,
                              "password-cracking", "weak ssh credentials")
        phase_advance(project)
        window = authorization_add(project, "lab lead",
                                   "2025-03-10T09:00:00Z",
                                   "2025-03-14T18:00:00Z")
        exploitation_record(project, finding.id, window.id,
                            "2025-03-11T10:00:00Z", technique="hydra")
        validate_project(project)
        return project, item, finding, window

    def test_dangling_surface_asset(self):
        project = _project()
        asset = _asset(project)
        surface_add(project, asset.id, Layer.L1, SurfaceKind.NETWORK_PORT,
                    "tcp/22")
        project.surface[0].asset_id = "ast_gone"
        with pytest.raises(IntegrityError) as excinfo:
            validate_project(project)
        assert "dangling asset_id" in str(excinfo.value)

    def test_duplicate_entity_id(self):
        project = _project()
        _asset(project)
        _asset(project, AssetCategory.SOFTWARE_FIRMWARE)
        project.assets[1].id = project.assets[0].id
        with pytest.raises(IntegrityError):
            validate_project(project)

    def test_duplicate_natural_key(self):
        project = _project()
        asset = _asset(project)
        surface_add(project, asset.id, Layer.L1, SurfaceKind.NETWORK_PORT,
                    "tcp/22")
        surface_add(project, asset.id, Layer.L1, SurfaceKind.NETWORK_PORT,
                    "tcp/80")
        project.surface[1].locator = "tcp/22"
        with pytest.raises(IntegrityError):
            validate_project(project)

    def test_score_must_match_vector(self):
        project, _, finding, _ = self._exploited_project()
        finding.vector = "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"
        finding.score = 1.0
        with pytest.raises(IntegrityError) as excinfo:
            validate_project(project)
        assert "!= derived" in str(excinfo.value)

    def test_score_without_vector(self):
        project, _, finding, _ = self._exploited_project()
        finding.score = 5.0
        with pytest.raises(IntegrityError):
            validate_project(project)

    def test_unknown_threat_slug(self):
        project, _, finding, _ = self._exploited_project()
        finding.threat_slug = "not-in-taxonomy"
        with pytest.raises(IntegrityError):
            validate_project(project)

    def test_dangling_link(self):
        project, _, finding, _ = self._exploited_project()
        finding.linked_findings.append("fnd_gone")
        with pytest.raises(IntegrityError):
            validate_project(project)

    def test_exploitation_requires_confirmed_status(self):
        project, _, finding, _ = self._exploited_project()
        finding.status = FindingStatus.OPEN
        with pytest.raises(IntegrityError):
            validate_project(project)

    def test_exploitation_must_stay_inside_window(self):
        project, _, finding, window = self._exploited_project()
        finding.exploitation.executed_at = "2025-03-20T10:00:00Z"
        with pytest.raises(IntegrityError) as excinfo:
            validate_project(project)
        assert "window" in str(excinfo.value)

    def test_inverted_window(self):
        project, _, _, window = self._exploited_project()
        window.end = "2025-03-01T00:00:00Z"
        with pytest.raises(IntegrityError):
            validate_project(project)

    def test_checklist_must_track_app_items(self):
        project = _project()
        asset = _asset(project, AssetCategory.EXTERNAL_APP)
        surface_add(project, asset.id, Layer.L4, SurfaceKind.MOBILE_APP,
                    "com.vendor.app")
        project.owasp_checklists.clear()
        with pytest.raises(IntegrityError):
            validate_project(project)

    def test_checklist_must_cover_all_codes(self):
        project = _project()
        asset = _asset(project, AssetCategory.EXTERNAL_APP)
        item = surface_add(project, asset.id, Layer.L4,
                           SurfaceKind.MOBILE_APP, "com.vendor.app")
        del project.checklist_for(item.id).entries["M7"]
        with pytest.raises(IntegrityError):
            validate_project(project)

    def test_history_must_start_with_recon(self):
        project = _project()
        project.phase.history[0] = PhaseEvent(
            phase=Phase.REPORT, entered_at=utc_now(), action="create")
        project.phase.current = Phase.REPORT
        with pytest.raises(IntegrityError):
            validate_project(project)

    def test_current_must_match_last_event(self):
        project = _project()
        phase_advance(project)
        project.phase.current = Phase.RECON
        with pytest.raises(IntegrityError):
            validate_project(project)

    def test_advance_must_step_by_one(self):
        project = _project()
        phase_advance(project)
        project.phase.history[-1] = PhaseEvent(
            phase=Phase.EXPLOITATION, entered_at=utc_now(), action="advance")
        project.phase.current = Phase.EXPLOITATION
        with pytest.raises(IntegrityError):
            validate_project(project)

    def test_revisit_needs_flag(self):
        project = _project()
        phase_advance(project)
        project.phase.history.append(PhaseEvent(
            phase=Phase.RECON, entered_at=utc_now(), action="revisit"))
        project.phase.current = Phase.RECON
        with pytest.raises(IntegrityError):
            validate_project(project)

    def test_phase_index_is_total_order(self):
        indices = [phase_index(p) for p in (
            Phase.RECON, Phase.VULN_ANALYSIS, Phase.EXPLOITATION,
            Phase.MITIGATION, Phase.REPORT)]
        assert indices == [0, 1, 2, 3, 4]
