"""FastAPI application wiring the audit modules to HTTP endpoints.

Handlers hold no business logic: each one parses the request, passes it
to the corresponding module operation under the store's per-project
write lock, and serializes the canonical result. Module errors map
one-to-one onto (HTTP status, machine code) pairs. The service binds
loopback by default because project documents hold audit evidence;
exposure beyond the local host is an explicit opt-in.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Callable, Optional

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .. import cvss, ingest
from ..catalog import catalog_load
from ..errors import ConflictError, RobAuditError, ValidationError
from ..model import (
    AuditProject,
    asset_add,
    owasp_set,
    project_create,
    surface_add,
    surface_order,
    surface_update,
)
from ..reporting import (
    comparative_matrix,
    export_project,
    project_to_dict,
    render_report,
)
from ..store import ProjectStore
from ..workflow import (
    ENVIRONMENT_DISPLAY,
    ENVIRONMENT_MATRIX,
    authorization_add,
    exploitation_record,
    finding_add,
    finding_link,
    finding_set_status,
    mitigation_note_add,
    phase_advance,
    phase_revisit,
    prioritize_findings,
)
from . import schemas

API_PREFIX = "/api/v1"

# Module error code -> HTTP status. 4xx for caller faults; 5xx only for
# corrupted state the caller cannot have caused.
_STATUS_BY_CODE = {
    "not_found": 404,
    "validation_error": 422,
    "malformed_vector": 422,
    "unknown_prefix": 422,
    "missing_metric": 422,
    "duplicate_metric": 422,
    "unsupported_metric_group": 422,
    "out_of_range": 422,
    "invalid_target": 422,
    "xml_syntax_error": 422,
    "schema_error": 422,
    "empty_document": 422,
    "line_syntax_error": 422,
    "malformed_document": 422,
    "schema_version_unsupported": 422,
    "empty_input": 422,
    "phase_violation": 409,
    "already_final": 409,
    "duplicate_surface_item": 409,
    "authorization_gate_violation": 409,
    "conflict": 409,
    "integrity_error": 500,
    "catalog_integrity_error": 500,
    "store_error": 500,
}


def _error_response(status: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status,
                        content={"status": status, "code": code,
                                 "detail": detail})


def _document(project: AuditProject,
              created_id: Optional[str] = None) -> dict:
    body = json.loads(export_project(project))
    if created_id is not None:
        body["created_id"] = created_id
    return body


def _project_summary(project: AuditProject) -> dict:
    return {
        "id": project.id,
        "name": project.name,
        "platform": project.platform,
        "environment": project.environment.value,
        "phase": project.phase.current.value,
        "revision": project.revision,
        "updated_at": project.updated_at,
        "findings": len(project.findings),
    }


def create_app(store_dir: Path | str,
               ui_dir: Optional[Path | str] = None) -> FastAPI:
    store = ProjectStore(store_dir)
    app = FastAPI(
        title="robaudit",
        version="0.1.0",
        description="Audit orchestration service for autonomous systems: "
                    "projects, attack surface, findings, CVSS scoring, "
                    "phase workflow, ranking, reports.",
    )
    app.state.store = store

    @app.exception_handler(RobAuditError)
    async def handle_module_error(request: Request, exc: RobAuditError):
        status = _STATUS_BY_CODE.get(exc.code, 500)
        return _error_response(status, exc.code, str(exc))

    @app.exception_handler(RequestValidationError)
    async def handle_request_validation(request: Request,
                                        exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(part) for part in first.get("loc", ()))
        message = first.get("msg", "invalid request body")
        return _error_response(422, "validation_error",
                               f"{where}: {message}" if where else message)

    def mutate(project_id: str, revision: int,
               operation: Callable[[AuditProject], Optional[str]]) -> dict:
        """Run one mutation under the project lock with a revision check."""
        created: dict[str, Optional[str]] = {"id": None}

        def checked(project: AuditProject) -> None:
            if project.revision != revision:
                raise ConflictError(
                    f"project {project_id} is at revision "
                    f"{project.revision}, request expected {revision}")
            created["id"] = operation(project)

        project = store.mutate(project_id, checked)
        return _document(project, created_id=created["id"])

    # --- projects ---------------------------------------------------------

    @app.get(API_PREFIX + "/projects")
    def list_projects() -> dict:
        summaries = [_project_summary(store.load(project_id))
                     for project_id in store.list_ids()]
        return {"projects": summaries}

    @app.post(API_PREFIX + "/projects", status_code=201)
    def create_project(body: schemas.ProjectCreateRequest) -> dict:
        project = project_create(body.name, body.platform, body.environment)
        store.create(project)
        return _document(project)

    @app.get(API_PREFIX + "/projects/{project_id}")
    def get_project(project_id: str) -> dict:
        return _document(store.load(project_id))

    # --- recon ------------------------------------------------------------

    @app.post(API_PREFIX + "/projects/{project_id}/assets", status_code=201)
    def add_asset(project_id: str, body: schemas.AssetCreateRequest) -> dict:
        def op(project: AuditProject) -> str:
            return asset_add(project, body.category, body.attributes).id
        return mutate(project_id, body.revision, op)

    @app.post(API_PREFIX + "/projects/{project_id}/surface", status_code=201)
    def add_surface(project_id: str,
                    body: schemas.SurfaceCreateRequest) -> dict:
        def op(project: AuditProject) -> str:
            return surface_add(
                project, body.asset_id, body.layer, body.kind, body.locator,
                auth=body.auth, encrypted=body.encrypted,
                attributes=body.attributes or None).id
        return mutate(project_id, body.revision, op)

    @app.patch(API_PREFIX + "/projects/{project_id}/surface/{item_id}")
    def update_surface(project_id: str, item_id: str,
                       body: schemas.SurfaceUpdateRequest) -> dict:
        def op(project: AuditProject) -> None:
            surface_update(project, item_id, auth=body.auth,
                           encrypted=body.encrypted,
                           attributes=body.attributes)
        return mutate(project_id, body.revision, op)

    @app.get(API_PREFIX + "/projects/{project_id}/surface")
    def get_surface(project_id: str) -> dict:
        project = store.load(project_id)
        document = _document(project)
        ordered = [item.id for item in surface_order(project)]
        by_id = {entry["id"]: entry for entry in document["project"]["surface"]}
        return {"surface": [by_id[item_id] for item_id in ordered],
                "revision": project.revision}

    @app.post(API_PREFIX + "/projects/{project_id}/owasp")
    def set_owasp(project_id: str, body: schemas.OwaspSetRequest) -> dict:
        def op(project: AuditProject) -> None:
            owasp_set(project, body.app_surface_item_id, body.code,
                      body.status, note=body.note)
        return mutate(project_id, body.revision, op)

    @app.post(API_PREFIX + "/projects/{project_id}/ingest")
    def ingest_artifact(project_id: str, body: schemas.IngestRequest) -> dict:
        if body.format == "port-scan-xml":
            observations = ingest.parse_port_scan(body.content)
        elif body.format == "interface-listing":
            observations = [ingest.parse_interface_listing(body.content)]
        else:
            raise ValidationError(
                f"format must be port-scan-xml or interface-listing, "
                f"got {body.format!r}")
        reports: list[dict] = []

        def op(project: AuditProject) -> None:
            for observation in observations:
                report = ingest.merge_observation(project, observation)
                reports.append({
                    "host": observation.host,
                    "created": report.created,
                    "updated": report.updated,
                    "skipped_closed": report.skipped_closed,
                    "conflicts": [
                        {"locator": c.locator, "field": c.field,
                         "old": c.old, "new": c.new}
                        for c in report.conflicts
                    ],
                })
        document = mutate(project_id, body.revision, op)
        document["merge_reports"] = reports
        return document

    # --- workflow ---------------------------------------------------------

    @app.post(API_PREFIX + "/projects/{project_id}/phase:advance")
    def advance_phase(project_id: str,
                      body: schemas.PhaseAdvanceRequest) -> dict:
        def op(project: AuditProject) -> None:
            phase_advance(project, auditor=body.auditor)
        return mutate(project_id, body.revision, op)

    @app.post(API_PREFIX + "/projects/{project_id}/phase:revisit")
    def revisit_phase(project_id: str,
                      body: schemas.PhaseRevisitRequest) -> dict:
        def op(project: AuditProject) -> None:
            phase_revisit(project, body.target, reason=body.reason)
        return mutate(project_id, body.revision, op)

    @app.post(API_PREFIX + "/projects/{project_id}/authorizations",
              status_code=201)
    def add_authorization(project_id: str,
                          body: schemas.AuthorizationCreateRequest) -> dict:
        def op(project: AuditProject) -> str:
            return authorization_add(project, body.granted_by, body.start,
                                     body.end, scope_note=body.scope_note).id
        return mutate(project_id, body.revision, op)

    # --- findings ---------------------------------------------------------

    @app.post(API_PREFIX + "/projects/{project_id}/findings", status_code=201)
    def add_finding(project_id: str,
                    body: schemas.FindingCreateRequest) -> dict:
        def op(project: AuditProject) -> str:
            return finding_add(
                project, body.phase_recorded, body.surface_item_id,
                body.threat_slug, body.title, description=body.description,
                vector=body.vector).id
        return mutate(project_id, body.revision, op)

    @app.get(API_PREFIX + "/projects/{project_id}/findings")
    def get_findings(project_id: str, ranked: bool = False) -> dict:
        project = store.load(project_id)
        document = _document(project)
        entries = document["project"]["findings"]
        if not ranked:
            return {"findings": entries, "ranked": False,
                    "revision": project.revision}
        by_id = {entry["id"]: entry for entry in entries}
        ranked_entries = []
        for position, row in enumerate(prioritize_findings(project), start=1):
            entry = dict(by_id[row.finding.id])
            entry["rank"] = position
            entry["domain"] = row.domain.value
            entry["weight"] = int(row.weight)
            entry["weight_label"] = row.weight.label
            entry["layer"] = int(row.layer)
            entry["severity"] = (cvss.severity_bucket(row.finding.score).label
                                 if row.finding.score is not None else None)
            ranked_entries.append(entry)
        return {"findings": ranked_entries, "ranked": True,
                "revision": project.revision}

    @app.post(API_PREFIX + "/projects/{project_id}/findings/{finding_id}/status")
    def set_finding_status(project_id: str, finding_id: str,
                           body: schemas.FindingStatusRequest) -> dict:
        def op(project: AuditProject) -> None:
            finding_set_status(project, finding_id, body.status)
        return mutate(project_id, body.revision, op)

    @app.post(API_PREFIX + "/projects/{project_id}/findings/{finding_id}/links")
    def link_findings(project_id: str, finding_id: str,
                      body: schemas.FindingLinkRequest) -> dict:
        def op(project: AuditProject) -> None:
            finding_link(project, finding_id, body.other_finding_id)
        return mutate(project_id, body.revision, op)

    @app.post(API_PREFIX + "/projects/{project_id}/findings/{finding_id}/notes")
    def add_mitigation_note(project_id: str, finding_id: str,
                            body: schemas.MitigationNoteRequest) -> dict:
        def op(project: AuditProject) -> None:
            mitigation_note_add(project, finding_id, body.note)
        return mutate(project_id, body.revision, op)

    @app.post(API_PREFIX +
              "/projects/{project_id}/findings/{finding_id}/exploitation")
    def record_exploitation(project_id: str, finding_id: str,
                            body: schemas.ExploitationRequest) -> dict:
        def op(project: AuditProject) -> None:
            exploitation_record(
                project, finding_id, body.authorization_id, body.executed_at,
                body.technique, observed_impact=body.observed_impact,
                environment_note=body.environment_note)
        return mutate(project_id, body.revision, op)

    # --- scoring, catalog, reports ---------------------------------------

    @app.post(API_PREFIX + "/score")
    def score(body: schemas.ScoreRequest) -> dict:
        vector, value, severity = cvss.score_vector(body.vector)
        return {"score": value, "severity": severity.label,
                "vector": vector.vector_string()}

    @app.get(API_PREFIX + "/catalog")
    def get_catalog() -> dict:
        return catalog_load().to_dict()

    @app.get(API_PREFIX + "/projects/{project_id}/report")
    def get_report(project_id: str, format: str = "markdown") -> Response:
        if format not in ("markdown", "json"):
            raise ValidationError(
                f"format must be markdown or json, got {format!r}")
        project = store.load(project_id)
        payload = render_report(project, format)
        media = "text/markdown" if format == "markdown" else "application/json"
        return Response(content=payload, media_type=media + "; charset=utf-8")

    @app.get(API_PREFIX + "/compare")
    def compare(ids: list[str] = Query(default=[])) -> dict:
        requested: list[str] = []
        for raw in ids:
            requested.extend(part for part in raw.split(",") if part)
        projects = [store.load(project_id) for project_id in requested]
        return comparative_matrix(projects).to_dict()

    @app.get(API_PREFIX + "/environments")
    def get_environments() -> dict:
        entries = []
        for environment, weights in ENVIRONMENT_MATRIX.items():
            label, label_es = ENVIRONMENT_DISPLAY[environment]
            entries.append({
                "environment": environment.value,
                "label": label,
                "label_es": label_es,
                "weights": {domain: int(weight)
                            for domain, weight in weights.items()},
            })
        return {"environments": entries}

    resolved_ui = _resolve_ui_dir(ui_dir)
    if resolved_ui is not None:
        app.mount("/ui", StaticFiles(directory=resolved_ui, html=True),
                  name="ui")

    return app


def _resolve_ui_dir(ui_dir: Optional[Path | str]) -> Optional[Path]:
    if ui_dir is not None:
        path = Path(ui_dir)
        return path if path.is_dir() else None
    packaged = Path(__file__).resolve().parent.parent / "ui"
    if (packaged / "index.html").is_file():
        return packaged
    return None


def serve(bind: str = "127.0.0.1:8787",
          store_dir: Path | str = "./robaudit-store",
          ui_dir: Optional[Path | str] = None) -> None:
    """Run the HTTP service until interrupted.

    ``bind`` is ``host:port``; the default stays on loopback because the
    store holds audit evidence. All writes are synchronous, so shutdown
    cannot lose acknowledged data.
    """
    import uvicorn

    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValidationError(f"bind address must be host:port, got {bind!r}")
    app = create_app(store_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=int(port_text), log_level="info")
