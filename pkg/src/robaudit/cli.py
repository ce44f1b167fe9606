"""Command-line client for the audit toolkit.

Every command routes through the same module operations as the HTTP
handlers, against a file store selected by ``--store`` (or the
``ROBAUDIT_STORE`` environment variable, default ``./robaudit-store``).

Exit codes: 0 success; 2 parse/validation errors (bad vectors, bad
artifacts, bad arguments); 3 phase-gate violations; 1 any other audit
error. Machine-readable payloads go to stdout, errors to stderr.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path
from typing import Optional

import click

from . import cvss, ingest
from .catalog import catalog_load, dump_json, dump_markdown
from .errors import ConflictError, RobAuditError, ValidationError
from .fixtures import fixture_projects
from .model import (
    AssetCategory,
    AuditProject,
    AuthLevel,
    EncryptionState,
    EnvironmentClass,
    FindingStatus,
    Layer,
    OwaspStatus,
    Phase,
    SurfaceKind,
    asset_add,
    owasp_set,
    project_create,
    surface_add,
    surface_update,
)
from .reporting import (
    comparative_markdown,
    comparative_matrix,
    export_project,
    render_report,
)
from .store import ProjectStore
from .workflow import (
    authorization_add,
    exploitation_record,
    finding_add,
    finding_confirm,
    finding_link,
    finding_set_status,
    mitigation_note_add,
    phase_advance,
    phase_revisit,
    prioritize_findings,
)

_PARSE_ERROR_CODES = {
    "validation_error", "malformed_vector", "unknown_prefix",
    "missing_metric", "duplicate_metric", "unsupported_metric_group",
    "out_of_range", "invalid_target", "xml_syntax_error", "schema_error",
    "empty_document", "line_syntax_error", "malformed_document",
    "schema_version_unsupported", "empty_input",
}


def _exit_code_for(code: str) -> int:
    if code in _PARSE_ERROR_CODES:
        return 2
    if code == "phase_violation":
        return 3
    return 1


def _handles_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except RobAuditError as exc:
            click.echo(json.dumps({"code": exc.code, "detail": str(exc)}),
                       err=True)
            raise SystemExit(_exit_code_for(exc.code))
    return wrapper


def _store(ctx: click.Context) -> ProjectStore:
    return ProjectStore(ctx.obj["store_dir"])


def _parse_attrs(pairs: tuple[str, ...]) -> dict[str, str]:
    attributes: dict[str, str] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ValidationError(f"attribute {pair!r} must be KEY=VALUE")
        attributes[key] = value
    return attributes


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_output(path: Optional[str], payload: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.write(payload.decode("utf-8"))
        return
    Path(path).write_bytes(payload)


def _echo_json(data) -> None:
    click.echo(json.dumps(data, ensure_ascii=False, indent=2))


def _mutate(store: ProjectStore, project_id: str, revision: Optional[int],
            operation) -> tuple[AuditProject, Optional[str]]:
    """Apply one operation under the project lock; returns (project, id)."""
    created: dict[str, Optional[str]] = {"id": None}

    def checked(project: AuditProject) -> None:
        if revision is not None and project.revision != revision:
            raise ConflictError(
                f"project {project_id} is at revision {project.revision}, "
                f"expected {revision}")
        created["id"] = operation(project)

    project = store.mutate(project_id, checked)
    return project, created["id"]


def _confirm_line(project: AuditProject, action: str,
                  created_id: Optional[str] = None) -> None:
    parts = [action]
    if created_id:
        parts.append(created_id)
    parts.append(f"(project {project.id} revision {project.revision})")
    click.echo(" ".join(parts))


_revision_option = click.option(
    "--revision", type=int, default=None,
    help="Fail if the stored project is not at this revision.")


@click.group()
@click.option("--store", "store_dir", envvar="ROBAUDIT_STORE",
              default="./robaudit-store", show_default=True,
              help="Directory holding project documents.")
@click.pass_context
def main(ctx: click.Context, store_dir: str) -> None:
    """Audit orchestration for autonomous systems and robots."""
    ctx.ensure_object(dict)
    ctx.obj["store_dir"] = store_dir


# --- scoring & catalog ------------------------------------------------------

@main.command()
@click.argument("vector")
@_handles_errors
def score(vector: str) -> None:
    """Score a CVSS v3.1 base vector and print score and severity."""
    parsed, value, severity = cvss.score_vector(vector)
    _echo_json({"score": value, "severity": severity.label,
                "vector": parsed.vector_string()})


@main.group()
def catalog() -> None:
    """Threat taxonomy, mitigations, checklists, and tool picks."""


@catalog.command("dump")
@click.option("--format", "fmt", type=click.Choice(["json", "markdown"]),
              default="json", show_default=True)
@_handles_errors
def catalog_dump(fmt: str) -> None:
    """Emit the full catalog."""
    loaded = catalog_load()
    if fmt == "json":
        sys.stdout.write(dump_json(loaded).decode("utf-8"))
    else:
        sys.stdout.write(dump_markdown(loaded))


# --- projects ---------------------------------------------------------------

@main.group()
def project() -> None:
    """Create and inspect audit projects."""


@project.command("new")
@click.argument("name")
@click.option("--platform", required=True,
              help="Audited platform, e.g. 'Pepper (Aldebaran Robotics)'.")
@click.option("--environment", required=True,
              type=click.Choice([e.value for e in EnvironmentClass]))
@click.pass_context
@_handles_errors
def project_new(ctx: click.Context, name: str, platform: str,
                environment: str) -> None:
    """Create a project in the reconnaissance phase."""
    created = project_create(name, platform, EnvironmentClass(environment))
    _store(ctx).create(created)
    _echo_json({"id": created.id, "name": created.name,
                "platform": created.platform,
                "environment": created.environment.value,
                "phase": created.phase.current.value,
                "revision": created.revision})


@project.command("list")
@click.pass_context
@_handles_errors
def project_list(ctx: click.Context) -> None:
    """List stored projects."""
    store = _store(ctx)
    summaries = []
    for project_id in store.list_ids():
        loaded = store.load(project_id)
        summaries.append({
            "id": loaded.id, "name": loaded.name,
            "platform": loaded.platform,
            "environment": loaded.environment.value,
            "phase": loaded.phase.current.value,
            "revision": loaded.revision,
            "findings": len(loaded.findings),
        })
    _echo_json({"projects": summaries})


@project.command("show")
@click.argument("project_id")
@click.option("--output", default=None, help="File path or '-' for stdout.")
@click.pass_context
@_handles_errors
def project_show(ctx: click.Context, project_id: str,
                 output: Optional[str]) -> None:
    """Print a project's canonical document."""
    loaded = _store(ctx).load(project_id)
    _write_output(output, export_project(loaded))


@project.command("add-asset")
@click.argument("project_id")
@click.option("--category", required=True,
              type=click.Choice([c.value for c in AssetCategory]))
@click.option("--attr", "attrs", multiple=True,
              help="Attribute as KEY=VALUE; repeatable.")
@_revision_option
@click.pass_context
@_handles_errors
def project_add_asset(ctx: click.Context, project_id: str, category: str,
                      attrs: tuple[str, ...], revision: Optional[int]) -> None:
    """Record a reconnaissance asset."""
    attributes = _parse_attrs(attrs)

    def op(target: AuditProject) -> str:
        return asset_add(target, AssetCategory(category), attributes).id

    updated, created_id = _mutate(_store(ctx), project_id, revision, op)
    _confirm_line(updated, "added asset", created_id)


@project.command("add-surface")
@click.argument("project_id")
@click.option("--asset", "asset_id", required=True)
@click.option("--layer", required=True, type=click.IntRange(1, 5))
@click.option("--kind", required=True,
              type=click.Choice([k.value for k in SurfaceKind]))
@click.option("--locator", required=True)
@click.option("--auth", default=AuthLevel.UNKNOWN.value,
              type=click.Choice([a.value for a in AuthLevel]),
              show_default=True)
@click.option("--encrypted", default=EncryptionState.UNKNOWN.value,
              type=click.Choice([e.value for e in EncryptionState]),
              show_default=True)
@click.option("--attr", "attrs", multiple=True,
              help="Attribute as KEY=VALUE; repeatable.")
@_revision_option
@click.pass_context
@_handles_errors
def project_add_surface(ctx: click.Context, project_id: str, asset_id: str,
                        layer: int, kind: str, locator: str, auth: str,
                        encrypted: str, attrs: tuple[str, ...],
                        revision: Optional[int]) -> None:
    """Record an attack-surface item on an asset."""
    attributes = _parse_attrs(attrs)

    def op(target: AuditProject) -> str:
        return surface_add(target, asset_id, Layer(layer), SurfaceKind(kind),
                           locator, auth=AuthLevel(auth),
                           encrypted=EncryptionState(encrypted),
                           attributes=attributes or None).id

    updated, created_id = _mutate(_store(ctx), project_id, revision, op)
    _confirm_line(updated, "added surface item", created_id)


@project.command("update-surface")
@click.argument("project_id")
@click.argument("item_id")
@click.option("--auth", default=None,
              type=click.Choice([a.value for a in AuthLevel]))
@click.option("--encrypted", default=None,
              type=click.Choice([e.value for e in EncryptionState]))
@click.option("--attr", "attrs", multiple=True,
              help="Attribute as KEY=VALUE; repeatable.")
@_revision_option
@click.pass_context
@_handles_errors
def project_update_surface(ctx: click.Context, project_id: str, item_id: str,
                           auth: Optional[str], encrypted: Optional[str],
                           attrs: tuple[str, ...],
                           revision: Optional[int]) -> None:
    """Reassess a surface item's auth/encryption or detail attributes."""
    attributes = _parse_attrs(attrs) if attrs else None

    def op(target: AuditProject) -> None:
        surface_update(target, item_id,
                       auth=AuthLevel(auth) if auth else None,
                       encrypted=EncryptionState(encrypted) if encrypted else None,
                       attributes=attributes)

    updated, _ = _mutate(_store(ctx), project_id, revision, op)
    _confirm_line(updated, f"updated surface item {item_id}")


@project.command("set-owasp")
@click.argument("project_id")
@click.option("--app-item", "app_item_id", required=True,
              help="Surface item id of the mobile app.")
@click.option("--code", required=True, help="Checklist code M1..M10.")
@click.option("--status", required=True,
              type=click.Choice([s.value for s in OwaspStatus]))
@click.option("--note", default="")
@_revision_option
@click.pass_context
@_handles_errors
def project_set_owasp(ctx: click.Context, project_id: str, app_item_id: str,
                      code: str, status: str, note: str,
                      revision: Optional[int]) -> None:
    """Record a mobile-app checklist assessment."""

    def op(target: AuditProject) -> None:
        owasp_set(target, app_item_id, code, OwaspStatus(status), note=note)

    updated, _ = _mutate(_store(ctx), project_id, revision, op)
    _confirm_line(updated, f"set {code} = {status}")


# --- phases & authorization -------------------------------------------------

@main.group()
def phase() -> None:
    """Advance or revisit audit phases."""


@phase.command("next")
@click.argument("project_id")
@click.option("--auditor", default="")
@_revision_option
@click.pass_context
@_handles_errors
def phase_next(ctx: click.Context, project_id: str, auditor: str,
               revision: Optional[int]) -> None:
    """Move to the next phase."""

    def op(target: AuditProject) -> None:
        phase_advance(target, auditor=auditor)

    updated, _ = _mutate(_store(ctx), project_id, revision, op)
    _confirm_line(updated, f"phase is now {updated.phase.current.value}")


@phase.command("revisit")
@click.argument("project_id")
@click.argument("target_phase", type=click.Choice([p.value for p in Phase]))
@click.option("--reason", default="")
@_revision_option
@click.pass_context
@_handles_errors
def phase_revisit_cmd(ctx: click.Context, project_id: str, target_phase: str,
                      reason: str, revision: Optional[int]) -> None:
    """Reopen an earlier phase, keeping all recorded data."""

    def op(target: AuditProject) -> None:
        phase_revisit(target, Phase(target_phase), reason=reason)

    updated, _ = _mutate(_store(ctx), project_id, revision, op)
    _confirm_line(updated, f"revisiting {target_phase}")


@main.group()
def auth() -> None:
    """Exploitation authorization windows."""


@auth.command("add")
@click.argument("project_id")
@click.option("--granted-by", required=True)
@click.option("--start", required=True, help="RFC 3339 UTC timestamp.")
@click.option("--end", required=True, help="RFC 3339 UTC timestamp.")
@click.option("--scope-note", default="")
@_revision_option
@click.pass_context
@_handles_errors
def auth_add(ctx: click.Context, project_id: str, granted_by: str, start: str,
             end: str, scope_note: str, revision: Optional[int]) -> None:
    """Record an authorization window for controlled exploitation."""

    def op(target: AuditProject) -> str:
        return authorization_add(target, granted_by, start, end,
                                 scope_note=scope_note).id

    updated, created_id = _mutate(_store(ctx), project_id, revision, op)
    _confirm_line(updated, "added authorization window", created_id)


# --- findings ---------------------------------------------------------------

@main.group()
def finding() -> None:
    """Record, confirm, rank, and annotate findings."""


@finding.command("add")
@click.argument("project_id")
@click.option("--phase-recorded", required=True,
              type=click.Choice([Phase.VULN_ANALYSIS.value,
                                 Phase.EXPLOITATION.value]))
@click.option("--surface-item", "surface_item_id", required=True)
@click.option("--threat", "threat_slug", required=True,
              help="Taxonomy leaf slug, e.g. 'mitm'.")
@click.option("--title", required=True)
@click.option("--description", default="")
@click.option("--vector", default=None, help="CVSS v3.1 base vector.")
@_revision_option
@click.pass_context
@_handles_errors
def finding_add_cmd(ctx: click.Context, project_id: str, phase_recorded: str,
                    surface_item_id: str, threat_slug: str, title: str,
                    description: str, vector: Optional[str],
                    revision: Optional[int]) -> None:
    """Record a finding against a surface item."""

    def op(target: AuditProject) -> str:
        return finding_add(target, Phase(phase_recorded), surface_item_id,
                           threat_slug, title, description=description,
                           vector=vector).id

    updated, created_id = _mutate(_store(ctx), project_id, revision, op)
    _confirm_line(updated, "added finding", created_id)


@finding.command("confirm")
@click.argument("project_id")
@click.argument("finding_id")
@_revision_option
@click.pass_context
@_handles_errors
def finding_confirm_cmd(ctx: click.Context, project_id: str, finding_id: str,
                        revision: Optional[int]) -> None:
    """Mark a finding as confirmed."""

    def op(target: AuditProject) -> None:
        finding_confirm(target, finding_id)

    updated, _ = _mutate(_store(ctx), project_id, revision, op)
    _confirm_line(updated, f"confirmed {finding_id}")


@finding.command("status")
@click.argument("project_id")
@click.argument("finding_id")
@click.argument("status", type=click.Choice([s.value for s in FindingStatus]))
@_revision_option
@click.pass_context
@_handles_errors
def finding_status_cmd(ctx: click.Context, project_id: str, finding_id: str,
                       status: str, revision: Optional[int]) -> None:
    """Set a finding's lifecycle status."""

    def op(target: AuditProject) -> None:
        finding_set_status(target, finding_id, FindingStatus(status))

    updated, _ = _mutate(_store(ctx), project_id, revision, op)
    _confirm_line(updated, f"{finding_id} is now {status}")


@finding.command("list")
@click.argument("project_id")
@click.option("--ranked", is_flag=True,
              help="Order by environment weight, score, and layer.")
@click.pass_context
@_handles_errors
def finding_list_cmd(ctx: click.Context, project_id: str,
                     ranked: bool) -> None:
    """List findings, optionally in priority order."""
    loaded = _store(ctx).load(project_id)
    if not ranked:
        entries = [
            {"id": f.id, "title": f.title, "threat_slug": f.threat_slug,
             "status": f.status.value, "score": f.score, "vector": f.vector}
            for f in loaded.findings
        ]
        _echo_json({"findings": entries, "ranked": False})
        return
    entries = []
    for position, row in enumerate(prioritize_findings(loaded), start=1):
        f = row.finding
        entries.append({
            "rank": position, "id": f.id, "title": f.title,
            "threat_slug": f.threat_slug, "domain": row.domain.value,
            "weight": int(row.weight), "weight_label": row.weight.label,
            "layer": int(row.layer), "score": f.score,
            "severity": (cvss.severity_bucket(f.score).label
                         if f.score is not None else None),
            "status": f.status.value,
        })
    _echo_json({"findings": entries, "ranked": True})


@finding.command("note")
@click.argument("project_id")
@click.argument("finding_id")
@click.argument("note")
@_revision_option
@click.pass_context
@_handles_errors
def finding_note_cmd(ctx: click.Context, project_id: str, finding_id: str,
                     note: str, revision: Optional[int]) -> None:
    """Attach a mitigation note to a finding."""

    def op(target: AuditProject) -> None:
        mitigation_note_add(target, finding_id, note)

    updated, _ = _mutate(_store(ctx), project_id, revision, op)
    _confirm_line(updated, f"noted on {finding_id}")


@finding.command("link")
@click.argument("project_id")
@click.argument("finding_id")
@click.argument("other_finding_id")
@_revision_option
@click.pass_context
@_handles_errors
def finding_link_cmd(ctx: click.Context, project_id: str, finding_id: str,
                     other_finding_id: str, revision: Optional[int]) -> None:
    """Link two related findings."""

    def op(target: AuditProject) -> None:
        finding_link(target, finding_id, other_finding_id)

    updated, _ = _mutate(_store(ctx), project_id, revision, op)
    _confirm_line(updated, f"linked {finding_id} -> {other_finding_id}")


@finding.command("exploit")
@click.argument("project_id")
@click.argument("finding_id")
@click.option("--authorization", "authorization_id", required=True)
@click.option("--executed-at", required=True, help="RFC 3339 UTC timestamp.")
@click.option("--technique", required=True)
@click.option("--observed-impact", default="")
@click.option("--environment-note", default="")
@_revision_option
@click.pass_context
@_handles_errors
def finding_exploit_cmd(ctx: click.Context, project_id: str, finding_id: str,
                        authorization_id: str, executed_at: str,
                        technique: str, observed_impact: str,
                        environment_note: str,
                        revision: Optional[int]) -> None:
    """Attach a controlled-exploitation record (requires a valid window)."""

    def op(target: AuditProject) -> None:
        exploitation_record(target, finding_id, authorization_id, executed_at,
                            technique, observed_impact=observed_impact,
                            environment_note=environment_note)

    updated, _ = _mutate(_store(ctx), project_id, revision, op)
    _confirm_line(updated, f"recorded exploitation on {finding_id}")


# --- ingest -----------------------------------------------------------------

@main.group(name="ingest")
def ingest_group() -> None:
    """Fold scan artifacts into a project's attack surface."""


def _echo_merge_reports(reports: list[dict]) -> None:
    _echo_json({"merge_reports": reports})


@ingest_group.command("portscan")
@click.argument("file", type=str)
@click.option("--project", "project_id", required=True)
@_revision_option
@click.pass_context
@_handles_errors
def ingest_portscan(ctx: click.Context, file: str, project_id: str,
                    revision: Optional[int]) -> None:
    """Merge a port-scanner XML report (path or '-')."""
    observations = ingest.parse_port_scan(_read_input(file))
    reports: list[dict] = []

    def op(target: AuditProject) -> None:
        for observation in observations:
            merged = ingest.merge_observation(target, observation)
            reports.append({
                "host": observation.host,
                "created": merged.created,
                "updated": merged.updated,
                "skipped_closed": merged.skipped_closed,
                "conflicts": [
                    {"locator": c.locator, "field": c.field,
                     "old": c.old, "new": c.new}
                    for c in merged.conflicts
                ],
            })

    _mutate(_store(ctx), project_id, revision, op)
    _echo_merge_reports(reports)


@ingest_group.command("interfaces")
@click.argument("file", type=str)
@click.option("--project", "project_id", required=True)
@_revision_option
@click.pass_context
@_handles_errors
def ingest_interfaces(ctx: click.Context, file: str, project_id: str,
                      revision: Optional[int]) -> None:
    """Merge a normalized interface listing (path or '-')."""
    observation = ingest.parse_interface_listing(_read_input(file))
    reports: list[dict] = []

    def op(target: AuditProject) -> None:
        merged = ingest.merge_observation(target, observation)
        reports.append({
            "host": observation.host,
            "created": merged.created,
            "updated": merged.updated,
            "skipped_closed": merged.skipped_closed,
            "conflicts": [
                {"locator": c.locator, "field": c.field,
                 "old": c.old, "new": c.new}
                for c in merged.conflicts
            ],
        })

    _mutate(_store(ctx), project_id, revision, op)
    _echo_merge_reports(reports)


# --- reports ----------------------------------------------------------------

@main.command()
@click.option("--project", "project_id", required=True)
@click.option("--format", "fmt", type=click.Choice(["markdown", "json"]),
              default="markdown", show_default=True)
@click.option("--output", default=None, help="File path or '-' for stdout.")
@click.pass_context
@_handles_errors
def report(ctx: click.Context, project_id: str, fmt: str,
           output: Optional[str]) -> None:
    """Render the audit report (DRAFT watermark before the report phase)."""
    loaded = _store(ctx).load(project_id)
    _write_output(output, render_report(loaded, fmt))


@main.command()
@click.argument("project_ids", nargs=-1, required=True)
@click.option("--format", "fmt", type=click.Choice(["markdown", "json"]),
              default="markdown", show_default=True)
@click.pass_context
@_handles_errors
def compare(ctx: click.Context, project_ids: tuple[str, ...],
            fmt: str) -> None:
    """Render the cross-project comparison matrix."""
    store = _store(ctx)
    projects = [store.load(project_id) for project_id in project_ids]
    matrix = comparative_matrix(projects)
    if fmt == "json":
        _echo_json(matrix.to_dict())
    else:
        sys.stdout.write(comparative_markdown(matrix))


# --- fixtures & server ------------------------------------------------------

@main.group()
def fixtures() -> None:
    """Built-in case-study projects."""


@fixtures.command("load")
@click.pass_context
@_handles_errors
def fixtures_load(ctx: click.Context) -> None:
    """Load the four case-study projects into the store."""
    store = _store(ctx)
    loaded_ids = []
    for built in fixture_projects():
        store.create(built)
        loaded_ids.append(built.id)
    _echo_json({"loaded": loaded_ids})


@main.command()
@click.option("--bind", default="127.0.0.1:8787", show_default=True,
              help="host:port; loopback by default.")
@click.option("--ui", "ui_dir", default=None,
              help="Directory of static UI files to serve under /ui.")
@click.pass_context
@_handles_errors
def serve(ctx: click.Context, bind: str, ui_dir: Optional[str]) -> None:
    """Run the HTTP service over the selected store."""
    from .api import serve as run_service
    run_service(bind=bind, store_dir=ctx.obj["store_dir"], ui_dir=ui_dir)


if __name__ == "__main__":
    main()
