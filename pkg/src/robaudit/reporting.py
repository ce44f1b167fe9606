"""Canonical persistence, audit reports, and the comparative matrix.

A project serializes to a single versioned JSON document with stable
field order, so equal projects produce byte-equal documents and exports
diff cleanly as audit evidence. Import re-validates every invariant.
Reports render in markdown or JSON with a fixed section order; reports
produced before the report phase carry a DRAFT watermark. The
comparative matrix lines up several projects side by side using the
six standard comparison rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Union

from . import cvss
from .catalog import (
    TOP5_DISPLAY,
    Top5Threat,
    catalog_load,
    mitigations_for,
    threat_lookup,
)
from .errors import (
    EmptyInputError,
    MalformedDocumentError,
    SchemaVersionUnsupportedError,
)
from .model import (
    Asset,
    AssetCategory,
    AttackSurfaceItem,
    AuditProject,
    AuthLevel,
    AuthorizationWindow,
    EncryptionState,
    ExploitationRecord,
    Finding,
    FindingStatus,
    Layer,
    OWASP_CODES,
    OwaspChecklistState,
    OwaspEntry,
    OwaspStatus,
    Phase,
    PhaseEvent,
    PhaseState,
    SCHEMA_VERSION,
    SurfaceKind,
    EnvironmentClass,
    validate_project,
)
from .workflow import (
    ENVIRONMENT_DISPLAY,
    PHASE_DISPLAY,
    prioritize_findings,
)

CATEGORY_DISPLAY = {
    AssetCategory.HARDWARE_INVENTORY: "Hardware inventory",
    AssetCategory.NETWORK_TOPOLOGY: "Network topology",
    AssetCategory.SOFTWARE_FIRMWARE: "Software and firmware",
    AssetCategory.EXPOSED_SERVICE: "Exposed services",
    AssetCategory.AUTH_CRYPTO: "Authentication and encryption",
    AssetCategory.EXTERNAL_APP: "External applications",
}

# The attribute under which fixtures (and users who want exact
# comparative cells) store the one-line summary for a category asset.
SUMMARY_ATTRIBUTE = "summary"


# --- canonical serialization ------------------------------------------------

def _phase_event_dict(event: PhaseEvent) -> dict:
    return {
        "phase": event.phase.value,
        "entered_at": event.entered_at,
        "by": event.by,
        "action": event.action,
        "note": event.note,
    }


def _asset_dict(asset: Asset) -> dict:
    return {
        "id": asset.id,
        "category": asset.category.value,
        "attributes": {k: asset.attributes[k] for k in sorted(asset.attributes)},
        "created_at": asset.created_at,
    }


def _surface_dict(item: AttackSurfaceItem) -> dict:
    return {
        "id": item.id,
        "asset_id": item.asset_id,
        "layer": int(item.layer),
        "kind": item.kind.value,
        "locator": item.locator,
        "auth": item.auth.value,
        "encrypted": item.encrypted.value,
        "attributes": {k: item.attributes[k] for k in sorted(item.attributes)},
        "created_at": item.created_at,
    }


def _finding_dict(finding: Finding) -> dict:
    exploitation = None
    if finding.exploitation is not None:
        record = finding.exploitation
        exploitation = {
            "executed_at": record.executed_at,
            "authorization_id": record.authorization_id,
            "technique": record.technique,
            "observed_impact": record.observed_impact,
            "environment_note": record.environment_note,
        }
    return {
        "id": finding.id,
        "phase_recorded": finding.phase_recorded.value,
        "surface_item_id": finding.surface_item_id,
        "threat_slug": finding.threat_slug,
        "title": finding.title,
        "description": finding.description,
        "vector": finding.vector,
        "score": finding.score,
        "status": finding.status.value,
        "exploitation": exploitation,
        "linked_findings": list(finding.linked_findings),
        "mitigation_notes": list(finding.mitigation_notes),
        "created_at": finding.created_at,
    }


def project_to_dict(project: AuditProject) -> dict:
    """Stable plain-dict form of a project (fixed key and entry order)."""
    return {
        "id": project.id,
        "name": project.name,
        "platform": project.platform,
        "environment": project.environment.value,
        "created_at": project.created_at,
        "updated_at": project.updated_at,
        "revision": project.revision,
        "phase": {
            "current": project.phase.current.value,
            "history": [_phase_event_dict(e) for e in project.phase.history],
            "revisit_flags": [p.value for p in project.phase.revisit_flags],
        },
        "assets": [_asset_dict(a) for a in project.assets],
        "surface": [_surface_dict(s) for s in project.surface],
        "findings": [_finding_dict(f) for f in project.findings],
        "authorizations": [
            {
                "id": w.id,
                "granted_by": w.granted_by,
                "start": w.start,
                "end": w.end,
                "scope_note": w.scope_note,
            }
            for w in project.authorizations
        ],
        "owasp_checklists": [
            {
                "app_surface_item_id": c.app_surface_item_id,
                "entries": {
                    code: {"status": c.entries[code].status.value,
                           "note": c.entries[code].note}
                    for code in OWASP_CODES if code in c.entries
                },
            }
            for c in project.owasp_checklists
        ],
    }


def export_project(project: AuditProject) -> bytes:
    """Serialize to the canonical versioned JSON document (UTF-8)."""
    document = {
        "schema_version": SCHEMA_VERSION,
        "catalog_version": catalog_load().version,
        "project": project_to_dict(project),
    }
    return (json.dumps(document, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def _require(mapping: dict, key: str, path: str):
    if not isinstance(mapping, dict) or key not in mapping:
        raise MalformedDocumentError(f"{path}: missing field {key!r}")
    return mapping[key]


def _project_from_dict(data: dict) -> AuditProject:
    phase_data = _require(data, "phase", "project")
    phase = PhaseState(
        current=Phase(_require(phase_data, "current", "project.phase")),
        history=[
            PhaseEvent(
                phase=Phase(_require(e, "phase", "phase.history")),
                entered_at=_require(e, "entered_at", "phase.history"),
                by=e.get("by", ""),
                action=e.get("action", "advance"),
                note=e.get("note", ""),
            )
            for e in _require(phase_data, "history", "project.phase")
        ],
        revisit_flags=[Phase(p) for p in phase_data.get("revisit_flags", [])],
    )
    assets = [
        Asset(
            id=_require(a, "id", "assets"),
            category=AssetCategory(_require(a, "category", "assets")),
            attributes=dict(_require(a, "attributes", "assets")),
            created_at=a.get("created_at", ""),
        )
        for a in _require(data, "assets", "project")
    ]
    surface = [
        AttackSurfaceItem(
            id=_require(s, "id", "surface"),
            asset_id=_require(s, "asset_id", "surface"),
            layer=Layer(_require(s, "layer", "surface")),
            kind=SurfaceKind(_require(s, "kind", "surface")),
            locator=_require(s, "locator", "surface"),
            auth=AuthLevel(s.get("auth", "unknown")),
            encrypted=EncryptionState(s.get("encrypted", "unknown")),
            attributes=dict(s.get("attributes", {})),
            created_at=s.get("created_at", ""),
        )
        for s in _require(data, "surface", "project")
    ]
    findings = []
    for f in _require(data, "findings", "project"):
        exploitation = None
        record = f.get("exploitation")
        if record is not None:
            exploitation = ExploitationRecord(
                executed_at=_require(record, "executed_at", "findings.exploitation"),
                authorization_id=_require(record, "authorization_id",
                                          "findings.exploitation"),
                technique=_require(record, "technique", "findings.exploitation"),
                observed_impact=record.get("observed_impact", ""),
                environment_note=record.get("environment_note", ""),
            )
        findings.append(
            Finding(
                id=_require(f, "id", "findings"),
                phase_recorded=Phase(_require(f, "phase_recorded", "findings")),
                surface_item_id=_require(f, "surface_item_id", "findings"),
                threat_slug=_require(f, "threat_slug", "findings"),
                title=_require(f, "title", "findings"),
                description=f.get("description", ""),
                vector=f.get("vector"),
                score=f.get("score"),
                status=FindingStatus(_require(f, "status", "findings")),
                exploitation=exploitation,
                linked_findings=list(f.get("linked_findings", [])),
                mitigation_notes=list(f.get("mitigation_notes", [])),
                created_at=f.get("created_at", ""),
            )
        )
    authorizations = [
        AuthorizationWindow(
            id=_require(w, "id", "authorizations"),
            granted_by=_require(w, "granted_by", "authorizations"),
            start=_require(w, "start", "authorizations"),
            end=_require(w, "end", "authorizations"),
            scope_note=w.get("scope_note", ""),
        )
        for w in _require(data, "authorizations", "project")
    ]
    checklists = [
        OwaspChecklistState(
            app_surface_item_id=_require(c, "app_surface_item_id",
                                         "owasp_checklists"),
            entries={
                code: OwaspEntry(status=OwaspStatus(entry.get("status", "not-assessed")),
                                 note=entry.get("note", ""))
                for code, entry in _require(c, "entries", "owasp_checklists").items()
            },
        )
        for c in data.get("owasp_checklists", [])
    ]
    return AuditProject(
        id=_require(data, "id", "project"),
        name=_require(data, "name", "project"),
        platform=_require(data, "platform", "project"),
        environment=EnvironmentClass(_require(data, "environment", "project")),
        created_at=_require(data, "created_at", "project"),
        updated_at=_require(data, "updated_at", "project"),
        revision=int(_require(data, "revision", "project")),
        phase=phase,
        assets=assets,
        surface=surface,
        findings=findings,
        authorizations=authorizations,
        owasp_checklists=checklists,
    )


def import_project(data: Union[bytes, str]) -> AuditProject:
    """Load and fully re-validate a canonical project document."""
    try:
        text = data.decode("utf-8") if isinstance(data, bytes) else data
        document = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedDocumentError(f"not valid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise MalformedDocumentError("document root must be an object")
    version = _require(document, "schema_version", "document")
    if version != SCHEMA_VERSION:
        raise SchemaVersionUnsupportedError(
            f"schema_version {version!r} unsupported (expected {SCHEMA_VERSION})")
    project_data = _require(document, "project", "document")
    try:
        project = _project_from_dict(project_data)
    except (ValueError, TypeError, AttributeError) as exc:
        raise MalformedDocumentError(f"invalid document field: {exc}") from None
    validate_project(project)
    return project


# --- report rendering -------------------------------------------------------

def _severity_label(score: Optional[float]) -> str:
    if score is None:
        return "—"
    return cvss.severity_bucket(score).label


def _confirmed_top5(project: AuditProject) -> list[Top5Threat]:
    present: list[Top5Threat] = []
    for finding in project.findings:
        if finding.status is not FindingStatus.CONFIRMED:
            continue
        bucket = threat_lookup(finding.threat_slug).top5
        if bucket is not None and bucket not in present:
            present.append(bucket)
    return sorted(present, key=lambda b: list(Top5Threat).index(b))


def report_data(project: AuditProject) -> dict:
    """Structured report content (the JSON report body)."""
    ranked = prioritize_findings(project)
    by_layer: dict[int, list[dict]] = {}
    for finding in project.findings:
        item = project.surface_by_id(finding.surface_item_id)
        by_layer.setdefault(int(item.layer), []).append({
            "id": finding.id,
            "title": finding.title,
            "threat_slug": finding.threat_slug,
            "locator": item.locator,
            "status": finding.status.value,
            "vector": finding.vector,
            "score": finding.score,
            "severity": _severity_label(finding.score),
        })
    exploitation_log = []
    for finding in project.findings:
        record = finding.exploitation
        if record is None:
            continue
        window = project.authorization_by_id(record.authorization_id)
        exploitation_log.append({
            "finding_id": finding.id,
            "finding_title": finding.title,
            "executed_at": record.executed_at,
            "technique": record.technique,
            "observed_impact": record.observed_impact,
            "environment_note": record.environment_note,
            "authorization": {
                "id": window.id,
                "granted_by": window.granted_by,
                "start": window.start,
                "end": window.end,
            },
        })
    mitigations = []
    for bucket in _confirmed_top5(project):
        mitigations.append({
            "top5": bucket.value,
            "title": TOP5_DISPLAY[bucket][0],
            "title_es": TOP5_DISPLAY[bucket][1],
            "strategies": mitigations_for(bucket),
        })
    finding_notes = [
        {"finding_id": f.id, "title": f.title, "notes": list(f.mitigation_notes)}
        for f in project.findings if f.mitigation_notes
    ]
    return {
        "project": {
            "id": project.id,
            "name": project.name,
            "platform": project.platform,
            "environment": project.environment.value,
            "phase": project.phase.current.value,
            "revision": project.revision,
            "updated_at": project.updated_at,
        },
        "draft": project.phase.current is not Phase.REPORT,
        "recon": [
            {
                "category": category.value,
                "assets": [
                    {"id": a.id,
                     "attributes": {k: a.attributes[k] for k in sorted(a.attributes)}}
                    for a in project.assets if a.category is category
                ],
            }
            for category in AssetCategory
        ],
        "findings_by_layer": [
            {"layer": layer, "findings": by_layer.get(layer, [])}
            for layer in range(1, 6)
        ],
        "ranked_findings": [
            {
                "rank": position,
                "finding_id": r.finding.id,
                "title": r.finding.title,
                "threat_slug": r.finding.threat_slug,
                "domain": r.domain.value,
                "weight": int(r.weight),
                "weight_label": r.weight.label,
                "score": r.finding.score,
                "severity": _severity_label(r.finding.score),
                "status": r.finding.status.value,
            }
            for position, r in enumerate(ranked, start=1)
        ],
        "exploitation_log": exploitation_log,
        "mitigations": mitigations,
        "mitigation_notes": finding_notes,
    }


def render_report(project: AuditProject, format: str = "markdown") -> bytes:
    """Render the audit report; ``format`` is ``markdown`` or ``json``."""
    data = report_data(project)
    if format == "json":
        return (json.dumps(data, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    if format != "markdown":
        raise ValueError(f"unsupported report format {format!r}")

    lines: list[str] = []
    title = f"Security audit report — {project.name}"
    if data["draft"]:
        title += " (DRAFT)"
    lines += [f"# {title}", ""]
    env_en, env_es = ENVIRONMENT_DISPLAY[project.environment]
    phase_en, _ = PHASE_DISPLAY[project.phase.current]
    lines += [
        f"- Platform: {project.platform}",
        f"- Environment: {env_en} ({env_es})",
        f"- Phase: {phase_en}",
        f"- Last updated: {project.updated_at} (revision {project.revision})",
        "",
    ]

    lines += ["## Reconnaissance summary", ""]
    for block in data["recon"]:
        category = AssetCategory(block["category"])
        lines.append(f"### {CATEGORY_DISPLAY[category]}")
        if not block["assets"]:
            lines += ["", "_none recorded_", ""]
            continue
        lines.append("")
        for asset in block["assets"]:
            for key, value in asset["attributes"].items():
                lines.append(f"- {key}: {value}")
        lines.append("")

    lines += ["## Findings by layer (outermost first)", ""]
    for block in data["findings_by_layer"]:
        lines.append(f"### Layer L{block['layer']}")
        if not block["findings"]:
            lines += ["", "_none_", ""]
            continue
        lines.append("")
        for f in block["findings"]:
            score = f"{f['score']} ({f['severity']})" if f["score"] is not None else "unscored"
            lines.append(
                f"- **{f['title']}** [{f['threat_slug']}] at `{f['locator']}` — "
                f"{score}, status {f['status']}")
        lines.append("")

    lines += ["## Ranked findings", ""]
    if data["ranked_findings"]:
        lines += [
            "| Rank | Finding | Domain | Priority | Score | Severity | Status |",
            "|------|---------|--------|----------|-------|----------|--------|",
        ]
        for row in data["ranked_findings"]:
            score = row["score"] if row["score"] is not None else "—"
            lines.append(
                f"| {row['rank']} | {row['title']} | {row['domain']} | "
                f"{row['weight_label']} | {score} | {row['severity']} | "
                f"{row['status']} |")
        lines.append("")
    else:
        lines += ["_no findings recorded_", ""]

    lines += ["## Exploitation log", ""]
    if data["exploitation_log"]:
        for entry in data["exploitation_log"]:
            auth = entry["authorization"]
            lines.append(
                f"- {entry['executed_at']} — **{entry['finding_title']}**: "
                f"{entry['technique']}")
            if entry["observed_impact"]:
                lines.append(f"  - Observed impact: {entry['observed_impact']}")
            if entry["environment_note"]:
                lines.append(f"  - Environment: {entry['environment_note']}")
            lines.append(
                f"  - Authorization: {auth['id']} granted by {auth['granted_by']} "
                f"({auth['start']} → {auth['end']})")
        lines.append("")
    else:
        lines += ["_no exploitation performed_", ""]

    lines += ["## Mitigation recommendations", ""]
    if data["mitigations"]:
        for block in data["mitigations"]:
            lines.append(f"### {block['title']} ({block['title_es']})")
            lines.append("")
            for strategy in block["strategies"]:
                lines.append(f"- {strategy}")
            lines.append("")
    else:
        lines += ["_no confirmed findings in Top-5 threat buckets_", ""]
    if data["mitigation_notes"]:
        lines.append("### Finding-specific notes")
        lines.append("")
        for block in data["mitigation_notes"]:
            for note in block["notes"]:
                lines.append(f"- {block['title']}: {note}")
        lines.append("")

    return ("\n".join(lines)).encode("utf-8")


# --- comparative matrix -----------------------------------------------------

@dataclass(frozen=True)
class MatrixRow:
    label: str  # Spanish row label, as in the standard comparison table
    label_en: str
    cells: tuple[str, ...]


@dataclass(frozen=True)
class ComparativeMatrix:
    header: tuple[str, ...]
    rows: tuple[MatrixRow, ...]

    def to_dict(self) -> dict:
        return {
            "header": list(self.header),
            "rows": [
                {"label": r.label, "label_en": r.label_en, "cells": list(r.cells)}
                for r in self.rows
            ],
        }


def _category_summary(project: AuditProject,
                      category: AssetCategory) -> Optional[str]:
    for asset in project.assets:
        if asset.category is category and SUMMARY_ATTRIBUTE in asset.attributes:
            return asset.attributes[SUMMARY_ATTRIBUTE]
    return None


def _cell_os_middleware(project: AuditProject) -> str:
    summary = _category_summary(project, AssetCategory.SOFTWARE_FIRMWARE)
    if summary is not None:
        return summary
    values = []
    for asset in project.assets:
        if asset.category is AssetCategory.SOFTWARE_FIRMWARE:
            values.extend(asset.attributes.values())
    return " + ".join(values) if values else "—"


def _cell_interfaces(project: AuditProject) -> str:
    summary = _category_summary(project, AssetCategory.EXPOSED_SERVICE)
    if summary is not None:
        return summary
    locators = [item.locator for item in project.surface if item.layer is Layer.L1]
    return ", ".join(locators) if locators else "—"


def _cell_encryption(project: AuditProject) -> str:
    summary = _category_summary(project, AssetCategory.AUTH_CRYPTO)
    if summary is not None:
        return summary
    plain = [item.locator for item in project.surface
             if item.encrypted is EncryptionState.NO]
    return f"Sin cifrado: {', '.join(plain)}" if plain else "—"


def _cell_vectors(project: AuditProject) -> str:
    titles = [r.finding.title for r in prioritize_findings(project)[:3]]
    return ", ".join(titles) if titles else "—"


def _cell_impact(project: AuditProject) -> str:
    impacts = [f.exploitation.observed_impact for f in project.findings
               if f.exploitation is not None and f.exploitation.observed_impact]
    return "; ".join(impacts) if impacts else "—"


def _cell_measures(project: AuditProject) -> str:
    leads = [mitigations_for(bucket)[0] for bucket in _confirmed_top5(project)]
    return "; ".join(leads) if leads else "—"


_MATRIX_ROWS = (
    ("Sistema operativo y middleware", "Operating system and middleware",
     _cell_os_middleware),
    ("Interfaces expuestas", "Exposed interfaces", _cell_interfaces),
    ("Nivel de cifrado", "Encryption level", _cell_encryption),
    ("Principales vectores de ataque", "Main attack vectors", _cell_vectors),
    ("Impacto potencial", "Potential impact", _cell_impact),
    ("Medidas recomendadas", "Recommended measures", _cell_measures),
)


def comparative_matrix(projects: list[AuditProject]) -> ComparativeMatrix:
    """Line projects up side by side across the six comparison rows.

    Every cell derives from stored project data: a category asset's
    ``summary`` attribute verbatim when present, otherwise a synthesis
    from surface items, rankings, exploitation records and the
    mitigation catalog.
    """
    if not projects:
        raise EmptyInputError("comparative matrix requires at least one project")
    header = ("Fase de auditoría", *(p.platform for p in projects))
    rows = tuple(
        MatrixRow(label=label, label_en=label_en,
                  cells=tuple(cell(p) for p in projects))
        for label, label_en, cell in _MATRIX_ROWS
    )
    return ComparativeMatrix(header=header, rows=rows)


def comparative_markdown(matrix: ComparativeMatrix) -> str:
    """Markdown rendering of a comparative matrix."""
    widths = [len(h) for h in matrix.header]
    lines = [
        "| " + " | ".join(matrix.header) + " |",
        "|" + "|".join("-" * (w + 2) for w in widths) + "|",
    ]
    for row in matrix.rows:
        lines.append("| " + " | ".join((row.label, *row.cells)) + " |")
    return "\n".join(lines) + "\n"
