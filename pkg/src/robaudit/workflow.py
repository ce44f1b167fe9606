"""Audit workflow: phase machine, findings, exploitation gate, ranking.

The five phases run in a fixed order (recon, vuln-analysis,
exploitation, mitigation, report). Earlier phases can be reopened
non-destructively with :func:`phase_revisit`; reopening is logged and
keeps that phase's operations legal afterwards. Exploitation evidence
may only be recorded during the exploitation phase and inside an
authorization window covering the execution time — boundaries
inclusive, one second outside is a violation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Optional

from . import cvss
from .catalog import ThreatDomain, threat_lookup
from .errors import (
    AlreadyFinalError,
    AuthorizationGateViolationError,
    InvalidTargetError,
    PhaseViolationError,
    ValidationError,
)
from .model import (
    AuditProject,
    AuthorizationWindow,
    EnvironmentClass,
    ExploitationRecord,
    Finding,
    FindingStatus,
    Layer,
    PHASE_ORDER,
    Phase,
    PhaseEvent,
    PhaseState,
    new_id,
    parse_timestamp,
    phase_index,
    touch,
    utc_now,
)


class PriorityWeight(IntEnum):
    """Four-level priority scale used by the environment matrix."""

    LOW = 1
    MEDIUM = 2
    HIGH = 3
    CRITICAL = 4

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @property
    def label_es(self) -> str:
        return {"LOW": "Baja", "MEDIUM": "Media",
                "HIGH": "Alta", "CRITICAL": "Crítica"}[self.name]


# Deployment-environment priority matrix: the weight each threat domain
# carries per environment (5 environments x 3 domains, 15 cells).
ENVIRONMENT_MATRIX: dict[EnvironmentClass, dict[ThreatDomain, PriorityWeight]] = {
    EnvironmentClass.INDUSTRIAL_CLOSED_NET: {
        ThreatDomain.HARDWARE: PriorityWeight.MEDIUM,
        ThreatDomain.SOFTWARE_FIRMWARE: PriorityWeight.CRITICAL,
        ThreatDomain.COMMUNICATIONS: PriorityWeight.MEDIUM,
    },
    EnvironmentClass.MOBILE_PUBLIC: {
        ThreatDomain.HARDWARE: PriorityWeight.MEDIUM,
        ThreatDomain.SOFTWARE_FIRMWARE: PriorityWeight.HIGH,
        ThreatDomain.COMMUNICATIONS: PriorityWeight.CRITICAL,
    },
    EnvironmentClass.DRONE: {
        ThreatDomain.HARDWARE: PriorityWeight.MEDIUM,
        ThreatDomain.SOFTWARE_FIRMWARE: PriorityWeight.MEDIUM,
        ThreatDomain.COMMUNICATIONS: PriorityWeight.CRITICAL,
    },
    EnvironmentClass.MILITARY_CRITICAL: {
        ThreatDomain.HARDWARE: PriorityWeight.CRITICAL,
        ThreatDomain.SOFTWARE_FIRMWARE: PriorityWeight.CRITICAL,
        ThreatDomain.COMMUNICATIONS: PriorityWeight.CRITICAL,
    },
    EnvironmentClass.ACADEMIC_PROTOTYPE: {
        ThreatDomain.HARDWARE: PriorityWeight.LOW,
        ThreatDomain.SOFTWARE_FIRMWARE: PriorityWeight.HIGH,
        ThreatDomain.COMMUNICATIONS: PriorityWeight.HIGH,
    },
}

ENVIRONMENT_DISPLAY = {
    EnvironmentClass.INDUSTRIAL_CLOSED_NET: (
        "Industrial robotics (closed network)",
        "Robótica industrial (en red cerrada)",
    ),
    EnvironmentClass.MOBILE_PUBLIC: (
        "Mobile robots in public environments",
        "Robots móviles en entornos públicos",
    ),
    EnvironmentClass.DRONE: (
        "Surveillance or delivery drones",
        "Drones de vigilancia o entrega",
    ),
    EnvironmentClass.MILITARY_CRITICAL: (
        "Military or critical platforms",
        "Plataformas militares o críticas",
    ),
    EnvironmentClass.ACADEMIC_PROTOTYPE: (
        "Academic environments or prototypes",
        "Entornos académicos o prototipos",
    ),
}

PHASE_DISPLAY = {
    Phase.RECON: ("Reconnaissance", "Recopilación de información"),
    Phase.VULN_ANALYSIS: ("Vulnerability analysis", "Análisis de vulnerabilidades"),
    Phase.EXPLOITATION: ("Controlled exploitation", "Explotación controlada"),
    Phase.MITIGATION: ("Mitigation", "Mitigación"),
    Phase.REPORT: ("Final report", "Informe final"),
}


def environment_weight(environment: EnvironmentClass,
                       domain: ThreatDomain) -> PriorityWeight:
    """Priority weight of a threat domain under a deployment environment."""
    return ENVIRONMENT_MATRIX[environment][domain]


def phase_advance(project: AuditProject, auditor: str = "") -> PhaseState:
    """Move to the next phase in order; the report phase is terminal."""
    index = phase_index(project.phase.current)
    if index + 1 >= len(PHASE_ORDER):
        raise AlreadyFinalError(
            "the report phase is terminal; there is no further phase")
    project.phase.current = PHASE_ORDER[index + 1]
    project.phase.history.append(
        PhaseEvent(phase=project.phase.current, entered_at=utc_now(),
                   by=auditor, action="advance")
    )
    touch(project)
    return project.phase


def phase_revisit(project: AuditProject, target: Phase,
                  reason: str = "") -> PhaseState:
    """Reopen an earlier phase without discarding any recorded data.

    The target must lie strictly before the current phase. The reopened
    phase is flagged, keeping its operations legal even after the audit
    advances again, and the revisit (with its justification) is logged.
    """
    if phase_index(target) >= phase_index(project.phase.current):
        raise InvalidTargetError(
            f"cannot revisit {target.value!r} from "
            f"{project.phase.current.value!r}: only phases strictly before "
            "the current one can be reopened"
        )
    project.phase.current = target
    if target not in project.phase.revisit_flags:
        project.phase.revisit_flags.append(target)
    project.phase.history.append(
        PhaseEvent(phase=target, entered_at=utc_now(), action="revisit",
                   note=reason)
    )
    touch(project)
    return project.phase


def authorization_add(
    project: AuditProject,
    granted_by: str,
    start: str,
    end: str,
    scope_note: str = "",
) -> AuthorizationWindow:
    """Register an owner-granted exploitation window (bounds inclusive)."""
    if not granted_by.strip():
        raise ValidationError("authorization granted_by must not be blank")
    if not parse_timestamp(start) < parse_timestamp(end):
        raise ValidationError(
            f"authorization window must start ({start}) before it ends ({end})")
    window = AuthorizationWindow(
        id=new_id("aut"),
        granted_by=granted_by.strip(),
        start=start,
        end=end,
        scope_note=scope_note,
    )
    project.authorizations.append(window)
    touch(project)
    return window


def finding_add(
    project: AuditProject,
    phase_recorded: Phase,
    surface_item_id: str,
    threat_slug: str,
    title: str,
    description: str = "",
    vector: Optional[str] = None,
) -> Finding:
    """Record an observation against a surface item and taxonomy threat.

    Findings belong to the vulnerability-analysis or exploitation phase
    and may be entered once the audit has reached that phase. The threat
    slug must exist in the catalog; a CVSS vector, when given, is
    canonicalised and scored immediately (scores are never hand-set).
    """
    if phase_recorded not in (Phase.VULN_ANALYSIS, Phase.EXPLOITATION):
        raise PhaseViolationError(
            f"findings cannot be recorded for phase {phase_recorded.value!r}")
    if phase_index(project.phase.current) < phase_index(phase_recorded):
        raise PhaseViolationError(
            f"project is in {project.phase.current.value!r}; findings for "
            f"{phase_recorded.value!r} require that phase to have been reached")
    if not title.strip():
        raise ValidationError("finding title must not be blank")
    project.surface_by_id(surface_item_id)  # NotFoundError when dangling
    threat_lookup(threat_slug)  # NotFoundError for unknown slugs
    canonical = None
    score = None
    if vector is not None:
        parsed = cvss.parse_vector(vector)
        canonical = parsed.vector_string()
        score = cvss.base_score(parsed)
    finding = Finding(
        id=new_id("fnd"),
        phase_recorded=phase_recorded,
        surface_item_id=surface_item_id,
        threat_slug=threat_slug,
        title=title.strip(),
        description=description,
        vector=canonical,
        score=score,
        created_at=utc_now(),
    )
    project.findings.append(finding)
    touch(project)
    return finding


def finding_set_vector(project: AuditProject, finding_id: str,
                       vector: str) -> Finding:
    """Attach or replace a finding's CVSS vector; the score follows."""
    finding = project.finding_by_id(finding_id)
    parsed = cvss.parse_vector(vector)
    finding.vector = parsed.vector_string()
    finding.score = cvss.base_score(parsed)
    touch(project)
    return finding


def finding_set_status(project: AuditProject, finding_id: str,
                       status: FindingStatus) -> Finding:
    """Change a finding's lifecycle status.

    A finding with exploitation evidence stays confirmed — the evidence
    documents a demonstrated weakness, so remediation is captured as
    mitigation notes rather than by rewriting the confirmed state.
    """
    finding = project.finding_by_id(finding_id)
    if finding.exploitation is not None and status is not FindingStatus.CONFIRMED:
        raise ValidationError(
            "finding has an exploitation record; its status is locked to confirmed")
    finding.status = status
    touch(project)
    return finding


def finding_confirm(project: AuditProject, finding_id: str) -> Finding:
    return finding_set_status(project, finding_id, FindingStatus.CONFIRMED)


def finding_link(project: AuditProject, finding_id: str,
                 other_id: str) -> Finding:
    """Link a finding to another one (attack-chain documentation)."""
    finding = project.finding_by_id(finding_id)
    if other_id == finding_id:
        raise InvalidTargetError("a finding cannot link to itself")
    project.finding_by_id(other_id)  # NotFoundError when dangling
    if other_id not in finding.linked_findings:
        finding.linked_findings.append(other_id)
        touch(project)
    return finding


def mitigation_note_add(project: AuditProject, finding_id: str,
                        note: str) -> Finding:
    """Attach a remediation note once the audit has reached mitigation."""
    if (phase_index(project.phase.current) < phase_index(Phase.MITIGATION)
            and Phase.MITIGATION not in project.phase.revisit_flags):
        raise PhaseViolationError(
            "mitigation notes require the mitigation phase to have been reached")
    if not note.strip():
        raise ValidationError("mitigation note must not be blank")
    finding = project.finding_by_id(finding_id)
    finding.mitigation_notes.append(note.strip())
    touch(project)
    return finding


def exploitation_record(
    project: AuditProject,
    finding_id: str,
    authorization_id: str,
    executed_at: str,
    technique: str,
    observed_impact: str = "",
    environment_note: str = "",
) -> Finding:
    """Attach controlled-exploitation evidence to a finding.

    Requires the project to be in the exploitation phase. The referenced
    authorization window must cover ``executed_at`` with inclusive
    bounds; a missing window or a timestamp even one second outside it
    is a gate violation. Recording evidence confirms the finding.
    """
    if project.phase.current is not Phase.EXPLOITATION:
        raise PhaseViolationError(
            "exploitation evidence can only be recorded during the "
            f"exploitation phase (current: {project.phase.current.value})")
    finding = project.finding_by_id(finding_id)
    if finding.exploitation is not None:
        raise ValidationError(
            f"finding {finding_id!r} already has an exploitation record")
    if not technique.strip():
        raise ValidationError("exploitation technique must not be blank")
    window = None
    for candidate in project.authorizations:
        if candidate.id == authorization_id:
            window = candidate
            break
    if window is None:
        raise AuthorizationGateViolationError(
            f"no authorization window with id {authorization_id!r}")
    executed = parse_timestamp(executed_at)
    if not parse_timestamp(window.start) <= executed <= parse_timestamp(window.end):
        raise AuthorizationGateViolationError(
            f"executed_at {executed_at} outside authorization window "
            f"[{window.start}, {window.end}] granted by {window.granted_by}")
    finding.exploitation = ExploitationRecord(
        executed_at=executed_at,
        authorization_id=authorization_id,
        technique=technique.strip(),
        observed_impact=observed_impact,
        environment_note=environment_note,
    )
    finding.status = FindingStatus.CONFIRMED
    touch(project)
    return finding


@dataclass(frozen=True)
class RankedFinding:
    finding: Finding
    domain: ThreatDomain
    weight: PriorityWeight
    layer: Layer


def prioritize_findings(project: AuditProject) -> list[RankedFinding]:
    """Rank findings for remediation order.

    Composite key, descending significance: environment weight of the
    finding's threat domain, CVSS score (unscored sorts below any scored
    finding), surface layer ascending (outer layers first), finding id.
    Pure; input order never affects the result.
    """
    ranked = []
    for finding in project.findings:
        domain = threat_lookup(finding.threat_slug).domain
        weight = environment_weight(project.environment, domain)
        layer = project.surface_by_id(finding.surface_item_id).layer
        ranked.append(RankedFinding(finding=finding, domain=domain,
                                    weight=weight, layer=layer))
    ranked.sort(key=lambda r: (
        -int(r.weight),
        -(round(r.finding.score * 10) if r.finding.score is not None else -1),
        int(r.layer),
        r.finding.id,
    ))
    return ranked
