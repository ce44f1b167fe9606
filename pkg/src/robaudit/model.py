"""Core audit data model: projects, assets, attack surface, findings.

An :class:`AuditProject` is a single self-contained aggregate — assets,
surface items, findings, authorization windows, checklists and the phase
state all live inside it, so one JSON document captures a whole audit.

Structure follows the audit methodology: assets are grouped by the six
reconnaissance categories, every surface item sits on one of the five
analysis layers (L1 outermost: network and app entry points; L5
innermost: physical hardware), and mobile-app surface items carry an
OWASP mobile checklist. Mutations here and in
:mod:`robaudit.workflow` bump the project revision for optimistic
concurrency.
"""

from __future__ import annotations

import secrets
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum, IntEnum
from typing import Optional

from . import cvss
from .catalog import catalog_load
from .errors import (
    DuplicateSurfaceItemError,
    IntegrityError,
    NotFoundError,
    PhaseViolationError,
    ValidationError,
)

SCHEMA_VERSION = "1.0.0"

OWASP_CODES = tuple(f"M{i}" for i in range(1, 11))


class Phase(str, Enum):
    RECON = "recon"
    VULN_ANALYSIS = "vuln-analysis"
    EXPLOITATION = "exploitation"
    MITIGATION = "mitigation"
    REPORT = "report"


PHASE_ORDER = (
    Phase.RECON,
    Phase.VULN_ANALYSIS,
    Phase.EXPLOITATION,
    Phase.MITIGATION,
    Phase.REPORT,
)


def phase_index(phase: Phase) -> int:
    return PHASE_ORDER.index(phase)


class EnvironmentClass(str, Enum):
    INDUSTRIAL_CLOSED_NET = "industrial-closed-net"
    MOBILE_PUBLIC = "mobile-public"
    DRONE = "drone"
    MILITARY_CRITICAL = "military-critical"
    ACADEMIC_PROTOTYPE = "academic-prototype"


class AssetCategory(str, Enum):
    """Inventory categories mirroring the six reconnaissance tasks."""

    HARDWARE_INVENTORY = "hardware-inventory"
    NETWORK_TOPOLOGY = "network-topology"
    SOFTWARE_FIRMWARE = "software-firmware"
    EXPOSED_SERVICE = "exposed-service"
    AUTH_CRYPTO = "auth-crypto"
    EXTERNAL_APP = "external-app"


class Layer(IntEnum):
    """Outside-in analysis layers; L1 is the most exposed."""

    L1 = 1  # network and application entry points
    L2 = 2  # control software / middleware (ROS topics, DDS)
    L3 = 3  # operating system services
    L4 = 4  # firmware / BIOS
    L5 = 5  # physical hardware, buses, debug headers


class SurfaceKind(str, Enum):
    NETWORK_PORT = "network-port"
    WIRELESS_INTERFACE = "wireless-interface"
    DEBUG_PORT = "debug-port"
    PHYSICAL_PORT = "physical-port"
    API = "api"
    WEB_CONSOLE = "web-console"
    MOBILE_APP = "mobile-app"
    BUS = "bus"
    OTHER = "other"


class AuthLevel(str, Enum):
    NONE = "none"
    WEAK = "weak"
    STRONG = "strong"
    UNKNOWN = "unknown"


class EncryptionState(str, Enum):
    NO = "no"
    YES = "yes"
    UNKNOWN = "unknown"


class FindingStatus(str, Enum):
    OPEN = "open"
    CONFIRMED = "confirmed"
    MITIGATED = "mitigated"
    ACCEPTED = "accepted"


class OwaspStatus(str, Enum):
    NOT_ASSESSED = "not-assessed"
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"


@dataclass
class PhaseEvent:
    phase: Phase
    entered_at: str
    by: str = ""
    action: str = "advance"  # "create" | "advance" | "revisit"
    note: str = ""  # revisit justification


@dataclass
class PhaseState:
    current: Phase = Phase.RECON
    history: list[PhaseEvent] = field(default_factory=list)
    revisit_flags: list[Phase] = field(default_factory=list)

    def allows(self, phase: Phase) -> bool:
        """True while ``phase``'s operations are legal: it is the current
        phase, or it was reopened at some point via revisit."""
        return self.current is phase or phase in self.revisit_flags


@dataclass
class Asset:
    id: str
    category: AssetCategory
    attributes: dict[str, str] = field(default_factory=dict)
    created_at: str = ""


@dataclass
class AttackSurfaceItem:
    id: str
    asset_id: str
    layer: Layer
    kind: SurfaceKind
    locator: str  # e.g. "tcp/9559", "UART header J4", "HTTP /admin"
    auth: AuthLevel = AuthLevel.UNKNOWN
    encrypted: EncryptionState = EncryptionState.UNKNOWN
    # Free-form detail (service/version from scans, mac/address for
    # interfaces); merge conflict tracking operates on these keys.
    attributes: dict[str, str] = field(default_factory=dict)
    created_at: str = ""

    def natural_key(self) -> tuple[str, str]:
        return (self.kind.value, self.locator)


@dataclass
class OwaspEntry:
    status: OwaspStatus = OwaspStatus.NOT_ASSESSED
    note: str = ""


@dataclass
class OwaspChecklistState:
    app_surface_item_id: str
    entries: dict[str, OwaspEntry] = field(default_factory=dict)


@dataclass
class AuthorizationWindow:
    id: str
    granted_by: str
    start: str  # RFC 3339 UTC
    end: str  # RFC 3339 UTC; window is [start, end] inclusive
    scope_note: str = ""


@dataclass
class ExploitationRecord:
    executed_at: str
    authorization_id: str
    technique: str
    observed_impact: str = ""
    environment_note: str = ""


@dataclass
class Finding:
    id: str
    phase_recorded: Phase
    surface_item_id: str
    threat_slug: str
    title: str
    description: str = ""
    vector: Optional[str] = None  # canonical CVSS base vector string
    score: Optional[float] = None  # always derived from vector
    status: FindingStatus = FindingStatus.OPEN
    exploitation: Optional[ExploitationRecord] = None
    linked_findings: list[str] = field(default_factory=list)
    mitigation_notes: list[str] = field(default_factory=list)
    created_at: str = ""


@dataclass
class AuditProject:
    id: str
    name: str
    platform: str
    environment: EnvironmentClass
    created_at: str
    updated_at: str
    revision: int = 1
    phase: PhaseState = field(default_factory=PhaseState)
    assets: list[Asset] = field(default_factory=list)
    surface: list[AttackSurfaceItem] = field(default_factory=list)
    findings: list[Finding] = field(default_factory=list)
    authorizations: list[AuthorizationWindow] = field(default_factory=list)
    owasp_checklists: list[OwaspChecklistState] = field(default_factory=list)

    def asset_by_id(self, asset_id: str) -> Asset:
        for asset in self.assets:
            if asset.id == asset_id:
                return asset
        raise NotFoundError("asset", asset_id)

    def surface_by_id(self, item_id: str) -> AttackSurfaceItem:
        for item in self.surface:
            if item.id == item_id:
                return item
        raise NotFoundError("surface item", item_id)

    def finding_by_id(self, finding_id: str) -> Finding:
        for finding in self.findings:
            if finding.id == finding_id:
                return finding
        raise NotFoundError("finding", finding_id)

    def authorization_by_id(self, auth_id: str) -> AuthorizationWindow:
        for window in self.authorizations:
            if window.id == auth_id:
                return window
        raise NotFoundError("authorization", auth_id)

    def checklist_for(self, item_id: str) -> OwaspChecklistState:
        for checklist in self.owasp_checklists:
            if checklist.app_surface_item_id == item_id:
                return checklist
        raise NotFoundError("OWASP checklist", item_id)


def utc_now() -> str:
    """Current time as an RFC 3339 UTC string with a ``Z`` suffix."""
    now = datetime.now(timezone.utc).replace(microsecond=0)
    return now.isoformat().replace("+00:00", "Z")


def parse_timestamp(text: str) -> datetime:
    """Parse an RFC 3339 timestamp; values without a UTC offset are
    rejected so window comparisons are always well-defined."""
    if not isinstance(text, str):
        raise ValidationError(f"invalid timestamp {text!r}: not a string")
    try:
        parsed = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError as exc:
        raise ValidationError(f"invalid timestamp {text!r}: {exc}") from None
    if parsed.tzinfo is None:
        raise ValidationError(f"timestamp {text!r} lacks a UTC offset")
    return parsed


def new_id(prefix: str) -> str:
    """Sortable unique id: prefix, hex nanosecond timestamp, random tail."""
    return f"{prefix}_{time.time_ns():016x}{secrets.token_hex(3)}"


def touch(project: AuditProject) -> None:
    """Mark a mutation: bump the revision and refresh ``updated_at``."""
    project.revision += 1
    project.updated_at = utc_now()


def _require_phase(project: AuditProject, phase: Phase, operation: str) -> None:
    if not project.phase.allows(phase):
        raise PhaseViolationError(
            f"{operation} requires the {phase.value} phase to be open "
            f"(current: {project.phase.current.value}, revisited: "
            f"{[p.value for p in project.phase.revisit_flags]})"
        )


def project_create(name: str, platform: str,
                   environment: EnvironmentClass) -> AuditProject:
    """Create an empty project in the reconnaissance phase."""
    if not name.strip():
        raise ValidationError("project name must not be blank")
    if not isinstance(environment, EnvironmentClass):
        raise ValidationError(f"invalid environment {environment!r}")
    now = utc_now()
    project = AuditProject(
        id=new_id("prj"),
        name=name.strip(),
        platform=platform.strip(),
        environment=environment,
        created_at=now,
        updated_at=now,
    )
    project.phase.history.append(
        PhaseEvent(phase=Phase.RECON, entered_at=now, action="create")
    )
    return project


def asset_add(project: AuditProject, category: AssetCategory,
              attributes: dict[str, str]) -> Asset:
    """Record an inventory asset; legal while reconnaissance is open."""
    _require_phase(project, Phase.RECON, "asset_add")
    if not isinstance(category, AssetCategory):
        raise ValidationError(f"invalid asset category {category!r}")
    if not attributes:
        raise ValidationError("asset attributes must not be empty")
    for key in attributes:
        if not key:
            raise ValidationError("asset attribute keys must be non-empty")
    asset = Asset(
        id=new_id("ast"),
        category=category,
        attributes=dict(attributes),
        created_at=utc_now(),
    )
    project.assets.append(asset)
    touch(project)
    return asset


def surface_add(
    project: AuditProject,
    asset_id: str,
    layer: Layer,
    kind: SurfaceKind,
    locator: str,
    auth: AuthLevel = AuthLevel.UNKNOWN,
    encrypted: EncryptionState = EncryptionState.UNKNOWN,
    attributes: Optional[dict[str, str]] = None,
) -> AttackSurfaceItem:
    """Record an attack-surface entry point; reconnaissance must be open.

    The (kind, locator) pair identifies an item within a project; adding
    the same pair twice is rejected. A mobile-app item automatically
    receives an OWASP checklist with all ten categories not assessed.
    """
    _require_phase(project, Phase.RECON, "surface_add")
    project.asset_by_id(asset_id)  # NotFoundError for unknown assets
    if not isinstance(layer, Layer):
        raise ValidationError(f"invalid layer {layer!r}")
    if not isinstance(kind, SurfaceKind):
        raise ValidationError(f"invalid surface kind {kind!r}")
    if not locator.strip():
        raise ValidationError("surface locator must not be blank")
    item = AttackSurfaceItem(
        id=new_id("srf"),
        asset_id=asset_id,
        layer=layer,
        kind=kind,
        locator=locator.strip(),
        auth=auth,
        encrypted=encrypted,
        attributes=dict(attributes or {}),
        created_at=utc_now(),
    )
    key = item.natural_key()
    for existing in project.surface:
        if existing.natural_key() == key:
            raise DuplicateSurfaceItemError(
                f"surface item already present: {key!r} (id {existing.id})"
            )
    project.surface.append(item)
    if kind is SurfaceKind.MOBILE_APP:
        project.owasp_checklists.append(
            OwaspChecklistState(
                app_surface_item_id=item.id,
                entries={code: OwaspEntry() for code in OWASP_CODES},
            )
        )
    touch(project)
    return item


def surface_update(
    project: AuditProject,
    item_id: str,
    *,
    auth: Optional[AuthLevel] = None,
    encrypted: Optional[EncryptionState] = None,
    attributes: Optional[dict[str, str]] = None,
) -> AttackSurfaceItem:
    """Refine a surface item after deeper analysis.

    Identity fields (kind, locator, layer, asset) are immutable; only
    the auth/encryption assessment and detail attributes may change, in
    any phase — refinements routinely land during later analysis.
    """
    item = project.surface_by_id(item_id)
    if auth is not None:
        item.auth = auth
    if encrypted is not None:
        item.encrypted = encrypted
    if attributes:
        for key in attributes:
            if not key:
                raise ValidationError("attribute keys must be non-empty")
        item.attributes.update(attributes)
    touch(project)
    return item


def surface_order(project: AuditProject) -> list[AttackSurfaceItem]:
    """Items sorted outside-in: layer ascending, then kind, then locator.

    Pure; the project's own list is left untouched.
    """
    return sorted(
        project.surface,
        key=lambda item: (int(item.layer), item.kind.value, item.locator),
    )


def owasp_set(
    project: AuditProject,
    app_surface_item_id: str,
    code: str,
    status: OwaspStatus,
    note: str = "",
) -> OwaspEntry:
    """Assess one OWASP mobile category for a mobile-app surface item."""
    if code not in OWASP_CODES:
        raise NotFoundError("OWASP mobile category", code)
    checklist = project.checklist_for(app_surface_item_id)
    entry = OwaspEntry(status=status, note=note)
    checklist.entries[code] = entry
    touch(project)
    return entry


def validate_project(project: AuditProject) -> None:
    """Re-check every cross-reference and derived-value invariant.

    Raises :class:`IntegrityError` naming the offending path. Used after
    import and available as a standalone health check.
    """
    catalog = catalog_load()
    known_slugs = {threat.slug for threat in catalog.threats}

    seen_ids: set[str] = set()
    for collection, entries in (
        ("assets", project.assets),
        ("surface", project.surface),
        ("findings", project.findings),
        ("authorizations", project.authorizations),
    ):
        for entry in entries:
            if entry.id in seen_ids:
                raise IntegrityError(collection, f"duplicate id {entry.id!r}")
            seen_ids.add(entry.id)

    asset_ids = {asset.id for asset in project.assets}
    keys: set[tuple[str, str]] = set()
    for item in project.surface:
        path = f"surface[{item.id}]"
        if item.asset_id not in asset_ids:
            raise IntegrityError(path, f"dangling asset_id {item.asset_id!r}")
        key = item.natural_key()
        if key in keys:
            raise IntegrityError(path, f"duplicate (kind, locator) {key!r}")
        keys.add(key)

    surface_ids = {item.id for item in project.surface}
    auth_ids = {window.id for window in project.authorizations}
    finding_ids = {finding.id for finding in project.findings}

    for window in project.authorizations:
        path = f"authorizations[{window.id}]"
        if not parse_timestamp(window.start) < parse_timestamp(window.end):
            raise IntegrityError(path, "window start must precede end")

    for finding in project.findings:
        path = f"findings[{finding.id}]"
        if finding.surface_item_id not in surface_ids:
            raise IntegrityError(
                path, f"dangling surface_item_id {finding.surface_item_id!r}")
        if finding.threat_slug not in known_slugs:
            raise IntegrityError(path, f"unknown threat_slug {finding.threat_slug!r}")
        if finding.phase_recorded not in (Phase.VULN_ANALYSIS, Phase.EXPLOITATION):
            raise IntegrityError(
                path, f"phase_recorded {finding.phase_recorded.value!r} invalid")
        if (finding.vector is None) != (finding.score is None):
            raise IntegrityError(path, "score present iff vector present")
        if finding.vector is not None:
            expected = cvss.base_score(cvss.parse_vector(finding.vector))
            if finding.score != expected:
                raise IntegrityError(
                    path, f"stored score {finding.score} != derived {expected}")
        for linked in finding.linked_findings:
            if linked not in finding_ids:
                raise IntegrityError(path, f"dangling linked finding {linked!r}")
        record = finding.exploitation
        if record is not None:
            if finding.status is not FindingStatus.CONFIRMED:
                raise IntegrityError(
                    path, "exploitation present but status not confirmed")
            if record.authorization_id not in auth_ids:
                raise IntegrityError(
                    path, f"dangling authorization_id {record.authorization_id!r}")
            window = project.authorization_by_id(record.authorization_id)
            executed = parse_timestamp(record.executed_at)
            if not (parse_timestamp(window.start) <= executed
                    <= parse_timestamp(window.end)):
                raise IntegrityError(
                    path, "executed_at outside its authorization window")

    app_items = {i.id for i in project.surface if i.kind is SurfaceKind.MOBILE_APP}
    checklist_refs = [c.app_surface_item_id for c in project.owasp_checklists]
    if sorted(app_items) != sorted(checklist_refs):
        raise IntegrityError(
            "owasp_checklists",
            "checklists must correspond one-to-one with mobile-app surface items")
    for checklist in project.owasp_checklists:
        if sorted(checklist.entries) != sorted(OWASP_CODES):
            raise IntegrityError(
                f"owasp_checklists[{checklist.app_surface_item_id}]",
                "entries must cover exactly M1..M10")

    _validate_phase_state(project.phase)


def _validate_phase_state(state: PhaseState) -> None:
    if not state.history:
        raise IntegrityError("phase.history", "history must not be empty")
    if state.history[0].phase is not Phase.RECON:
        raise IntegrityError("phase.history", "history must begin with recon")
    if state.history[-1].phase is not state.current:
        raise IntegrityError(
            "phase", "current phase must equal the last history entry")
    previous = state.history[0].phase
    for index, event in enumerate(state.history[1:], start=1):
        path = f"phase.history[{index}]"
        if event.action == "advance":
            if phase_index(event.phase) != phase_index(previous) + 1:
                raise IntegrityError(path, "advance must step to the successor")
        elif event.action == "revisit":
            if phase_index(event.phase) >= phase_index(previous):
                raise IntegrityError(path, "revisit must target an earlier phase")
            if event.phase not in state.revisit_flags:
                raise IntegrityError(path, "revisited phase missing its flag")
        else:
            raise IntegrityError(path, f"unknown action {event.action!r}")
        previous = event.phase
