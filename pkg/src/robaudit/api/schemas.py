"""Request bodies for the HTTP service.

Responses reuse the canonical JSON shapes produced by the reporting
module; only requests need dedicated models. Every mutating request
carries the revision the client last saw so concurrent edits surface
as conflicts instead of lost updates.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from ..model import (
    AssetCategory,
    AuthLevel,
    EncryptionState,
    EnvironmentClass,
    FindingStatus,
    Layer,
    OwaspStatus,
    Phase,
    SurfaceKind,
)


class _Request(BaseModel):
    model_config = ConfigDict(extra="forbid")


class _MutatingRequest(_Request):
    revision: int = Field(description="Project revision the client last saw")


class ProjectCreateRequest(_Request):
    name: str
    platform: str
    environment: EnvironmentClass


class AssetCreateRequest(_MutatingRequest):
    category: AssetCategory
    attributes: dict[str, str]


class SurfaceCreateRequest(_MutatingRequest):
    asset_id: str
    layer: Layer
    kind: SurfaceKind
    locator: str
    auth: AuthLevel = AuthLevel.UNKNOWN
    encrypted: EncryptionState = EncryptionState.UNKNOWN
    attributes: dict[str, str] = Field(default_factory=dict)


class SurfaceUpdateRequest(_MutatingRequest):
    auth: Optional[AuthLevel] = None
    encrypted: Optional[EncryptionState] = None
    attributes: Optional[dict[str, str]] = None


class OwaspSetRequest(_MutatingRequest):
    app_surface_item_id: str
    code: str
    status: OwaspStatus
    note: str = ""


class FindingCreateRequest(_MutatingRequest):
    phase_recorded: Phase
    surface_item_id: str
    threat_slug: str
    title: str
    description: str = ""
    vector: Optional[str] = None


class FindingStatusRequest(_MutatingRequest):
    status: FindingStatus


class FindingLinkRequest(_MutatingRequest):
    other_finding_id: str


class MitigationNoteRequest(_MutatingRequest):
    note: str


class ExploitationRequest(_MutatingRequest):
    authorization_id: str
    executed_at: str
    technique: str
    observed_impact: str = ""
    environment_note: str = ""


class AuthorizationCreateRequest(_MutatingRequest):
    granted_by: str
    start: str
    end: str
    scope_note: str = ""


class PhaseAdvanceRequest(_MutatingRequest):
    auditor: str = ""


class PhaseRevisitRequest(_MutatingRequest):
    target: Phase
    reason: str = ""


class IngestRequest(_MutatingRequest):
    format: str = Field(description="port-scan-xml or interface-listing")
    content: str


class ScoreRequest(_Request):
    vector: str
