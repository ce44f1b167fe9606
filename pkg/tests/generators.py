"""Seeded random project builders shared by property and acceptance tests.

Two drivers live here. ``build_random_project`` performs only legal
operations and returns the resulting project (round-trip material).
``run_adversarial_sequence`` also attempts illegal operations (wrong
phase, bad windows, stale timestamps), asserts each one is rejected
with the expected error, and checks the safety invariants after every
step (gate material).
"""

import random
import string

from robaudit.catalog import catalog_load
from robaudit.errors import (
    AlreadyFinalError,
    AuthorizationGateViolationError,
    DuplicateSurfaceItemError,
    InvalidTargetError,
    PhaseViolationError,
    RobAuditError,
    ValidationError,
)
from robaudit.model import (
    AssetCategory,
    AuthLevel,
    EncryptionState,
    EnvironmentClass,
    FindingStatus,
    Layer,
    OwaspStatus,
    Phase,
    PHASE_ORDER,
    SurfaceKind,
    OWASP_CODES,
    asset_add,
    owasp_set,
    phase_index,
    project_create,
    surface_add,
    surface_update,
    validate_project,
)
from robaudit.workflow import (
    authorization_add,
    exploitation_record,
    finding_add,
    finding_confirm,
    finding_link,
    mitigation_note_add,
    phase_advance,
    phase_revisit,
)

THREAT_SLUGS = tuple(t.slug for t in catalog_load().threats)

# Sample CVSS vectors spanning severities (one per bucket plus unscored).
SAMPLE_VECTORS = (
    None,
    "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H",
    "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:N",
    "CVSS:3.1/AV:A/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:H",
    "CVSS:3.1/AV:P/AC:H/PR:H/UI:R/S:U/C:L/I:N/A:N",
    "CVSS:3.0/AV:L/AC:H/PR:H/UI:R/S:C/C:L/I:L/A:N",
    "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N",
)

# Fixed, ordered timestamp pool: windows and execution times are drawn
# from it so in/out-of-window cases are easy to steer.
_TS = tuple(f"2025-06-{day:02d}T{hour:02d}:00:00Z"
            for day in range(1, 11) for hour in (6, 12, 18))


def _word(rng: random.Random) -> str:
    return "".join(rng.choice(string.ascii_lowercase) for _ in range(6))


# Non-ASCII material so serialization tests cover UTF-8 output.
_ACCENTED = ("análisis", "configuración", "contraseña", "robótica",
             "señal", "búfer")


def _text(rng: random.Random) -> str:
    if rng.random() < 0.3:
        return f"{rng.choice(_ACCENTED)} {_word(rng)}"
    return _word(rng)


def _legal_recon(rng: random.Random, project) -> None:
    roll = rng.random()
    if roll < 0.45 or not project.assets:
        asset_add(project, rng.choice(list(AssetCategory)),
                  {_word(rng): _text(rng), "summary": _text(rng)})
    elif roll < 0.9:
        asset = rng.choice(project.assets)
        locator = f"tcp/{rng.randrange(1, 65536)}"
        try:
            surface_add(project, asset.id, rng.choice(list(Layer)),
                        rng.choice(list(SurfaceKind)), locator,
                        auth=rng.choice(list(AuthLevel)),
                        encrypted=rng.choice(list(EncryptionState)))
        except DuplicateSurfaceItemError:
            pass
    elif project.surface:
        item = rng.choice(project.surface)
        surface_update(project, item.id, auth=rng.choice(list(AuthLevel)),
                       attributes={"service": _word(rng)})


def _legal_findings(rng: random.Random, project) -> None:
    if not project.surface:
        return
    current = project.phase.current
    recordable = [p for p in (Phase.VULN_ANALYSIS, Phase.EXPLOITATION)
                  if phase_index(p) <= phase_index(current)]
    if not recordable:
        return
    finding_add(project, rng.choice(recordable),
                rng.choice(project.surface).id,
                rng.choice(THREAT_SLUGS), f"finding {_text(rng)}",
                description=_text(rng),
                vector=rng.choice(SAMPLE_VECTORS))


def _legal_exploit(rng: random.Random, project) -> None:
    if project.phase.current is not Phase.EXPLOITATION:
        return
    candidates = [f for f in project.findings if f.exploitation is None]
    if not candidates:
        return
    start_idx = rng.randrange(0, len(_TS) - 2)
    end_idx = rng.randrange(start_idx + 1, len(_TS))
    window = authorization_add(project, _word(rng), _TS[start_idx],
                               _TS[end_idx])
    executed = _TS[rng.randrange(start_idx, end_idx + 1)]
    exploitation_record(project, rng.choice(candidates).id, window.id,
                        executed, technique=_word(rng),
                        observed_impact=_word(rng))


def build_random_project(rng: random.Random):
    """Drive a random but fully legal audit; returns the final project."""
    project = project_create(f"audit {_text(rng)}", f"platform {_word(rng)}",
                             rng.choice(list(EnvironmentClass)))
    for _ in range(rng.randrange(2, 8)):
        _legal_recon(rng, project)
    steps = rng.randrange(6, 24)
    for _ in range(steps):
        roll = rng.random()
        if roll < 0.3 and project.phase.current is not Phase.REPORT:
            phase_advance(project, auditor=_word(rng))
        elif roll < 0.38 and phase_index(project.phase.current) > 0:
            earlier = PHASE_ORDER[:phase_index(project.phase.current)]
            phase_revisit(project, rng.choice(earlier), reason=_text(rng))
        elif roll < 0.62:
            try:
                _legal_findings(rng, project)
            except PhaseViolationError:
                pass  # revisit may have moved current before VulnAnalysis
        elif roll < 0.75:
            _legal_exploit(rng, project)
        elif roll < 0.83 and project.phase.allows(Phase.RECON):
            _legal_recon(rng, project)
        elif roll < 0.91 and project.findings:
            target = rng.choice(project.findings)
            if target.exploitation is None:
                finding_confirm(project, target.id)
        elif project.findings and phase_index(project.phase.current) >= 3:
            mitigation_note_add(project, rng.choice(project.findings).id,
                                _text(rng))
    if len(project.findings) >= 2 and rng.random() < 0.5:
        first, second = rng.sample(project.findings, 2)
        finding_link(project, first.id, second.id)
    apps = [i for i in project.surface if i.kind is SurfaceKind.MOBILE_APP]
    if apps and rng.random() < 0.6:
        owasp_set(project, rng.choice(apps).id, rng.choice(OWASP_CODES),
                  rng.choice(list(OwaspStatus)), note=_text(rng))
    validate_project(project)
    return project


def _assert_safety(project) -> None:
    """The invariants no operation sequence may ever break."""
    windows = {w.id: w for w in project.authorizations}
    for finding in project.findings:
        record = finding.exploitation
        if record is None:
            continue
        window = windows[record.authorization_id]
        assert window.start <= record.executed_at <= window.end, (
            f"exploitation at {record.executed_at} escaped window "
            f"[{window.start}, {window.end}]")
        assert finding.status is FindingStatus.CONFIRMED
    history = project.phase.history
    assert history and history[0].phase is Phase.RECON
    assert project.phase.current is history[-1].phase
    for previous, event in zip(history, history[1:]):
        if event.action == "advance":
            assert phase_index(event.phase) == phase_index(previous.phase) + 1
        else:
            assert event.action in ("revisit", "create")
            if event.action == "revisit":
                assert phase_index(event.phase) < phase_index(previous.phase)
                assert event.phase in project.phase.revisit_flags


def run_adversarial_sequence(rng: random.Random, steps: int = 8) -> None:
    """Random mix of legal and illegal operations; asserts every illegal
    one is rejected and the safety invariants hold after every step."""
    project = project_create(f"gate {_word(rng)}", _word(rng),
                             rng.choice(list(EnvironmentClass)))
    asset = asset_add(project, AssetCategory.EXPOSED_SERVICE,
                      {"host": _word(rng)})
    surface_item = surface_add(project, asset.id, Layer.L1,
                               SurfaceKind.NETWORK_PORT, "tcp/22")
    for _ in range(steps):
        action = rng.randrange(10)
        try:
            if action == 0:
                phase_advance(project)
            elif action == 1:
                target = rng.choice(list(Phase))
                phase_revisit(project, target, reason=_word(rng))
            elif action == 2:
                _legal_findings(rng, project)
            elif action == 3:
                # Finding in an arbitrary phase: must be rejected unless
                # the project has reached it.
                recorded = rng.choice((Phase.VULN_ANALYSIS,
                                       Phase.EXPLOITATION))
                finding_add(project, recorded, surface_item.id,
                            rng.choice(THREAT_SLUGS), _word(rng))
            elif action == 4:
                # Window with random (possibly inverted) bounds.
                first, second = rng.choice(_TS), rng.choice(_TS)
                authorization_add(project, _word(rng), first, second)
            elif action == 5:
                # Exploitation with a random window and random timestamp:
                # the gate must reject anything outside.
                if project.findings and project.authorizations:
                    exploitation_record(
                        project, rng.choice(project.findings).id,
                        rng.choice(project.authorizations).id,
                        rng.choice(_TS), technique=_word(rng))
            elif action == 6:
                # Exploitation against a window id that does not exist.
                if project.findings:
                    exploitation_record(
                        project, rng.choice(project.findings).id,
                        f"aut_{_word(rng)}", rng.choice(_TS),
                        technique=_word(rng))
                    raise AssertionError("unknown window accepted")
            elif action == 7:
                _legal_exploit(rng, project)
            elif action == 8:
                if project.phase.allows(Phase.RECON):
                    _legal_recon(rng, project)
            else:
                if project.findings:
                    target = rng.choice(project.findings)
                    if target.exploitation is None:
                        finding_confirm(project, target.id)
        except (PhaseViolationError, InvalidTargetError, AlreadyFinalError,
                AuthorizationGateViolationError, ValidationError,
                DuplicateSurfaceItemError):
            pass  # expected rejection of an illegal operation
        except RobAuditError as exc:  # anything else is a real failure
            raise AssertionError(f"unexpected error class: {exc!r}") from exc
        _assert_safety(project)
    validate_project(project)
