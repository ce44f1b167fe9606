"""Built-in case-study projects for four commercial robot platforms.

Each fixture walks a complete audit through the real operations — assets
and surface during reconnaissance, findings during analysis, authorized
exploitation, mitigation notes, final report phase — so every invariant
the package enforces has been exercised by the time a fixture loads.
The category summary attributes hold the condensed comparison-cell text
for each platform verbatim, which keeps the cross-platform matrix exact
rather than re-synthesized.
"""

from __future__ import annotations

from importlib import resources

from . import ingest
from .model import (
    AssetCategory,
    AttackSurfaceItem,
    AuditProject,
    AuthLevel,
    EncryptionState,
    EnvironmentClass,
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
from .workflow import (
    authorization_add,
    exploitation_record,
    finding_add,
    finding_confirm,
    finding_link,
    mitigation_note_add,
    phase_advance,
)


def bundled_port_scan() -> bytes:
    """The recorded port-scan XML for the social-robot case (13 open ports)."""
    return (resources.files("robaudit.data") / "pepper_portscan.xml").read_bytes()


def _surface_by_locator(project: AuditProject, kind: SurfaceKind,
                        locator: str) -> AttackSurfaceItem:
    for item in project.surface:
        if item.kind is kind and item.locator == locator:
            return item
    raise LookupError(f"fixture expects surface item {kind.value} {locator}")


def _to_report(project: AuditProject) -> AuditProject:
    while project.phase.current is not Phase.REPORT:
        phase_advance(project, auditor="fixture")
    return project


def vision60_project() -> AuditProject:
    p = project_create("Vision 60 perimeter audit", "Vision 60 (Ghost Robotics)",
                       EnvironmentClass.MILITARY_CRITICAL)
    asset_add(p, AssetCategory.HARDWARE_INVENTORY, {
        "chassis": "Quadruped unmanned ground vehicle",
        "sensors": "Stereo cameras, LIDAR, GPS/IMU",
    })
    asset_add(p, AssetCategory.SOFTWARE_FIRMWARE, {
        "summary": "Ubuntu 18.04 + ROS 2 Dashing",
        "os": "Ubuntu 18.04",
        "middleware": "ROS 2 Dashing",
    })
    a_exposed = asset_add(p, AssetCategory.EXPOSED_SERVICE, {
        "summary": "SSH, HTTP sin TLS, ROS DDS, Wi-Fi abierto, Ethernet",
        "host": "10.3.7.2",
    })
    asset_add(p, AssetCategory.AUTH_CRYPTO, {
        "summary": "Inexistente en consola web y ROS 2 DDS",
    })
    asset_add(p, AssetCategory.EXTERNAL_APP, {
        "app": "Operator companion app",
        "platform": "Android",
    })

    s_console = surface_add(p, a_exposed.id, Layer.L1, SurfaceKind.WEB_CONSOLE,
                            "http://10.3.7.2/", auth=AuthLevel.NONE,
                            encrypted=EncryptionState.NO,
                            attributes={"service": "operator console"})
    surface_add(p, a_exposed.id, Layer.L1, SurfaceKind.NETWORK_PORT, "tcp/22",
                auth=AuthLevel.WEAK, encrypted=EncryptionState.YES,
                attributes={"service": "ssh"})
    s_dds = surface_add(p, a_exposed.id, Layer.L2, SurfaceKind.API,
                        "ros2-dds:domain0", auth=AuthLevel.NONE,
                        encrypted=EncryptionState.NO,
                        attributes={"service": "ROS 2 DDS discovery"})
    surface_add(p, a_exposed.id, Layer.L1, SurfaceKind.WIRELESS_INTERFACE,
                "wlan0", auth=AuthLevel.NONE, encrypted=EncryptionState.NO,
                attributes={"mode": "open access point"})
    surface_add(p, a_exposed.id, Layer.L5, SurfaceKind.PHYSICAL_PORT, "eth0",
                attributes={"note": "chassis Ethernet jack"})
    s_app = surface_add(p, a_exposed.id, Layer.L1, SurfaceKind.MOBILE_APP,
                        "com.ghostrobotics.command", auth=AuthLevel.WEAK)
    owasp_set(p, s_app.id, "M3", OwaspStatus.FAIL,
              "Console traffic leaves the app over plain HTTP")
    owasp_set(p, s_app.id, "M8", OwaspStatus.FAIL,
              "Static analysis recovers embedded operator credentials")

    phase_advance(p, auditor="field-team")
    f_console = finding_add(
        p, Phase.VULN_ANALYSIS, s_console.id, "arbitrary-code-execution",
        "Web console accepts unauthenticated motion commands",
        description="The operator console issues gait and navigation commands "
                    "without any login step; anyone on the open access point "
                    "can drive the platform.",
        vector="CVSS:3.1/AV:A/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
    f_app = finding_add(
        p, Phase.VULN_ANALYSIS, s_app.id, "reverse-engineering",
        "Hard-coded operator credentials in the companion app",
        description="Decompiling the companion app reveals fixed credentials "
                    "accepted by the platform's services.",
        vector="CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:L/A:N")
    f_dds = finding_add(
        p, Phase.VULN_ANALYSIS, s_dds.id, "dos",
        "Unauthenticated DDS graph allows participant flooding",
        description="Any adjacent node can join the ROS 2 graph and flood "
                    "discovery traffic until control topics stall.",
        vector="CVSS:3.1/AV:A/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:H")
    finding_link(p, f_console.id, f_app.id)

    window = authorization_add(
        p, "Range safety officer",
        "2025-04-07T08:00:00Z", "2025-04-11T20:00:00Z",
        scope_note="Closed test range; platform on stands with kill switch armed")
    phase_advance(p, auditor="field-team")
    exploitation_record(
        p, f_console.id, window.id, "2025-04-09T11:45:00Z",
        technique="Issued gait commands through the open console from the "
                  "robot's own access point",
        observed_impact="Remote modification of patrol behavior without "
                        "credentials",
        environment_note="Test range closed to personnel, manual kill switch "
                         "armed throughout")
    finding_confirm(p, f_dds.id)

    phase_advance(p, auditor="field-team")
    mitigation_note_add(p, f_console.id,
                        "Enable SROS2 enclaves and front the console with TLS "
                        "plus operator authentication.")
    mitigation_note_add(p, f_dds.id,
                        "Segment the control network and rate-limit DDS "
                        "discovery traffic.")
    return _to_report(p)


def unitree_a1_project() -> AuditProject:
    p = project_create("Unitree A1 lab audit", "Unitree A1 (Unitree Robotics)",
                       EnvironmentClass.ACADEMIC_PROTOTYPE)
    asset_add(p, AssetCategory.HARDWARE_INVENTORY, {
        "chassis": "Quadruped research platform",
        "compute": "UPboard main controller plus Raspberry Pi head unit",
    })
    asset_add(p, AssetCategory.SOFTWARE_FIRMWARE, {
        "summary": "Ubuntu 16.04 + ROS Kinetic",
        "os": "Ubuntu 16.04",
        "middleware": "ROS Kinetic",
    })
    a_exposed = asset_add(p, AssetCategory.EXPOSED_SERVICE, {
        "summary": "HTTP sin autenticación, UDP binario, Wi-Fi sin cifrado",
        "host": "192.168.123.161",
    })
    asset_add(p, AssetCategory.AUTH_CRYPTO, {
        "summary": "Inexistente en comandos UDP y app móvil",
    })
    asset_add(p, AssetCategory.EXTERNAL_APP, {
        "app": "Unitree companion app",
        "platform": "Android",
    })

    surface_add(p, a_exposed.id, Layer.L1, SurfaceKind.NETWORK_PORT, "tcp/80",
                auth=AuthLevel.NONE, encrypted=EncryptionState.NO,
                attributes={"service": "status dashboard"})
    s_udp = surface_add(p, a_exposed.id, Layer.L1, SurfaceKind.NETWORK_PORT,
                        "udp/8007", auth=AuthLevel.NONE,
                        encrypted=EncryptionState.NO,
                        attributes={"service": "binary command channel"})
    surface_add(p, a_exposed.id, Layer.L1, SurfaceKind.WIRELESS_INTERFACE,
                "wlan0", auth=AuthLevel.NONE, encrypted=EncryptionState.NO,
                attributes={"mode": "open access point"})
    s_app = surface_add(p, a_exposed.id, Layer.L1, SurfaceKind.MOBILE_APP,
                        "com.unitree.move", auth=AuthLevel.WEAK)
    owasp_set(p, s_app.id, "M3", OwaspStatus.FAIL,
              "Motion commands leave the app with no transport encryption")
    owasp_set(p, s_app.id, "M8", OwaspStatus.FAIL,
              "APK decompiles cleanly; the command protocol is fully "
              "recoverable")
    owasp_set(p, s_app.id, "M2", OwaspStatus.PASS,
              "No sensitive data cached on the handset")

    phase_advance(p, auditor="lab-team")
    f_replay = finding_add(
        p, Phase.VULN_ANALYSIS, s_udp.id, "replay",
        "Captured UDP command bursts replay successfully",
        description="The binary command channel carries no sequence numbers "
                    "or timestamps; recorded packets are accepted verbatim "
                    "when resent.",
        vector="CVSS:3.1/AV:A/AC:L/PR:N/UI:N/S:U/C:N/I:H/A:N")
    f_masq = finding_add(
        p, Phase.VULN_ANALYSIS, s_udp.id, "masquerading",
        "Forged controller packets accepted as genuine",
        description="With the protocol layout recovered from the app, crafted "
                    "packets from any host on the open network are "
                    "indistinguishable from the controller's.",
        vector="CVSS:3.1/AV:A/AC:L/PR:N/UI:N/S:U/C:N/I:H/A:H")
    f_apk = finding_add(
        p, Phase.VULN_ANALYSIS, s_app.id, "reverse-engineering",
        "APK analysis exposes the full command protocol",
        description="The companion app ships without obfuscation; packet "
                    "formats and magic values are readable from the "
                    "decompiled sources.")
    finding_link(p, f_masq.id, f_apk.id)

    window = authorization_add(
        p, "Lab supervisor", "2025-02-17T09:00:00Z", "2025-02-21T18:00:00Z",
        scope_note="Robot harnessed on a padded test bench")
    phase_advance(p, auditor="lab-team")
    exploitation_record(
        p, f_replay.id, window.id, "2025-02-19T14:10:00Z",
        technique="Replayed a captured stand-up sequence from a second laptop",
        observed_impact="Platform executed unauthorized physical actions",
        environment_note="Bench harness attached, padded enclosure")
    exploitation_record(
        p, f_masq.id, window.id, "2025-02-19T15:40:00Z",
        technique="Injected crafted motion packets using the protocol "
                  "recovered from the APK",
        observed_impact="Direct low-level control of joint targets from an "
                        "unpaired host",
        environment_note="Bench harness attached, padded enclosure")
    finding_confirm(p, f_apk.id)

    phase_advance(p, auditor="lab-team")
    mitigation_note_add(p, f_replay.id,
                        "Add sequence numbers and timestamps to the command "
                        "protocol and encrypt it symmetrically.")
    mitigation_note_add(p, f_masq.id,
                        "Authenticate the controller before accepting motion "
                        "commands; review firmware update paths.")
    return _to_report(p)


def ur3_project() -> AuditProject:
    p = project_create("UR3 production-cell audit", "UR3 (Universal Robots)",
                       EnvironmentClass.INDUSTRIAL_CLOSED_NET)
    asset_add(p, AssetCategory.HARDWARE_INVENTORY, {
        "arm": "6-axis collaborative arm",
        "gripper": "Two-finger gripper on the controller bus",
    })
    asset_add(p, AssetCategory.SOFTWARE_FIRMWARE, {
        "summary": "Ubuntu 18.04 + ROS Noetic",
        "os": "Ubuntu 18.04",
        "middleware": "ROS Noetic",
    })
    a_exposed = asset_add(p, AssetCategory.EXPOSED_SERVICE, {
        "summary": "SSH, HTTP, API por sockets TCP (URScript), puerto 30002 "
                   "expuesto",
        "host": "10.20.0.7",
    })
    asset_add(p, AssetCategory.AUTH_CRYPTO, {
        "summary": "Sin cifrado en canal controlador-gripper, tráfico no "
                   "autenticado",
    })
    asset_add(p, AssetCategory.NETWORK_TOPOLOGY, {
        "segmentation": "Flat cell network behind the plant firewall",
    })

    s_urscript = surface_add(p, a_exposed.id, Layer.L1, SurfaceKind.NETWORK_PORT,
                             "tcp/30002", auth=AuthLevel.NONE,
                             encrypted=EncryptionState.NO,
                             attributes={"service": "URScript socket API"})
    s_ssh = surface_add(p, a_exposed.id, Layer.L1, SurfaceKind.NETWORK_PORT,
                        "tcp/22", auth=AuthLevel.WEAK,
                        encrypted=EncryptionState.YES,
                        attributes={"service": "ssh"})
    surface_add(p, a_exposed.id, Layer.L1, SurfaceKind.NETWORK_PORT, "tcp/80",
                auth=AuthLevel.WEAK, encrypted=EncryptionState.NO,
                attributes={"service": "controller web UI"})
    s_bus = surface_add(p, a_exposed.id, Layer.L5, SurfaceKind.BUS,
                        "controller-gripper-bus", auth=AuthLevel.NONE,
                        encrypted=EncryptionState.NO,
                        attributes={"note": "serial link between controller "
                                            "and gripper"})

    phase_advance(p, auditor="plant-team")
    f_mitm = finding_add(
        p, Phase.VULN_ANALYSIS, s_bus.id, "mitm",
        "Controller-to-gripper traffic can be intercepted and altered",
        description="The gripper channel is neither encrypted nor "
                    "authenticated; a node positioned on the cell network can "
                    "rewrite commands in transit.",
        vector="CVSS:3.1/AV:A/AC:H/PR:N/UI:N/S:U/C:N/I:H/A:H")
    f_dos = finding_add(
        p, Phase.VULN_ANALYSIS, s_urscript.id, "dos",
        "Crafted URScript streams stall the controller",
        description="Malformed program streams on the URScript socket keep "
                    "the interpreter busy until motion commands are dropped.",
        vector="CVSS:3.1/AV:A/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:H")
    f_ssh = finding_add(
        p, Phase.VULN_ANALYSIS, s_ssh.id, "password-cracking",
        "Controller SSH allows password-only logins",
        description="The controller accepts password authentication with no "
                    "lockout policy.")

    window = authorization_add(
        p, "Plant security manager",
        "2025-05-12T07:30:00Z", "2025-05-16T17:00:00Z",
        scope_note="Production cell offline for the maintenance week")
    phase_advance(p, auditor="plant-team")
    exploitation_record(
        p, f_mitm.id, window.id, "2025-05-14T13:15:00Z",
        technique="ARP-spoofed the cell switch and altered gripper close "
                  "commands in transit",
        observed_impact="Grasp function fully interrupted during the test",
        environment_note="Cell offline, no workpieces in the fixture")
    finding_confirm(p, f_dos.id)

    phase_advance(p, auditor="plant-team")
    mitigation_note_add(p, f_mitm.id,
                        "Mutually authenticate and encrypt the "
                        "controller-gripper channel.")
    mitigation_note_add(p, f_dos.id,
                        "Put an authenticating gateway in front of the "
                        "URScript API.")
    return _to_report(p)


def pepper_project() -> AuditProject:
    p = project_create("Pepper reception-robot audit",
                       "Pepper (Aldebaran Robotics)",
                       EnvironmentClass.MOBILE_PUBLIC)
    asset_add(p, AssetCategory.HARDWARE_INVENTORY, {
        "chassis": "Humanoid social robot",
        "sensors": "RGB cameras, sonar, laser, tactile panels, microphones",
    })
    asset_add(p, AssetCategory.SOFTWARE_FIRMWARE, {
        "summary": "Linux + Naoqi 2.5.10.7",
        "os": "Linux (embedded)",
        "middleware": "NAOqi 2.5.10.7",
    })
    a_exposed = asset_add(p, AssetCategory.EXPOSED_SERVICE, {
        "summary": "SSH, HTTP sin cifrar y API en puerto 9559 sin "
                   "autenticación",
        "host": "192.168.10.34",
    })
    asset_add(p, AssetCategory.AUTH_CRYPTO, {
        "summary": "Inexistente",
        "transport": "Credentials travel in clear text over HTTP",
    })
    asset_add(p, AssetCategory.NETWORK_TOPOLOGY, {
        "access": "Shared operator Wi-Fi, no segmentation",
    })

    # Recorded port scan: thirteen open services, several at outdated
    # versions, folded in during reconnaissance.
    observations = ingest.parse_port_scan(bundled_port_scan())
    for observation in observations:
        ingest.merge_observation(p, observation)

    s_api = surface_add(p, a_exposed.id, Layer.L1, SurfaceKind.API,
                        "naoqi://192.168.10.34:9559", auth=AuthLevel.NONE,
                        encrypted=EncryptionState.NO,
                        attributes={"service": "NAOqi control API"})
    s_web = surface_add(p, a_exposed.id, Layer.L1, SurfaceKind.WEB_CONSOLE,
                        "http://192.168.10.34/", auth=AuthLevel.WEAK,
                        encrypted=EncryptionState.NO,
                        attributes={"service": "web console"})
    surface_update(p, _surface_by_locator(p, SurfaceKind.NETWORK_PORT,
                                          "tcp/22").id,
                   auth=AuthLevel.WEAK, encrypted=EncryptionState.YES)
    surface_update(p, _surface_by_locator(p, SurfaceKind.NETWORK_PORT,
                                          "tcp/80").id,
                   auth=AuthLevel.WEAK, encrypted=EncryptionState.NO)
    surface_update(p, _surface_by_locator(p, SurfaceKind.NETWORK_PORT,
                                          "tcp/9559").id,
                   auth=AuthLevel.NONE, encrypted=EncryptionState.NO)
    surface_add(p, a_exposed.id, Layer.L5, SurfaceKind.PHYSICAL_PORT,
                "head-usb", auth=AuthLevel.NONE,
                attributes={"note": "USB socket under the head cover"})

    phase_advance(p, auditor="audit-team")
    f_api = finding_add(
        p, Phase.VULN_ANALYSIS, s_api.id, "arbitrary-code-execution",
        "Unauthenticated NAOqi API allows full control",
        description="The control API on port 9559 accepts sessions without "
                    "any authentication step; callers reach actuators, "
                    "sensors and speech directly.",
        vector="CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
    f_web = finding_add(
        p, Phase.VULN_ANALYSIS, s_web.id, "mitm",
        "Web console serves credentials over plain HTTP",
        description="Console logins cross the shared network unencrypted and "
                    "can be read by any bystander host.",
        vector="CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:N/A:N")
    f_ssh = finding_add(
        p, Phase.VULN_ANALYSIS,
        _surface_by_locator(p, SurfaceKind.NETWORK_PORT, "tcp/22").id,
        "password-cracking",
        "SSH service lacks brute-force protection",
        description="Password logins are accepted with no lockout or rate "
                    "limiting, leaving the service open to dictionary "
                    "attacks.")
    finding_link(p, f_ssh.id, f_web.id)

    window = authorization_add(
        p, "Operations lead",
        "2025-03-10T09:00:00Z", "2025-03-14T18:00:00Z",
        scope_note="Controlled exploitation on the isolated test network")
    phase_advance(p, auditor="audit-team")
    exploitation_record(
        p, f_api.id, window.id, "2025-03-12T15:30:00Z",
        technique="Python SDK session against the control API from the same "
                  "network",
        observed_impact="Full remote control of joints, cameras and speech "
                        "without credentials",
        environment_note="Isolated test Wi-Fi, safety stop within reach")
    exploitation_record(
        p, f_web.id, window.id, "2025-03-12T16:05:00Z",
        technique="Passive capture of a console login from the shared network",
        observed_impact="Operator credentials recovered in clear text",
        environment_note="Mirror port on the lab switch")
    exploitation_record(
        p, f_ssh.id, window.id, "2025-03-13T10:20:00Z",
        technique="Dictionary attack against the SSH service with Hydra",
        observed_impact="Weak maintenance password recovered after a short "
                        "run",
        environment_note="Rate-limited wordlist, lab network only")

    phase_advance(p, auditor="audit-team")
    mitigation_note_add(p, f_api.id,
                        "Require authenticated API sessions and bind the "
                        "control service to a management interface; update "
                        "the operating system and stale services.")
    mitigation_note_add(p, f_web.id,
                        "Migrate the web console to HTTPS with TLS 1.3 so "
                        "credentials never travel in clear text.")
    mitigation_note_add(p, f_ssh.id,
                        "Enforce key-based SSH logins and add fail2ban-style "
                        "lockout against repeated attempts.")
    return _to_report(p)


def fixture_projects() -> list[AuditProject]:
    """The four case-study projects, in comparison-table column order."""
    return [
        vision60_project(),
        unitree_a1_project(),
        ur3_project(),
        pepper_project(),
    ]
