"""Built-in reference catalog for robot/cyber-physical security audits.

Embeds the threat taxonomy (three domains, sixteen leaf threats), the
Top-5 critical-threat mapping, defense strategies per Top-5 bucket, the
OWASP Mobile Top 10 checklist categories, and the recommended tool lists
for reconnaissance, vulnerability analysis and controlled exploitation.

The catalog is normative, versioned data compiled into the package:
display strings are kept bilingual (English plus the original Spanish
source wording) while identifiers are ASCII kebab-case. It is immutable
after load and safe for unrestricted concurrent reads.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

from .errors import CatalogIntegrityError, NotFoundError

CATALOG_VERSION = "1.0.0"


class ThreatDomain(str, Enum):
    HARDWARE = "hardware"
    SOFTWARE_FIRMWARE = "software-firmware"
    COMMUNICATIONS = "communications"


class Top5Threat(str, Enum):
    DOS = "dos"
    HIJACKING = "hijacking"
    FDI = "fdi"
    MITM = "mitm"
    PHYSICAL_INTERFACE = "physical-interface"


class ToolContext(str, Enum):
    RECON_TASK = "recon-task"
    VULN_AREA = "vuln-area"
    EXPLOIT_OBJECTIVE = "exploit-objective"


TOP5_DISPLAY = {
    Top5Threat.DOS: ("Denial-of-service attacks (DoS/DDoS)",
                     "Ataques de denegación de servicio (DoS/DDoS)"),
    Top5Threat.HIJACKING: ("System hijacking",
                           "Secuestro del sistema (Hijacking)"),
    Top5Threat.FDI: ("False data injection",
                     "Inyección de datos falsos (False Data Injection)"),
    Top5Threat.MITM: ("Man-in-the-Middle attacks",
                      "Ataques Man-in-the-Middle (MitM)"),
    Top5Threat.PHYSICAL_INTERFACE: ("Physical attacks on exposed interfaces",
                                    "Ataques físicos sobre interfaces expuestas"),
}


@dataclass(frozen=True)
class DomainInfo:
    id: ThreatDomain
    display_name: str
    display_name_es: str


@dataclass(frozen=True)
class ThreatCategory:
    slug: str
    domain: ThreatDomain
    display_name: str
    display_name_es: str
    description: str
    top5: Optional[Top5Threat] = None


@dataclass(frozen=True)
class MitigationEntry:
    top5: Top5Threat
    strategies: tuple[str, ...]
    strategies_es: tuple[str, ...]


@dataclass(frozen=True)
class OwaspMobileCategory:
    code: str
    title: str
    title_es: str
    description: str


@dataclass(frozen=True)
class ToolRecommendation:
    context: ToolContext
    context_key: str
    label: str
    label_es: str
    tools: tuple[str, ...]


@dataclass(frozen=True)
class Catalog:
    version: str
    domains: tuple[DomainInfo, ...]
    threats: tuple[ThreatCategory, ...]
    mitigations: tuple[MitigationEntry, ...]
    owasp_mobile: tuple[OwaspMobileCategory, ...]
    tools: tuple[ToolRecommendation, ...]

    def to_dict(self) -> dict:
        """Plain-dict form with stable key and entry ordering."""
        return {
            "version": self.version,
            "domains": [
                {"id": d.id.value, "display_name": d.display_name, "display_name_es": d.display_name_es}
                for d in self.domains
            ],
            "threats": [
                {
                    "slug": t.slug,
                    "domain": t.domain.value,
                    "display_name": t.display_name,
                    "display_name_es": t.display_name_es,
                    "description": t.description,
                    "top5": t.top5.value if t.top5 else None,
                }
                for t in self.threats
            ],
            "mitigations": [
                {
                    "top5": m.top5.value,
                    "strategies": list(m.strategies),
                    "strategies_es": list(m.strategies_es),
                }
                for m in self.mitigations
            ],
            "owasp_mobile": [asdict(o) for o in self.owasp_mobile],
            "tools": [
                {
                    "context": r.context.value,
                    "context_key": r.context_key,
                    "label": r.label,
                    "label_es": r.label_es,
                    "tools": list(r.tools),
                }
                for r in self.tools
            ],
        }


_DOMAINS = (
    DomainInfo(ThreatDomain.HARDWARE, "Hardware", "Hardware"),
    DomainInfo(ThreatDomain.SOFTWARE_FIRMWARE, "Software and firmware", "Software y firmware"),
    DomainInfo(ThreatDomain.COMMUNICATIONS, "Communications", "Comunicaciones"),
)

_THREATS = (
    # Hardware domain
    ThreatCategory(
        slug="physical-manipulation",
        domain=ThreatDomain.HARDWARE,
        display_name="Physical manipulation",
        display_name_es="Manipulación física",
        description=(
            "Direct physical access used to alter, replace or damage sensors, "
            "actuators or communication modules, including hostile implants "
            "and destructive devices such as USB killers."
        ),
        top5=Top5Threat.PHYSICAL_INTERFACE,
    ),
    ThreatCategory(
        slug="io-interface-exposure",
        domain=ThreatDomain.HARDWARE,
        display_name="Exposed I/O interfaces",
        display_name_es="Exposición de interfaces de entrada/salida",
        description=(
            "Live debug and peripheral interfaces (UART, JTAG, SPI, I2C, USB, "
            "Ethernet) that grant memory or configuration access when left "
            "unauthenticated and physically reachable."
        ),
        top5=Top5Threat.PHYSICAL_INTERFACE,
    ),
    ThreatCategory(
        slug="hardware-trojan",
        domain=ThreatDomain.HARDWARE,
        display_name="Hardware trojans",
        display_name_es="Troyanos de hardware",
        description=(
            "Malicious components slipped into the circuit during design, "
            "manufacturing or maintenance, dormant until triggered."
        ),
    ),
    # Software/firmware domain
    ThreatCategory(
        slug="dos",
        domain=ThreatDomain.SOFTWARE_FIRMWARE,
        display_name="Denial of service (DoS/DDoS)",
        display_name_es="Denegación de servicio (DoS/DDoS)",
        description=(
            "Overload of CPU, memory or network resources that blocks or "
            "destabilises resource-constrained platforms and their internal "
            "services."
        ),
        top5=Top5Threat.DOS,
    ),
    ThreatCategory(
        slug="arbitrary-code-execution",
        domain=ThreatDomain.SOFTWARE_FIRMWARE,
        display_name="Arbitrary code execution",
        display_name_es="Ejecución arbitraria de código y explotación remota",
        description=(
            "Vulnerable services, open ports or poorly protected APIs that "
            "let a remote attacker run code, subvert behaviour or install "
            "backdoors."
        ),
        top5=Top5Threat.HIJACKING,
    ),
    ThreatCategory(
        slug="rootkit-malware",
        domain=ThreatDomain.SOFTWARE_FIRMWARE,
        display_name="Rootkits and malware",
        display_name_es="Rootkits y malware",
        description=(
            "Stealth programs that keep control across reboots and updates "
            "while spying on tasks or sabotaging them undetected."
        ),
    ),
    ThreatCategory(
        slug="buffer-overflow",
        domain=ThreatDomain.SOFTWARE_FIRMWARE,
        display_name="Buffer overflow",
        display_name_es="Desbordamientos de búfer (buffer overflow)",
        description=(
            "Memory overwrites that redirect execution or escalate "
            "privileges, still prevalent where memory management is manual."
        ),
    ),
    ThreatCategory(
        slug="ransomware-spyware",
        domain=ThreatDomain.SOFTWARE_FIRMWARE,
        display_name="Ransomware and spyware",
        display_name_es="Ransomware y spyware",
        description=(
            "Encryption of critical configuration or operating data for "
            "extortion, or covert capture of commands, locations and sensor "
            "readings."
        ),
    ),
    ThreatCategory(
        slug="password-cracking",
        domain=ThreatDomain.SOFTWARE_FIRMWARE,
        display_name="Password cracking",
        display_name_es="Ataques de cracking de contraseñas",
        description=(
            "Dictionary, brute-force or social-engineering attacks against "
            "administrative credentials, helped along by default passwords "
            "and weak authentication schemes."
        ),
        top5=Top5Threat.HIJACKING,
    ),
    ThreatCategory(
        slug="reverse-engineering",
        domain=ThreatDomain.SOFTWARE_FIRMWARE,
        display_name="Reverse engineering",
        display_name_es="Ingeniería inversa",
        description=(
            "Analysis of firmware or companion applications that exposes "
            "embedded keys, access tokens, control algorithms and insecure "
            "configuration."
        ),
    ),
    # Communications domain
    ThreatCategory(
        slug="replay",
        domain=ThreatDomain.COMMUNICATIONS,
        display_name="Replay attacks",
        display_name_es="Ataques de repetición (Replay)",
        description=(
            "Captured valid messages re-sent later to trigger unauthorized "
            "actions on protocols without freshness checks."
        ),
        top5=Top5Threat.FDI,
    ),
    ThreatCategory(
        slug="mitm",
        domain=ThreatDomain.COMMUNICATIONS,
        display_name="Man-in-the-Middle",
        display_name_es="Ataques Man-in-the-Middle (MitM)",
        description=(
            "An attacker positioned between the system and its controller "
            "intercepts, alters or spoofs traffic without either side "
            "noticing."
        ),
        top5=Top5Threat.MITM,
    ),
    ThreatCategory(
        slug="masquerading",
        domain=ThreatDomain.COMMUNICATIONS,
        display_name="Device masquerading",
        display_name_es="Suplantación de identidad de dispositivos (Masquerading)",
        description=(
            "An attacker poses as a legitimate node (sensor, actuator or "
            "control unit) to feed manipulated data or disable subsystems."
        ),
        top5=Top5Threat.FDI,
    ),
    ThreatCategory(
        slug="ddos",
        domain=ThreatDomain.COMMUNICATIONS,
        display_name="Distributed denial of service (DDoS)",
        display_name_es="Denegación de servicio distribuida (DDoS)",
        description=(
            "Coordinated request floods from many sources that saturate "
            "bandwidth or processing and cut the system off from its "
            "controllers."
        ),
        top5=Top5Threat.DOS,
    ),
    ThreatCategory(
        slug="slow-rate-dos",
        domain=ThreatDomain.COMMUNICATIONS,
        display_name="Slow-rate DoS (Slowloris, HTTP flood)",
        display_name_es="Ataques de ralentización (Slowloris, HTTP flood)",
        description=(
            "Incomplete requests held open for long periods to exhaust "
            "session handling on embedded web interfaces."
        ),
        top5=Top5Threat.DOS,
    ),
    ThreatCategory(
        slug="jamming",
        domain=ThreatDomain.COMMUNICATIONS,
        display_name="Wireless jamming",
        display_name_es="Interferencia inalámbrica (Jamming)",
        description=(
            "Deliberate electromagnetic interference that disrupts wireless "
            "links, causing loss of connectivity or emergency fallback "
            "behaviour."
        ),
    ),
)

_MITIGATIONS = (
    MitigationEntry(
        top5=Top5Threat.DOS,
        strategies=(
            "Traffic filtering with embedded firewalls",
            "Network segmentation in ROS/ROS 2",
            "Intrusion prevention system (IPS) integration",
            "Resource monitoring with automatic responses",
        ),
        strategies_es=(
            "Filtrado de tráfico con firewalls embebidos",
            "Segmentación de red en ROS/ROS 2",
            "Integración de sistemas IPS",
            "Monitorización de recursos y activación de respuestas automáticas",
        ),
    ),
    MitigationEntry(
        top5=Top5Threat.HIJACKING,
        strategies=(
            "Certificate-based authentication",
            "Least-privilege access control",
            "Segmentation of administrative channels",
            "Anomaly detection with behaviour-profiling IDS",
        ),
        strategies_es=(
            "Autenticación basada en certificados",
            "Control de acceso con privilegios mínimos",
            "Segmentación de canales administrativos",
            "Detección de anomalías mediante IDS con perfilado de comportamiento",
        ),
    ),
    MitigationEntry(
        top5=Top5Threat.FDI,
        strategies=(
            "Integrity verification with hashes or signatures",
            "Sensor redundancy with majority voting",
            "Encryption of communication buses",
            "Inconsistency detection through cross-validation",
        ),
        strategies_es=(
            "Verificación de integridad con hashes o firmas",
            "Redundancia sensorial con votación mayoritaria",
            "Cifrado de buses de comunicación",
            "Detección de inconsistencias mediante validación cruzada",
        ),
    ),
    MitigationEntry(
        top5=Top5Threat.MITM,
        strategies=(
            "End-to-end encryption with TLS 1.3 and mutual authentication",
            "Session-token validation",
            "Protection against ARP spoofing and DNS poisoning with ARP guard and DNSSEC",
        ),
        strategies_es=(
            "Cifrado de extremo a extremo con TLS 1.3 y autenticación mutua",
            "Validación de tokens de sesión",
            "Protección contra ARP spoofing y DNS poisoning con ARP guard y DNSSEC",
        ),
    ),
    MitigationEntry(
        top5=Top5Threat.PHYSICAL_INTERFACE,
        strategies=(
            "Physical access restriction with locks and enclosures",
            "Authentication of connected devices (certificates, secure keys)",
            "Monitoring and auditing of exposed interfaces",
        ),
        strategies_es=(
            "Restricción de acceso físico mediante cerraduras y carcasas",
            "Autenticación de dispositivos conectados (certificados, llaves seguras)",
            "Monitoreo y auditoría de interfaces externas",
        ),
    ),
)

_OWASP_MOBILE = (
    OwaspMobileCategory(
        "M1",
        "Improper platform usage",
        "Uso inadecuado de la plataforma",
        "Mobile-OS APIs misused: unsafe storage choices, insecure permissions or misconfiguration.",
    ),
    OwaspMobileCategory(
        "M2",
        "Insecure data storage",
        "Almacenamiento inseguro de datos",
        "Sensitive data (passwords, tokens) stored without protection, readable by other apps or physical access.",
    ),
    OwaspMobileCategory(
        "M3",
        "Insecure communication",
        "Comunicación insegura",
        "Data transmitted unencrypted or weakly encrypted, enabling interception on hostile networks.",
    ),
    OwaspMobileCategory(
        "M4",
        "Insecure authentication",
        "Autenticación insegura",
        "Weak identity checks: poor passwords, missing second factor, bad session management.",
    ),
    OwaspMobileCategory(
        "M5",
        "Insufficient cryptography",
        "Insuficiente criptografía",
        "Weak or misused cryptography: short keys, obsolete algorithms, misapplied libraries.",
    ),
    OwaspMobileCategory(
        "M6",
        "Insecure authorization",
        "Autorización insegura",
        "Privileges not validated, letting users reach actions or resources beyond their role.",
    ),
    OwaspMobileCategory(
        "M7",
        "Client code quality",
        "Calidad del código cliente",
        "Poor development practice: weak obfuscation, logic errors, debug functions left enabled.",
    ),
    OwaspMobileCategory(
        "M8",
        "Reverse engineering",
        "Ingeniería inversa",
        "Decompilation of the app to extract secrets or locate exploitable weaknesses.",
    ),
    OwaspMobileCategory(
        "M9",
        "Code tampering",
        "Manipulación de código",
        "Modified app builds that strip restrictions or inject malicious behaviour.",
    ),
    OwaspMobileCategory(
        "M10",
        "Supply chain management",
        "Gestión de la cadena de suministro",
        "Third-party libraries and components whose compromise propagates into the app.",
    ),
)

_TOOLS = (
    # Reconnaissance tasks
    ToolRecommendation(
        ToolContext.RECON_TASK, "hardware-inventory", "Hardware inventory", "Inventario de hardware",
        ("lshw", "lsusb", "lspci", "i2cdetect", "dmidecode"),
    ),
    ToolRecommendation(
        ToolContext.RECON_TASK, "network-topology", "Network topology", "Topología de red",
        ("ip a", "ip route", "nmap", "arp-scan", "netstat"),
    ),
    ToolRecommendation(
        ToolContext.RECON_TASK, "software-firmware", "Software and firmware", "Software y firmware",
        ("uname -a", "lsb_release -a", "binwalk"),
    ),
    ToolRecommendation(
        ToolContext.RECON_TASK, "exposed-services", "Exposed services", "Servicios expuestos",
        ("nmap", "ss", "netstat", "shodan", "masscan"),
    ),
    ToolRecommendation(
        ToolContext.RECON_TASK, "auth-crypto", "Authentication and encryption", "Autenticación y cifrado",
        ("sslscan", "testssl.sh", "Wireshark"),
    ),
    ToolRecommendation(
        ToolContext.RECON_TASK, "external-apps", "External applications", "Aplicaciones externas",
        ("apktool", "frida", "dex2jar"),
    ),
    # Vulnerability-analysis areas
    ToolRecommendation(
        ToolContext.VULN_AREA, "hardware", "Hardware", "Hardware",
        ("JTAGulator", "OpenOCD", "oscilloscopes", "EM interference"),
    ),
    ToolRecommendation(
        ToolContext.VULN_AREA, "firmware-os", "Firmware and OS", "Firmware y S.O.",
        ("binwalk", "firmware-mod-kit", "QEMU", "chkrootkit"),
    ),
    ToolRecommendation(
        ToolContext.VULN_AREA, "control-software", "Control software", "Software de control",
        ("MobSF", "Ghidra", "apktool", "Bandit (Python)"),
    ),
    ToolRecommendation(
        ToolContext.VULN_AREA, "network-communications", "Networks and communications", "Red y comunicaciones",
        ("Wireshark", "ettercap", "mitmproxy", "zmap"),
    ),
    # Controlled-exploitation objectives
    ToolRecommendation(
        ToolContext.EXPLOIT_OBJECTIVE, "unauthorized-access", "Unauthorized access", "Acceso no autorizado",
        ("Hydra", "Medusa", "ADB", "telnet", "screen"),
    ),
    ToolRecommendation(
        ToolContext.EXPLOIT_OBJECTIVE, "command-interception",
        "Command interception/modification", "Intercepción/Modificación de comandos",
        ("mitmproxy", "Ettercap", "Wireshark", "Scapy"),
    ),
    ToolRecommendation(
        ToolContext.EXPLOIT_OBJECTIVE, "privilege-escalation", "Privilege escalation", "Escalada de privilegios",
        ("LinPEAS", "GTFOBins", "sudo -l", "ExploitDB"),
    ),
    ToolRecommendation(
        ToolContext.EXPLOIT_OBJECTIVE, "false-data-injection",
        "False data injection (FDI)", "Inyección de datos falsos (FDI)",
        ("Scapy", "ROS2 CLI", "custom scripts"),
    ),
    ToolRecommendation(
        ToolContext.EXPLOIT_OBJECTIVE, "dos", "Denial of service", "Denegación de servicio",
        ("hping3", "Slowloris", "LOIC", "fuzzing scripts"),
    ),
)

# Expected leaf slugs per domain; validation guards against bad edits.
_EXPECTED_LEAVES = {
    ThreatDomain.HARDWARE: {
        "physical-manipulation", "io-interface-exposure", "hardware-trojan",
    },
    ThreatDomain.SOFTWARE_FIRMWARE: {
        "dos", "arbitrary-code-execution", "rootkit-malware", "buffer-overflow",
        "ransomware-spyware", "password-cracking", "reverse-engineering",
    },
    ThreatDomain.COMMUNICATIONS: {
        "replay", "mitm", "masquerading", "ddos", "slow-rate-dos", "jamming",
    },
}

_EXPECTED_TOOL_ROWS = {
    ToolContext.RECON_TASK: {
        "hardware-inventory", "network-topology", "software-firmware",
        "exposed-services", "auth-crypto", "external-apps",
    },
    ToolContext.VULN_AREA: {
        "hardware", "firmware-os", "control-software", "network-communications",
    },
    ToolContext.EXPLOIT_OBJECTIVE: {
        "unauthorized-access", "command-interception", "privilege-escalation",
        "false-data-injection", "dos",
    },
}


def _validate(catalog: Catalog) -> None:
    domain_ids = [d.id for d in catalog.domains]
    if len(domain_ids) != 3 or len(set(domain_ids)) != 3:
        raise CatalogIntegrityError("expected exactly three unique threat domains")

    slugs = [t.slug for t in catalog.threats]
    if len(slugs) != len(set(slugs)):
        raise CatalogIntegrityError("threat slugs are not unique")
    for domain, expected in _EXPECTED_LEAVES.items():
        actual = {t.slug for t in catalog.threats if t.domain is domain}
        if actual != expected:
            raise CatalogIntegrityError(
                f"domain {domain.value} leaves mismatch: {sorted(actual ^ expected)}"
            )

    covered = {t.top5 for t in catalog.threats if t.top5 is not None}
    if covered != set(Top5Threat):
        raise CatalogIntegrityError("Top-5 buckets not all reachable from leaf threats")

    buckets = [m.top5 for m in catalog.mitigations]
    if sorted(b.value for b in buckets) != sorted(b.value for b in Top5Threat):
        raise CatalogIntegrityError("expected one mitigation entry per Top-5 bucket")
    for entry in catalog.mitigations:
        if not entry.strategies or not entry.strategies_es:
            raise CatalogIntegrityError(f"empty strategy list for {entry.top5.value}")
        if len(entry.strategies) != len(entry.strategies_es):
            raise CatalogIntegrityError(f"bilingual strategy mismatch for {entry.top5.value}")

    codes = [o.code for o in catalog.owasp_mobile]
    if codes != [f"M{i}" for i in range(1, 11)]:
        raise CatalogIntegrityError("OWASP mobile categories must be M1..M10 in order")

    for context, expected_keys in _EXPECTED_TOOL_ROWS.items():
        rows = [r for r in catalog.tools if r.context is context]
        keys = [r.context_key for r in rows]
        if len(keys) != len(set(keys)) or set(keys) != expected_keys:
            raise CatalogIntegrityError(f"tool rows for {context.value} mismatch")
        if any(not r.tools for r in rows):
            raise CatalogIntegrityError(f"empty tool list under {context.value}")


@lru_cache(maxsize=1)
def catalog_load() -> Catalog:
    """Return the embedded catalog, validated; identical on every call."""
    catalog = Catalog(
        version=CATALOG_VERSION,
        domains=_DOMAINS,
        threats=_THREATS,
        mitigations=_MITIGATIONS,
        owasp_mobile=_OWASP_MOBILE,
        tools=_TOOLS,
    )
    _validate(catalog)
    return catalog


def threat_lookup(slug: str) -> ThreatCategory:
    """Exact-slug lookup of a taxonomy leaf."""
    for threat in catalog_load().threats:
        if threat.slug == slug:
            return threat
    raise NotFoundError("threat", slug)


def domain_of(slug: str) -> ThreatDomain:
    return threat_lookup(slug).domain


def mitigations_for(top5: Top5Threat, language: str = "en") -> list[str]:
    """Defense strategies for a Top-5 bucket, in catalog order."""
    for entry in catalog_load().mitigations:
        if entry.top5 is top5:
            return list(entry.strategies if language == "en" else entry.strategies_es)
    raise NotFoundError("mitigation entry", top5.value)  # unreachable once validated


def tools_for(context: ToolContext, context_key: str) -> list[str]:
    """Recommended tools for one table row, in table order."""
    for row in catalog_load().tools:
        if row.context is context and row.context_key == context_key:
            return list(row.tools)
    raise NotFoundError("tool recommendation", f"{context.value}/{context_key}")


def dump_json(catalog: Catalog) -> bytes:
    """Deterministic JSON serialization of the catalog."""
    text = json.dumps(catalog.to_dict(), ensure_ascii=False, indent=2)
    return (text + "\n").encode("utf-8")


def dump_markdown(catalog: Catalog) -> str:
    """Human-readable catalog rendering for ``robaudit catalog dump``."""
    lines = [f"# Threat catalog (v{catalog.version})", ""]
    for domain in catalog.domains:
        lines.append(f"## {domain.display_name} ({domain.display_name_es})")
        lines.append("")
        for threat in catalog.threats:
            if threat.domain is not domain.id:
                continue
            bucket = f" — top-5: {threat.top5.value}" if threat.top5 else ""
            lines.append(f"- **{threat.slug}**: {threat.display_name} "
                         f"({threat.display_name_es}){bucket}")
            lines.append(f"  {threat.description}")
        lines.append("")
    lines.append("## Top-5 defense strategies")
    lines.append("")
    for entry in catalog.mitigations:
        lines.append(f"### {entry.top5.value}")
        for en, es in zip(entry.strategies, entry.strategies_es):
            lines.append(f"- {en} ({es})")
        lines.append("")
    lines.append("## OWASP mobile checklist categories")
    lines.append("")
    for item in catalog.owasp_mobile:
        lines.append(f"- **{item.code}** {item.title} ({item.title_es}): {item.description}")
    lines.append("")
    lines.append("## Recommended tools")
    lines.append("")
    for row in catalog.tools:
        lines.append(f"- [{row.context.value}] {row.label} ({row.label_es}): "
                     f"{', '.join(row.tools)}")
    lines.append("")
    return "\n".join(lines)
