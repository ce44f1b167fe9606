"""Parsers for reconnaissance artifacts and their merge into a project.

Two artifact formats are supported: the XML report emitted by the
network port scanner (``-oX``; the only scanner format accepted) and a
normalized interface listing (one interface per line:
``<ifname> [<mac>] <ipv4/prefix>``). Parsers are pure and total —
arbitrary input produces either a value or a structured error, never a
crash — and reject inline DTDs outright. Merging turns open-port and
interface observations into layer-1 surface items idempotently,
logging (never hiding) conflicting service details.
"""

from __future__ import annotations

import ipaddress
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .errors import (
    EmptyDocumentError,
    LineSyntaxError,
    SchemaError,
    XmlSyntaxError,
)
from .model import (
    Asset,
    AssetCategory,
    AttackSurfaceItem,
    AuditProject,
    AuthLevel,
    EncryptionState,
    Layer,
    Phase,
    SurfaceKind,
    _require_phase,
    new_id,
    touch,
    utc_now,
)


class ScanSource(str, Enum):
    PORT_SCAN_XML = "port-scan-xml"
    INTERFACE_LISTING = "interface-listing"
    MANUAL_NOTE = "manual-note"


PORT_STATES = ("open", "filtered", "closed")


@dataclass(frozen=True)
class ScanEntry:
    port: int
    proto: str  # "tcp" | "udp"
    state: str  # "open" | "filtered" | "closed"
    service: Optional[str] = None
    version: Optional[str] = None


@dataclass(frozen=True)
class InterfaceEntry:
    ifname: str
    address: str  # ipv4/prefix
    mac: Optional[str] = None
    wireless: bool = False


@dataclass(frozen=True)
class ScanObservation:
    source: ScanSource
    host: str
    entries: tuple[ScanEntry, ...] = ()
    interfaces: tuple[InterfaceEntry, ...] = ()


@dataclass(frozen=True)
class MergeConflict:
    locator: str
    field: str
    old: str
    new: str


@dataclass
class MergeReport:
    created: int = 0
    updated: int = 0
    skipped_closed: int = 0
    conflicts: list[MergeConflict] = field(default_factory=list)


_MAC_RE = re.compile(r"^[0-9A-Fa-f]{2}(:[0-9A-Fa-f]{2}){5}$")
_IFNAME_RE = re.compile(r"^[A-Za-z][\w.-]*$")


def _doctype_line(text: str) -> Optional[int]:
    index = text.find("<!DOCTYPE")
    if index < 0:
        return None
    return text.count("\n", 0, index) + 1


def parse_port_scan(data: Union[bytes, str]) -> list[ScanObservation]:
    """Parse a port-scanner XML report into per-host observations.

    Accepts the scanner's XML output only; the schema subset read is
    host/address, ports/port (protocol, portid), state, and service
    (name, version). Unknown elements and attributes are ignored.
    Inline DTDs are rejected. A report without hosts is an error; a
    host without a ports section yields an observation with no entries.
    """
    if isinstance(data, bytes):
        text = data.decode("utf-8", errors="replace")
    elif isinstance(data, str):
        text = data
    else:
        raise XmlSyntaxError(0, "input must be bytes or text")

    doctype_at = _doctype_line(text)
    if doctype_at is not None:
        raise XmlSyntaxError(doctype_at, "DOCTYPE declarations are not accepted")

    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line = exc.position[0] if exc.position else 0
        raise XmlSyntaxError(line, exc.msg if hasattr(exc, "msg") else str(exc)) from None
    except ValueError as exc:
        # e.g. str input carrying an encoding declaration
        raise XmlSyntaxError(0, str(exc)) from None

    if root.tag != "nmaprun":
        raise SchemaError("/", f"unexpected root element {root.tag!r}")

    hosts = root.findall("host")
    if not hosts:
        raise EmptyDocumentError("scan report contains no host elements")

    observations = []
    for host_index, host in enumerate(hosts):
        host_path = f"host[{host_index}]"
        address_el = host.find("address")
        if address_el is None or not address_el.get("addr"):
            raise SchemaError(f"{host_path}/address", "missing address element or addr")
        entries: list[ScanEntry] = []
        seen: set[tuple[int, str]] = set()
        ports_el = host.find("ports")
        port_elements = ports_el.findall("port") if ports_el is not None else []
        for port_index, port_el in enumerate(port_elements):
            path = f"{host_path}/ports/port[{port_index}]"
            proto = port_el.get("protocol")
            if proto not in ("tcp", "udp"):
                raise SchemaError(path, f"protocol must be tcp or udp, got {proto!r}")
            portid_raw = port_el.get("portid")
            try:
                portid = int(portid_raw)
            except (TypeError, ValueError):
                raise SchemaError(path, f"portid {portid_raw!r} is not an integer") from None
            if not 1 <= portid <= 65535:
                raise SchemaError(path, f"portid {portid} outside 1..65535")
            state_el = port_el.find("state")
            state = state_el.get("state") if state_el is not None else None
            if state not in PORT_STATES:
                raise SchemaError(f"{path}/state",
                                  f"state must be one of {PORT_STATES}, got {state!r}")
            service_el = port_el.find("service")
            service = service_el.get("name") if service_el is not None else None
            version = service_el.get("version") if service_el is not None else None
            key = (portid, proto)
            if key in seen:
                raise SchemaError(path, f"duplicate entry for {proto}/{portid}")
            seen.add(key)
            entries.append(ScanEntry(port=portid, proto=proto, state=state,
                                     service=service, version=version))
        observations.append(
            ScanObservation(source=ScanSource.PORT_SCAN_XML,
                            host=address_el.get("addr"),
                            entries=tuple(entries))
        )
    return observations


def parse_interface_listing(text: str) -> ScanObservation:
    """Parse a normalized interface listing.

    Grammar, one interface per line: ``<ifname> [<mac>] <ipv4/prefix>``.
    Blank lines and ``#`` comments are skipped. Interface names starting
    with ``wl`` are wireless; everything else is treated as wired.
    Empty input yields an observation with no interfaces.
    """
    if not isinstance(text, str):
        raise LineSyntaxError(0, "input must be text")
    interfaces: list[InterfaceEntry] = []
    seen: set[str] = set()
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) == 2:
            ifname, mac, address = tokens[0], None, tokens[1]
        elif len(tokens) == 3:
            ifname, mac, address = tokens
        else:
            raise LineSyntaxError(
                line_no, f"expected 2 or 3 fields, got {len(tokens)}")
        if not _IFNAME_RE.match(ifname):
            raise LineSyntaxError(line_no, f"invalid interface name {ifname!r}")
        if ifname in seen:
            raise LineSyntaxError(line_no, f"duplicate interface {ifname!r}")
        if mac is not None and not _MAC_RE.match(mac):
            raise LineSyntaxError(line_no, f"invalid MAC address {mac!r}")
        if "/" not in address:
            raise LineSyntaxError(
                line_no, f"address {address!r} must be <ipv4>/<prefix>")
        try:
            ipaddress.IPv4Interface(address)
        except ValueError as exc:
            raise LineSyntaxError(line_no, f"invalid address {address!r}: {exc}") from None
        seen.add(ifname)
        interfaces.append(
            InterfaceEntry(ifname=ifname, address=address,
                           mac=mac.lower() if mac else None,
                           wireless=ifname.startswith("wl"))
        )
    return ScanObservation(source=ScanSource.INTERFACE_LISTING, host="",
                           interfaces=tuple(interfaces))


def _find_or_create_asset(project: AuditProject, category: AssetCategory,
                          host: str) -> tuple[Asset, bool]:
    for asset in project.assets:
        if asset.category is category:
            return asset, False
    attributes = {"origin": "ingest"}
    if host:
        attributes["host"] = host
    asset = Asset(id=new_id("ast"), category=category,
                  attributes=attributes, created_at=utc_now())
    project.assets.append(asset)
    return asset, True


def _merge_attributes(item: AttackSurfaceItem, updates: dict[str, Optional[str]],
                      conflicts: list[MergeConflict]) -> bool:
    changed = False
    for name, new_value in updates.items():
        if new_value is None:
            continue
        old_value = item.attributes.get(name)
        if old_value == new_value:
            continue
        if old_value is not None:
            conflicts.append(MergeConflict(locator=item.locator, field=name,
                                           old=old_value, new=new_value))
        item.attributes[name] = new_value
        changed = True
    return changed


def merge_observation(project: AuditProject,
                      observation: ScanObservation) -> MergeReport:
    """Fold an observation into the project's assets and attack surface.

    Open ports become/update layer-1 network-port items with locator
    ``<proto>/<port>``; closed and filtered entries are counted but not
    stored. Interfaces become wireless/wired layer-1 items keyed by
    name. Existing items are only refreshed in their detail attributes
    (service, version, mac, address); a differing value is recorded as a
    conflict and the new value wins. Re-merging the same observation is
    a no-op, leaving revision and serialization untouched.
    """
    _require_phase(project, Phase.RECON, "merge_observation")
    report = MergeReport()
    changed = False
    by_key = {item.natural_key(): item for item in project.surface}

    for entry in observation.entries:
        if entry.state != "open":
            report.skipped_closed += 1
            continue
        locator = f"{entry.proto}/{entry.port}"
        key = (SurfaceKind.NETWORK_PORT.value, locator)
        existing = by_key.get(key)
        if existing is None:
            asset, asset_created = _find_or_create_asset(
                project, AssetCategory.EXPOSED_SERVICE, observation.host)
            changed = changed or asset_created
            attributes = {}
            if entry.service is not None:
                attributes["service"] = entry.service
            if entry.version is not None:
                attributes["version"] = entry.version
            item = AttackSurfaceItem(
                id=new_id("srf"), asset_id=asset.id, layer=Layer.L1,
                kind=SurfaceKind.NETWORK_PORT, locator=locator,
                auth=AuthLevel.UNKNOWN, encrypted=EncryptionState.UNKNOWN,
                attributes=attributes, created_at=utc_now(),
            )
            project.surface.append(item)
            by_key[key] = item
            report.created += 1
            changed = True
        else:
            if _merge_attributes(existing,
                                 {"service": entry.service,
                                  "version": entry.version},
                                 report.conflicts):
                report.updated += 1
                changed = True

    for iface in observation.interfaces:
        kind = (SurfaceKind.WIRELESS_INTERFACE if iface.wireless
                else SurfaceKind.NETWORK_PORT)
        key = (kind.value, iface.ifname)
        existing = by_key.get(key)
        if existing is None:
            asset, asset_created = _find_or_create_asset(
                project, AssetCategory.NETWORK_TOPOLOGY, observation.host)
            changed = changed or asset_created
            attributes = {"address": iface.address}
            if iface.mac is not None:
                attributes["mac"] = iface.mac
            item = AttackSurfaceItem(
                id=new_id("srf"), asset_id=asset.id, layer=Layer.L1,
                kind=kind, locator=iface.ifname,
                auth=AuthLevel.UNKNOWN, encrypted=EncryptionState.UNKNOWN,
                attributes=attributes, created_at=utc_now(),
            )
            project.surface.append(item)
            by_key[key] = item
            report.created += 1
            changed = True
        else:
            if _merge_attributes(existing,
                                 {"address": iface.address, "mac": iface.mac},
                                 report.conflicts):
                report.updated += 1
                changed = True

    if changed:
        touch(project)
    return report
