"""Release acceptance gate: one test, and one pass/fail line, per criterion.

Every tolerance is pinned in the assertion itself (integer-tenths score
equality, exact cell strings after whitespace normalization, exact
counts, pinned runtime budget for the scoring sweep). Each test ends by
printing a one-line summary so a ``pytest -s`` run reads as a checklist.
"""

import random
import time

from cvss_oracle import all_metric_combinations, reference_base_score
from generators import build_random_project, run_adversarial_sequence

from robaudit import cvss
from robaudit.catalog import catalog_load
from robaudit.errors import RobAuditError
from robaudit.fixtures import bundled_port_scan, fixture_projects
from robaudit.ingest import parse_port_scan
from robaudit.model import EnvironmentClass, SurfaceKind, validate_project
from robaudit.reporting import (
    comparative_matrix,
    export_project,
    import_project,
)
from robaudit.workflow import ENVIRONMENT_MATRIX, PriorityWeight


def _report(name, detail):
    print(f"ACCEPTANCE {name}: PASS ({detail})")


def test_cvss_scores_match_independent_oracle():
    combinations = list(all_metric_combinations())
    vectors = []
    expected = []
    for av, ac, pr, ui, s, c, i, a in combinations:
        suffix = (f"AV:{av}/AC:{ac}/PR:{pr}/UI:{ui}/S:{s}"
                  f"/C:{c}/I:{i}/A:{a}")
        oracle = reference_base_score(av, ac, pr, ui, s, c, i, a)
        for prefix in ("CVSS:3.0", "CVSS:3.1"):
            vectors.append(f"{prefix}/{suffix}")
            expected.append(oracle)
    assert len(vectors) == 5184

    start = time.perf_counter()
    produced = [cvss.base_score(cvss.parse_vector(text))
                for text in vectors]
    elapsed = time.perf_counter() - start

    mismatches = [
        (text, oracle, ours)
        for text, oracle, ours in zip(vectors, expected, produced)
        if round(oracle * 10) != round(ours * 10)  # exact to 0.1
    ]
    assert mismatches == [], mismatches[:5]
    assert elapsed < 1.0, f"scoring sweep took {elapsed:.3f}s"
    _report("cvss-oracle", f"5184/5184 vectors exact, {elapsed:.3f}s")


def test_severity_bucket_boundaries():
    boundaries = {
        0.0: "none",
        0.1: "low", 2.0: "low", 3.9: "low",
        4.0: "medium", 5.5: "medium", 6.9: "medium",
        7.0: "high", 8.9: "high",
        9.0: "critical", 10.0: "critical",
    }
    assert len(boundaries) == 11
    for score, bucket in boundaries.items():
        assert cvss.severity_bucket(score).value == bucket, score
    _report("severity-buckets", "11/11 boundary scores bucket exactly")


def test_environment_priority_matrix_cells():
    expected = {
        EnvironmentClass.INDUSTRIAL_CLOSED_NET: (2, 4, 2),
        EnvironmentClass.MOBILE_PUBLIC: (2, 3, 4),
        EnvironmentClass.DRONE: (2, 2, 4),
        EnvironmentClass.MILITARY_CRITICAL: (4, 4, 4),
        EnvironmentClass.ACADEMIC_PROTOTYPE: (1, 3, 3),
    }
    checked = 0
    for environment, weights in expected.items():
        row = ENVIRONMENT_MATRIX[environment]
        assert len(row) == 3
        for domain_weight, pinned in zip(row.values(), weights):
            assert domain_weight is PriorityWeight(pinned), (
                environment, pinned)
            checked += 1
    assert checked == 15
    _report("environment-matrix", "15/15 cells match the pinned table")


def test_catalog_shape_and_counts():
    catalog = catalog_load()
    assert len(catalog.domains) == 3
    leaf_counts = [
        sum(1 for threat in catalog.threats if threat.domain.value == domain.id)
        for domain in catalog.domains]
    assert leaf_counts == [3, 7, 6]
    assert len(catalog.mitigations) == 5
    assert len(catalog.owasp_mobile) == 10
    assert len(catalog.tools) == 15
    _report("catalog-shape",
            "3 domains, 3/7/6 leaves, 5 mitigations, 10 OWASP, 15 tool rows")


def test_case_study_matrix_and_pepper_ports():
    def norm(text):
        return " ".join(text.split())

    projects = fixture_projects()
    matrix = comparative_matrix(projects)
    assert matrix.header[1:] == (
        "Vision 60 (Ghost Robotics)", "Unitree A1 (Unitree Robotics)",
        "UR3 (Universal Robots)", "Pepper (Aldebaran Robotics)")

    pinned_rows = {
        "Sistema operativo y middleware": [
            "Ubuntu 18.04 + ROS 2 Dashing", "Ubuntu 16.04 + ROS Kinetic",
            "Ubuntu 18.04 + ROS Noetic", "Linux + Naoqi 2.5.10.7"],
        "Interfaces expuestas": [
            "SSH, HTTP sin TLS, ROS DDS, Wi-Fi abierto, Ethernet",
            "HTTP sin autenticación, UDP binario, Wi-Fi sin cifrado",
            "SSH, HTTP, API por sockets TCP (URScript), puerto 30002 "
            "expuesto",
            "SSH, HTTP sin cifrar y API en puerto 9559 sin autenticación"],
        "Nivel de cifrado": [
            "Inexistente en consola web y ROS 2 DDS",
            "Inexistente en comandos UDP y app móvil",
            "Sin cifrado en canal controlador-gripper, tráfico no "
            "autenticado",
            "Inexistente"],
    }
    rows_by_label = {row.label: row for row in matrix.rows}
    cells_checked = 0
    for label, pinned in pinned_rows.items():
        produced = [norm(cell) for cell in rows_by_label[label].cells]
        assert produced == [norm(cell) for cell in pinned], label
        cells_checked += len(pinned)
    assert cells_checked == 12

    pepper = projects[3]
    open_ports = [
        item for item in pepper.surface
        if item.kind is SurfaceKind.NETWORK_PORT]
    assert len(open_ports) == 13
    _report("case-studies",
            "12/12 matrix cells match, Pepper holds 13 open-port items")


def test_authorization_and_phase_gates_hold_under_random_ops():
    sequences = 10_000
    for seed in range(sequences):
        run_adversarial_sequence(random.Random(seed))
    _report("workflow-gate",
            f"{sequences} adversarial sequences, invariants held")


def test_persistence_round_trip_identity():
    projects = 1_000
    for seed in range(projects):
        built = build_random_project(random.Random(seed))
        blob = export_project(built)
        restored = import_project(blob)
        validate_project(restored)
        assert export_project(restored) == blob, f"seed {seed}"
    _report("round-trip",
            f"{projects} generated projects re-export byte-equal")


_FUZZ_NOISE = [
    b"<", b">", b"&", b'"', b"'", b"\x00", b"\xff\xfe", b"]]>",
    b"<!DOCTYPE nmaprun>", b"<?xml version='1.0'?>", b"<port>",
    b"</host>", b"<state state='open'/>", b"portid=\"999999999999\"",
    "ñandú".encode("utf-8"), b"<host><ports>", b"protocol=\"tcp\"",
    b"\n\n\n", b"<nmaprun>", b"&#x41;&bogus;",
]


def _mutate(rng, seed_bytes):
    data = bytearray(seed_bytes)
    for _ in range(rng.randint(1, 6)):
        if not data:
            data.extend(b"<x/>")
        choice = rng.randrange(6)
        position = rng.randrange(len(data))
        if choice == 0:
            data[position] = rng.randrange(256)
        elif choice == 1:
            del data[position:position + rng.randint(1, 24)]
        elif choice == 2:
            chunk = data[position:position + rng.randint(1, 24)]
            data[position:position] = chunk
        elif choice == 3:
            data[position:position] = rng.choice(_FUZZ_NOISE)
        elif choice == 4:
            del data[position:]
        else:
            other = rng.randrange(len(data))
            data[position], data[other] = data[other], data[position]
    return bytes(data)


def test_port_scan_parser_survives_fuzzing():
    two_port = (
        b'<nmaprun scanner="nmap"><host>'
        b'<address addr="192.168.1.10" addrtype="ipv4"/><ports>'
        b'<port protocol="tcp" portid="22"><state state="open"/>'
        b'<service name="ssh" version="7.2p2"/></port>'
        b'<port protocol="tcp" portid="80"><state state="open"/>'
        b"<service name='http'/></port></ports></host></nmaprun>")
    seeds = [
        two_port,
        b"",
        b"<nmaprun/>",
        b"<nmaprun><host/></nmaprun>",
        b"<!DOCTYPE nmaprun>\n" + two_port,
        bundled_port_scan(),
    ]
    rng = random.Random(0xF022)
    inputs = 100_000
    start = time.perf_counter()
    for index in range(inputs):
        seed_bytes = seeds[rng.randrange(len(seeds) - 1)
                           if rng.random() < 0.95 else len(seeds) - 1]
        mutated = _mutate(rng, seed_bytes)
        if rng.random() < 0.1:
            payload = mutated.decode("utf-8", "replace")
        else:
            payload = mutated
        try:
            result = parse_port_scan(payload)
            assert isinstance(result, (list, tuple))
        except RobAuditError as error:
            assert isinstance(error.code, str) and error.code
        except Exception as error:  # noqa: BLE001 - the point of the test
            raise AssertionError(
                f"input {index} crashed the parser: {error!r} "
                f"on {mutated[:120]!r}") from error
    elapsed = time.perf_counter() - start
    _report("parser-fuzz",
            f"{inputs} mutated inputs, zero crashes, {elapsed:.1f}s")
