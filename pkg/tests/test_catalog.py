"""Embedded threat taxonomy, mitigation map, checklists and tool tables."""

import json

import pytest

from robaudit.catalog import (
    CATALOG_VERSION,
    Catalog,
    ThreatDomain,
    ToolContext,
    Top5Threat,
    TOP5_DISPLAY,
    catalog_load,
    domain_of,
    dump_json,
    dump_markdown,
    mitigations_for,
    threat_lookup,
    tools_for,
)
from robaudit.errors import CatalogIntegrityError, NotFoundError


class TestShape:
    def test_counts(self):
        catalog = catalog_load()
        assert len(catalog.domains) == 3
        assert len(catalog.threats) == 16
        assert len(catalog.mitigations) == 5
        assert len(catalog.owasp_mobile) == 10
        assert len(catalog.tools) == 15

    def test_leaves_per_domain(self):
        catalog = catalog_load()
        by_domain = {
            domain: [t.slug for t in catalog.threats if t.domain is domain]
            for domain in ThreatDomain
        }
        assert len(by_domain[ThreatDomain.HARDWARE]) == 3
        assert len(by_domain[ThreatDomain.SOFTWARE_FIRMWARE]) == 7
        assert len(by_domain[ThreatDomain.COMMUNICATIONS]) == 6

    def test_owasp_codes_ordered(self):
        codes = [o.code for o in catalog_load().owasp_mobile]
        assert codes == [f"M{i}" for i in range(1, 11)]

    def test_tool_rows_per_context(self):
        catalog = catalog_load()
        per_context = {
            context: [r for r in catalog.tools if r.context is context]
            for context in ToolContext
        }
        assert len(per_context[ToolContext.RECON_TASK]) == 6
        assert len(per_context[ToolContext.VULN_AREA]) == 4
        assert len(per_context[ToolContext.EXPLOIT_OBJECTIVE]) == 5

    def test_load_is_cached_and_validated(self):
        assert catalog_load() is catalog_load()
        assert catalog_load().version == CATALOG_VERSION


class TestLookups:
    def test_threat_lookup(self):
        threat = threat_lookup("mitm")
        assert threat.domain is ThreatDomain.COMMUNICATIONS
        assert threat.top5 is Top5Threat.MITM

    def test_threat_lookup_unknown(self):
        with pytest.raises(NotFoundError):
            threat_lookup("quantum-entanglement")

    @pytest.mark.parametrize("slug,domain", [
        ("physical-manipulation", ThreatDomain.HARDWARE),
        ("buffer-overflow", ThreatDomain.SOFTWARE_FIRMWARE),
        ("jamming", ThreatDomain.COMMUNICATIONS),
    ])
    def test_domain_of(self, slug, domain):
        assert domain_of(slug) is domain

    def test_every_top5_bucket_reachable(self):
        covered = {t.top5 for t in catalog_load().threats if t.top5}
        assert covered == set(Top5Threat)

    def test_mitigations_bilingual(self):
        for bucket in Top5Threat:
            english = mitigations_for(bucket)
            spanish = mitigations_for(bucket, language="es")
            assert english and spanish
            assert len(english) == len(spanish)

    def test_top5_display_covers_all_buckets(self):
        assert set(TOP5_DISPLAY) == set(Top5Threat)
        for english, spanish in TOP5_DISPLAY.values():
            assert english and spanish

    def test_tools_for_known_rows(self):
        assert "nmap" in tools_for(ToolContext.RECON_TASK, "exposed-services")
        assert "Hydra" in tools_for(ToolContext.EXPLOIT_OBJECTIVE,
                                    "unauthorized-access")
        assert "Wireshark" in tools_for(ToolContext.VULN_AREA,
                                        "network-communications")

    def test_tools_for_unknown_row(self):
        with pytest.raises(NotFoundError):
            tools_for(ToolContext.RECON_TASK, "orbital-imagery")


class TestSerialization:
    def test_dump_json_deterministic(self):
        first = dump_json(catalog_load())
        second = dump_json(catalog_load())
        assert first == second
        assert first.endswith(b"\n")

    def test_dump_json_preserves_accents(self):
        document = json.loads(dump_json(catalog_load()))
        spanish = [m["strategies_es"] for m in document["mitigations"]]
        joined = " ".join(s for block in spanish for s in block)
        assert "ó" in joined or "í" in joined or "ñ" in joined
        assert "\\u" not in dump_json(catalog_load()).decode("utf-8")

    def test_dump_markdown_sections(self):
        text = dump_markdown(catalog_load())
        assert "## Top-5 defense strategies" in text
        assert "## OWASP mobile checklist categories" in text
        assert "## Recommended tools" in text
        for domain in catalog_load().domains:
            assert domain.display_name in text


class TestIntegrityGuards:
    def _mutated(self, **overrides):
        base = catalog_load()
        fields = dict(
            version=base.version, domains=base.domains, threats=base.threats,
            mitigations=base.mitigations, owasp_mobile=base.owasp_mobile,
            tools=base.tools)
        fields.update(overrides)
        return Catalog(**fields)

    def test_missing_leaf_detected(self):
        from robaudit.catalog import _validate
        broken = self._mutated(threats=catalog_load().threats[1:])
        with pytest.raises(CatalogIntegrityError):
            _validate(broken)

    def test_unordered_owasp_detected(self):
        from robaudit.catalog import _validate
        reordered = tuple(reversed(catalog_load().owasp_mobile))
        with pytest.raises(CatalogIntegrityError):
            _validate(self._mutated(owasp_mobile=reordered))

    def test_missing_mitigation_detected(self):
        from robaudit.catalog import _validate
        with pytest.raises(CatalogIntegrityError):
            _validate(self._mutated(mitigations=catalog_load().mitigations[:4]))

    def test_empty_tool_row_detected(self):
        from robaudit.catalog import _validate
        rows = list(catalog_load().tools)
        rows[0] = type(rows[0])(rows[0].context, rows[0].context_key,
                                rows[0].label, rows[0].label_es, ())
        with pytest.raises(CatalogIntegrityError):
            _validate(self._mutated(tools=tuple(rows)))
