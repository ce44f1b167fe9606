/** Pure view functions: data in, HTML string out.
 *
 * Nothing here computes scores, buckets or orderings — every number and
 * label is printed exactly as the server sent it, so the whole module
 * can be tested by string comparison against recorded API payloads.
 */
import { METRIC_CHOICES, METRIC_ORDER, PHASE_LABELS, PHASES, } from "./types.js";
export function escapeHtml(text) {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;")
        .replace(/'/g, "&#39;");
}
/** One-decimal display for server scores; unscored findings show a dash. */
export function formatScore(score) {
    return score === null ? "—" : score.toFixed(1);
}
/** CSS class for the severity colour scale; derived from the label only. */
export function severityClass(severity) {
    return severity === null
        ? "severity-unscored"
        : `severity-${severity.toLowerCase()}`;
}
/** Assemble the vector text for a complete selection; null otherwise. */
export function buildVector(selection) {
    const parts = [];
    for (const key of METRIC_ORDER) {
        const value = selection[key];
        if (!value) {
            return null;
        }
        parts.push(`${key}:${value}`);
    }
    return `CVSS:3.1/${parts.join("/")}`;
}
// --- phase board ------------------------------------------------------------
export function renderPhaseBoard(phase) {
    const currentIndex = PHASES.indexOf(phase.current);
    const steps = PHASES.map((name, index) => {
        const classes = ["phase-step"];
        if (name === phase.current) {
            classes.push("current");
        }
        else if (index < currentIndex) {
            classes.push("done");
        }
        if (phase.revisit_flags.includes(name)) {
            classes.push("revisit-flagged");
        }
        return (`<li class="${classes.join(" ")}" data-phase="${name}">` +
            `<span class="phase-index">${index + 1}</span>` +
            `<span class="phase-name">${escapeHtml(PHASE_LABELS[name])}</span>` +
            `</li>`);
    });
    const last = phase.history[phase.history.length - 1];
    const lastLine = last
        ? `<p class="phase-last">Last change: ${escapeHtml(last.action)} → ` +
            `${escapeHtml(PHASE_LABELS[last.phase])}` +
            `${last.by ? ` by ${escapeHtml(last.by)}` : ""}</p>`
        : "";
    return (`<section class="phase-board" aria-label="Audit phases">` +
        `<ol class="phase-steps">${steps.join("")}</ol>${lastLine}</section>`);
}
// --- surface explorer -------------------------------------------------------
const LAYER_LABELS = {
    1: "External interfaces",
    2: "Control software and middleware",
    3: "Operating system",
    4: "Firmware / BIOS",
    5: "Physical hardware",
};
function renderSurfaceItem(item, findingCount) {
    const chips = [
        `<span class="chip kind">${escapeHtml(item.kind)}</span>`,
        `<span class="chip auth">auth: ${escapeHtml(item.auth)}</span>`,
        `<span class="chip encrypted">encrypted: ${escapeHtml(item.encrypted)}</span>`,
    ];
    if (findingCount > 0) {
        chips.push(`<span class="chip findings">${findingCount} finding${findingCount === 1 ? "" : "s"}</span>`);
    }
    return (`<li class="surface-item" data-item-id="${item.id}">` +
        `<code class="locator">${escapeHtml(item.locator)}</code>` +
        `${chips.join("")}</li>`);
}
export function renderSurfaceExplorer(surface, findings) {
    const findingCounts = new Map();
    for (const finding of findings) {
        findingCounts.set(finding.surface_item_id, (findingCounts.get(finding.surface_item_id) ?? 0) + 1);
    }
    const bands = [1, 2, 3, 4, 5].map((layer) => {
        const items = surface.filter((item) => item.layer === layer);
        const body = items.length
            ? `<ul class="surface-items">${items
                .map((item) => renderSurfaceItem(item, findingCounts.get(item.id) ?? 0))
                .join("")}</ul>`
            : `<p class="empty-state">No items recorded at this layer.</p>`;
        return (`<details class="layer-band" data-layer="${layer}" open>` +
            `<summary>L${layer} — ${LAYER_LABELS[layer]} ` +
            `<span class="count">(${items.length})</span></summary>${body}` +
            `</details>`);
    });
    return `<section class="surface-explorer" aria-label="Attack surface">${bands.join("")}</section>`;
}
export function renderCvssBuilder(state) {
    const selects = METRIC_ORDER.map((key) => {
        const choice = METRIC_CHOICES[key];
        const options = [
            `<option value=""${state.selection[key] ? "" : " selected"}>—</option>`,
            ...choice.values.map((option) => `<option value="${option.value}"${state.selection[key] === option.value ? " selected" : ""}>${option.label} (${option.value})</option>`),
        ];
        return (`<label class="metric" data-metric="${key}">` +
            `<span>${choice.label}</span>` +
            `<select name="${key}" data-role="cvss-metric">${options.join("")}</select></label>`);
    });
    const vector = buildVector(state.selection);
    const preview = vector
        ? `<code class="vector-preview" data-role="vector">${vector}</code>`
        : `<span class="vector-preview incomplete" data-role="vector">` +
            `select all eight metrics</span>`;
    const submit = `<button type="button" data-action="score"${vector ? "" : " disabled"}>Score on server</button>`;
    let result = "";
    if (state.error) {
        result =
            `<p class="score-error" role="alert">${escapeHtml(state.error)}</p>`;
    }
    else if (state.result) {
        result =
            `<p class="score-result ${severityClass(state.result.severity)}">` +
                `<span class="score-value">${formatScore(state.result.score)}</span> ` +
                `<span class="score-severity">${escapeHtml(state.result.severity)}</span></p>`;
    }
    return (`<fieldset class="cvss-builder"><legend>CVSS v3.1 base vector</legend>` +
        `${selects.join("")}${preview}${submit}${result}</fieldset>`);
}
export function renderFindingForm(catalog, surface, state) {
    const groups = catalog.domains.map((domain) => {
        const options = catalog.threats
            .filter((threat) => threat.domain === domain.id)
            .map((threat) => `<option value="${threat.slug}"${state.threatSlug === threat.slug ? " selected" : ""}>${escapeHtml(threat.display_name)}</option>`);
        return `<optgroup label="${escapeHtml(domain.display_name)}">${options.join("")}</optgroup>`;
    });
    const surfaceOptions = surface.map((item) => `<option value="${item.id}"${state.surfaceItemId === item.id ? " selected" : ""}>L${item.layer} ${escapeHtml(item.locator)}</option>`);
    return (`<form class="finding-form" data-role="finding-form">` +
        `<label>Title<input name="title" value="${escapeHtml(state.title)}" required></label>` +
        `<label>Threat category<select name="threat_slug" data-role="threat">` +
        `<option value=""${state.threatSlug ? "" : " selected"}>—</option>` +
        `${groups.join("")}</select></label>` +
        `<label>Surface item<select name="surface_item_id" data-role="surface">` +
        `<option value=""${state.surfaceItemId ? "" : " selected"}>—</option>` +
        `${surfaceOptions.join("")}</select></label>` +
        `${renderCvssBuilder(state.builder)}` +
        `<button type="submit" data-action="add-finding">Record finding</button>` +
        `</form>`);
}
// --- ranked list ------------------------------------------------------------
export function renderRankedList(ranked) {
    if (ranked.findings.length === 0) {
        return (`<section class="ranked-list" aria-label="Priority ranking">` +
            `<p class="empty-state">No findings recorded yet. Rankings appear ` +
            `as soon as the first finding lands.</p></section>`);
    }
    const rows = ranked.findings.map((finding) => {
        const severity = finding.severity === null
            ? `<span class="chip severity severity-unscored">unscored</span>`
            : `<span class="chip severity ${severityClass(finding.severity)}">` +
                `${escapeHtml(finding.severity)}</span>`;
        return (`<li class="ranked-row" data-finding-id="${finding.id}">` +
            `<span class="rank">${finding.rank}</span>` +
            `<span class="title">${escapeHtml(finding.title)}</span>` +
            `<span class="score">${formatScore(finding.score)}</span>` +
            severity +
            `<span class="chip weight weight-${finding.weight}">` +
            `${escapeHtml(finding.weight_label)} · ${escapeHtml(finding.domain)}</span>` +
            `<span class="chip layer">L${finding.layer}</span>` +
            `<span class="chip status">${escapeHtml(finding.status)}</span>` +
            `</li>`);
    });
    return (`<section class="ranked-list" aria-label="Priority ranking">` +
        `<ol class="ranked-rows">${rows.join("")}</ol></section>`);
}
// --- mitigation panel -------------------------------------------------------
export function renderMitigationPanel(finding, catalog) {
    const open = `<section class="mitigation-panel" aria-label="Mitigations">`;
    if (!finding) {
        return (`${open}<p class="empty-state">Select a finding to see the ` +
            `catalog's defense strategies.</p></section>`);
    }
    const threat = catalog.threats.find((entry) => entry.slug === finding.threat_slug);
    const heading = `<h3>${escapeHtml(finding.title)}</h3>` +
        `<p class="threat-name">${escapeHtml(threat?.display_name ?? finding.threat_slug)}</p>`;
    const mitigation = threat?.top5
        ? catalog.mitigations.find((entry) => entry.top5 === threat.top5)
        : undefined;
    if (!mitigation) {
        return (`${open}${heading}<p class="empty-state">No top-5 defense entry ` +
            `for this category; follow the engagement's own notes.</p></section>`);
    }
    const strategies = mitigation.strategies
        .map((strategy, index) => `<li>${escapeHtml(strategy)}` +
        `<span class="strategy-es">${escapeHtml(mitigation.strategies_es[index] ?? "")}</span></li>`)
        .join("");
    return `${open}${heading}<ul class="strategies">${strategies}</ul></section>`;
}
// --- banners and pickers ----------------------------------------------------
export function renderConflictBanner(error) {
    return (`<div class="banner conflict" role="alert">` +
        `<strong>Project changed on the server.</strong> ` +
        `<span class="detail">${escapeHtml(error.detail)}</span> ` +
        `<button type="button" data-action="reload">Reload</button></div>`);
}
export function renderErrorBanner(detail) {
    return (`<div class="banner error" role="alert">` +
        `<span class="detail">${escapeHtml(detail)}</span> ` +
        `<button type="button" data-action="retry">Retry</button></div>`);
}
export function renderProjectPicker(projects, selectedId) {
    const options = projects.map((project) => `<option value="${project.id}"${project.id === selectedId ? " selected" : ""}>${escapeHtml(project.name)} — ${escapeHtml(project.platform)}</option>`);
    return (`<select data-role="project-picker" aria-label="Project">` +
        `<option value=""${selectedId ? "" : " selected"}>choose a project…` +
        `</option>${options.join("")}</select>`);
}
