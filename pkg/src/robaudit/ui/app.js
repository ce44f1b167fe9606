/** Browser bootstrap: state, event wiring and refresh loops.
 *
 * All domain decisions (scores, buckets, rank order, gate rules) happen
 * on the server; this file only moves payloads between the API client
 * and the render functions.
 */
import { ApiClient, ApiRequestError } from "./api.js";
import { buildVector, renderConflictBanner, renderErrorBanner, renderFindingForm, renderMitigationPanel, renderPhaseBoard, renderProjectPicker, renderRankedList, renderSurfaceExplorer, } from "./render.js";
function freshForm() {
    return {
        title: "",
        threatSlug: "",
        surfaceItemId: "",
        builder: { selection: {}, result: null, error: null },
    };
}
export class App {
    constructor(root, api = new ApiClient()) {
        this.root = root;
        this.api = api;
        this.state = {
            projects: [],
            projectId: null,
            document: null,
            ranked: null,
            catalog: null,
            selectedFindingId: null,
            form: freshForm(),
            banner: "",
        };
    }
    async start() {
        this.root.addEventListener("click", (event) => this.onClick(event));
        this.root.addEventListener("change", (event) => this.onChange(event));
        this.root.addEventListener("submit", (event) => {
            event.preventDefault();
            void this.addFinding();
        });
        await this.guard(async () => {
            const [projects, catalog] = await Promise.all([
                this.api.listProjects(),
                this.api.getCatalog(),
            ]);
            this.state.projects = projects.projects;
            this.state.catalog = catalog;
        });
        this.paint();
    }
    /** Run an API call, translating failures into the right banner. */
    async guard(work) {
        try {
            this.state.banner = "";
            await work();
        }
        catch (error) {
            if (error instanceof ApiRequestError && error.code === "conflict") {
                const body = {
                    status: error.status,
                    code: error.code,
                    detail: error.detail,
                };
                this.state.banner = renderConflictBanner(body);
            }
            else if (error instanceof ApiRequestError) {
                this.state.banner = renderErrorBanner(error.detail);
            }
            else {
                this.state.banner = renderErrorBanner("Connection to the audit service failed.");
            }
        }
        this.paint();
    }
    async refresh() {
        const projectId = this.state.projectId;
        if (!projectId) {
            this.state.document = null;
            this.state.ranked = null;
            return;
        }
        const [document, ranked] = await Promise.all([
            this.api.getProject(projectId),
            this.api.getRankedFindings(projectId),
        ]);
        this.state.document = document;
        this.state.ranked = ranked;
    }
    onClick(event) {
        const target = event.target;
        const action = target?.dataset?.action;
        if (!action) {
            return;
        }
        if (action === "reload" || action === "retry") {
            void this.guard(() => this.refresh());
        }
        else if (action === "score") {
            void this.scoreVector();
        }
        else if (action === "advance") {
            void this.advance();
        }
        const row = target?.closest?.("[data-finding-id]");
        if (row?.dataset.findingId) {
            this.state.selectedFindingId = row.dataset.findingId;
            this.paint();
        }
    }
    onChange(event) {
        const target = event.target;
        if (!target) {
            return;
        }
        const role = target.dataset.role;
        if (role === "project-picker") {
            this.state.projectId = target.value || null;
            this.state.selectedFindingId = null;
            this.state.form = freshForm();
            void this.guard(() => this.refresh());
            return;
        }
        if (role === "cvss-metric") {
            const key = target.name;
            this.state.form.builder.selection[key] = target.value || undefined;
            this.state.form.builder.result = null;
            this.state.form.builder.error = null;
            this.paint();
            return;
        }
        if (target.name === "title") {
            this.state.form.title = target.value;
        }
        else if (role === "threat") {
            this.state.form.threatSlug = target.value;
            this.paint();
        }
        else if (role === "surface") {
            this.state.form.surfaceItemId = target.value;
        }
    }
    async scoreVector() {
        const vector = buildVector(this.state.form.builder.selection);
        if (!vector) {
            return;
        }
        const builder = this.state.form.builder;
        try {
            builder.result = await this.api.score(vector);
            builder.error = null;
        }
        catch (error) {
            builder.result = null;
            builder.error =
                error instanceof ApiRequestError
                    ? error.detail
                    : "Connection to the audit service failed.";
        }
        this.paint();
    }
    async addFinding() {
        const { projectId, document, form } = this.state;
        if (!projectId || !document) {
            return;
        }
        await this.guard(async () => {
            const vector = buildVector(form.builder.selection);
            await this.api.addFinding(projectId, document.project.revision, {
                phase_recorded: "vuln-analysis",
                surface_item_id: form.surfaceItemId,
                threat_slug: form.threatSlug,
                title: form.title,
                ...(vector ? { vector } : {}),
            });
            this.state.form = freshForm();
            await this.refresh(); // a new finding immediately re-ranks the list
        });
    }
    async advance() {
        const { projectId, document } = this.state;
        if (!projectId || !document) {
            return;
        }
        await this.guard(async () => {
            await this.api.advancePhase(projectId, document.project.revision);
            await this.refresh();
        });
    }
    paint() {
        const { document: doc, ranked, catalog } = this.state;
        const picker = renderProjectPicker(this.state.projects, this.state.projectId);
        const sections = [
            `<header class="toolbar">${picker}` +
                `<button type="button" data-action="advance"${doc ? "" : " disabled"}>Advance phase</button></header>`,
            this.state.banner,
        ];
        if (doc && ranked && catalog) {
            const selected = doc.project.findings.find((finding) => finding.id === this.state.selectedFindingId) ?? null;
            sections.push(renderPhaseBoard(doc.project.phase), `<div class="columns">` +
                renderSurfaceExplorer(doc.project.surface, doc.project.findings) +
                renderRankedList(ranked) +
                `</div>`, renderFindingForm(catalog, doc.project.surface, this.state.form), renderMitigationPanel(selected, catalog));
        }
        else {
            sections.push(`<p class="empty-state">Pick a project to start triage.</p>`);
        }
        this.root.innerHTML = sections.join("\n");
    }
}
if (typeof document !== "undefined") {
    const root = document.getElementById("app");
    if (root) {
        void new App(root).start();
    }
}
