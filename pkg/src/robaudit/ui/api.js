/** Thin fetch wrapper around the audit service.
 *
 * Every method returns the server payload untouched: scores, severity
 * buckets and rank orders are rendered exactly as received, never
 * recomputed here.
 */
export class ApiRequestError extends Error {
    constructor(body) {
        super(`${body.code}: ${body.detail}`);
        this.name = "ApiRequestError";
        this.status = body.status;
        this.code = body.code;
        this.detail = body.detail;
    }
}
export class ApiClient {
    constructor(base = "/api/v1", fetchImpl = (...args) => fetch(...args)) {
        this.base = base.replace(/\/$/, "");
        this.fetchImpl = fetchImpl;
    }
    async request(method, path, body) {
        const init = { method, headers: {} };
        if (body !== undefined) {
            init.headers = { "content-type": "application/json" };
            init.body = JSON.stringify(body);
        }
        const response = await this.fetchImpl(`${this.base}${path}`, init);
        const payload = await response.json();
        if (!response.ok) {
            throw new ApiRequestError(payload);
        }
        return payload;
    }
    listProjects() {
        return this.request("GET", "/projects");
    }
    getProject(projectId) {
        return this.request("GET", `/projects/${projectId}`);
    }
    createProject(body) {
        return this.request("POST", "/projects", body);
    }
    getSurface(projectId) {
        return this.request("GET", `/projects/${projectId}/surface`);
    }
    getRankedFindings(projectId) {
        return this.request("GET", `/projects/${projectId}/findings?ranked=true`);
    }
    getCatalog() {
        return this.request("GET", "/catalog");
    }
    getEnvironments() {
        return this.request("GET", "/environments");
    }
    score(vector) {
        return this.request("POST", "/score", { vector });
    }
    advancePhase(projectId, revision, auditor = "") {
        return this.request("POST", `/projects/${projectId}/phase:advance`, {
            revision,
            auditor,
        });
    }
    revisitPhase(projectId, revision, target, reason = "") {
        return this.request("POST", `/projects/${projectId}/phase:revisit`, {
            revision,
            target,
            reason,
        });
    }
    addFinding(projectId, revision, body) {
        return this.request("POST", `/projects/${projectId}/findings`, {
            revision,
            ...body,
        });
    }
}
