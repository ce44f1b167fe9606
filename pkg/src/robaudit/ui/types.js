/** Wire types for the audit service's JSON API (`/api/v1`). */
export const PHASES = [
    "recon",
    "vuln-analysis",
    "exploitation",
    "mitigation",
    "report",
];
export const PHASE_LABELS = {
    recon: "Reconnaissance",
    "vuln-analysis": "Vulnerability analysis",
    exploitation: "Controlled exploitation",
    mitigation: "Mitigation",
    report: "Report",
};
export const METRIC_ORDER = [
    "AV",
    "AC",
    "PR",
    "UI",
    "S",
    "C",
    "I",
    "A",
];
export const METRIC_CHOICES = {
    AV: {
        label: "Attack vector",
        values: [
            { value: "N", label: "Network" },
            { value: "A", label: "Adjacent" },
            { value: "L", label: "Local" },
            { value: "P", label: "Physical" },
        ],
    },
    AC: {
        label: "Attack complexity",
        values: [
            { value: "L", label: "Low" },
            { value: "H", label: "High" },
        ],
    },
    PR: {
        label: "Privileges required",
        values: [
            { value: "N", label: "None" },
            { value: "L", label: "Low" },
            { value: "H", label: "High" },
        ],
    },
    UI: {
        label: "User interaction",
        values: [
            { value: "N", label: "None" },
            { value: "R", label: "Required" },
        ],
    },
    S: {
        label: "Scope",
        values: [
            { value: "U", label: "Unchanged" },
            { value: "C", label: "Changed" },
        ],
    },
    C: {
        label: "Confidentiality",
        values: [
            { value: "H", label: "High" },
            { value: "L", label: "Low" },
            { value: "N", label: "None" },
        ],
    },
    I: {
        label: "Integrity",
        values: [
            { value: "H", label: "High" },
            { value: "L", label: "Low" },
            { value: "N", label: "None" },
        ],
    },
    A: {
        label: "Availability",
        values: [
            { value: "H", label: "High" },
            { value: "L", label: "Low" },
            { value: "N", label: "None" },
        ],
    },
};
