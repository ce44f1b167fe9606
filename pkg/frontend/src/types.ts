/** Wire types for the audit service's JSON API (`/api/v1`). */

export type Phase =
  | "recon"
  | "vuln-analysis"
  | "exploitation"
  | "mitigation"
  | "report";

export const PHASES: readonly Phase[] = [
  "recon",
  "vuln-analysis",
  "exploitation",
  "mitigation",
  "report",
];

export const PHASE_LABELS: Record<Phase, string> = {
  recon: "Reconnaissance",
  "vuln-analysis": "Vulnerability analysis",
  exploitation: "Controlled exploitation",
  mitigation: "Mitigation",
  report: "Report",
};

export type FindingStatus = "open" | "confirmed" | "mitigated" | "accepted";

export interface PhaseEvent {
  phase: Phase;
  entered_at: string;
  by: string;
  action: string;
  note: string;
}

export interface PhaseState {
  current: Phase;
  history: PhaseEvent[];
  revisit_flags: Phase[];
}

export interface Asset {
  id: string;
  category: string;
  attributes: Record<string, string>;
  created_at: string;
}

export interface SurfaceItem {
  id: string;
  asset_id: string;
  layer: number;
  kind: string;
  locator: string;
  auth: string;
  encrypted: string;
  attributes: Record<string, string>;
  created_at: string;
}

export interface Exploitation {
  authorization_id: string;
  executed_at: string;
  technique: string;
  observed_impact: string;
  environment_note: string;
}

export interface Finding {
  id: string;
  phase_recorded: Phase;
  surface_item_id: string;
  threat_slug: string;
  title: string;
  description: string;
  vector: string | null;
  score: number | null;
  status: FindingStatus;
  exploitation: Exploitation | null;
  linked_findings: string[];
  mitigation_notes: string[];
  created_at: string;
}

export interface RankedFinding extends Finding {
  rank: number;
  domain: string;
  weight: number;
  weight_label: string;
  layer: number;
  severity: string | null;
}

export interface Project {
  id: string;
  name: string;
  platform: string;
  environment: string;
  phase: PhaseState;
  assets: Asset[];
  surface: SurfaceItem[];
  findings: Finding[];
  revision: number;
  created_at: string;
  updated_at: string;
}

export interface ProjectDocument {
  schema_version: string;
  catalog_version: string;
  project: Project;
}

export interface ProjectSummary {
  id: string;
  name: string;
  platform: string;
  environment: string;
  phase: Phase;
  revision: number;
  findings: number;
}

export interface SurfaceResponse {
  surface: SurfaceItem[];
  revision: number;
}

export interface RankedResponse {
  findings: RankedFinding[];
  ranked: boolean;
  revision: number;
}

export interface ScoreResponse {
  score: number;
  severity: string;
  vector: string;
}

export interface CatalogThreat {
  slug: string;
  domain: string;
  display_name: string;
  display_name_es: string;
  description: string;
  top5: string | null;
}

export interface CatalogDomain {
  id: string;
  display_name: string;
  display_name_es: string;
}

export interface CatalogMitigation {
  top5: string;
  strategies: string[];
  strategies_es: string[];
}

export interface Catalog {
  version: string;
  domains: CatalogDomain[];
  threats: CatalogThreat[];
  mitigations: CatalogMitigation[];
  owasp_mobile: { code: string; title: string; title_es: string }[];
  tools: {
    context: string;
    context_key: string;
    label: string;
    label_es: string;
    tools: string[];
  }[];
}

export interface EnvironmentEntry {
  environment: string;
  label: string;
  label_es: string;
  weights: Record<string, number>;
}

export interface ApiErrorBody {
  status: number;
  code: string;
  detail: string;
}

/** The eight base metrics of a CVSS v3.1 vector, in canonical order. */
export type MetricKey =
  | "AV"
  | "AC"
  | "PR"
  | "UI"
  | "S"
  | "C"
  | "I"
  | "A";

export const METRIC_ORDER: readonly MetricKey[] = [
  "AV",
  "AC",
  "PR",
  "UI",
  "S",
  "C",
  "I",
  "A",
];

export const METRIC_CHOICES: Record<
  MetricKey,
  { label: string; values: { value: string; label: string }[] }
> = {
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

/** Partial metric selection while the auditor is still filling the form. */
export type MetricSelection = Partial<Record<MetricKey, string>>;
