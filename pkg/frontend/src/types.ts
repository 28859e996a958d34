// Payload shapes of the /v1 API.

export interface Category {
  id: string;
  subcategories: string[];
}

export interface Requirement {
  id: string;
  action: string;
  object: string;
  target: string;
  text: string;
  categories: string[];
  refs: Record<string, string[]>;
}

export interface Taxonomy {
  version: string;
  categories: Category[];
  requirements: Requirement[];
}

export interface Issue {
  project: string;
  issue_id: string;
  title: string;
  description: string;
  issue_type: string;
  status: string;
  components: string[];
  created: string;
  resolved: string | null;
  contributors: number;
  comments: number;
}

export interface AssignmentEntry {
  issue_id: string;
  title: string;
  issue_type: string;
  version: number;
  labels: string[];
  submitted: boolean;
}

export interface Assignment {
  coder: string;
  issues: AssignmentEntry[];
}

export interface SessionStatus {
  id: string;
  state: "open" | "adjudicating" | "finalized";
  coders: string[];
  corpus_ref: string;
  taxonomy_version: string;
  issues: number;
  pending: string[];
  disagreements: number;
  finalized_issues: number;
}

export interface LabelRecord {
  issue_id: string;
  coder: string;
  labels: string[];
  version: number;
  submitted_at: string;
}

export interface CoderLabels {
  coder: string;
  labels: string[];
}

export interface Disagreement {
  issue_id: string;
  masi: number;
  label_sets: CoderLabels[];
}

export interface DisagreementsPayload {
  pending: string[];
  disagreements: Disagreement[];
}

export interface FinalLabel {
  issue_id: string;
  labels: string[];
  resolution: "unanimous" | "combined" | "reclassified";
  adjudicators: string[];
  note: string;
}

export interface IrrResult {
  statistic: string;
  distance: string;
  pair: string[];
  value: number;
  n_units: number;
  n_skipped: number;
  degenerate: boolean;
}

export interface AgreementPayload {
  session: string;
  total_agreement: number;
}

export interface CoveragePayload {
  session: string;
  n_issues: number;
  percentages: Record<string, number>;
  counts: Record<string, number>;
}
