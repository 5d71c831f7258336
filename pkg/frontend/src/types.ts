/**
 * Wire formats exchanged with the annotation service.
 *
 * These mirror the JSON the HTTP API serves and accepts; the committed
 * samples under fixtures/ are captured from a live instance and the
 * backend's contract test regenerates them, so a shape change on either
 * side fails loudly instead of drifting.
 */

export type Feasibility = "CanWrite" | "CannotWrite" | "Unsure";
export type Connector = "cause" | "suppress";

/** Task view for the writing phase. `action_text` is filled by the
 * operator pipeline before the task opens; a view without it cannot be
 * annotated and renders as an error, not a form. */
export interface Phase1TaskView {
  task_id: string;
  kind: "phase1";
  topic: string;
  stance_text: string;
  supporting_statement: string;
  action_text: string | null;
  action_needs_review: boolean;
  feasibility_options: string[];
  connector_options: string[];
  outcome_required: boolean;
}

export interface ValidityTaskView {
  task_id: string;
  kind: "validity";
  topic: string;
  supporting_statement: string;
  outcome_text: string;
  question: string;
  options: string[];
}

export interface ScoreChainView {
  action: string;
  connector_1: string;
  hidden_reasoning: string;
  connector_2: string;
  outcome: string;
}

export interface ScoreTaskView {
  task_id: string;
  kind: "score";
  topic: string;
  stance_text: string;
  supporting_statement: string;
  chain: ScoreChainView;
  preview: string;
  rubric: Record<string, string>;
  score_options: number[];
}

export type TaskView = Phase1TaskView | ValidityTaskView | ScoreTaskView;

export interface Phase1SubmissionBody {
  worker_id?: string;
  outcome_text: string;
  feasibility: string;
  implicit_text?: string | null;
  connector_ai?: string | null;
  connector_io?: string | null;
  sanity_confirmed?: boolean;
  client_token?: string;
}

export interface ValiditySubmissionBody {
  worker_id?: string;
  outcome_valid: boolean | string;
  client_token?: string;
}

export interface ScoreSubmissionBody {
  worker_id?: string;
  score: number;
  client_token?: string;
}

export interface SubmissionReceipt {
  status: "accepted";
  task_id: string;
  chain_id: string | null;
  task_state: string;
}

/** Error envelope for every non-2xx the service emits itself. Request
 * model failures (malformed JSON types) come back in FastAPI's default
 * `detail` shape instead and carry no `error` code. */
export interface ApiErrorBody {
  error: string;
  detail?: unknown;
}

export interface WorkerRegistration {
  id: string;
  acceptance_rate: number;
  approved_tasks: number;
  quiz_score?: number | null;
}

export interface WorkerRecord {
  id: string;
  phases_allowed: string[];
  [key: string]: unknown;
}

export type FunnelRow = [string, number];

export interface AgreementEntry {
  alpha: number | null;
  n_items: number;
  n_raters: number;
  n_pairable: number;
}

/** Bundle the dashboard renders, one snapshot per fetch. */
export interface DashboardPayload {
  snapshot_id: string;
  funnel: { rows: FunnelRow[] };
  stats: {
    collected: Record<string, number>;
    kept: Record<string, number>;
  };
  coverage: {
    collected: Record<string, number>;
    kept: Record<string, number>;
  };
  agreement: {
    validity: AgreementEntry;
    scores: AgreementEntry;
  };
}
