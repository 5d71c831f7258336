/**
 * State machine behind the writing-phase form.
 *
 * The form walks four steps: outcome, feasibility, chain entry, and a
 * final sanity confirmation. Chain entry is only reachable after a
 * CanWrite answer; picking any other feasibility hides the step and
 * clears whatever was typed there, so the submission a non-CanWrite
 * answer builds can never smuggle chain fields. Submission stays
 * disabled until the draft passes the structural mirror checks, which
 * is what makes the fuzz invariant hold: no sequence of UI actions can
 * produce a body the service rejects as malformed.
 */

import { MISSING_ACTION_NOTICE } from "./labels";
import type { Phase1SubmissionBody, Phase1TaskView } from "./types";
import {
  ArgumentContext,
  ValidationResult,
  parseConnector,
  validatePhase1,
} from "./validation";

export type Phase1Step = "outcome" | "feasibility" | "chain" | "confirm";

export type ConnectorSlot = "ai" | "io";

interface Draft {
  outcomeText: string;
  feasibility: string | null;
  implicitText: string;
  connectorAi: string | null;
  connectorIo: string | null;
  sanityConfirmed: boolean;
}

export class Phase1Form {
  readonly view: Phase1TaskView;
  private draft: Draft = {
    outcomeText: "",
    feasibility: null,
    implicitText: "",
    connectorAi: null,
    connectorIo: null,
    sanityConfirmed: false,
  };

  constructor(view: Phase1TaskView) {
    this.view = view;
  }

  /** Non-null when the task cannot be annotated at all; the page shows
   * this notice instead of the form. */
  get blockingError(): string | null {
    const action = this.view.action_text;
    if (action === null || action === undefined || action.trim() === "") {
      return MISSING_ACTION_NOTICE;
    }
    return null;
  }

  get hasForm(): boolean {
    return this.blockingError === null;
  }

  get actionNeedsReview(): boolean {
    return this.view.action_needs_review;
  }

  private context(): ArgumentContext {
    return {
      stanceText: this.view.stance_text,
      supportingStatement: this.view.supporting_statement,
    };
  }

  private requireForm(): void {
    if (!this.hasForm) throw new Error(this.blockingError as string);
  }

  private requireChainStep(): void {
    this.requireForm();
    if (this.draft.feasibility !== "CanWrite") {
      throw new Error("chain entry is only reachable after a CanWrite answer");
    }
  }

  typeOutcome(text: string): void {
    this.requireForm();
    this.draft.outcomeText = text;
  }

  chooseFeasibility(option: string): void {
    this.requireForm();
    if (!this.view.feasibility_options.includes(option)) {
      throw new Error(`unknown feasibility option ${JSON.stringify(option)}`);
    }
    this.draft.feasibility = option;
    if (option !== "CanWrite") {
      this.draft.implicitText = "";
      this.draft.connectorAi = null;
      this.draft.connectorIo = null;
      this.draft.sanityConfirmed = false;
    }
  }

  typeHiddenReasoning(text: string): void {
    this.requireChainStep();
    this.draft.implicitText = text;
  }

  pickConnector(slot: ConnectorSlot, option: string): void {
    this.requireChainStep();
    const parsed = parseConnector(option);
    if (parsed === null) {
      throw new Error(`unknown connector ${JSON.stringify(option)}`);
    }
    if (slot === "ai") this.draft.connectorAi = parsed;
    else this.draft.connectorIo = parsed;
  }

  confirmSanity(confirmed: boolean): void {
    this.requireChainStep();
    this.draft.sanityConfirmed = confirmed;
  }

  /** The steps the page renders for the current draft. Chain entry and
   * the confirmation only exist on the CanWrite path. */
  visibleSteps(): Phase1Step[] {
    const steps: Phase1Step[] = ["outcome", "feasibility"];
    if (this.draft.feasibility === "CanWrite") steps.push("chain", "confirm");
    return steps;
  }

  /** First step still needing input; the last visible step once the
   * draft is complete. */
  currentStep(): Phase1Step {
    if (this.draft.outcomeText.trim() === "") return "outcome";
    if (this.draft.feasibility === null) return "feasibility";
    if (this.draft.feasibility !== "CanWrite") return "feasibility";
    const chainComplete =
      this.draft.implicitText.trim() !== "" &&
      this.draft.connectorAi !== null &&
      this.draft.connectorIo !== null;
    if (!chainComplete) return "chain";
    return "confirm";
  }

  /** The chain as the grader will read it, shown before submission.
   * Null until every chain field is filled. */
  chainPreview(): string | null {
    if (!this.hasForm || this.draft.feasibility !== "CanWrite") return null;
    const { implicitText, connectorAi, connectorIo, outcomeText } = this.draft;
    if (implicitText.trim() === "" || connectorAi === null || connectorIo === null) return null;
    if (outcomeText.trim() === "") return null;
    const action = (this.view.action_text as string).trim();
    return `${action} -> ${connectorAi} -> ${implicitText.trim()} -> ${connectorIo} -> ${outcomeText.trim()}`;
  }

  private asBody(): Phase1SubmissionBody {
    const body: Phase1SubmissionBody = {
      feasibility: this.draft.feasibility ?? "",
      outcome_text: this.draft.outcomeText,
    };
    if (this.draft.feasibility === "CanWrite") {
      body.implicit_text = this.draft.implicitText;
      body.connector_ai = this.draft.connectorAi;
      body.connector_io = this.draft.connectorIo;
      body.sanity_confirmed = this.draft.sanityConfirmed;
    }
    return body;
  }

  validation(): ValidationResult {
    if (!this.hasForm) {
      return {
        ok: false,
        problems: [{ field: "task", code: "missing_action", message: MISSING_ACTION_NOTICE }],
      };
    }
    return validatePhase1(this.asBody(), this.context());
  }

  canSubmit(): boolean {
    return this.validation().ok;
  }

  /** The wire body for a submittable draft. Chain fields are omitted
   * entirely on the non-CanWrite paths. */
  buildSubmission(workerId?: string, clientToken?: string): Phase1SubmissionBody {
    const result = this.validation();
    if (!result.ok) {
      const codes = result.problems.map((p) => `${p.field}:${p.code}`).join(", ");
      throw new Error(`draft is not submittable (${codes})`);
    }
    const body = this.asBody();
    if (workerId !== undefined) body.worker_id = workerId;
    if (clientToken !== undefined) body.client_token = clientToken;
    return body;
  }
}
