/**
 * Grading-phase widgets: the yes/no outcome check and the 1-5 chain
 * rating. Both are closed-choice, so the only client-side rule is
 * membership in the options the task view itself advertises; the
 * rubric and chain preview render verbatim from the payload.
 */

import type {
  ScoreSubmissionBody,
  ScoreTaskView,
  ValiditySubmissionBody,
  ValidityTaskView,
} from "./types";

export class ValidityForm {
  readonly view: ValidityTaskView;
  private answer: string | null = null;

  constructor(view: ValidityTaskView) {
    this.view = view;
  }

  get question(): string {
    return this.view.question;
  }

  options(): string[] {
    return [...this.view.options];
  }

  choose(option: string): void {
    if (!this.view.options.includes(option)) {
      throw new Error(`unknown answer ${JSON.stringify(option)}`);
    }
    this.answer = option;
  }

  get selected(): string | null {
    return this.answer;
  }

  canSubmit(): boolean {
    return this.answer !== null;
  }

  buildSubmission(workerId?: string, clientToken?: string): ValiditySubmissionBody {
    if (this.answer === null) throw new Error("no answer selected");
    const body: ValiditySubmissionBody = { outcome_valid: this.answer };
    if (workerId !== undefined) body.worker_id = workerId;
    if (clientToken !== undefined) body.client_token = clientToken;
    return body;
  }
}

export interface RubricRow {
  score: number;
  text: string;
}

export class ScoreForm {
  readonly view: ScoreTaskView;
  private score: number | null = null;

  constructor(view: ScoreTaskView) {
    this.view = view;
  }

  /** The chain exactly as the service previews it. */
  preview(): string {
    return this.view.preview;
  }

  options(): number[] {
    return [...this.view.score_options];
  }

  /** Rubric rows in score order, text verbatim from the payload. */
  rubricRows(): RubricRow[] {
    return this.view.score_options.map((score) => ({
      score,
      text: this.view.rubric[String(score)] ?? "",
    }));
  }

  choose(score: number): void {
    if (!this.view.score_options.includes(score)) {
      throw new Error(`score must be one of ${this.view.score_options.join(", ")}`);
    }
    this.score = score;
  }

  get selected(): number | null {
    return this.score;
  }

  canSubmit(): boolean {
    return this.score !== null;
  }

  buildSubmission(workerId?: string, clientToken?: string): ScoreSubmissionBody {
    if (this.score === null) throw new Error("no score selected");
    const body: ScoreSubmissionBody = { score: this.score };
    if (workerId !== undefined) body.worker_id = workerId;
    if (clientToken !== undefined) body.client_token = clientToken;
    return body;
  }
}
