/**
 * Client-side submission validation (instant feedback, not security).
 *
 * The service is the source of truth; these checks exist so the form
 * can refuse a structurally broken submission before the network round
 * trip. They mirror the server's structural rules exactly, and the
 * committed validation vectors in fixtures/validation_vectors.json
 * hold both sides to the same verdicts: every vector marked structural
 * was replayed against a live service, and the client must reach the
 * same accept/reject answer offline.
 *
 * Operational rejections (capacity, duplicates, qualification) are
 * deliberately not predicted here. Those depend on server state the
 * client cannot see; the form submits and renders the error.
 */

import { FEASIBILITY_OPTIONS } from "./labels";
import type { Connector, Phase1SubmissionBody } from "./types";

/** The argument fields paraphrase checks compare against. */
export interface ArgumentContext {
  stanceText: string;
  supportingStatement: string;
}

export interface Problem {
  field: string;
  code: string;
  message: string;
}

export interface ValidationResult {
  ok: boolean;
  problems: Problem[];
}

/**
 * The text equality used for paraphrase detection: trim, collapse
 * whitespace runs, strip terminal punctuation, lowercase. The server
 * casefolds where this lowercases; the two agree on ASCII, which is
 * all the corpus contains.
 */
export function normalizeText(text: string): string {
  const collapsed = text.trim().replace(/\s+/g, " ");
  return collapsed.replace(/[.!?;:,]+$/, "").toLowerCase().trim();
}

/** Accepts the connector spellings the service tolerates (surrounding
 * whitespace, any case) and returns the canonical value, or null. */
export function parseConnector(raw: string): Connector | null {
  const cleaned = raw.trim().toLowerCase();
  return cleaned === "cause" || cleaned === "suppress" ? cleaned : null;
}

function problem(field: string, code: string, message: string): Problem {
  return { field, code, message };
}

/**
 * Structural validation of a writing-phase submission body.
 *
 * A body this function accepts must never be rejected by the service
 * for structural reasons; the fuzz corpus holds that property against
 * a live instance.
 */
export function validatePhase1(
  body: Phase1SubmissionBody,
  context: ArgumentContext,
): ValidationResult {
  const problems: Problem[] = [];

  if (!(FEASIBILITY_OPTIONS as readonly string[]).includes(body.feasibility)) {
    problems.push(problem(
      "feasibility", "unknown_feasibility",
      `feasibility must be one of ${FEASIBILITY_OPTIONS.join(", ")}`,
    ));
  }
  if (!body.outcome_text || body.outcome_text.trim() === "") {
    problems.push(problem("outcome_text", "empty", "the outcome is required"));
  }

  const chainFields: Array<[string, string | null | undefined]> = [
    ["implicit_text", body.implicit_text],
    ["connector_ai", body.connector_ai],
    ["connector_io", body.connector_io],
  ];

  if (body.feasibility !== "CanWrite") {
    // Chain fields only travel with a CanWrite answer; the outcome is
    // not compared against the argument when no chain is written.
    for (const [field, value] of chainFields) {
      if (value !== undefined && value !== null) {
        problems.push(problem(
          field, "forbidden_without_canwrite",
          "chain fields are only accepted with a CanWrite answer",
        ));
      }
    }
    return { ok: problems.length === 0, problems };
  }

  if (body.implicit_text === undefined || body.implicit_text === null) {
    problems.push(problem("implicit_text", "missing", "a CanWrite answer needs the hidden reasoning"));
  } else if (body.implicit_text.trim() === "") {
    problems.push(problem("implicit_text", "empty", "the hidden reasoning is blank"));
  }
  for (const [field, value] of [
    ["connector_ai", body.connector_ai],
    ["connector_io", body.connector_io],
  ] as const) {
    if (value === undefined || value === null) {
      problems.push(problem(field, "missing", "both connectors are required"));
    } else if (parseConnector(value) === null) {
      problems.push(problem(field, "unknown_connector", `connectors are "cause" or "suppress", got ${JSON.stringify(value)}`));
    }
  }
  if (body.sanity_confirmed !== true) {
    problems.push(problem("sanity_confirmed", "unconfirmed", "confirm the chain reads sensibly before submitting"));
  }

  const normImplicit = normalizeText(body.implicit_text ?? "");
  const normOutcome = normalizeText(body.outcome_text ?? "");
  const normStance = normalizeText(context.stanceText);
  const normSupport = normalizeText(context.supportingStatement);
  if (normImplicit !== "" && normImplicit === normStance) {
    problems.push(problem("implicit_text", "restates_stance", "the hidden reasoning just restates the stance"));
  }
  if (normImplicit !== "" && normImplicit === normSupport) {
    problems.push(problem("implicit_text", "restates_support", "the hidden reasoning just restates the supporting statement"));
  }
  if (normOutcome !== "" && normOutcome === normSupport) {
    problems.push(problem("outcome_text", "restates_support", "the outcome must name a consequence, not repeat the supporting statement"));
  }

  return { ok: problems.length === 0, problems };
}

/** Yes/No widget values the service accepts: booleans, or strings that
 * normalize to "yes" or "no". */
export function validateValidityAnswer(value: unknown): boolean {
  if (typeof value === "boolean") return true;
  if (typeof value === "string") {
    const normalized = value.trim().toLowerCase();
    return normalized === "yes" || normalized === "no";
  }
  return false;
}

/** Scores are integers 1..5; anything else never leaves the client. */
export function validateScore(value: unknown): boolean {
  return typeof value === "number" && Number.isInteger(value) && value >= 1 && value <= 5;
}
