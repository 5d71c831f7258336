/**
 * Deterministic fuzz of the writing-phase form.
 *
 * Drives Phase1Form through seeded random interaction sequences,
 * including illegal moves (chain entry without a CanWrite answer,
 * which must throw) and mid-form feasibility flips (which must clear
 * the chain), and records the submission body of every run. The
 * property under test: a body this form agrees to build is never
 * rejected by the service for structural reasons. The committed
 * fixtures/fuzz_submissions.json is the dump for the pinned seed; the
 * backend test suite replays it against a live instance and requires
 * every submission to be accepted.
 */

import { Phase1Form } from "./phase1Form";
import type { Phase1SubmissionBody, Phase1TaskView } from "./types";

export const FUZZ_SEED = 20260819;
export const FUZZ_COUNT = 300;

/** Small fast PRNG with full 32-bit state; good enough for exploring
 * form interactions and trivially reproducible from the seed. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export interface FuzzSubmission {
  worker: string;
  client_token: string;
  payload: Phase1SubmissionBody;
}

export interface FuzzCorpus {
  seed: number;
  count: number;
  argument: {
    stance_text: string;
    supporting_statement: string;
    action_text: string;
  };
  gating: {
    chain_entry_blocked: number;
    repairs: number;
  };
  submissions: FuzzSubmission[];
}

const SUBJECTS = [
  "patrol budgets",
  "catch quotas",
  "harbor fees",
  "fleet insurers",
  "coastal villages",
  "processing plants",
  "export permits",
  "observer programs",
];

const EVENTS = [
  "rise sharply",
  "collapse within a season",
  "get renegotiated",
  "fall under review",
  "shift to neighboring ports",
  "double in cost",
  "disappear from the ledger",
  "draw new scrutiny",
];

const CONNECTOR_SPELLINGS = ["cause", "Cause", " CAUSE ", "suppress", "Suppress", " suppress "];

type Rng = () => number;

function pick<T>(rng: Rng, items: readonly T[]): T {
  return items[Math.floor(rng() * items.length)] as T;
}

function chance(rng: Rng, p: number): boolean {
  return rng() < p;
}

/** A plain sentence, occasionally decorated the way real text entry
 * is: padding, doubled spaces, a capitalized start, stray period. */
function sentence(rng: Rng): string {
  let text = `${pick(rng, SUBJECTS)} ${pick(rng, EVENTS)}`;
  if (chance(rng, 0.2)) text = text.charAt(0).toUpperCase() + text.slice(1);
  if (chance(rng, 0.15)) text = text.replace(" ", "  ");
  if (chance(rng, 0.15)) text = `${text}.`;
  if (chance(rng, 0.15)) text = `  ${text} `;
  return text;
}

function pickFeasibility(rng: Rng): string {
  const roll = rng();
  if (roll < 0.6) return "CanWrite";
  if (roll < 0.85) return "CannotWrite";
  return "Unsure";
}

function pickOutcome(rng: Rng, view: Phase1TaskView, feasibility: string): string {
  // Echoing the stance is always fine; echoing the supporting
  // statement only survives when no chain is written, so the generator
  // only tries it on those paths.
  if (chance(rng, 0.08)) return view.stance_text;
  if (feasibility !== "CanWrite" && chance(rng, 0.08)) return view.supporting_statement;
  return sentence(rng);
}

export function generateFuzzCorpus(
  view: Phase1TaskView,
  seed: number = FUZZ_SEED,
  count: number = FUZZ_COUNT,
): FuzzCorpus {
  if (!view.action_text) throw new Error("fuzz needs a task view with an action entity");
  const rng = mulberry32(seed);
  const submissions: FuzzSubmission[] = [];
  let blocked = 0;
  let repairs = 0;

  for (let i = 0; i < count; i += 1) {
    const form = new Phase1Form(view);
    const feasibility = pickFeasibility(rng);

    // Poke at the chain step before it is reachable; the form must
    // refuse rather than accumulate hidden state.
    if (chance(rng, 0.3)) {
      try {
        form.typeHiddenReasoning(sentence(rng));
        throw new Error("chain entry should be unreachable before CanWrite");
      } catch {
        blocked += 1;
      }
    }

    form.typeOutcome(pickOutcome(rng, view, feasibility));
    form.chooseFeasibility(feasibility);

    if (feasibility === "CanWrite") {
      if (chance(rng, 0.15)) {
        // Flip away and back mid-form: the chain draft must reset and
        // the step must lock again while the answer is CannotWrite.
        form.typeHiddenReasoning(sentence(rng));
        form.chooseFeasibility("CannotWrite");
        try {
          form.typeHiddenReasoning(sentence(rng));
          throw new Error("chain entry should lock after leaving CanWrite");
        } catch {
          blocked += 1;
        }
        form.chooseFeasibility("CanWrite");
      }
      form.typeHiddenReasoning(sentence(rng));
      form.pickConnector("ai", pick(rng, CONNECTOR_SPELLINGS));
      form.pickConnector("io", pick(rng, CONNECTOR_SPELLINGS));
      form.confirmSanity(true);
      // Live validation feedback loop: a decorated sentence can
      // collide with a paraphrase rule; the user retypes until the
      // form unlocks, exactly as the page would make them.
      let guard = 0;
      while (!form.canSubmit() && guard < 5) {
        form.typeOutcome(sentence(rng));
        form.typeHiddenReasoning(sentence(rng));
        repairs += 1;
        guard += 1;
      }
    }

    if (!form.canSubmit()) {
      throw new Error(`fuzz run ${i} ended in an unsubmittable state`);
    }
    const worker = `fz${String(i + 1).padStart(4, "0")}`;
    submissions.push({
      worker,
      client_token: `${worker}-p1`,
      payload: form.buildSubmission(worker, `${worker}-p1`),
    });
  }

  return {
    seed,
    count,
    argument: {
      stance_text: view.stance_text,
      supporting_statement: view.supporting_statement,
      action_text: view.action_text,
    },
    gating: { chain_entry_blocked: blocked, repairs },
    submissions,
  };
}

function stringify(value: unknown, indent: string): string {
  if (value === null || typeof value === "number" || typeof value === "boolean" || typeof value === "string") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    if (value.length === 0) return "[]";
    const inner = `${indent}  `;
    const items = value.map((item) => inner + stringify(item, inner));
    return `[\n${items.join(",\n")}\n${indent}]`;
  }
  if (typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>)
      .filter(([, v]) => v !== undefined)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0));
    if (entries.length === 0) return "{}";
    const inner = `${indent}  `;
    const items = entries.map(([k, v]) => `${inner}${JSON.stringify(k)}: ${stringify(v, inner)}`);
    return `{\n${items.join(",\n")}\n${indent}}`;
  }
  throw new Error(`cannot serialize a ${typeof value}`);
}

/** Key-sorted, two-space-indented JSON with a trailing newline: the
 * same canonical form the backend fixture generator writes, so every
 * committed fixture diffs cleanly. */
export function canonicalJson(value: unknown): string {
  return `${stringify(value, "")}\n`;
}
