/**
 * Worker-facing vocabulary.
 *
 * Everything an annotator reads comes either from a task view payload
 * or from this module, and the vocabulary test flattens both, so a
 * corpus-jargon term slipping into the UI fails CI. Annotators see
 * "stance" and "supporting statement", never dataset terminology.
 */

export const FEASIBILITY_OPTIONS = ["CanWrite", "CannotWrite", "Unsure"] as const;
export const CONNECTOR_OPTIONS = ["cause", "suppress"] as const;

export const FIELD_LABELS = {
  topic: "Topic",
  stance: "Stance",
  supportingStatement: "Supporting statement",
  action: "Action",
  hiddenReasoning: "Hidden reasoning",
  connectorActionToReasoning: "Connector: action to hidden reasoning",
  connectorReasoningToOutcome: "Connector: hidden reasoning to outcome",
  outcome: "Outcome",
} as const;

export const PROMPTS = {
  outcome: "What does the supporting statement say will happen?",
  feasibility: "Can a hidden reasoning be written that links the action to that outcome?",
  sanity: "Read your chain start to finish: it makes sense as written.",
  validityHeading: "Check the outcome",
  scoreHeading: "Rate the hidden reasoning",
} as const;

export const STEP_TITLES = {
  outcome: "Step 1: outcome",
  feasibility: "Step 2: feasibility",
  chain: "Step 3: hidden reasoning",
  confirm: "Step 4: confirm",
} as const;

export const MISSING_ACTION_NOTICE =
  "This task has no action entity yet. It needs operator review before it can be annotated.";

export const STALE_DATA_NOTICE =
  "Showing the last loaded snapshot; the service could not be reached.";
