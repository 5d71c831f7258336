"""Rule-based derivation of action phrases from stance statements.

Claims of the form "We should <verb> <object...>" are rewritten to a
gerund-initial verbal phrase ("We should ban whaling" -> "Banning
whaling"). The matcher is deliberately small: a whitespace/punctuation
tokenizer plus a line-oriented pattern grammar, so curators can extend
coverage with a plain-text rule file instead of a parser dependency.
Claims that match no rule fall back to manual action entry.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .chains import ActionEntity

# Verbs whose -ing form is not produced by the regular rules.
IRREGULAR_GERUNDS = {
    "be": "being",
    "see": "seeing",
    "flee": "fleeing",
    "free": "freeing",
    "agree": "agreeing",
    "decree": "decreeing",
    "guarantee": "guaranteeing",
    "foresee": "foreseeing",
    "oversee": "overseeing",
    "referee": "refereeing",
    "die": "dying",
    "lie": "lying",
    "tie": "tying",
    "vie": "vying",
    "dye": "dyeing",
    "eye": "eyeing",
    "singe": "singeing",
    "swinge": "swingeing",
    "canoe": "canoeing",
    "hoe": "hoeing",
    "shoe": "shoeing",
    "toe": "toeing",
    "tiptoe": "tiptoeing",
    "picnic": "picnicking",
    "panic": "panicking",
    "mimic": "mimicking",
    "traffic": "trafficking",
    "frolic": "frolicking",
    "age": "aging",
}

# Polysyllabic verbs with final-syllable stress still double their last
# consonant; the vowel-group heuristic below cannot see stress, so they
# are listed explicitly.
_FINAL_STRESS_DOUBLERS = {
    "admit", "begin", "commit", "compel", "concur", "confer", "control",
    "defer", "deter", "emit", "equip", "excel", "forget", "incur", "infer",
    "occur", "omit", "patrol", "permit", "prefer", "propel", "rebel",
    "refer", "regret", "remit", "repel", "submit", "transfer", "transmit",
    "upset",
}

_VOWELS = "aeiou"
_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")


def _ends_cvc(verb: str) -> bool:
    # consonant-vowel-consonant ending, excluding final w/x/y
    if len(verb) < 3:
        return False
    a, b, c = verb[-3], verb[-2], verb[-1]
    return a not in _VOWELS and b in _VOWELS and c not in _VOWELS and c not in "wxy"


def gerundize(verb: str) -> str:
    """Produce the -ing form of a base-form verb.

    Rule order: irregular lexicon; final-e drop; consonant doubling for
    stressed CVC endings; plain suffixing. Total on alphabetic tokens.
    """
    v = verb.strip().lower()
    if not v.isalpha():
        raise ValueError(f"gerundize expects an alphabetic base-form token, got {verb!r}")
    if v in IRREGULAR_GERUNDS:
        return IRREGULAR_GERUNDS[v]
    if v.endswith("e") and len(v) > 2 and not v.endswith("ee"):
        return v[:-1] + "ing"
    if _ends_cvc(v):
        # Doubling needs final-syllable stress: monosyllables qualify,
        # longer verbs only via the explicit list (abandon -> abandoning).
        monosyllabic = len(_VOWEL_GROUP_RE.findall(v)) == 1
        if monosyllabic or v in _FINAL_STRESS_DOUBLERS:
            return v + v[-1] + "ing"
    return v + "ing"


_TOKEN_RE = re.compile(r"[A-Za-z']+|\d+|[^\sA-Za-z\d]")


def tokenize(text: str) -> list[str]:
    """Split on whitespace and punctuation, keeping punctuation tokens."""
    return _TOKEN_RE.findall(text)


@dataclass(frozen=True)
class ExtractionRule:
    """One claim pattern and its action-phrase rewrite.

    Pattern tokens are matched case-insensitively. ``{verb}`` binds a
    single token, ``{rest}`` greedily binds the remaining tokens.
    Templates may reference ``{verb:gerund}``, ``{verb}`` and ``{rest}``.
    A rule may mark its output for manual review (used for negated
    claims, which the source corpus never contains).
    """

    pattern: tuple[str, ...]
    template: str
    needs_review: bool = False

    def match(self, tokens: list[str]) -> dict[str, object] | None:
        bindings: dict[str, object] = {}
        i = 0
        for j, pat in enumerate(self.pattern):
            if pat == "{verb}":
                if i >= len(tokens) or not tokens[i].isalpha():
                    return None
                bindings["verb"] = tokens[i]
                i += 1
            elif pat == "{rest}":
                if j != len(self.pattern) - 1:
                    raise ValueError("{rest} must be the final pattern token")
                rest = [t for t in tokens[i:] if t.isalnum() or "'" in t]
                if not rest:
                    return None
                bindings["rest"] = rest
                i = len(tokens)
            else:
                if i >= len(tokens) or tokens[i].lower() != pat:
                    return None
                i += 1
        if i < len(tokens):
            # trailing punctuation is fine, trailing words are not
            if any(t.isalnum() for t in tokens[i:]):
                return None
        return bindings

    def render(self, bindings: dict[str, object]) -> str:
        verb = str(bindings.get("verb", ""))
        rest = bindings.get("rest", [])
        assert isinstance(rest, list)
        out = self.template
        out = out.replace("{verb:gerund}", gerundize(verb))
        out = out.replace("{verb}", verb.lower())
        out = out.replace("{rest}", " ".join(rest))
        phrase = " ".join(out.split())
        return phrase[:1].upper() + phrase[1:]


DEFAULT_RULES = (
    ExtractionRule(
        pattern=("we", "should", "not", "{verb}", "{rest}"),
        template="not {verb:gerund} {rest}",
        needs_review=True,
    ),
    ExtractionRule(
        pattern=("we", "should", "{verb}", "{rest}"),
        template="{verb:gerund} {rest}",
    ),
)


def load_rules(path: str | Path) -> tuple[ExtractionRule, ...]:
    """Load extraction rules from a plain-text file, one per line.

    Line format: ``pattern -> template`` with an optional trailing
    ``[review]`` flag. Blank lines and ``#`` comments are skipped.
    Loaded rules take precedence over the built-in defaults.
    """
    rules: list[ExtractionRule] = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "->" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'pattern -> template'")
        pattern_part, template_part = line.split("->", 1)
        template = template_part.strip()
        needs_review = False
        if template.endswith("[review]"):
            template = template[: -len("[review]")].strip()
            needs_review = True
        pattern = tuple(tok.lower() for tok in pattern_part.split())
        if not pattern or not template:
            raise ValueError(f"{path}:{lineno}: empty pattern or template")
        rules.append(ExtractionRule(pattern=pattern, template=template, needs_review=needs_review))
    return tuple(rules) + DEFAULT_RULES


def extract_action(
    claim: str,
    claim_id: str = "",
    rules: tuple[ExtractionRule, ...] = DEFAULT_RULES,
) -> ActionEntity | None:
    """Derive the action phrase for a claim, or None when no rule applies.

    The returned phrase keeps the claim's content-word casing, starts
    with a capital letter, and never contains the modal 'should'.
    """
    if not claim.strip():
        raise ValueError("claim must be non-empty")
    tokens = tokenize(claim)
    for rule in rules:
        bindings = rule.match(tokens)
        if bindings is not None:
            text = rule.render(bindings)
            return ActionEntity(
                text=text,
                source_claim_id=claim_id,
                needs_review=rule.needs_review,
            )
    return None
