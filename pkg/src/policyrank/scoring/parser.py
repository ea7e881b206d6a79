"""Extraction of numeric ratings from free-text model responses.

The grammar is applied in priority order and never clamps: a verdict
outside the declared scale comes back unparsed so a human can decide.

R1  "Rating: X/<max>" or "X out of <max>"        -> X
R2  a range "X to Y" / "X-Y" in a rating context -> midpoint (X + Y) / 2
R3  "rated [at] X"                               -> X

When a rule matches more than once, the last occurrence wins: responses
discuss candidate numbers along the way and conclude with the verdict.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_NUM = r"\d+(?:\.\d+)?"

# R1a: slash form needs the explicit "Rating:" lead-in so arbitrary
# fractions in prose do not fire.
_R1_SLASH = re.compile(
    rf"Rating\s*:\s*\*{{0,2}}\s*({_NUM})\s*/\s*({_NUM})", re.IGNORECASE)
_R1_OUT_OF = re.compile(rf"\b({_NUM})\s+out\s+of\s+({_NUM})\b", re.IGNORECASE)
_R2_RANGE = re.compile(rf"\b({_NUM})\s*(?:to|–|—|-)\s*({_NUM})\b", re.IGNORECASE)
_R3_RATED = re.compile(rf"\brated\s+(?:at\s+)?({_NUM})\b", re.IGNORECASE)

_RATING_CONTEXT = re.compile(r"\b(rat(?:e|es|ed|ing)|scor(?:e|es|ed|ing))\b", re.IGNORECASE)
_CONTEXT_WINDOW = 120

RULE_IDS = ("R1", "R2", "R3")


@dataclass(frozen=True)
class ParsedRating:
    """Outcome of one parse: a value and the rule that produced it.

    ``value`` is None for the unparsed marker; ``detail`` says why
    (no_rule_fired or out_of_scale).
    """

    value: float | None
    rule: str | None
    detail: str | None = None

    @property
    def parsed(self) -> bool:
        return self.value is not None


def _in_scale(value: float, scale_min: float, scale_max: float) -> bool:
    return scale_min <= value <= scale_max


def _last_r1(text: str, scale_max: float):
    candidates = []
    for match in _R1_SLASH.finditer(text):
        if float(match.group(2)) == scale_max:
            candidates.append((match.start(), float(match.group(1))))
    for match in _R1_OUT_OF.finditer(text):
        if float(match.group(2)) == scale_max:
            candidates.append((match.start(), float(match.group(1))))
    if not candidates:
        return None
    return max(candidates, key=lambda c: c[0])[1]


def _last_r2(text: str, scale_min: float, scale_max: float):
    candidates = []
    for match in _R2_RANGE.finditer(text):
        low, high = float(match.group(1)), float(match.group(2))
        if low >= high:
            continue
        if (low, high) == (scale_min, scale_max):
            continue  # "on a 1 to 10 scale" names the scale, not a verdict
        window = text[max(0, match.start() - _CONTEXT_WINDOW):match.start()]
        if not _RATING_CONTEXT.search(window):
            continue
        candidates.append((match.start(), low, high))
    if not candidates:
        return None
    _, low, high = max(candidates, key=lambda c: c[0])
    return low, high


def _last_r3(text: str):
    matches = list(_R3_RATED.finditer(text))
    if not matches:
        return None
    return float(matches[-1].group(1))


def parse_rating(response: str, scale_min: float, scale_max: float) -> ParsedRating:
    """Apply the rating grammar to one response text.

    Rules fire in priority order R1 > R2 > R3; within a rule the last
    occurrence wins. An out-of-scale verdict is reported unparsed, never
    clamped.
    """
    value = _last_r1(response, scale_max)
    if value is not None:
        if not _in_scale(value, scale_min, scale_max):
            return ParsedRating(None, None, "out_of_scale")
        return ParsedRating(value, "R1")

    r2 = _last_r2(response, scale_min, scale_max)
    if r2 is not None:
        low, high = r2
        if not (_in_scale(low, scale_min, scale_max) and _in_scale(high, scale_min, scale_max)):
            return ParsedRating(None, None, "out_of_scale")
        return ParsedRating((low + high) / 2.0, "R2")

    value = _last_r3(response)
    if value is not None:
        if not _in_scale(value, scale_min, scale_max):
            return ParsedRating(None, None, "out_of_scale")
        return ParsedRating(value, "R3")

    return ParsedRating(None, None, "no_rule_fired")
