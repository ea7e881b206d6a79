"""Query template rendering for alternative x criterion scoring prompts."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..model import Alternative, Criterion

PLACEHOLDERS = ("policy_name", "policy_description", "criterion_name", "criterion_description")

DEFAULT_TEMPLATE_BODY = (
    "Consider first a sustainability policy of {policy_name}, practiced at the "
    "county or municipal level of government. {policy_description}\n\n"
    "Consider second, a policy evaluation criterion: {criterion_name}. "
    "{criterion_description}\n\n"
    "How would you rate this policy on a 1 to 10 scale for its capacity to do "
    "well on considerations of this criterion?"
)


@dataclass(frozen=True)
class PromptTemplate:
    """Query text with the four substitution slots and its rating scale.

    Each placeholder must appear exactly once; the scale stated in the
    body is what the rating parser later enforces.
    """

    body: str
    scale_min: float = 1.0
    scale_max: float = 10.0

    def __post_init__(self):
        if not (self.scale_min < self.scale_max):
            raise ValueError("template scale_min must be < scale_max")
        for name in PLACEHOLDERS:
            count = self.body.count("{" + name + "}")
            if count != 1:
                raise ValueError(
                    f"template placeholder {{{name}}} must appear exactly once (found {count})"
                )
        stray = set(re.findall(r"\{([a-z_]+)\}", self.body)) - set(PLACEHOLDERS)
        if stray:
            raise ValueError(f"template contains unknown placeholders: {sorted(stray)}")

    @classmethod
    def default(cls) -> "PromptTemplate":
        return cls(DEFAULT_TEMPLATE_BODY, 1.0, 10.0)


def render_prompt(template: PromptTemplate, alternative: Alternative,
                  criterion: Criterion) -> str:
    """Substitute the policy and criterion texts into the template.

    The substitution is deterministic and verbatim. Entities without the
    prose the template needs are rejected by name rather than rendered
    with holes.
    """
    if not alternative.description:
        raise ValueError(f"alternative {alternative.id} ({alternative.name!r}) has no description")
    if not criterion.prompt_text:
        raise ValueError(f"criterion {criterion.id!r} has no prompt text")
    rendered = template.body
    for name, value in (
        ("policy_name", alternative.name),
        ("policy_description", alternative.description),
        ("criterion_name", criterion.name),
        ("criterion_description", criterion.prompt_text),
    ):
        rendered = rendered.replace("{" + name + "}", value)
    leftover = [p for p in PLACEHOLDERS if "{" + p + "}" in rendered]
    if leftover:
        raise ValueError(f"rendered prompt still contains placeholders: {leftover}")
    return rendered
