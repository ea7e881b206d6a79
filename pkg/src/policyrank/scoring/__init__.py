from .parser import ParsedRating, parse_rating
from .pipeline import (CellOutcome, PromptTranscript, RetryPolicy, ScoreRun,
                       TranscriptArchive, score_cell, score_table)
from .providers import (HttpChatProvider, ProviderRateLimit, ProviderRequest,
                        ProviderResponse, ProviderTransportError,
                        ScriptedProvider, build_script)
from .template import DEFAULT_TEMPLATE_BODY, PromptTemplate, render_prompt

__all__ = [
    "CellOutcome",
    "DEFAULT_TEMPLATE_BODY",
    "HttpChatProvider",
    "ParsedRating",
    "PromptTemplate",
    "PromptTranscript",
    "ProviderRateLimit",
    "ProviderRequest",
    "ProviderResponse",
    "ProviderTransportError",
    "RetryPolicy",
    "ScoreRun",
    "ScriptedProvider",
    "TranscriptArchive",
    "build_script",
    "parse_rating",
    "render_prompt",
    "score_cell",
    "score_table",
]
