"""Prompted evaluation of chat-completion models on both word-pair tasks.

Submodules: templates (prompt pools and rendering), parsing (output
normalization into labels/words or IF errors), client (HTTP transport),
runner (cached execution and prompt selection).
"""

from dialex.llm.client import ModelEndpointConfig, complete
from dialex.llm.parsing import (
    ParsedJudgment,
    ParsedTranslation,
    parse_judgment,
    parse_translation,
)
from dialex.llm.runner import RunResult, run_task, select_best_prompt
from dialex.llm.templates import (
    PromptTemplate,
    bundled_pool,
    load_prompt_pool,
    render_prompt,
)

__all__ = [
    "ModelEndpointConfig",
    "ParsedJudgment",
    "ParsedTranslation",
    "PromptTemplate",
    "RunResult",
    "bundled_pool",
    "complete",
    "load_prompt_pool",
    "parse_judgment",
    "parse_translation",
    "render_prompt",
    "run_task",
    "select_best_prompt",
]
