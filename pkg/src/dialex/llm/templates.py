"""Prompt template pools and rendering.

Templates ship as data files: a front-matter header (id, task, language,
with_context) separated from the body by a `---` line. Bodies carry the
placeholders `term_bar` (dialect term), `term_de` (standard lemma, judge
task only), and `####` (usage example, context variants only) and are
substituted without any escaping or trimming.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from dialex.errors import TemplateError

TASKS = ("judge", "translate")
LANGUAGES = ("en", "de")

_PLACEHOLDER = re.compile(r"term_bar|term_de|####")


@dataclass(frozen=True)
class PromptTemplate:
    """One prompt with its pool coordinates."""

    id: int
    task: str
    language: str
    with_context: bool
    body: str

    @property
    def variant(self) -> str:
        """Cache-key tag for the (language, context) combination."""
        return self.language + ("+ctx" if self.with_context else "")


def parse_template(text: str, source: str = "<string>") -> PromptTemplate:
    """Parse one template file; validation errors name the template."""
    head, sep, body = text.partition("\n---\n")
    if not sep:
        raise TemplateError(f"{source}: missing '---' separator")
    fields = {}
    for line in head.splitlines():
        key, colon, value = line.partition(":")
        if not colon:
            raise TemplateError(f"{source}: bad front-matter line {line!r}")
        fields[key.strip()] = value.strip()
    try:
        tid = int(fields["id"])
        task = fields["task"]
        language = fields["language"]
        with_context = {"true": True, "false": False}[fields["with_context"]]
    except (KeyError, ValueError) as exc:
        raise TemplateError(f"{source}: incomplete front matter ({exc})") from exc
    if task not in TASKS:
        raise TemplateError(f"{source}: unknown task {task!r}")
    if language not in LANGUAGES:
        raise TemplateError(f"{source}: unknown language {language!r}")
    if body.endswith("\n"):
        body = body[:-1]
    template = PromptTemplate(tid, task, language, with_context, body)
    _validate_body(template, source)
    return template


def _validate_body(template: PromptTemplate, source: str) -> None:
    if "term_bar" not in template.body:
        raise TemplateError(
            f"template {template.id} ({source}): body lacks 'term_bar'"
        )
    if template.task == "judge" and "term_de" not in template.body:
        raise TemplateError(
            f"template {template.id} ({source}): judge body lacks 'term_de'"
        )
    if template.task == "translate" and "term_de" in template.body:
        raise TemplateError(
            f"template {template.id} ({source}): translate body must not "
            "mention 'term_de'"
        )
    if template.with_context != ("####" in template.body):
        raise TemplateError(
            f"template {template.id} ({source}): context flag and '####' "
            "placeholder disagree"
        )


def load_prompt_pool(source: str | Path) -> list[PromptTemplate]:
    """All templates under a directory, ordered by coordinates then id."""
    directory = Path(source)
    templates = [
        parse_template(path.read_text(encoding="utf-8"), str(path))
        for path in sorted(directory.glob("*.txt"))
    ]
    templates.sort(key=lambda t: (t.task, t.language, t.with_context, t.id))
    return templates


def bundled_pool() -> list[PromptTemplate]:
    """The packaged pools: 13 judge + 22 translate base prompts, plus
    context and German variants of the per-model best prompts."""
    root = resources.files("dialex") / "prompts"
    templates = [
        parse_template(
            entry.read_text(encoding="utf-8"), entry.name
        )
        for entry in sorted(root.iterdir(), key=lambda e: e.name)
        if entry.name.endswith(".txt")
    ]
    templates.sort(key=lambda t: (t.task, t.language, t.with_context, t.id))
    return templates


def pool_slice(
    templates: Iterable[PromptTemplate],
    task: str,
    language: str = "en",
    with_context: bool = False,
) -> list[PromptTemplate]:
    return sorted(
        (
            t
            for t in templates
            if t.task == task
            and t.language == language
            and t.with_context == with_context
        ),
        key=lambda t: t.id,
    )


def render_prompt(
    template: PromptTemplate,
    term: str,
    lemma: str | None = None,
    context: str | None = None,
) -> str:
    """Substitute placeholders in a single pass, verbatim.

    All placeholders are replaced simultaneously, so substituted values
    are never rescanned for placeholder text.
    """
    if template.task == "judge" and lemma is None:
        raise TemplateError(f"template {template.id}: judge rendering needs a lemma")
    if template.with_context and context is None:
        raise TemplateError(
            f"template {template.id}: context variant rendered without a context"
        )
    if not template.with_context and context is not None:
        raise TemplateError(
            f"template {template.id}: context given to a context-free template"
        )
    values = {"term_bar": term, "term_de": lemma or "", "####": context or ""}
    return _PLACEHOLDER.sub(lambda m: values[m.group()], template.body)
