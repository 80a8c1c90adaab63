"""TOML run configuration.

One file describes a whole run: corpus paths, pipeline parameters, the
annotation setup, and model endpoints. Endpoints name the environment
variable that holds their API key; the key itself never appears in the
file, so configs are safe to commit and share.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from dialex.errors import ConfigError
from dialex.llm.client import ModelEndpointConfig
from dialex.matcher import INDEX_KINDS
from dialex.vocab import PipelineConfig

DEFAULT_WORK_DIR = "out"
DEFAULT_DEV_SIZE = 300


@dataclass
class RunConfig:
    """Everything a pipeline run needs, resolved and validated."""

    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    index_kind: str = "length-bucket"
    fold_case_filter: bool = False
    tagged_corpus: str | None = None
    dialect_corpus: str | None = None
    dialect_format: str = "plain-lines"
    dialect_doc_id: str = "dialect"
    work_dir: str = DEFAULT_WORK_DIR
    annotation_log: str | None = None
    dev_size: int = DEFAULT_DEV_SIZE
    endpoints: dict[str, ModelEndpointConfig] = field(default_factory=dict)

    def work_path(self, name: str) -> Path:
        return Path(self.work_dir) / name

    def log_path(self) -> Path:
        if self.annotation_log is not None:
            return Path(self.annotation_log)
        return self.work_path("annotations.jsonl")

    def endpoint(self, name: str) -> ModelEndpointConfig:
        try:
            return self.endpoints[name]
        except KeyError:
            known = ", ".join(sorted(self.endpoints)) or "none configured"
            raise ConfigError(
                f"unknown endpoint {name!r} (configured: {known})"
            ) from None


def _require(table: dict, key: str, kind: type, where: str, default=None):
    if key not in table:
        if default is not None:
            return default
        raise ConfigError(f"missing key {key!r} in [{where}]")
    value = table[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is int:
        raise ConfigError(
            f"[{where}] {key} must be {kind.__name__}, got {type(value).__name__}"
        )
    return value


def _parse_endpoint(name: str, table: dict) -> ModelEndpointConfig:
    where = f"endpoints.{name}"
    if "api_key" in table:
        raise ConfigError(
            f"[{where}] holds a literal api_key; configs must name the "
            f"environment variable instead (api_key_env)"
        )
    api_key_env = table.get("api_key_env")
    if api_key_env is not None and not isinstance(api_key_env, str):
        raise ConfigError(f"[{where}] api_key_env must be a string")
    try:
        return ModelEndpointConfig(
            base_url=_require(table, "base_url", str, where),
            model_name=_require(table, "model_name", str, where),
            api_key_env=api_key_env,
            temperature=float(table.get("temperature", 0.0)),
            max_output_tokens=_require(
                table, "max_output_tokens", int, where, default=20
            ),
            timeout=_require(table, "timeout", float, where, default=30.0),
            retries=_require(table, "retries", int, where, default=3),
            backoff=_require(table, "backoff", float, where, default=0.5),
        )
    except ConfigError as exc:
        if str(exc).startswith("["):
            raise
        raise ConfigError(f"[{where}] {exc}") from exc


def parse_config(text: str) -> RunConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config is not valid TOML: {exc}") from exc

    config = RunConfig()
    pipeline = data.get("pipeline", {})
    if not isinstance(pipeline, dict):
        raise ConfigError("[pipeline] must be a table")
    try:
        config.pipeline = PipelineConfig(
            n=_require(pipeline, "n", int, "pipeline", default=10000),
            k=_require(pipeline, "k", int, "pipeline", default=10),
            c=_require(pipeline, "c", int, "pipeline", default=3),
            window=_require(pipeline, "window", int, "pipeline", default=50),
            seed=_require(pipeline, "seed", int, "pipeline", default=0),
        )
    except ValueError as exc:
        raise ConfigError(f"[pipeline] {exc}") from exc
    index_kind = pipeline.get("index", config.index_kind)
    if index_kind not in INDEX_KINDS:
        raise ConfigError(
            f"[pipeline] index must be one of {', '.join(INDEX_KINDS)}"
        )
    config.index_kind = index_kind
    fold = pipeline.get("fold_case_filter", False)
    if not isinstance(fold, bool):
        raise ConfigError("[pipeline] fold_case_filter must be a boolean")
    config.fold_case_filter = fold

    paths = data.get("paths", {})
    if not isinstance(paths, dict):
        raise ConfigError("[paths] must be a table")
    for key in ("tagged_corpus", "dialect_corpus", "work_dir", "annotation_log"):
        if key in paths and not isinstance(paths[key], str):
            raise ConfigError(f"[paths] {key} must be a string")
    config.tagged_corpus = paths.get("tagged_corpus")
    config.dialect_corpus = paths.get("dialect_corpus")
    config.work_dir = paths.get("work_dir", DEFAULT_WORK_DIR)
    config.annotation_log = paths.get("annotation_log")

    dialect = data.get("dialect", {})
    if not isinstance(dialect, dict):
        raise ConfigError("[dialect] must be a table")
    fmt = dialect.get("format", "plain-lines")
    from dialex.corpus import DIALECT_FORMATS

    if fmt not in DIALECT_FORMATS:
        raise ConfigError(
            f"[dialect] format must be one of {', '.join(DIALECT_FORMATS)}"
        )
    config.dialect_format = fmt
    doc_id = dialect.get("doc_id", "dialect")
    if not isinstance(doc_id, str) or not doc_id:
        raise ConfigError("[dialect] doc_id must be a non-empty string")
    config.dialect_doc_id = doc_id

    annotation = data.get("annotation", {})
    if not isinstance(annotation, dict):
        raise ConfigError("[annotation] must be a table")
    dev_size = _require(
        annotation, "dev_size", int, "annotation", default=DEFAULT_DEV_SIZE
    )
    if dev_size < 1:
        raise ConfigError("[annotation] dev_size must be positive")
    config.dev_size = dev_size

    endpoints = data.get("endpoints", {})
    if not isinstance(endpoints, dict):
        raise ConfigError("[endpoints] must be a table of tables")
    for name, table in endpoints.items():
        if not isinstance(table, dict):
            raise ConfigError(f"[endpoints.{name}] must be a table")
        config.endpoints[name] = _parse_endpoint(name, table)
    return config


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)
