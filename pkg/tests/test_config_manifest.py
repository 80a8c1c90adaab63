"""Run configuration parsing and the provenance manifest."""

import hashlib
import json

import pytest

from dialex.config import RunConfig, load_config, parse_config
from dialex.errors import ConfigError
from dialex.manifest import RunManifest, file_checksum

FULL_CONFIG = """
[pipeline]
n = 500
k = 7
c = 2
window = 30
seed = 42
index = "bk-tree"
fold_case_filter = true

[paths]
tagged_corpus = "corpora/de.tsv"
dialect_corpus = "corpora/bar.txt"
work_dir = "scratch"
annotation_log = "scratch/labels.jsonl"

[dialect]
format = "wiki-extract"
doc_id = "barwiki"

[annotation]
dev_size = 120

[endpoints.local]
base_url = "http://127.0.0.1:8080"
model_name = "test-model"

[endpoints.hosted]
base_url = "https://api.example.com"
model_name = "big-model"
api_key_env = "EXAMPLE_API_KEY"
timeout = 10
retries = 1
backoff = 0.1
"""


class TestConfigParsing:
    def test_defaults_from_empty_document(self):
        config = parse_config("")
        assert config.pipeline.n == 10000
        assert config.pipeline.k == 10
        assert config.pipeline.c == 3
        assert config.pipeline.window == 50
        assert config.pipeline.seed == 0
        assert config.index_kind == "length-bucket"
        assert not config.fold_case_filter
        assert config.work_dir == "out"
        assert config.dev_size == 300
        assert config.endpoints == {}

    def test_full_document(self):
        config = parse_config(FULL_CONFIG)
        assert config.pipeline.n == 500
        assert config.pipeline.seed == 42
        assert config.index_kind == "bk-tree"
        assert config.fold_case_filter
        assert config.tagged_corpus == "corpora/de.tsv"
        assert config.dialect_format == "wiki-extract"
        assert config.dialect_doc_id == "barwiki"
        assert config.dev_size == 120
        assert set(config.endpoints) == {"local", "hosted"}

    def test_endpoint_fields(self):
        endpoint = parse_config(FULL_CONFIG).endpoint("hosted")
        assert endpoint.base_url == "https://api.example.com"
        assert endpoint.model_name == "big-model"
        assert endpoint.api_key_env == "EXAMPLE_API_KEY"
        assert endpoint.timeout == 10.0
        assert endpoint.retries == 1
        assert endpoint.backoff == 0.1
        # Unspecified knobs keep the reproducibility defaults.
        assert endpoint.temperature == 0.0
        assert endpoint.max_output_tokens == 20

    def test_unknown_endpoint_lists_configured(self):
        config = parse_config(FULL_CONFIG)
        with pytest.raises(ConfigError, match="hosted, local"):
            config.endpoint("missing")

    def test_literal_api_key_rejected(self):
        text = (
            "[endpoints.bad]\n"
            'base_url = "http://x"\n'
            'model_name = "m"\n'
            'api_key = "sk-secret"\n'
        )
        with pytest.raises(ConfigError, match="api_key_env"):
            parse_config(text)

    def test_invalid_toml(self):
        with pytest.raises(ConfigError, match="TOML"):
            parse_config("[pipeline\nn = 3")

    def test_unknown_index_kind(self):
        with pytest.raises(ConfigError, match="index"):
            parse_config('[pipeline]\nindex = "kd-tree"\n')

    def test_unknown_dialect_format(self):
        with pytest.raises(ConfigError, match="format"):
            parse_config('[dialect]\nformat = "sqlite"\n')

    def test_nonpositive_dev_size(self):
        with pytest.raises(ConfigError, match="dev_size"):
            parse_config("[annotation]\ndev_size = 0\n")

    def test_bool_is_not_an_int(self):
        with pytest.raises(ConfigError, match="must be int"):
            parse_config("[pipeline]\nk = true\n")

    def test_string_where_int_expected(self):
        with pytest.raises(ConfigError, match="must be int"):
            parse_config('[pipeline]\nn = "many"\n')

    def test_fold_case_filter_must_be_bool(self):
        with pytest.raises(ConfigError, match="fold_case_filter"):
            parse_config("[pipeline]\nfold_case_filter = 1\n")

    def test_endpoint_requires_base_url_and_model(self):
        with pytest.raises(ConfigError, match="base_url"):
            parse_config('[endpoints.e]\nmodel_name = "m"\n')
        with pytest.raises(ConfigError, match="model_name"):
            parse_config('[endpoints.e]\nbase_url = "http://x"\n')

    def test_nonzero_temperature_rejected_with_location(self):
        text = (
            "[endpoints.e]\n"
            'base_url = "http://x"\n'
            'model_name = "m"\n'
            "temperature = 0.7\n"
        )
        with pytest.raises(ConfigError, match=r"endpoints\.e.*temperature"):
            parse_config(text)

    def test_load_config_from_file(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text(FULL_CONFIG, encoding="utf-8")
        assert load_config(path).pipeline.n == 500
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "absent.toml")

    def test_paths_resolve_under_work_dir(self):
        config = RunConfig(work_dir="scratch")
        assert str(config.work_path("vocab.tsv")) == "scratch/vocab.tsv"
        assert str(config.log_path()) == "scratch/annotations.jsonl"
        assert str(
            RunConfig(annotation_log="elsewhere/log.jsonl").log_path()
        ) == "elsewhere/log.jsonl"


class TestManifest:
    def artifact(self, tmp_path, name="stage.tsv", text="col\nval\n"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    def test_file_checksum_is_sha256(self, tmp_path):
        path = self.artifact(tmp_path)
        expected = hashlib.sha256(path.read_bytes()).hexdigest()
        assert file_checksum(path) == expected

    def test_hash_ignores_timestamps(self, tmp_path):
        path = self.artifact(tmp_path)
        first = RunManifest("cfg", 1)
        second = RunManifest("cfg", 1)
        first.record_stage("vocab", path)
        second.record_stage("vocab", path)
        assert first.stages["vocab"].completed_at is not None
        assert first.manifest_hash() == second.manifest_hash()

    def test_hash_tracks_config_seed_and_stages(self, tmp_path):
        path = self.artifact(tmp_path)
        base = RunManifest("cfg", 1)
        assert base.manifest_hash() != RunManifest("cfg", 2).manifest_hash()
        assert base.manifest_hash() != RunManifest("other", 1).manifest_hash()
        before = base.manifest_hash()
        base.record_stage("vocab", path)
        assert base.manifest_hash() != before

    def test_sidecar_contents(self, tmp_path):
        path = self.artifact(tmp_path)
        manifest = RunManifest("cfg", 7)
        record = manifest.record_stage("vocab", path)
        sidecar = json.loads(
            (tmp_path / "stage.tsv.meta.json").read_text(encoding="utf-8")
        )
        assert sidecar["stage"] == "vocab"
        assert sidecar["artifact"] == str(path)
        assert sidecar["sha256"] == record.sha256 == file_checksum(path)
        assert sidecar["manifest_hash"] == manifest.manifest_hash()

    def test_sidecar_leaves_artifact_bytes_alone(self, tmp_path):
        path = self.artifact(tmp_path)
        before = path.read_bytes()
        RunManifest("cfg", 7).record_stage("vocab", path)
        assert path.read_bytes() == before

    def test_save_load_round_trip(self, tmp_path):
        path = self.artifact(tmp_path)
        manifest = RunManifest("cfg", 7)
        manifest.record_stage("vocab", path)
        manifest.save(tmp_path)
        loaded = RunManifest.load(tmp_path)
        assert loaded.config_text == "cfg"
        assert loaded.seed == 7
        assert loaded.stages["vocab"].sha256 == manifest.stages["vocab"].sha256
        assert loaded.manifest_hash() == manifest.manifest_hash()

    def test_load_or_create_continues_matching_run(self, tmp_path):
        path = self.artifact(tmp_path)
        manifest = RunManifest("cfg", 7)
        manifest.record_stage("vocab", path)
        manifest.save(tmp_path)
        resumed = RunManifest.load_or_create(tmp_path, "cfg", 7)
        assert "vocab" in resumed.stages

    def test_load_or_create_resets_on_changed_settings(self, tmp_path):
        path = self.artifact(tmp_path)
        manifest = RunManifest("cfg", 7)
        manifest.record_stage("vocab", path)
        manifest.save(tmp_path)
        assert RunManifest.load_or_create(tmp_path, "cfg", 8).stages == {}
        assert RunManifest.load_or_create(tmp_path, "new", 7).stages == {}

    def test_load_or_create_handles_empty_directory(self, tmp_path):
        manifest = RunManifest.load_or_create(tmp_path, "cfg", 7)
        assert manifest.stages == {}
        assert manifest.seed == 7
