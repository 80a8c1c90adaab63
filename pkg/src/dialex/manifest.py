"""Run manifest: which config produced which artifacts.

The manifest records a checksum per completed stage; each artifact gets
a sidecar `<name>.meta.json` carrying the manifest hash at creation
time. Provenance lives in the sidecar so the artifacts themselves stay
byte-identical across reruns with the same config and seed.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

MANIFEST_NAME = "manifest.json"


@dataclass
class StageRecord:
    artifact: str
    sha256: str
    completed_at: str


@dataclass
class RunManifest:
    config_text: str
    seed: int
    stages: dict[str, StageRecord] = field(default_factory=dict)

    def manifest_hash(self) -> str:
        snapshot = {
            "config": self.config_text,
            "seed": self.seed,
            "stages": {
                name: {"artifact": rec.artifact, "sha256": rec.sha256}
                for name, rec in sorted(self.stages.items())
            },
        }
        canonical = json.dumps(snapshot, sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def record_stage(self, name: str, artifact: str | Path) -> StageRecord:
        """Checksum a finished artifact and write its provenance sidecar."""
        artifact = Path(artifact)
        record = StageRecord(
            artifact=str(artifact),
            sha256=file_checksum(artifact),
            completed_at=datetime.now(timezone.utc).isoformat(),
        )
        self.stages[name] = record
        sidecar = {
            "stage": name,
            "artifact": str(artifact),
            "sha256": record.sha256,
            "manifest_hash": self.manifest_hash(),
            "created_at": record.completed_at,
        }
        meta_path = artifact.with_name(artifact.name + ".meta.json")
        meta_path.write_text(
            json.dumps(sidecar, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        return record

    def save(self, directory: str | Path) -> Path:
        path = Path(directory) / MANIFEST_NAME
        payload = {
            "config": self.config_text,
            "seed": self.seed,
            "manifest_hash": self.manifest_hash(),
            "stages": {
                name: {
                    "artifact": rec.artifact,
                    "sha256": rec.sha256,
                    "completed_at": rec.completed_at,
                }
                for name, rec in sorted(self.stages.items())
            },
        }
        path.write_text(
            json.dumps(payload, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        return path

    @classmethod
    def load(cls, directory: str | Path) -> "RunManifest":
        path = Path(directory) / MANIFEST_NAME
        data = json.loads(path.read_text(encoding="utf-8"))
        manifest = cls(config_text=data["config"], seed=data["seed"])
        for name, rec in data.get("stages", {}).items():
            manifest.stages[name] = StageRecord(
                artifact=rec["artifact"],
                sha256=rec["sha256"],
                completed_at=rec["completed_at"],
            )
        return manifest

    @classmethod
    def load_or_create(
        cls, directory: str | Path, config_text: str, seed: int
    ) -> "RunManifest":
        """Continue the directory's manifest when config and seed match.

        A changed config or seed starts a fresh manifest: mixing stages
        produced under different settings would make the recorded
        provenance a lie.
        """
        path = Path(directory) / MANIFEST_NAME
        if path.exists():
            existing = cls.load(directory)
            if existing.config_text == config_text and existing.seed == seed:
                return existing
        return cls(config_text=config_text, seed=seed)


def file_checksum(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()
