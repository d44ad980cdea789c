"""Run manifests: reproducibility records written next to data outputs.

Every command that fills an output directory leaves exactly one
``manifest.json`` there, echoing the full configuration and seed plus
SHA-256 digests of the data files.  Two runs whose manifests agree on
command, configuration, and seed produce byte-identical data files; the
manifest itself carries timestamps and is the only non-reproducible
output.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any

from .design import atomic_write_text

__all__ = ["RunManifest", "sha256_file", "write_manifest"]

MANIFEST_NAME = "manifest.json"


def sha256_file(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    """Configuration echo plus file digests for one command invocation."""

    command: str
    config: dict[str, Any]
    seed: int | None
    version: str
    started: str = field(default_factory=_utc_now)
    finished: str = ""
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)

    def add_input(self, path: str | os.PathLike) -> None:
        self.inputs[os.path.basename(os.fspath(path))] = sha256_file(path)

    def add_output(self, path: str | os.PathLike) -> None:
        self.outputs[os.path.basename(os.fspath(path))] = sha256_file(path)

    def to_json(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "version": self.version,
            "started": self.started,
            "finished": self.finished,
            "inputs": self.inputs,
            "outputs": self.outputs,
        }


def write_manifest(manifest: RunManifest, out_dir: str | os.PathLike) -> str:
    """Stamp the end time and write ``manifest.json`` into ``out_dir``."""
    manifest.finished = _utc_now()
    path = os.path.join(os.fspath(out_dir), MANIFEST_NAME)
    atomic_write_text(path, json.dumps(manifest.to_json(), indent=2, sort_keys=True) + "\n")
    return path
