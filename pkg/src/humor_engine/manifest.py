"""Run manifests: provenance records for every artifact-producing command.

A manifest captures the command, its resolved arguments, the SHA-256 of
every input and output file, the seed, the engine version, and wall
time. One manifest is written next to the primary output as
`<output>.manifest.json`.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import metadata

__all__ = ["RunManifest", "file_sha256", "engine_version", "manifest_path_for"]


def engine_version() -> str:
    try:
        return metadata.version("humor-engine")
    except metadata.PackageNotFoundError:
        return "unknown"


def file_sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def manifest_path_for(output_path: str) -> str:
    return output_path + ".manifest.json"


@dataclass
class RunManifest:
    command: str
    arguments: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)  # path -> sha256
    outputs: dict = field(default_factory=dict)  # path -> sha256
    seed: int | None = None
    wall_time_s: float | None = None
    version: str = ""

    def add_input(self, path: str) -> None:
        self.inputs[path] = file_sha256(path)

    def add_output(self, path: str) -> None:
        self.outputs[path] = file_sha256(path)

    def write(self, path: str) -> None:
        doc = {
            "command": self.command,
            "arguments": self.arguments,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "seed": self.seed,
            "wall_time_s": self.wall_time_s,
            "engine_version": self.version or engine_version(),
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True, indent=2)
            fh.write("\n")
