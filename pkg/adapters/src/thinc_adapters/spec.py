"""Tool descriptions: which scorers run, in which mode, onto which
channels.

Ten tool roles are supported. Seven run a classifier over every token
prefix (subsequence mode) and record per-class probabilities; three
score each token on its own (token mode): language-model probability of
the observed token, embedding-based ambiguity, and confidence in the top
part-of-speech tag. Model identifiers are `scheme://name` strings and
live in configuration, never in code, so checkpoints can be pinned or
swapped without a release.
"""

from __future__ import annotations

from dataclasses import dataclass

import yaml

from .errors import ToolConfigError

__all__ = [
    "AdapterSpec",
    "ROLE_TABLE",
    "list_tools",
    "spec_from_dict",
    "read_tools_config",
]

SUBSEQUENCE = "subsequence-based"
TOKEN = "token-based"

# role -> (mode, scored classes, reported channels)
# For binary classifiers only the positive class becomes a channel.
ROLE_TABLE: dict[str, tuple[str, tuple[str, ...], tuple[str, ...]]] = {
    "sentiment": (
        SUBSEQUENCE,
        ("negativity", "neutrality", "positivity"),
        ("negativity", "neutrality", "positivity"),
    ),
    "emotion": (
        SUBSEQUENCE,
        ("anger", "joy", "optimism", "sadness"),
        ("anger", "joy", "optimism", "sadness"),
    ),
    "offense": (SUBSEQUENCE, ("offense", "inoffensive"), ("offense",)),
    "subjectivity": (SUBSEQUENCE, ("subjectivity", "objectivity"), ("subjectivity",)),
    "hate": (SUBSEQUENCE, ("hate", "benign"), ("hate",)),
    "stance-attack": (SUBSEQUENCE, ("attack", "support"), ("attack",)),
    "adult-language": (SUBSEQUENCE, ("adult_language", "clean"), ("adult_language",)),
    "lm-token-probability": (TOKEN, (), ("lm_prob",)),
    "ambiguity": (TOKEN, (), ("ambiguity",)),
    "morphosyntactic-ambiguity": (TOKEN, (), ("morphosyntactic_ambiguity",)),
}


@dataclass(frozen=True)
class AdapterSpec:
    role: str
    mode: str = ""
    model: str = ""
    batch_size: int = 16

    def __post_init__(self) -> None:
        if self.role not in ROLE_TABLE:
            known = ", ".join(sorted(ROLE_TABLE))
            raise ToolConfigError(f"unknown tool role {self.role!r} (known: {known})")
        expected_mode = ROLE_TABLE[self.role][0]
        if self.mode == "":
            object.__setattr__(self, "mode", expected_mode)
        elif self.mode != expected_mode:
            raise ToolConfigError(
                f"role {self.role!r} is {expected_mode}, got mode {self.mode!r}"
            )
        if self.model == "":
            object.__setattr__(self, "model", f"toy://{self.role}")
        if "://" not in self.model:
            raise ToolConfigError(
                f"model identifier must look like scheme://name, got {self.model!r}"
            )
        if not isinstance(self.batch_size, int) or isinstance(self.batch_size, bool):
            raise ToolConfigError("batch_size must be an integer")
        if self.batch_size < 1:
            raise ToolConfigError("batch_size must be >= 1")

    @property
    def classes(self) -> tuple[str, ...]:
        return ROLE_TABLE[self.role][1]

    @property
    def channels(self) -> tuple[str, ...]:
        return ROLE_TABLE[self.role][2]


def list_tools() -> tuple[AdapterSpec, ...]:
    """Catalog of the ten supported tools with placeholder (offline)
    model identifiers. Real deployments override `model` per role in
    tools.yaml."""
    return tuple(AdapterSpec(role=role) for role in ROLE_TABLE)


_ALLOWED_KEYS = {"role", "mode", "model", "batch_size"}


def spec_from_dict(doc: object) -> AdapterSpec:
    if not isinstance(doc, dict):
        raise ToolConfigError(f"each tool entry must be a mapping, got {type(doc).__name__}")
    unknown = set(doc) - _ALLOWED_KEYS
    if unknown:
        raise ToolConfigError(f"unknown tool entry keys: {sorted(unknown)}")
    if "role" not in doc:
        raise ToolConfigError("tool entry is missing 'role'")
    return AdapterSpec(
        role=doc["role"],
        mode=doc.get("mode", ""),
        model=doc.get("model", ""),
        batch_size=doc.get("batch_size", 16),
    )


def read_tools_config(path: str) -> list[AdapterSpec]:
    """Parse tools.yaml: a mapping with a `tools` list of tool entries."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ToolConfigError(f"invalid YAML in {path}: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) != {"tools"}:
        raise ToolConfigError("tools config must be a mapping with a single 'tools' key")
    entries = doc["tools"]
    if not isinstance(entries, list) or not entries:
        raise ToolConfigError("'tools' must be a non-empty list")
    specs = [spec_from_dict(entry) for entry in entries]
    seen: set[str] = set()
    for spec in specs:
        if spec.role in seen:
            raise ToolConfigError(
                f"role {spec.role!r} appears twice; channels would collide"
            )
        seen.add(spec.role)
    return specs
