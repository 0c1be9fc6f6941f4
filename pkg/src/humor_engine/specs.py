"""Theory configurations.

A theory configuration names one humor theory and lists its proxy
features: (channel, calculator, params, hypothesis). Configs are YAML:

    theory:
      name: incongruity
    features:
      - channel: anger
        calculator: max_change
        hypothesis: Bursts of anger.
      - channel: optimism
        calculator: linear_fit
        params: {attr: slope}

Parsing fills calculator defaults so the stored spec is complete, and
derives a deterministic feature name for every entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Sequence

import yaml

from .calculators import normalize_params
from .errors import ConfigError

__all__ = [
    "ProxyFeatureSpec",
    "TheoryConfig",
    "feature_name",
    "theory_config_from_dict",
    "read_theory_config",
    "write_theory_config",
    "shipped_config_names",
    "load_shipped_config",
]

SHIPPED_CONFIGS = (
    "superiority",
    "incongruity",
    "relief",
    "surprise_disambiguation",
)


@dataclass(frozen=True)
class ProxyFeatureSpec:
    """One proxy feature: a calculator applied to one channel, with the
    qualitative hypothesis it quantifies."""

    channel: str
    calculator: str
    params: Mapping[str, object] = field(default_factory=dict)
    hypothesis: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.channel, str) or not self.channel:
            raise ConfigError("feature channel must be a non-empty string")
        if "__" in self.channel or "," in self.channel:
            raise ConfigError(
                f"channel {self.channel!r} may not contain '__' or ','"
            )
        if not isinstance(self.hypothesis, str):
            raise ConfigError(
                f"feature {self.channel!r}/{self.calculator!r}: hypothesis must be a string"
            )
        try:
            full = normalize_params(self.calculator, self.params)
        except ConfigError:
            raise
        except Exception as exc:
            raise ConfigError(str(exc)) from exc
        object.__setattr__(self, "params", full)

    @property
    def name(self) -> str:
        return feature_name(self)


def _format_param_value(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float) and value == int(value):
        return str(int(value))
    return str(value)


def feature_name(spec: ProxyFeatureSpec) -> str:
    """`<channel>__<calculator>[__<key>=<value>...]`, params in sorted key
    order, so the name is stable under param reordering."""
    parts = [spec.channel, spec.calculator]
    for key in sorted(spec.params):
        parts.append(f"{key}={_format_param_value(spec.params[key])}")
    return "__".join(parts)


@dataclass(frozen=True)
class TheoryConfig:
    name: str
    features: tuple[ProxyFeatureSpec, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name:
            raise ConfigError("theory name must be a non-empty string")
        if not self.features:
            raise ConfigError(f"theory {self.name!r}: no features declared")
        object.__setattr__(self, "features", tuple(self.features))
        seen: set[str] = set()
        for spec in self.features:
            fname = feature_name(spec)
            if fname in seen:
                raise ConfigError(
                    f"theory {self.name!r}: duplicate feature name {fname!r}"
                )
            seen.add(fname)

    def feature_names(self) -> list[str]:
        return [feature_name(spec) for spec in self.features]


def theory_config_from_dict(doc: object, source: str = "<config>") -> TheoryConfig:
    if not isinstance(doc, dict):
        raise ConfigError(f"{source}: top level must be a mapping")
    unknown = set(doc) - {"theory", "features"}
    if unknown:
        raise ConfigError(f"{source}: unknown top-level keys {sorted(unknown)}")
    theory = doc.get("theory")
    if not isinstance(theory, dict) or "name" not in theory:
        raise ConfigError(f"{source}: missing 'theory.name'")
    extra = set(theory) - {"name"}
    if extra:
        raise ConfigError(f"{source}: unknown keys under 'theory': {sorted(extra)}")
    entries = doc.get("features")
    if not isinstance(entries, list) or not entries:
        raise ConfigError(f"{source}: 'features' must be a non-empty list")
    specs: list[ProxyFeatureSpec] = []
    for idx, entry in enumerate(entries):
        where = f"{source}: features[{idx}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{where}: must be a mapping")
        unknown = set(entry) - {"channel", "calculator", "params", "hypothesis"}
        if unknown:
            raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
        for required in ("channel", "calculator"):
            if required not in entry:
                raise ConfigError(f"{where}: missing {required!r}")
        params = entry.get("params") or {}
        if not isinstance(params, dict):
            raise ConfigError(f"{where}: 'params' must be a mapping")
        try:
            specs.append(
                ProxyFeatureSpec(
                    channel=entry["channel"],
                    calculator=entry["calculator"],
                    params=params,
                    hypothesis=entry.get("hypothesis", "") or "",
                )
            )
        except ConfigError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    try:
        return TheoryConfig(name=theory["name"], features=tuple(specs))
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def read_theory_config(path: str) -> TheoryConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: invalid YAML ({exc})") from exc
    return theory_config_from_dict(doc, source=path)


def theory_config_to_dict(config: TheoryConfig) -> dict:
    features = []
    for spec in config.features:
        entry: dict[str, object] = {
            "channel": spec.channel,
            "calculator": spec.calculator,
        }
        if spec.params:
            entry["params"] = {k: spec.params[k] for k in sorted(spec.params)}
        if spec.hypothesis:
            entry["hypothesis"] = spec.hypothesis
        features.append(entry)
    return {"theory": {"name": config.name}, "features": features}


def write_theory_config(config: TheoryConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(
            theory_config_to_dict(config), fh, sort_keys=False, allow_unicode=True
        )


def shipped_config_names() -> tuple[str, ...]:
    return SHIPPED_CONFIGS


def load_shipped_config(name: str) -> TheoryConfig:
    """Load one of the bundled theory configurations by short name."""
    if name not in SHIPPED_CONFIGS:
        raise ConfigError(
            f"unknown shipped config {name!r}; available: "
            + ", ".join(SHIPPED_CONFIGS)
        )
    ref = resources.files("humor_engine").joinpath(f"configs/{name}.yaml")
    doc = yaml.safe_load(ref.read_text(encoding="utf-8"))
    return theory_config_from_dict(doc, source=f"configs/{name}.yaml")
