"""Shared fixtures: deterministic random series and corpora for the tests."""

from __future__ import annotations

import numpy as np
import pytest

from humor_engine import InstanceRecord, ProxyFeatureSpec, TheoryConfig


def random_series_battery(seed: int, count: int, max_len: int = 64):
    """A reproducible batch of random series: uniform values in [0, 1],
    lengths 1..max_len, plus a few adversarial shapes mixed in."""
    rng = np.random.default_rng(seed)
    batch = []
    for _ in range(count):
        n = int(rng.integers(1, max_len + 1))
        batch.append(rng.uniform(0.0, 1.0, n))
    # shapes that historically shake out edge cases
    batch.append(np.zeros(12))
    batch.append(np.full(7, 0.4))
    batch.append(np.linspace(0.0, 1.0, 30))
    batch.append(np.array([0.5]))
    batch.append(np.array([0.1, 0.9]))
    return batch


@pytest.fixture(scope="session")
def series_battery():
    return random_series_battery(seed=2024, count=300)


def tiny_config() -> TheoryConfig:
    return TheoryConfig(
        name="toy",
        features=(
            ProxyFeatureSpec(
                channel="anger",
                calculator="max_change",
                params={},
                hypothesis="a sudden burst",
            ),
            ProxyFeatureSpec(
                channel="anger",
                calculator="abs_energy",
                params={},
                hypothesis="overall intensity",
            ),
            ProxyFeatureSpec(
                channel="joy",
                calculator="linear_fit",
                params={"attr": "slope"},
                hypothesis="a rising mood",
            ),
        ),
    )


def tiny_corpus() -> list[InstanceRecord]:
    return [
        InstanceRecord(
            id="a",
            label=1,
            channels={"anger": (0.2, 0.2, 0.9, 0.1), "joy": (0.1, 0.4, 0.8)},
        ),
        InstanceRecord(
            id="b",
            label=0,
            channels={"anger": (0.3, 0.3, 0.3), "joy": (0.9, 0.5, 0.2)},
        ),
        InstanceRecord(id="c", label=None, channels={"joy": (0.5, 0.5)}),
    ]
