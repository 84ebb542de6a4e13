"""Saturation-episode detection and regime labels for fraction series.

A sample is saturated when the group-a fraction sits above ``high`` or below
``low``; an episode is a maximal run of at least ``min_samples`` saturated
samples. The run is labeled saturated when an episode reaches the final
sample and covers at least half the series, non_saturated when there are no
episodes, transition otherwise. Thresholds are pinned here so the labels are
testable; the underlying behavior is only described qualitatively.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SATURATED = "saturated"
TRANSITION = "transition"
NON_SATURATED = "non_saturated"


@dataclass(frozen=True)
class SaturationThresholds:
    high: float = 0.95
    low: float = 0.05
    min_samples: int = 50
    tail_coverage: float = 0.5


@dataclass
class RegimeClassification:
    regime: str
    episodes: list = field(default_factory=list)  # [(start, end)) sample index pairs


def saturation_episodes(
    fraction, thresholds: SaturationThresholds = SaturationThresholds()
) -> list:
    """Maximal runs of saturated samples, as half-open (start, end) pairs."""
    frac = np.asarray(fraction, dtype=np.float64)
    saturated = (frac > thresholds.high) | (frac < thresholds.low)
    episodes = []
    start = None
    for i, flag in enumerate(saturated):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            if i - start >= thresholds.min_samples:
                episodes.append((start, i))
            start = None
    if start is not None and frac.size - start >= thresholds.min_samples:
        episodes.append((start, frac.size))
    return episodes


def episode_mask(n: int, episodes) -> np.ndarray:
    """Boolean mask of samples covered by any episode."""
    mask = np.zeros(n, dtype=bool)
    for start, end in episodes:
        mask[start:end] = True
    return mask


def classify_regime(
    fraction, thresholds: SaturationThresholds = SaturationThresholds()
) -> RegimeClassification:
    """Label a fraction series saturated / transition / non_saturated."""
    frac = np.asarray(fraction, dtype=np.float64)
    if np.any((frac < 0.0) | (frac > 1.0)):
        raise ValueError("fraction series must lie in [0, 1]")
    episodes = saturation_episodes(frac, thresholds)
    if not episodes:
        return RegimeClassification(regime=NON_SATURATED, episodes=[])
    start, end = episodes[-1]
    covers_tail = end == frac.size
    long_enough = (end - start) >= thresholds.tail_coverage * frac.size
    if covers_tail and long_enough:
        return RegimeClassification(regime=SATURATED, episodes=episodes)
    return RegimeClassification(regime=TRANSITION, episodes=episodes)
