"""Monte Carlo click statistics for weak coherent pulses behind projective
polarization analyzers.

The detector is a non-number-resolving threshold detector: a pulse with
Poissonian photon number of mean nbar, end-to-end survival s and analyzer
projection probability p clicks with probability
1 - (1 - bg) * exp(-nbar * s * p), where bg is an unpolarized background
click probability per detection window (dark counts plus control leakage).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .hilbert import BasisTag, HybridState, named_state

PROJECTOR_ORDER = ("H", "V", "D", "A", "R", "L")
PROJECTOR_PAIRS = (("H", "V"), ("D", "A"), ("R", "L"))

_ANALYZERS = {name: named_state(name) for name in PROJECTOR_ORDER}


class RangeError(ValueError):
    pass


@dataclass(frozen=True)
class SourceParams:
    nbar: float = 0.5     # mean photon number per pulse

    def __post_init__(self):
        if self.nbar < 0.0:
            raise ValueError("nbar must be >= 0")


@dataclass(frozen=True)
class CountRecord:
    # clicks are integers for sampled data; expectation-valued records from
    # the exact pipeline carry floats
    projector_id: str
    clicks: float
    trials: int
    bg_clicks_expected: float = 0.0

    def __post_init__(self):
        if self.projector_id not in PROJECTOR_ORDER:
            raise ValueError(f"unknown projector {self.projector_id!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.clicks < 0 or self.clicks > self.trials:
            raise ValueError("clicks must lie in [0, trials]")


def click_probability(nbar: float, survival: float, proj_prob: float, bg: float) -> float:
    if not (math.isfinite(nbar) and nbar >= 0.0):
        raise RangeError(f"nbar {nbar} out of range")
    if not 0.0 <= survival <= 1.0:
        raise RangeError(f"survival {survival} outside [0, 1]")
    if not 0.0 <= proj_prob <= 1.0:
        raise RangeError(f"proj_prob {proj_prob} outside [0, 1]")
    if not 0.0 <= bg < 1.0:
        raise RangeError(f"bg {bg} outside [0, 1)")
    return 1.0 - (1.0 - bg) * math.exp(-nbar * survival * proj_prob)


def projection_probabilities(psi: HybridState) -> dict[str, float]:
    """Probabilities of the six analyzer settings H, V, D, A, R, L."""
    if psi.basis_tag is not BasisTag.POLARIZATION:
        raise ValueError("projection_probabilities expects a polarization state")
    return {
        name: float(abs(_ANALYZERS[name].overlap(psi)) ** 2)
        for name in PROJECTOR_ORDER
    }


def click_probabilities(psi: HybridState, nbar: float, survival: float,
                        bg: float) -> dict[str, float]:
    """Per-projector click probabilities for the full detection model."""
    proj = projection_probabilities(psi)
    return {k: click_probability(nbar, survival, p, bg) for k, p in proj.items()}


def simulate_counts(probabilities: Mapping[str, float], trials: int, seed: int,
                    bg: float = 0.0) -> list[CountRecord]:
    """Binomial click counts per projector from a seeded generator.

    Projectors are drawn in the canonical H, V, D, A, R, L order so that a
    given (probabilities, trials, seed) triple is bit-reproducible.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    records = []
    for name in PROJECTOR_ORDER:
        if name not in probabilities:
            continue
        p = min(1.0, max(0.0, probabilities[name]))  # guard float round-off
        clicks = int(rng.binomial(trials, p))
        records.append(CountRecord(name, clicks, trials, bg * trials))
    return records


def expected_counts(probabilities: Mapping[str, float], trials: int = 1,
                    bg: float = 0.0) -> list[CountRecord]:
    """Noise-free expectation-valued records (float clicks), for exact
    infinite-trial tomography."""
    return [
        CountRecord(name, probabilities[name] * trials, trials, bg * trials)
        for name in PROJECTOR_ORDER
        if name in probabilities
    ]


def snr_of(nbar: float, survival: float, bg: float) -> float:
    """Signal-to-noise ratio (p_signal - p_bg)/p_bg at the maximal projector."""
    if bg <= 0.0:
        return math.inf
    return (1.0 - bg) * (1.0 - math.exp(-nbar * survival)) / bg


def calibrate_background(nbar: float, survival: float, snr: float) -> float:
    """Background click probability per window that realizes a target SNR."""
    if snr <= 0.0:
        raise RangeError("target SNR must be positive")
    sig = 1.0 - math.exp(-nbar * survival)
    return sig / (snr + sig)


def snr_for_raw_fidelity(f_raw: float, state_fidelity: float = 1.0) -> float:
    """SNR at which the expected raw conditional fidelity equals f_raw.

    With unpolarized background, the aligned Stokes component shrinks to
    s_true * R/(R+2), so F_raw = (1 + (2*state_fidelity - 1) * R/(R+2))/2.
    """
    s_true = 2.0 * state_fidelity - 1.0
    s_need = 2.0 * f_raw - 1.0
    if not 0.0 < s_need < s_true:
        raise RangeError("raw fidelity target incompatible with state fidelity")
    return 2.0 * s_need / (s_true - s_need)
