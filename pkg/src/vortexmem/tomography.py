"""Single-qubit state reconstruction from six-projector click counts.

Stokes components are read off basis-pair count ratios (immune to pairwise
efficiency drift), the density matrix is the linear inversion
rho = (I + s . tau)/2, and physicality is enforced by radial projection of
the Bloch vector onto the unit ball, which for this symmetric projector set
is the closest physical state in Frobenius norm.  Background subtraction
acts on counts, before any Stokes arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping

import numpy as np

from .hilbert import BlochVector, DensityMatrix, HybridState, conditional_fidelity, rho_of
from .photodetection import PROJECTOR_PAIRS, CountRecord

# sampled records carry integer clicks and stay integer after subtraction
_INT_TYPES = (int, np.integer)


class InsufficientCounts(ValueError):
    """A projector basis pair has zero total counts."""


@dataclass(frozen=True)
class StokesEstimate:
    s1: float
    s2: float
    s3: float
    total_counts: int


@dataclass(frozen=True)
class TomographyResult:
    rho: DensityMatrix
    stokes: StokesEstimate

    def fidelity_vs(self, target: HybridState) -> float:
        return conditional_fidelity(self.rho, target)


def background_subtract(c: CountRecord) -> CountRecord:
    """Remove the expected background clicks, clamping at zero."""
    corrected = max(0.0, c.clicks - c.bg_clicks_expected)
    if isinstance(c.clicks, _INT_TYPES):
        corrected = int(round(corrected))
    return replace(c, clicks=corrected, bg_clicks_expected=0.0)


def _by_projector(records: Iterable[CountRecord]) -> dict[str, CountRecord]:
    table = {}
    for r in records:
        if r.projector_id in table:
            raise ValueError(f"duplicate projector {r.projector_id!r}")
        table[r.projector_id] = r
    missing = [a for pair in PROJECTOR_PAIRS for a in pair if a not in table]
    if missing:
        raise ValueError(f"missing projectors: {missing}")
    return table


def stokes_from_counts(records: Iterable[CountRecord]) -> StokesEstimate:
    """Stokes vector from the three basis-pair count asymmetries."""
    table = _by_projector(records)
    comps = []
    total = 0.0
    for plus, minus in PROJECTOR_PAIRS:
        a, b = table[plus].clicks, table[minus].clicks
        if a + b == 0:
            raise InsufficientCounts(f"pair ({plus}, {minus}) has zero counts")
        comps.append((a - b) / (a + b))
        total += a + b
    return StokesEstimate(comps[0], comps[1], comps[2], int(round(total)))


def stokes_from_probabilities(probabilities: Mapping[str, float]) -> StokesEstimate:
    """Exact (infinite-trial) Stokes vector from projector probabilities."""
    comps = []
    for plus, minus in PROJECTOR_PAIRS:
        a, b = probabilities[plus], probabilities[minus]
        if a + b == 0:
            raise InsufficientCounts(f"pair ({plus}, {minus}) has zero probability")
        comps.append((a - b) / (a + b))
    return StokesEstimate(comps[0], comps[1], comps[2], 0)


def density_from_stokes(s: StokesEstimate) -> DensityMatrix:
    """Linear inversion with radial projection onto the Bloch ball."""
    vec = np.array([s.s1, s.s2, s.s3], dtype=float)
    length = float(np.linalg.norm(vec))
    if length > 1.0:
        vec = vec / length
    return rho_of(BlochVector(*vec))


def tomograph(records: Iterable[CountRecord], subtract_bg: bool = False) -> TomographyResult:
    """Reconstruct a physical density matrix from six count records."""
    records = list(records)
    if subtract_bg:
        records = [background_subtract(r) for r in records]
    stokes = stokes_from_counts(records)
    return TomographyResult(density_from_stokes(stokes), stokes)


def bootstrap_fidelity(records: Iterable[CountRecord], target: HybridState,
                       n_resamples: int = 200, seed: int = 0,
                       subtract_bg: bool = False) -> tuple[float, float]:
    """Shot-noise fidelity interval by parametric bootstrap over the counts.

    Each resample redraws every projector's clicks from
    Binomial(trials, clicks/trials) and re-runs the reconstruction.
    Returns (mean, standard deviation) of the resampled fidelities.
    """
    records = list(records)
    rng = np.random.default_rng(seed)
    fids = np.empty(n_resamples)
    for i in range(n_resamples):
        resampled = [
            replace(r, clicks=int(rng.binomial(r.trials, min(1.0, r.clicks / r.trials))))
            for r in records
        ]
        fids[i] = tomograph(resampled, subtract_bg=subtract_bg).fidelity_vs(target)
    return float(fids.mean()), float(fids.std())
