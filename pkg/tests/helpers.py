"""Shared hypothesis strategies and small oracles for the test suite."""

import math

import numpy as np
from hypothesis import strategies as st

from vortexmem.hilbert import BasisTag, HybridState, make_state

_amp = st.complex_numbers(max_magnitude=10.0, allow_nan=False, allow_infinity=False)


def amplitude_pairs():
    return st.tuples(_amp, _amp).filter(
        lambda c: abs(c[0]) ** 2 + abs(c[1]) ** 2 > 1e-6
    )


def states(tag: BasisTag = BasisTag.HYBRID_POINCARE):
    return amplitude_pairs().map(lambda c: make_state(c[0], c[1], tag))


def bloch_vectors(max_len: float = 1.0):
    return (
        st.tuples(
            st.floats(-1, 1, allow_nan=False),
            st.floats(-1, 1, allow_nan=False),
            st.floats(-1, 1, allow_nan=False),
        )
        .filter(lambda s: math.sqrt(s[0] ** 2 + s[1] ** 2 + s[2] ** 2) <= max_len)
    )


def haar_states(rng: np.random.Generator, n: int, tag: BasisTag) -> list[HybridState]:
    out = []
    for _ in range(n):
        c = rng.normal(size=2) + 1j * rng.normal(size=2)
        out.append(make_state(c[0], c[1], tag))
    return out


def fidelity(a: HybridState, b: HybridState) -> float:
    return abs(a.overlap(b)) ** 2
