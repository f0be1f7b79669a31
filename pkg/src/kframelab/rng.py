"""Deterministic random streams for generators and trial loops.

Streams use the Philox counter-based bit generator keyed through
``numpy.random.SeedSequence``, so the stream identified by a 64-bit seed
plus an index tuple is the same on every platform and independent of how
many other streams were drawn before it. Trial loops derive one stream
per (seed, trial index) pair and may therefore run in any order.
"""

import numpy as np

__all__ = ["stream", "derive_seed", "complex_normal"]


def stream(seed: int, *indices: int) -> np.random.Generator:
    """Generator for the stream addressed by ``seed`` and an index path."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(i) for i in indices))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed: int, *indices: int) -> int:
    """Collapse (seed, indices) into a single 64-bit seed for nested use."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(i) for i in indices))
    return int(ss.generate_state(1, np.uint64)[0])


def complex_normal(rng: np.random.Generator, *shape: int) -> np.ndarray:
    """Standard complex Gaussian draws (unit total variance per entry)."""
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) / np.sqrt(2.0)
