"""Seeded random streams.

Every consumer of randomness gets its own Philox (counter-based) generator
keyed by ``(seed, purpose, index)``. Streams never share state, so results
do not depend on the order in which chains or cohorts are evaluated.
"""

import numpy as np

MCMC = 1
SIMULATION = 2
MONTE_CARLO = 3

_SEED_LIMIT = 2**64


def check_seed(seed) -> int:
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= int(seed) < _SEED_LIMIT:
        raise ValueError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return int(seed)


def stream(seed: int, purpose: int, index: int = 0) -> np.random.Generator:
    """Independent generator for one (seed, purpose, index) triple."""
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=(purpose, index))
    return np.random.Generator(np.random.Philox(ss))
