"""Seeded Philox streams.

Every random draw in the package comes from a stream addressed by
``(seed, purpose, *indices)``.  Streams with different addresses are
independent, so per-row or per-trial work can run in any order and still
reproduce the same output.
"""

import zlib

import numpy as np

# purpose tags; hashed so new ones never collide with existing addresses
WEIGHTS = "weights"
EDGES = "edges"
PAIRS = "pairs"
CENTERS = "centers"
TRIALS = "trials"


def _tag(purpose):
    return zlib.crc32(purpose.encode())


def stream(seed, purpose, *indices):
    """Return an independent ``numpy.random.Generator`` for the given address."""
    seq = np.random.SeedSequence(int(seed), spawn_key=(_tag(purpose), *map(int, indices)))
    return np.random.Generator(np.random.Philox(seq))


class RowStreams:
    """Cheap per-row generators sharing one Philox key.

    Row ``r`` gets its own block of the 256-bit counter space (the third
    counter word holds the row index), so rows never overlap as long as a
    single row draws fewer than 2**128 blocks.
    """

    def __init__(self, seed, purpose, *indices):
        seq = np.random.SeedSequence(int(seed), spawn_key=(_tag(purpose), *map(int, indices)))
        self._key = seq.generate_state(2, np.uint64)

    def __call__(self, row):
        counter = np.array([0, 0, int(row), 0], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=self._key, counter=counter))


def derive_seed(seed, *indices):
    """Deterministic 63-bit child seed, used for per-trial seeds in experiments."""
    seq = np.random.SeedSequence(int(seed), spawn_key=(_tag(TRIALS), *map(int, indices)))
    return int(seq.generate_state(1, np.uint64)[0] >> np.uint64(1))
