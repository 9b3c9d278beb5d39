"""Named, reproducible random streams derived from one master seed.

Every source of randomness in the package (partitioning, label permutation,
synthetic data, per-replication resampling) draws from a stream keyed by the
master seed plus a name path, so sub-procedures can be replayed independently
of each other and of execution order.
"""

import hashlib

import numpy as np


def stream(master_seed: int, *names) -> np.random.Generator:
    """Return a Generator for the stream identified by ``names``.

    The name path is hashed with SHA-256 (stable across platforms and
    processes, unlike the builtin ``hash``) and folded into the seed sequence
    together with the master seed.
    """
    key = "/".join(str(n) for n in names)
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    words = [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]
    return np.random.default_rng(np.random.SeedSequence([int(master_seed)] + words))
