import numpy as np


def generator(seed, *keys):
    """Independent generator for the stream addressed by ``keys`` under ``seed``.

    Streams are split with ``SeedSequence`` spawn keys, so the draws of one
    replica never depend on how many other replicas exist or which thread
    runs them.
    """
    if isinstance(seed, np.random.Generator):
        if keys:
            raise TypeError("keys can only be combined with an integer seed")
        return seed
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(ss))
