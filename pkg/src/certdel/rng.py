"""Seeded, platform-stable random streams.

Every randomized operation in the package takes an explicit
:class:`numpy.random.Generator`. Experiments derive one independent stream per
trial from a master seed, so results do not depend on execution order or on
the number of worker processes.
"""

import hashlib

import numpy as np

Rng = np.random.Generator


def make_rng(seed):
    """Return a PCG64 generator for an integer seed."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def _label_to_int(label):
    if isinstance(label, (int, np.integer)):
        return int(label)
    digest = hashlib.sha256(str(label).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def derive_rng(master_seed, *labels):
    """Child stream for ``(master_seed, *labels)``.

    Labels may be integers (trial indices) or strings (named sub-streams);
    strings are mapped to integers through SHA-256 so the derivation is
    stable across runs and platforms.
    """
    key = tuple(_label_to_int(lab) for lab in labels)
    ss = np.random.SeedSequence(int(master_seed), spawn_key=key)
    return np.random.Generator(np.random.PCG64(ss))


def trial_rng(master_seed, index):
    """Per-trial stream used by the experiment runners."""
    return derive_rng(master_seed, "trial", index)
