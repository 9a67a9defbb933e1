"""Deterministic pseudorandom bit source with named substreams.

Identical master seed and substream path always reproduce the same bit
sequence, and every substream meters how many bits it has handed out.
This replaces ideal uniform seed randomness for the sake of reproducible
tests; deployment-grade privacy amplification needs a physical
randomness source, since the information-theoretic guarantees hold only
for truly uniform seeds.
"""

from __future__ import annotations

import hashlib
import random

import numpy as np


class RandomStream:
    """Seeded bit stream.  Substreams derived by label are independent."""

    def __init__(self, master_seed: int | str | bytes, _path: str = ""):
        self.master_seed = master_seed
        self.path = _path
        material = f"{master_seed!r}|{_path}".encode()
        self._digest = hashlib.sha256(material).digest()
        self._rng = random.Random(int.from_bytes(self._digest, "big"))
        self.bits_consumed = 0

    def substream(self, label: str) -> "RandomStream":
        """A fresh stream keyed by (master seed, path, label)."""
        if "/" in label:
            raise ValueError("substream labels must not contain '/'")
        return RandomStream(self.master_seed, f"{self.path}/{label}")

    def getbits(self, nbits: int) -> int:
        """nbits uniform bits as an integer; meters consumption."""
        if nbits < 0:
            raise ValueError("bit count must be nonnegative")
        self.bits_consumed += nbits
        if nbits == 0:
            return 0
        return self._rng.getrandbits(nbits)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling."""
        if n < 1:
            raise ValueError("randbelow requires n >= 1")
        if n == 1:
            return 0
        nbits = (n - 1).bit_length()
        while True:
            v = self.getbits(nbits)
            if v < n:
                return v

    def numpy_rng(self) -> np.random.Generator:
        """NumPy generator derived from this stream's identity (not metered)."""
        return np.random.default_rng(list(self._digest))
