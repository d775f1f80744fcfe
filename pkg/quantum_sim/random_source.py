import hashlib
from dataclasses import dataclass, field

import numpy as np

SEED_MASK = (1 << 64) - 1


def stable_hash(label: str) -> int:
    """64-bit hash of a label, identical across interpreters and platforms"""

    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


@dataclass
class RandomSource:
    """
    Seeded sample stream.

    Philox is counter-based, so an identical seed yields an identical stream
    on every platform. All randomness in the package flows through one of these.
    """

    seed: int
    algorithm: str = "philox"
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        self.seed = int(self.seed) & SEED_MASK
        self.generator = np.random.Generator(np.random.Philox(self.seed))

    def derive(self, label: str) -> "RandomSource":
        """
        Child source for a named run, e.g. "maxcut/3/alpha_t-linear".
        Depends only on (seed, label), never on how much of this stream was consumed.
        """
        return RandomSource((self.seed + stable_hash(label)) & SEED_MASK)

    def draw_seed(self) -> int:
        """Integer seed for third-party samplers that take their own seed (networkx)"""
        return int(self.generator.integers(0, 2**31 - 1))
