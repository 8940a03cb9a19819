"""Sensing matrices, synthetic sparse piecewise-smooth signals and 1-bit measurements.

Randomness comes from numpy's PCG64 bit generator seeded through
``SeedSequence``. Each purpose (matrix, signal jitter, noise) draws from its own
spawned substream, so e.g. changing the noise level never perturbs the matrix.
Gaussian variates use numpy's ziggurat sampler (``Generator.standard_normal``).
"""
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SignalSpec",
    "make_rng",
    "gaussian_matrix",
    "generate_signal",
    "sign_vector",
    "measure",
]

# spawn keys for the per-purpose substreams
STREAM_MATRIX = 0
STREAM_SIGNAL = 1
STREAM_NOISE = 2


def make_rng(seed, *key):
    """Return a ``Generator`` for ``seed`` and an optional substream ``key``.

    ``make_rng(s, 0)`` and ``make_rng(s, 1)`` are statistically independent,
    and both are fully determined by ``s``.
    """
    seed = int(seed)
    if seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def gaussian_matrix(m, n, seed):
    """Dense ``m x n`` matrix with i.i.d. standard normal entries (C order)."""
    if m < 1 or n < 1:
        raise ValueError(f"matrix dimensions must be positive, got m={m}, n={n}")
    rng = make_rng(seed, STREAM_MATRIX)
    return rng.standard_normal((m, n))


@dataclass(frozen=True)
class SignalSpec:
    """Parameters of the two-level sparse piecewise-smooth test signal.

    Four blocks of length ``K // 4`` are placed at ``block_starts_B`` (level
    ``positive_level``) and ``block_starts_C`` (level ``negative_level``); each
    nonzero entry gets ``jitter_std`` times a standard normal added. Defaults
    reproduce the experimental signal (n=2000, K=100).
    """

    n: int = 2000
    K: int = 100
    positive_level: float = 2.0
    negative_level: float = -1.0
    jitter_std: float = 0.05
    block_starts_B: tuple = (100, 500)
    block_starts_C: tuple = (1000, 1500)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.K < 4 or self.K % 4:
            raise ValueError(f"K must be a positive multiple of 4, got {self.K}")
        if self.jitter_std < 0:
            raise ValueError(f"jitter_std must be >= 0, got {self.jitter_std}")
        object.__setattr__(self, "block_starts_B", tuple(int(i) for i in self.block_starts_B))
        object.__setattr__(self, "block_starts_C", tuple(int(i) for i in self.block_starts_C))
        if len(self.block_starts_B) != 2 or len(self.block_starts_C) != 2:
            raise ValueError("block_starts_B and block_starts_C must each hold two indices")
        taken = np.zeros(self.n, dtype=bool)
        for start in self.block_starts_B + self.block_starts_C:
            stop = start + self.block_len
            if start < 0 or stop > self.n:
                raise ValueError(f"block [{start}, {stop}) lies outside [0, {self.n})")
            if taken[start:stop].any():
                raise ValueError(f"block [{start}, {stop}) overlaps another block")
            taken[start:stop] = True

    @property
    def block_len(self):
        return self.K // 4

    def support(self, which="all"):
        """Sorted indices of the B blocks, the C blocks, or both."""
        starts = {
            "B": self.block_starts_B,
            "C": self.block_starts_C,
            "all": self.block_starts_B + self.block_starts_C,
        }[which]
        idx = np.concatenate([np.arange(s, s + self.block_len) for s in starts])
        return np.sort(idx)

    @classmethod
    def paper(cls, K=100, n=2000):
        return cls(n=n, K=K)


def generate_signal(spec, seed, return_norm=False):
    """Draw the unnormalized two-level signal and scale it to unit norm.

    With ``return_norm=True`` also return the norm of the unnormalized draw,
    so ``x * norm`` recovers it.
    """
    rng = make_rng(seed, STREAM_SIGNAL)
    xbar = np.zeros(spec.n)
    b, c = spec.support("B"), spec.support("C")
    # one draw per support entry, B blocks first then C blocks
    k = rng.standard_normal(b.size + c.size)
    xbar[b] = spec.positive_level + spec.jitter_std * k[: b.size]
    xbar[c] = spec.negative_level + spec.jitter_std * k[b.size :]
    nrm = np.linalg.norm(xbar)
    if nrm == 0:
        raise ValueError("signal spec produced an all-zero signal")
    x = xbar / nrm
    return (x, float(nrm)) if return_norm else x


def sign_vector(v):
    """Elementwise sign with ``sign(0) = -1``; returns float +1.0 / -1.0."""
    v = np.asarray(v, dtype=float)
    return np.where(v > 0, 1.0, -1.0)


def measure(A, x, sigma=0.0, seed=0):
    """Noisy 1-bit measurements ``sign(A x + w)`` with ``w ~ N(0, sigma^2 I)``.

    ``sigma`` is the noise standard deviation. With ``sigma == 0`` no noise is
    drawn and ``seed`` is irrelevant.
    """
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    if A.ndim != 2 or x.ndim != 1 or A.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, x has length {x.shape}")
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    z = A @ x
    if sigma > 0:
        z = z + sigma * make_rng(seed, STREAM_NOISE).standard_normal(z.shape[0])
    return sign_vector(z)
