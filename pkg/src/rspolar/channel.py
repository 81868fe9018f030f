"""Channel models: BPSK over AWGN with Eb/N0 accounting, and the BEC.

Outputs are LLR vectors, convention ln P(y|0) - ln P(y|1) (positive favours
bit 0). Randomness comes from numpy's counter-based Philox generator keyed
by (seed, stream), so every draw is reproducible and disjoint streams can
run in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import LLR_MAX


@dataclass(frozen=True)
class ChannelParams:
    """AWGN (kind='awgn', uses ebn0_db and rate) or BEC (kind='bec', eps)."""

    kind: str = "awgn"
    ebn0_db: float = 0.0
    rate: float = 1.0
    eps: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("awgn", "bec"):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if not 0.0 < self.rate <= 1.0:
            raise ValueError("rate must be in (0, 1]")
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError("eps must be in [0, 1]")

    @property
    def noise_var(self) -> float:
        """sigma^2 = 1 / (2 R 10^(EbN0/10)) for BPSK with unit symbol energy."""
        return 1.0 / (2.0 * self.rate * 10.0 ** (self.ebn0_db / 10.0))


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Philox generator for a (seed, stream...) key; fully deterministic."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(stream))
    return np.random.Generator(np.random.Philox(ss))


def transmit(params: ChannelParams, bits, rng: np.random.Generator | None = None,
             stream: int = 0) -> np.ndarray:
    """Modulate bits (0 -> +1, 1 -> -1), pass through the channel, return LLRs.

    AWGN: y = x + sigma*z, LLR = 2y/sigma^2. BEC: LLR 0 with probability
    eps, else +-LLR_MAX matching the bit.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if rng is None:
        rng = rng_for(params.seed, stream)
    if params.kind == "awgn":
        var = params.noise_var
        y = (1.0 - 2.0 * bits.astype(np.float64)
             + np.sqrt(var) * rng.standard_normal(bits.shape))
        return 2.0 * y / var
    llr = np.where(bits == 0, LLR_MAX, -LLR_MAX)
    llr[rng.random(bits.shape) < params.eps] = 0.0
    return llr


def zero_codeword_llrs(params: ChannelParams, rows: int, n: int, seed: int,
                       stream: int) -> np.ndarray:
    """LLR matrix for `rows` independent all-zero transmissions.

    Used by genie-aided bit-channel estimation, which exploits channel
    symmetry and always sends the all-zero codeword.
    """
    rng = rng_for(seed, stream)
    if params.kind == "awgn":
        var = params.noise_var
        y = 1.0 + np.sqrt(var) * rng.standard_normal((rows, n))
        return 2.0 * y / var
    out = np.full((rows, n), LLR_MAX)
    out[rng.random((rows, n)) < params.eps] = 0.0
    return out
