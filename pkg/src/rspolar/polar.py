"""Binary polar code built on the 2x2 kernel with bit-reversal ordering.

Provides the transform, encoding with frozen positions, LLR-domain
successive-cancellation decoding with external bit forcing, incremental
span decoding with rewind/replay (for concatenated feedback), the 2^t-path
symbol-probability extension, and bit-channel reliability estimation
(genie-aided Monte Carlo on any channel; exact recursion on the BEC).

The SC decoder processes input positions in natural index order. Channel
LLRs follow the sign convention ln P(y|0) - ln P(y|1); decision ties
(LLR exactly 0) resolve to bit 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ._backend import LLR_MAX, impl as _k
from .channel import ChannelParams, zero_codeword_llrs

__all__ = [
    "LLR_MAX", "PolarCodeSpec", "ScState", "SymbolLikelihoods",
    "bit_reversal_permutation", "polar_transform", "polar_encode",
    "select_frozen", "sc_decode", "sc_decode_span", "resume_with",
    "sc_symbol_paths", "estimate_bitchannels_bec", "estimate_bitchannels_mc",
]


def _check_power_of_two(n: int) -> int:
    if n < 2 or n & (n - 1):
        raise ValueError(f"block length must be a power of 2 >= 2, got {n}")
    return n.bit_length() - 1


def bit_reversal_permutation(n: int) -> np.ndarray:
    stages = _check_power_of_two(n)
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(stages):
        rev |= ((idx >> b) & 1) << (stages - 1 - b)
    return rev


def undo_log_capacity(n: int, stages: int) -> int:
    # decoding any range logs at most 2 entries per position plus the
    # partial-sum propagation writes, which total n*stages/2 pairs over
    # a whole block; n*(stages+2) bounds it, kept with slack
    return n * (stages + 4) + 64


def polar_transform(bits) -> np.ndarray:
    """Apply the n log n butterfly of the 2x2 kernel, bit-reversal ordered.

    Self-inverse over GF(2): transform(transform(x)) == x.
    """
    u = np.array(bits, dtype=np.uint8)
    n = u.shape[-1]
    _check_power_of_two(n)
    idx = np.arange(n)
    d = 1
    while d < n:
        lo = idx[(idx & d) == 0]
        u[..., lo] ^= u[..., lo + d]
        d <<= 1
    return u[..., bit_reversal_permutation(n)]


@dataclass(frozen=True)
class PolarCodeSpec:
    """Inner code: length n, frozen mask, and per-bit-channel reliabilities.

    reliabilities[i], when present, is the estimated probability of a raw
    SC decision error at position i given correct prior decisions.
    """

    n: int
    k: int
    frozen_mask: np.ndarray
    info_positions: np.ndarray
    reliabilities: np.ndarray | None = None

    def __post_init__(self):
        stages = _check_power_of_two(self.n)
        frozen = np.asarray(self.frozen_mask, dtype=np.uint8)
        info = np.asarray(self.info_positions, dtype=np.int64)
        if frozen.shape != (self.n,):
            raise ValueError("frozen_mask must have length n")
        if int(frozen.sum()) != self.n - self.k:
            raise ValueError("popcount(frozen_mask) must equal n - k")
        if (len(info) != self.k or np.any(np.diff(info) <= 0)
                or np.any(frozen[info])):
            raise ValueError("info_positions inconsistent with frozen_mask")
        rel = self.reliabilities
        if rel is not None:
            rel = np.asarray(rel, dtype=np.float64)
            if rel.shape != (self.n,) or rel.min() < 0 or rel.max() > 1:
                raise ValueError("reliabilities must be n values in [0, 1]")
            rel.setflags(write=False)
        frozen.setflags(write=False)
        info.setflags(write=False)
        object.__setattr__(self, "frozen_mask", frozen)
        object.__setattr__(self, "info_positions", info)
        object.__setattr__(self, "reliabilities", rel)
        object.__setattr__(self, "_stages", stages)
        object.__setattr__(self, "_bitrev", bit_reversal_permutation(self.n))

    @classmethod
    def from_info_positions(cls, n: int, info_positions,
                            reliabilities=None) -> "PolarCodeSpec":
        info = np.array(sorted(int(i) for i in info_positions), dtype=np.int64)
        frozen = np.ones(n, dtype=np.uint8)
        frozen[info] = 0
        return cls(n=n, k=len(info), frozen_mask=frozen, info_positions=info,
                   reliabilities=reliabilities)

    @property
    def rate(self) -> float:
        return self.k / self.n


def select_frozen(reliabilities, k: int) -> PolarCodeSpec:
    """Freeze all but the k most reliable positions.

    Info set = indices of the k smallest error probabilities, ties broken
    by smaller index, sorted ascending.
    """
    rel = np.asarray(reliabilities, dtype=np.float64)
    n = len(rel)
    if not 0 < k <= n:
        raise ValueError(f"k must be in (0, {n}], got {k}")
    order = np.lexsort((np.arange(n), rel))
    info = np.sort(order[:k])
    return PolarCodeSpec.from_info_positions(n, info, reliabilities=rel)


def polar_encode(spec: PolarCodeSpec, info) -> np.ndarray:
    info = np.asarray(info, dtype=np.uint8)
    if info.shape != (spec.k,):
        raise ValueError(f"info must have length {spec.k}")
    u = np.zeros(spec.n, dtype=np.uint8)
    u[spec.info_positions] = info
    return polar_transform(u)


# ---------------------------------------------------------------------------
# successive-cancellation engine


@dataclass
class ScState:
    """Mutable SC decoder state for one polar block (single-owner).

    Carries the LLR and partial-sum lattices plus an undo log covering the
    most recent span, so feedback from an outer decoder can rewind and
    replay corrected bits.
    """

    spec: PolarCodeSpec
    minsum: bool
    lam: np.ndarray
    bits: np.ndarray
    dec: np.ndarray
    pos: int = 0
    info_done: int = 0
    log_len: int = 0
    span_start: int = -1
    span_end: int = -1
    span_info_lo: int = -1
    _fmask: np.ndarray = field(default=None, repr=False)
    _fbits: np.ndarray = field(default=None, repr=False)
    _log_lev: np.ndarray = field(default=None, repr=False)
    _log_col: np.ndarray = field(default=None, repr=False)
    _log_old: np.ndarray = field(default=None, repr=False)

    @classmethod
    def begin(cls, spec: PolarCodeSpec, llrs, minsum: bool = False) -> "ScState":
        llrs = np.asarray(llrs, dtype=np.float64)
        if llrs.shape != (spec.n,):
            raise ValueError(f"llrs must have length {spec.n}")
        if not np.all(np.isfinite(llrs)):
            raise ValueError("llrs must be finite (use +-LLR_MAX for known bits)")
        stages = spec._stages
        lam = np.zeros((stages + 1, spec.n))
        lam[stages] = llrs[spec._bitrev]
        cap = undo_log_capacity(spec.n, stages)
        return cls(spec=spec, minsum=minsum, lam=lam,
                   bits=np.zeros((stages + 1, spec.n), dtype=np.uint8),
                   dec=np.zeros(spec.n, dtype=np.uint8),
                   _fmask=np.zeros(spec.n, dtype=np.uint8),
                   _fbits=np.zeros(spec.n, dtype=np.uint8),
                   _log_lev=np.zeros(cap, dtype=np.int32),
                   _log_col=np.zeros(cap, dtype=np.int32),
                   _log_old=np.zeros(cap, dtype=np.uint8))

    def clone(self) -> "ScState":
        c = ScState(spec=self.spec, minsum=self.minsum, lam=self.lam.copy(),
                    bits=self.bits.copy(), dec=self.dec.copy(), pos=self.pos,
                    info_done=self.info_done, log_len=self.log_len,
                    span_start=self.span_start, span_end=self.span_end,
                    span_info_lo=self.span_info_lo,
                    _fmask=self._fmask.copy(), _fbits=self._fbits.copy(),
                    _log_lev=self._log_lev.copy(), _log_col=self._log_col.copy(),
                    _log_old=self._log_old.copy())
        return c

    @property
    def next_bit(self) -> int:
        return self.pos

    @property
    def decisions(self) -> np.ndarray:
        return self.dec[:self.pos].copy()

    def _decode_to(self, stop: int, logged: bool) -> np.ndarray:
        out = np.empty(stop - self.pos)
        self.log_len = _k.sc_decode_range(
            self.lam, self.bits, self.dec, self.spec.frozen_mask,
            self._fmask, self._fbits, self.pos, stop, out, self.minsum,
            self._log_lev, self._log_col, self._log_old,
            self.log_len, logged)
        return out


def sc_decode(spec: PolarCodeSpec, llrs, forced: Mapping[int, int] | None = None,
              minsum: bool = False):
    """One-shot SC decode.

    forced maps positions to bits decided regardless of LLR (overriding
    the frozen rule too). Returns (info_bits, info_llrs, state) where
    info_llrs are the decision LLRs at the info positions.
    """
    state = ScState.begin(spec, llrs, minsum=minsum)
    stop = int(spec.info_positions[-1]) + 1
    if forced:
        for p, b in forced.items():
            if not 0 <= p < spec.n:
                raise ValueError(f"forced position {p} out of range")
            state._fmask[p] = 1
            state._fbits[p] = 1 if b else 0
        stop = max(stop, max(forced) + 1)
    out = state._decode_to(stop, logged=False)
    state.pos = stop
    state.info_done = spec.k if stop > spec.info_positions[-1] else int(
        np.searchsorted(spec.info_positions, stop))
    info_bits = state.dec[spec.info_positions].astype(np.uint8)
    info_llrs = out[spec.info_positions[spec.info_positions < stop]]
    state._fmask[:] = 0
    return info_bits, info_llrs, state


def sc_decode_span(state: ScState, count: int):
    """Decode the next `count` info positions (frozen ones auto-decided).

    Returns (bits, llrs, state); the state resumes exactly where decoding
    stopped and remembers the span for resume_with / rewind.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    spec = state.spec
    if state.info_done + count > spec.k:
        raise ValueError("span exceeds remaining info positions")
    info_slice = spec.info_positions[state.info_done:state.info_done + count]
    stop = int(info_slice[-1]) + 1
    start = state.pos
    state.log_len = 0
    out = state._decode_to(stop, logged=True)
    state.span_start = start
    state.span_end = stop
    state.span_info_lo = state.info_done
    state.pos = stop
    state.info_done += count
    bits = state.dec[info_slice].astype(np.uint8)
    llrs = out[info_slice - start]
    return bits, llrs, state


def resume_with(state: ScState, corrected_bits) -> ScState:
    """Overwrite the last span's decisions with corrected bits.

    Partial sums are recomputed as if the SC decoder had decided
    corrected_bits; a no-op when they match the span's own decisions.
    """
    spec = state.spec
    if state.span_start < 0 or state.pos != state.span_end:
        raise ValueError("no span to resume (decode a span first)")
    corrected = np.asarray(corrected_bits, dtype=np.uint8)
    ninfo = state.info_done - state.span_info_lo
    if corrected.shape != (ninfo,):
        raise ValueError(f"expected {ninfo} corrected bits")
    info_slice = spec.info_positions[state.span_info_lo:state.info_done]
    if np.array_equal(state.dec[info_slice], corrected):
        return state
    _k.sc_rewind(state.bits, state.dec, state._log_lev, state._log_col,
                 state._log_old, 0, state.log_len)
    state.log_len = 0
    state._fmask[info_slice] = 1
    state._fbits[info_slice] = corrected
    save_pos = state.pos
    state.pos = state.span_start
    state._decode_to(state.span_end, logged=True)
    state.pos = save_pos
    state._fmask[info_slice] = 0
    return state


@dataclass
class SymbolLikelihoods:
    """Posterior over the 2^t candidate symbols of the next t info bits.

    probs sums to 1; path_llrs[s] holds the t info decision LLRs along
    pattern s (bit d of s = the d-th info bit, little-endian). select(s)
    advances the parent state along path s by replaying it.
    """

    state: ScState
    span_start: int
    span_end: int
    info_lo: int
    nbits: int
    probs: np.ndarray
    path_llrs: np.ndarray

    def select(self, symbol: int) -> ScState:
        st = self.state
        if st.pos != self.span_start:
            raise ValueError("state moved since sc_symbol_paths")
        if not 0 <= symbol < (1 << self.nbits):
            raise ValueError("symbol out of range")
        spec = st.spec
        info_slice = spec.info_positions[self.info_lo:self.info_lo + self.nbits]
        pattern = (symbol >> np.arange(self.nbits)) & 1
        st.log_len = 0
        st._fmask[info_slice] = 1
        st._fbits[info_slice] = pattern
        st._decode_to(self.span_end, logged=True)
        st._fmask[info_slice] = 0
        st.span_start = self.span_start
        st.span_end = self.span_end
        st.span_info_lo = self.info_lo
        st.pos = self.span_end
        st.info_done = self.info_lo + self.nbits
        return st


def softmax_seq(logq: np.ndarray) -> np.ndarray:
    """Softmax with strictly sequential summation (backend parity)."""
    mx = logq[0]
    for v in logq[1:]:
        if v > mx:
            mx = v
    p = np.empty_like(logq)
    tot = 0.0
    for i in range(len(logq)):
        p[i] = np.exp(logq[i] - mx)
        tot += p[i]
    for i in range(len(logq)):
        p[i] /= tot
    return p


def sc_symbol_paths(state: ScState, t: int) -> SymbolLikelihoods:
    """Probabilities of all 2^t symbols for the next t info bits.

    Walks every path through the span (frozen bits between the info bits
    fixed at 0, their likelihood factors included), saving the LLRs
    computed along each path. The state itself is left at the span start;
    select() resumes it along the chosen path.
    """
    spec = state.spec
    if t < 1:
        raise ValueError("t must be >= 1")
    if state.info_done + t > spec.k:
        raise ValueError("fewer than t info positions remain")
    logq = np.empty(1 << t)
    pathllr = np.empty((1 << t, t))
    end = _k.sc_symbol_dfs(state.lam, state.bits, state.dec,
                           spec.frozen_mask, state.pos, t, state.minsum,
                           logq, pathllr, state._log_lev, state._log_col,
                           state._log_old)
    return SymbolLikelihoods(state=state, span_start=state.pos, span_end=end,
                             info_lo=state.info_done, nbits=t,
                             probs=softmax_seq(logq), path_llrs=pathllr)


# ---------------------------------------------------------------------------
# bit-channel reliability estimation


def estimate_bitchannels_bec(n: int, eps: float) -> np.ndarray:
    """Exact bit-channel erasure probabilities on BEC(eps).

    One splitting step per stage, z -> (2z - z^2, z^2) interleaved so the
    result is indexed in the SC decoder's natural input order.
    """
    _check_power_of_two(n)
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must be in [0, 1]")
    z = np.array([eps])
    while len(z) < n:
        nxt = np.empty(2 * len(z))
        nxt[0::2] = 2.0 * z - z * z
        nxt[1::2] = z * z
        z = nxt
    return z


def estimate_bitchannels_mc(n: int, channel: ChannelParams, trials: int,
                            seed: int, chunk: int = 2048) -> np.ndarray:
    """Genie-aided Monte Carlo estimate of per-position decision error.

    All-zero codewords are transmitted (channel symmetry); every decision
    is recorded raw and then corrected to the true bit before decoding
    continues. A decision LLR of exactly 0 counts as an error: the bit
    channel carried no information there, which on the BEC makes the
    estimate agree with the erasure-probability recursion. Deterministic
    given (channel, trials, seed).
    """
    stages = _check_power_of_two(n)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rev = bit_reversal_permutation(n)
    counts = np.zeros(n, dtype=np.int64)
    lam = np.zeros((stages + 1, n))
    done = 0
    stream = 0
    while done < trials:
        rows = min(chunk, trials - done)
        llr = zero_codeword_llrs(channel, rows, n, seed, stream)
        _k.genie_chunk(np.ascontiguousarray(llr[:, rev]), counts, lam, False)
        done += rows
        stream += 1
    return counts / trials
