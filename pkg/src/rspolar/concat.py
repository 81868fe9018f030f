"""The interleaved RS-polar concatenated scheme.

Symbols of r outer Reed-Solomon codewords are interleaved across m inner
polar codewords: the j-th polar block carries symbol j of every outer
code, so outer code i protects info-bit group [i*t, (i+1)*t) of every
block (SC decoding order). Provides construction (uniform and
rate-adaptive), encoding, the serial baseline decoder, the successive
decoders (hard / GMD / approximate-ML / exact-ML), and the closed-form
bound calculators.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from math import comb, exp, log, log1p

import numpy as np

from ._backend import HAS_FRAME_KERNELS, impl as _k
from .gf import GFContext
from .polar import (PolarCodeSpec, ScState, bit_reversal_permutation,
                    polar_transform, sc_decode, sc_decode_span,
                    sc_symbol_paths, select_frozen, softmax_seq, resume_with,
                    undo_log_capacity)
from .rs import RsCodeSpec, rs_decode, rs_gmd_list

__all__ = [
    "ConcatSpec", "ConcatDecodeResult", "DecodeMode", "concat_encode",
    "decode_serial", "decode_successive", "design_rate_adaptive",
    "design_target_rate", "DesignResult", "fep_bound", "frame_error_bound",
    "frame_error_bound_log2", "asymptotic_params", "AsymptoticParams",
    "symbol_reliability_from_llrs", "binomial_tail",
]

_NEG_INF = -1.0e300  # sentinel for log(0) keeping backend float parity


class DecodeMode(str, enum.Enum):
    SERIAL = "serial"
    SUCCESSIVE_HARD = "successive_hard"
    GMD = "gmd"
    GMD_AML = "gmd_aml"
    GMD_EML = "gmd_eml"

    @classmethod
    def of(cls, mode) -> "DecodeMode":
        return mode if isinstance(mode, cls) else cls(str(mode))


# kernel-side mode codes
_MODE_CODE = {DecodeMode.SERIAL: 0, DecodeMode.SUCCESSIVE_HARD: 1,
              DecodeMode.GMD: 2, DecodeMode.GMD_AML: 3, DecodeMode.GMD_EML: 4}

FORMAT_VERSION = 1


@dataclass(frozen=True)
class ConcatSpec:
    """Full scheme: inner polar code, field, m inner blocks, outer radii.

    taus[i] is the error-correction radius of the outer code protecting
    info-bit group i; r = k/t outer codes in total. Frame length N = n*m.
    """

    polar: PolarCodeSpec
    ctx: GFContext
    m: int
    taus: tuple
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = self.ctx.t
        if self.polar.k % t:
            raise ValueError(f"t={t} must divide k={self.polar.k}")
        if not 1 <= self.m <= self.ctx.q - 1:
            raise ValueError(f"m must be in [1, {self.ctx.q - 1}]")
        taus = tuple(int(x) for x in self.taus)
        if len(taus) != self.polar.k // t:
            raise ValueError(f"need r = k/t = {self.polar.k // t} radii")
        for tau in taus:
            if not 0 <= tau <= (self.m - 1) // 2:
                raise ValueError(f"tau {tau} out of [0, {(self.m - 1) // 2}]")
        object.__setattr__(self, "taus", taus)

    @property
    def t(self) -> int:
        return self.ctx.t

    @property
    def r(self) -> int:
        return self.polar.k // self.ctx.t

    @property
    def n(self) -> int:
        return self.polar.n

    @property
    def frame_len(self) -> int:
        return self.polar.n * self.m

    @cached_property
    def outer(self) -> tuple:
        return tuple(RsCodeSpec(self.ctx, self.m, tau) for tau in self.taus)

    @cached_property
    def kappas(self) -> tuple:
        return tuple(self.m - 2 * tau for tau in self.taus)

    @property
    def payload_bits(self) -> int:
        return self.t * sum(self.kappas)

    @property
    def total_rate(self) -> float:
        return self.payload_bits / self.frame_len

    def symbol_group(self, i: int) -> np.ndarray:
        """Info positions carrying outer code i's symbol in every block."""
        t = self.t
        return self.polar.info_positions[i * t:(i + 1) * t]

    @cached_property
    def _pack(self):
        return _SpecPack(self)

    @cached_property
    def _ws(self):
        # one reusable decode workspace per process (decoding is
        # single-threaded within a process; sweeps parallelize by process)
        return _FrameWorkspace(self._pack)

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        d = {
            "format_version": FORMAT_VERSION,
            "scheme": "concat",
            "n": self.n,
            "k": self.polar.k,
            "t": self.t,
            "m": self.m,
            "prim_poly": self.ctx.prim_poly,
            "frozen_positions": np.flatnonzero(self.polar.frozen_mask).tolist(),
            "taus": list(self.taus),
            "design": dict(self.meta),
        }
        if self.polar.reliabilities is not None:
            d["reliabilities"] = self.polar.reliabilities.tolist()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, d: dict) -> "ConcatSpec":
        if d.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported format_version {d.get('format_version')}")
        if d.get("scheme") != "concat":
            raise ValueError(f"not a concat spec: scheme={d.get('scheme')!r}")
        n = int(d["n"])
        frozen = np.zeros(n, dtype=np.uint8)
        frozen[np.asarray(d["frozen_positions"], dtype=np.int64)] = 1
        info = np.flatnonzero(frozen == 0)
        rel = d.get("reliabilities")
        polar = PolarCodeSpec(n=n, k=int(d["k"]), frozen_mask=frozen,
                              info_positions=info, reliabilities=rel)
        ctx = GFContext(int(d["t"]), int(d["prim_poly"]))
        return cls(polar=polar, ctx=ctx, m=int(d["m"]),
                   taus=tuple(d["taus"]), meta=dict(d.get("design", {})))

    @classmethod
    def from_json(cls, text: str) -> "ConcatSpec":
        return cls.from_json_dict(json.loads(text))


class _SpecPack:
    """Flat array bundle handed to the compiled frame kernels."""

    def __init__(self, spec: ConcatSpec):
        p = spec.polar
        self.n = p.n
        self.k = p.k
        self.t = spec.t
        self.m = spec.m
        self.r = spec.r
        self.stages = p._stages
        self.q = spec.ctx.q
        self.payload_bits = spec.payload_bits
        self.frozen = p.frozen_mask
        self.info_pos = p.info_positions.astype(np.int32)
        self.bitrev = bit_reversal_permutation(p.n).astype(np.int32)
        self.taus = np.asarray(spec.taus, dtype=np.int32)
        self.kappas = np.asarray(spec.kappas, dtype=np.int32)
        self.sym_off = np.concatenate([[0], np.cumsum(self.kappas)]).astype(np.int32)
        self.logt = spec.ctx.log_table
        self.expt = spec.ctx.antilog_table
        pm_off = [0]
        blocks = []
        for o in spec.outer:
            pm = o.parity_matrix
            blocks.append(pm.ravel())
            pm_off.append(pm_off[-1] + pm.size)
        self.pmat = (np.concatenate(blocks).astype(np.int32) if blocks
                     else np.zeros(0, dtype=np.int32))
        self.pmat_off = np.asarray(pm_off, dtype=np.int32)
        # position one past the last info bit of each stage's span
        ends = [0]
        for i in range(spec.r):
            ends.append(int(p.info_positions[(i + 1) * spec.t - 1]) + 1)
        self.span_end = np.asarray(ends, dtype=np.int32)


class _FrameWorkspace:
    """Reusable decode scratch for one frame (compiled kernel path)."""

    def __init__(self, pack: _SpecPack):
        m, n, st, t = pack.m, pack.n, pack.stages, pack.t
        cap = undo_log_capacity(n, st)
        self.lam = np.zeros((m, st + 1, n))
        self.bits = np.zeros((m, st + 1, n), dtype=np.uint8)
        self.dec = np.zeros((m, n), dtype=np.uint8)
        self.log_lev = np.zeros((m, cap), dtype=np.int32)
        self.log_col = np.zeros((m, cap), dtype=np.int32)
        self.log_old = np.zeros((m, cap), dtype=np.uint8)
        self.log_len = np.zeros(m, dtype=np.int64)
        self.fmask = np.zeros(n, dtype=np.uint8)
        self.fbits = np.zeros(n, dtype=np.uint8)
        self.out_llr = np.zeros(n)
        self.logq = np.zeros((m, 1 << t))
        self.pathllr = np.zeros((1 << t, t))
        self.logp = np.zeros((m, 1 << t))
        self.bit_llr = np.zeros((m, t))
        self.syms = np.zeros((pack.r, m), dtype=np.int32)
        taumax = int(pack.taus.max(initial=0))
        self.cands = np.zeros((taumax + 1, m), dtype=np.int32)
        self.alphas = np.zeros(taumax + 1, dtype=np.int32)
        self.rels = np.zeros(m)
        self.hard = np.zeros(m, dtype=np.int32)
        self.rs_ws = np.zeros((7, m + 2), dtype=np.int32)
        self.gmd_order = np.zeros(m, dtype=np.int32)
        self.gmd_erased = np.zeros(m, dtype=np.uint8)
        self.gmd_cw = np.zeros(m, dtype=np.int32)


@dataclass(frozen=True)
class ConcatDecodeResult:
    """Decoded payload plus per-outer-row and per-block views.

    row_ok[i] is False when outer decode i failed and its hard symbols
    were passed through. block_data[j] is the reconstructed k-bit info
    block of inner codeword j (what the block-error tally compares).
    """

    payload: np.ndarray
    block_data: np.ndarray
    symbols: np.ndarray
    row_ok: np.ndarray


def _payload_from_symbols(spec: ConcatSpec, syms: np.ndarray) -> np.ndarray:
    t = spec.t
    payload = np.zeros(spec.payload_bits, dtype=np.uint8)
    off = 0
    for i in range(spec.r):
        for j in range(spec.kappas[i]):
            s = int(syms[i, j])
            for d in range(t):
                payload[off + d] = (s >> d) & 1
            off += t
    return payload


def _block_data_from_symbols(spec: ConcatSpec, syms: np.ndarray) -> np.ndarray:
    t = spec.t
    out = np.zeros((spec.m, spec.polar.k), dtype=np.uint8)
    for j in range(spec.m):
        for i in range(spec.r):
            s = int(syms[i, j])
            for d in range(t):
                out[j, i * t + d] = (s >> d) & 1
    return out


def _result(spec: ConcatSpec, syms: np.ndarray, row_ok: np.ndarray) -> ConcatDecodeResult:
    return ConcatDecodeResult(payload=_payload_from_symbols(spec, syms),
                              block_data=_block_data_from_symbols(spec, syms),
                              symbols=syms, row_ok=row_ok)


# ---------------------------------------------------------------------------
# encoding


def concat_encode(spec: ConcatSpec, payload) -> np.ndarray:
    """Encode a payload of t*sum(kappa_i) bits into m polar codewords."""
    payload = np.asarray(payload, dtype=np.uint8)
    if payload.shape != (spec.payload_bits,):
        raise ValueError(f"payload must have {spec.payload_bits} bits")
    if HAS_FRAME_KERNELS:
        out = np.zeros((spec.m, spec.n), dtype=np.uint8)
        _k.frame_encode(payload, spec._pack, out)
        return out
    return _encode_reference(spec, payload)


def _encode_symbols(spec: ConcatSpec, payload: np.ndarray) -> np.ndarray:
    """Outer-encode the payload into the (r, m) symbol matrix."""
    from .rs import rs_encode
    t = spec.t
    syms = np.zeros((spec.r, spec.m), dtype=np.int32)
    off = 0
    for i in range(spec.r):
        kap = spec.kappas[i]
        msg = np.zeros(kap, dtype=np.int64)
        for j in range(kap):
            s = 0
            for d in range(t):
                s |= int(payload[off + d]) << d
            msg[j] = s
            off += t
        syms[i] = rs_encode(spec.outer[i], msg)
    return syms


def _encode_reference(spec: ConcatSpec, payload: np.ndarray) -> np.ndarray:
    syms = _encode_symbols(spec, payload)
    u = np.zeros((spec.m, spec.n), dtype=np.uint8)
    t = spec.t
    for j in range(spec.m):
        for i in range(spec.r):
            s = int(syms[i, j])
            for d in range(t):
                u[j, spec.polar.info_positions[i * t + d]] = (s >> d) & 1
    return polar_transform(u)


# ---------------------------------------------------------------------------
# decoding


def _check_llrs(spec: ConcatSpec, llrs) -> np.ndarray:
    llrs = np.ascontiguousarray(llrs, dtype=np.float64)
    if llrs.shape != (spec.m, spec.n):
        raise ValueError(f"llrs must have shape ({spec.m}, {spec.n})")
    return llrs


def decode_serial(spec: ConcatSpec, llrs, minsum: bool = False) -> ConcatDecodeResult:
    """Conventional serial decode: full SC per block, then hard RS rows."""
    llrs = _check_llrs(spec, llrs)
    if HAS_FRAME_KERNELS and not minsum:
        return _decode_kernel(spec, llrs, DecodeMode.SERIAL)
    t = spec.t
    hard = np.zeros((spec.r, spec.m), dtype=np.int32)
    for j in range(spec.m):
        info_bits, _, _ = sc_decode(spec.polar, llrs[j], minsum=minsum)
        for i in range(spec.r):
            s = 0
            for d in range(t):
                s |= int(info_bits[i * t + d]) << d
            hard[i, j] = s
    syms = hard.copy()
    row_ok = np.ones(spec.r, dtype=bool)
    for i in range(spec.r):
        res = rs_decode(spec.outer[i], hard[i])
        if res.ok:
            syms[i] = res.codeword
        else:
            row_ok[i] = False
    return _result(spec, syms, row_ok)


def _log_probs(probs: np.ndarray) -> np.ndarray:
    out = np.empty_like(probs)
    for i in range(len(probs)):
        out[i] = log(probs[i]) if probs[i] > 0.0 else _NEG_INF
    return out


def symbol_reliability_from_llrs(bit_llrs):
    """Hard symbol, product-form reliability, and approximate symbol
    probabilities from the t bit LLRs of one symbol (independence
    approximation; bit d of a symbol is its d-th little-endian bit)."""
    bit_llrs = np.asarray(bit_llrs, dtype=np.float64)
    t = len(bit_llrs)
    nsym = 1 << t
    logq = np.empty(nsym)
    for s in range(nsym):
        acc = 0.0
        for d in range(t):
            x = bit_llrs[d] if (s >> d) & 1 == 0 else -bit_llrs[d]
            acc += -log1p(exp(-x))
        logq[s] = acc
    hard = 0
    for d in range(t):
        if bit_llrs[d] < 0.0:
            hard |= 1 << d
    reliability = exp(logq[hard])
    return hard, reliability, softmax_seq(logq)


def decode_successive(spec: ConcatSpec, llrs, mode,
                      minsum: bool = False, rs_stage_decoder=None,
                      stage_hook=None) -> ConcatDecodeResult:
    """Stage-by-stage decode: all m blocks advance one t-bit span, the
    stage's RS word is decoded per `mode`, and every block resumes with
    the corrected symbol bits before the next stage.

    rs_stage_decoder(outer, word, rels) -> (word', ok) overrides the
    outer decode (testing hook); stage_hook(i, word) -> word corrupts the
    hard word before outer decoding (fault injection). Either forces the
    reference path.
    """
    mode = DecodeMode.of(mode)
    if mode == DecodeMode.SERIAL:
        raise ValueError("use decode_serial for serial mode")
    llrs = _check_llrs(spec, llrs)
    if (HAS_FRAME_KERNELS and not minsum and rs_stage_decoder is None
            and stage_hook is None):
        return _decode_kernel(spec, llrs, mode)
    t = spec.t
    nsym = 1 << t
    states = [ScState.begin(spec.polar, llrs[j], minsum=minsum)
              for j in range(spec.m)]
    syms = np.zeros((spec.r, spec.m), dtype=np.int32)
    row_ok = np.ones(spec.r, dtype=bool)
    for i in range(spec.r):
        word = np.zeros(spec.m, dtype=np.int32)
        rels = np.zeros(spec.m)
        logp = np.zeros((spec.m, nsym))
        paths = [None] * spec.m
        if mode == DecodeMode.GMD_EML:
            for j in range(spec.m):
                pl = sc_symbol_paths(states[j], t)
                paths[j] = pl
                hard = 0
                for s in range(1, nsym):
                    if pl.probs[s] > pl.probs[hard]:
                        hard = s
                word[j] = hard
                rels[j] = pl.probs[hard]
                logp[j] = _log_probs(pl.probs)
        else:
            for j in range(spec.m):
                bits, bllrs, _ = sc_decode_span(states[j], t)
                hard, rel, probs = symbol_reliability_from_llrs(bllrs)
                word[j] = hard
                rels[j] = rel
                logp[j] = _log_probs(probs)
        if stage_hook is not None:
            word = np.asarray(stage_hook(i, word.copy()), dtype=np.int32)
        chosen, ok = _decode_stage_word(spec.outer[i], word, rels, logp, mode,
                                        rs_stage_decoder)
        syms[i] = chosen
        row_ok[i] = ok
        for j in range(spec.m):
            bits = ((int(chosen[j]) >> np.arange(t)) & 1).astype(np.uint8)
            if mode == DecodeMode.GMD_EML:
                paths[j].select(int(chosen[j]))
            else:
                resume_with(states[j], bits)
    return _result(spec, syms, row_ok)


def _decode_stage_word(outer: RsCodeSpec, word, rels, logp, mode,
                       rs_stage_decoder):
    """Outer decode of one stage's m-symbol word; returns (word', ok)."""
    if rs_stage_decoder is not None:
        return rs_stage_decoder(outer, word, rels)
    if mode == DecodeMode.SUCCESSIVE_HARD:
        res = rs_decode(outer, word)
        if res.ok:
            return res.codeword, True
        return word, False
    cands = rs_gmd_list(outer, word, rels)
    if len(cands) == 0:
        return word, False
    if mode == DecodeMode.GMD:
        best, best_dist = None, None
        for cw, _alpha in cands:
            dist = int((cw != word).sum())
            if best is None or dist < best_dist:
                best, best_dist = cw, dist
        return best, True
    # gmd_aml / gmd_eml: maximize the product of per-symbol probabilities
    best, best_score = None, None
    for cw, _alpha in cands:
        score = 0.0
        for j in range(len(cw)):
            score += logp[j][cw[j]]
        if best is None or score > best_score:
            best, best_score = cw, score
    return best, True


def _decode_kernel(spec: ConcatSpec, llrs, mode) -> ConcatDecodeResult:
    pack = spec._pack
    ws = spec._ws
    payload = np.zeros(spec.payload_bits, dtype=np.uint8)
    block_data = np.zeros((spec.m, spec.polar.k), dtype=np.uint8)
    row_ok = np.zeros(spec.r, dtype=np.uint8)
    syms = np.zeros((spec.r, spec.m), dtype=np.int32)
    _k.frame_decode(llrs, pack, ws, _MODE_CODE[mode], payload, block_data,
                    syms, row_ok)
    return ConcatDecodeResult(payload=payload, block_data=block_data,
                              symbols=syms, row_ok=row_ok.astype(bool))


# ---------------------------------------------------------------------------
# construction


def binomial_tail(m: int, tau: int, q: float) -> float:
    """P(X > tau) for X ~ Binomial(m, q)."""
    q = min(max(q, 0.0), 1.0)
    return sum(comb(m, l) * q ** l * (1.0 - q) ** (m - l)
               for l in range(tau + 1, m + 1))


@dataclass(frozen=True)
class DesignResult:
    """Outer radii from the rate-adaptive criterion plus its arithmetic."""

    taus: tuple
    symbol_error_probs: np.ndarray  # Q_i per outer code
    threshold: float                # t * target_fep / k
    feasible: bool                  # every row met the criterion
    bound_sum: float                # sum_i C(m, tau_i+1) Q_i^(tau_i+1)


def design_rate_adaptive(reliabilities_on_info, t: int, m: int,
                         target_fep: float,
                         strict_min_tau: bool = False) -> DesignResult:
    """Assign per-outer-code radii so the designed frame error stays
    below target_fep: tau_i is the least integer with
    C(m, tau_i+1) Q_i^(tau_i+1) < t*target_fep/k.

    Q_i = 1 - prod(1 - P_j) over the group's bit error probabilities.
    strict_min_tau forces tau_i >= 1 (the literal 'smallest positive
    integer' reading); by default strong groups may get tau_i = 0.
    """
    p = np.asarray(reliabilities_on_info, dtype=np.float64)
    k = len(p)
    if k % t:
        raise ValueError(f"t={t} must divide k={k}")
    if not target_fep > 0.0:
        raise ValueError("target_fep must be positive")
    if p.min(initial=0.0) < 0.0 or p.max(initial=0.0) > 1.0:
        raise ValueError("bit error probabilities must be in [0, 1]")
    r = k // t
    thr = t * target_fep / k
    qs = 1.0 - np.prod(1.0 - p.reshape(r, t), axis=1)
    tau_cap = (m - 1) // 2
    taus = []
    feasible = True
    bound_sum = 0.0
    for q in qs:
        tau = 1 if strict_min_tau else 0
        while comb(m, tau + 1) * q ** (tau + 1) >= thr and tau < tau_cap:
            tau += 1
        term = comb(m, tau + 1) * q ** (tau + 1)
        if term >= thr:
            feasible = False
        taus.append(tau)
        bound_sum += term
    return DesignResult(taus=tuple(taus), symbol_error_probs=qs,
                        threshold=thr, feasible=feasible, bound_sum=bound_sum)


def _taus_for_pe(m: int, qs: np.ndarray, pe: float) -> tuple:
    tau_cap = (m - 1) // 2
    out = []
    for q in qs:
        tau = 0
        while binomial_tail(m, tau, q) >= pe and tau < tau_cap:
            tau += 1
        out.append(tau)
    return tuple(out)


def design_target_rate(reliabilities, t: int, m: int, target_rate: float,
                       k_range, rate_tol: float = 0.01,
                       bisect_iters: int = 40,
                       bisect_rate_tol: float = 1e-3,
                       prim_poly: int | None = None,
                       meta: dict | None = None) -> ConcatSpec:
    """Search inner dimensions k and bisect the per-sub-block error target
    until the total rate meets target_rate.

    Per candidate k: freeze all but the best k positions, form the
    union-bound group error probabilities Q_j, and bisect log10(P_e) of
    the binomial-tail criterion sum_{l>tau_j} C(m,l)Q_j^l(1-Q_j)^(m-l) <
    P_e. Among candidates within rate_tol of the target the one with the
    smallest design-time frame-error estimate is returned (cross-k
    ranking by simulation stays available via meta['candidates']).
    """
    rel = np.asarray(reliabilities, dtype=np.float64)
    n = len(rel)
    if isinstance(k_range, (tuple, list)) and len(k_range) == 2:
        lo, hi = k_range
        ks = [k for k in range(lo, hi + 1) if k % t == 0]
    else:
        ks = [int(k) for k in k_range]
    ks = [k for k in ks if 0 < k <= n and k % t == 0]
    if not ks:
        raise ValueError("no feasible k (multiples of t) in k_range")
    candidates = []
    for k in ks:
        pspec = select_frozen(rel, k)
        p = rel[pspec.info_positions]
        qs = np.minimum(1.0, p.reshape(k // t, t).sum(axis=1))

        def rate_of(taus):
            return t * sum(m - 2 * tau for tau in taus) / (n * m)

        lo_e, hi_e = -15.0, 0.0
        best = None
        for z in [lo_e, hi_e] + [None] * bisect_iters:
            if z is None:
                z = (lo_e + hi_e) / 2.0
            pe = 10.0 ** z
            taus = _taus_for_pe(m, qs, pe)
            rate = rate_of(taus)
            gap = abs(rate - target_rate)
            if best is None or gap < best[0] - 1e-15:
                fep = sum(binomial_tail(m, taus[j], qs[j])
                          for j in range(len(taus)))
                best = (gap, rate, pe, taus, fep)
            if gap <= bisect_rate_tol:
                break
            if rate > target_rate:
                hi_e = z
            else:
                lo_e = z
        gap, rate, pe, taus, fep = best
        candidates.append({"k": k, "rate": rate, "pe": pe, "taus": taus,
                           "fep_estimate": fep, "rate_gap": gap})
    ok = [c for c in candidates if c["rate_gap"] <= rate_tol]
    if not ok:
        raise ValueError(
            f"no candidate k reaches |rate - {target_rate}| <= {rate_tol}")
    pick = min(ok, key=lambda c: (c["fep_estimate"], c["k"]))
    pspec = select_frozen(rel, pick["k"])
    ctx = GFContext(t, prim_poly)
    info = dict(meta or {})
    info.update({
        "target_rate": target_rate, "picked_k": pick["k"],
        "per_block_pe": pick["pe"], "fep_estimate": pick["fep_estimate"],
        "candidates": [{kk: (list(v) if isinstance(v, tuple) else v)
                        for kk, v in c.items()} for c in candidates],
    })
    return ConcatSpec(polar=pspec, ctx=ctx, m=m, taus=pick["taus"], meta=info)


# ---------------------------------------------------------------------------
# closed-form bounds


def fep_bound(m: int, tau: int, p_e: float) -> float:
    """Frame-error bound C(m, tau+1) * P_e^(tau+1) for one outer code."""
    if not 0.0 <= p_e <= 1.0:
        raise ValueError("p_e must be in [0, 1]")
    if not 0 <= tau < m:
        raise ValueError("tau must be in [0, m)")
    return comb(m, tau + 1) * p_e ** (tau + 1)


def frame_error_bound_log2(n: float, m: float, r_outer: float, eps: float) -> float:
    """log2 of the concatenated frame-error bound 2^-((n^(0.5-eps)(1-R_o)/2 - 1) m)."""
    if not 0.0 < r_outer < 1.0:
        raise ValueError("outer rate must be in (0, 1)")
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    return -(n ** (0.5 - eps) * (1.0 - r_outer) / 2.0 - 1.0) * m


def frame_error_bound(n: float, m: float, r_outer: float, eps: float) -> float:
    return 2.0 ** frame_error_bound_log2(n, m, r_outer, eps)


@dataclass(frozen=True)
class AsymptoticParams:
    """Capacity-achieving parameterization for total length N; feasible is
    False when the asymptotic outer-rate formula is not yet positive."""

    n: float
    m: float
    r_outer: float
    feasible: bool


def asymptotic_params(total_len: float, eps: float) -> AsymptoticParams:
    if not 0.0 < eps < 0.5:
        raise ValueError("eps must be in (0, 0.5) exclusive")
    if total_len < 1:
        raise ValueError("total length must be >= 1")
    n = total_len ** eps
    m = total_len ** (1.0 - eps)
    r_outer = 1.0 - 4.0 * total_len ** (-eps * (0.5 - eps))
    return AsymptoticParams(n=n, m=m, r_outer=r_outer, feasible=r_outer > 0.0)
