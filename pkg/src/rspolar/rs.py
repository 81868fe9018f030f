"""Reed-Solomon over GF(2^t): systematic encoder, bounded-distance
errors-and-erasures decoder (Berlekamp-Massey + Forney), and conventional
multi-trial GMD list decoding driven by symbol reliabilities.

Conventions: codeword position j has locator alpha^j, syndromes are
S_i = r(alpha^i) for i = 1..2*tau (generator roots alpha^1..alpha^2tau),
and the message occupies positions 0..kappa-1 (systematic). Shortened
codes (m < 2^t - 1) just use the first m locators.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._backend import impl as _k
from .gf import GFContext

__all__ = ["RsCodeSpec", "RsDecodeResult", "GmdCandidateList",
           "rs_encode", "rs_decode", "rs_gmd_list"]


@dataclass(frozen=True)
class RsCodeSpec:
    """One outer code: length m, radius tau, dimension kappa = m - 2*tau.

    MDS with minimum distance d = 2*tau + 1.
    """

    ctx: GFContext
    m: int
    tau: int

    def __post_init__(self):
        if not 1 <= self.m <= self.ctx.q - 1:
            raise ValueError(f"m must be in [1, {self.ctx.q - 1}]")
        if not 0 <= self.tau <= (self.m - 1) // 2:
            raise ValueError(f"tau must be in [0, {(self.m - 1) // 2}]")

    @property
    def kappa(self) -> int:
        return self.m - 2 * self.tau

    @property
    def d(self) -> int:
        return 2 * self.tau + 1

    @cached_property
    def generator(self) -> np.ndarray:
        """Generator polynomial, ascending coefficients, roots alpha^1..alpha^2tau."""
        ctx = self.ctx
        g = [1]
        for i in range(1, 2 * self.tau + 1):
            root = ctx.alpha_pow(i)
            g = [0] + g
            for j in range(len(g) - 1):
                g[j] ^= ctx.mul(root, g[j + 1])
        arr = np.array(g, dtype=np.int32)
        arr.setflags(write=False)
        return arr

    @cached_property
    def parity_matrix(self) -> np.ndarray:
        """M with parity = M . message: solves the 2*tau syndrome equations
        for the parity positions kappa..m-1."""
        ctx = self.ctx
        ns = 2 * self.tau
        if ns == 0:
            return np.zeros((0, self.kappa), dtype=np.int32)
        # A[i][j] = locator(kappa+j)^(i+1); msg syndrome map V[i][j] = locator(j)^(i+1)
        a = [[ctx.pow(ctx.alpha_pow(self.kappa + j), i + 1) for j in range(ns)]
             for i in range(ns)]
        ainv = _gf_mat_inv(ctx, a)
        v = [[ctx.pow(ctx.alpha_pow(j), i + 1) for j in range(self.kappa)]
             for i in range(ns)]
        mmat = np.array([[_dotcol(ctx, ainv[i], v, j) for j in range(self.kappa)]
                         for i in range(ns)], dtype=np.int32)
        mmat.setflags(write=False)
        return mmat

    @cached_property
    def _ws(self) -> np.ndarray:
        # decoder scratch; kernel calls hold the GIL end-to-end, so
        # sharing it across CPython threads is safe
        return np.zeros((7, self.m + 2), dtype=np.int32)


def _dotcol(ctx, row, mat, j):
    acc = 0
    for k in range(len(row)):
        acc ^= ctx.mul(row[k], mat[k][j])
    return acc


def _gf_mat_inv(ctx: GFContext, a):
    n = len(a)
    aug = [list(a[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix over GF(2^t)")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = ctx.inv(aug[col][col])
        aug[col] = [ctx.mul(inv, x) for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [aug[r][j] ^ ctx.mul(f, aug[col][j]) for j in range(2 * n)]
    return [row[n:] for row in aug]


@dataclass(frozen=True)
class RsDecodeResult:
    status: str  # 'corrected' | 'failure'
    codeword: np.ndarray | None
    corrections: int

    @property
    def ok(self) -> bool:
        return self.status == "corrected"


@dataclass(frozen=True)
class GmdCandidateList:
    """Distinct decode successes as (codeword, alpha) pairs, alpha = number
    of erased least-reliable positions; at most (d+1)/2 entries."""

    candidates: tuple

    def __len__(self) -> int:
        return len(self.candidates)

    def __iter__(self):
        return iter(self.candidates)


def _check_symbols(spec: RsCodeSpec, word, name: str) -> np.ndarray:
    arr = np.asarray(word, dtype=np.int64)
    if arr.shape != (spec.m,) and name == "received":
        raise ValueError(f"received must have length {spec.m}")
    if arr.min(initial=0) < 0 or arr.max(initial=0) >= spec.ctx.q:
        raise ValueError(f"{name} symbols must be in [0, {spec.ctx.q})")
    return arr.astype(np.int32)


def rs_encode(spec: RsCodeSpec, message) -> np.ndarray:
    """Systematic codeword: positions 0..kappa-1 carry the message."""
    msg = np.asarray(message, dtype=np.int64)
    if msg.shape != (spec.kappa,):
        raise ValueError(f"message must have length {spec.kappa}")
    msg = _check_symbols(spec, msg, "message")
    cw = np.zeros(spec.m, dtype=np.int32)
    cw[:spec.kappa] = msg
    if spec.tau:
        parity = np.zeros(2 * spec.tau, dtype=np.int32)
        _k.rs_encode_parity(msg, spec.parity_matrix, spec.ctx.log_table,
                            spec.ctx.antilog_table, parity)
        cw[spec.kappa:] = parity
    return cw


def rs_decode(spec: RsCodeSpec, received, erasures=()) -> RsDecodeResult:
    """Bounded-distance errors-and-erasures decode.

    Exact whenever 2e + f <= 2*tau (e non-erased symbol errors, f
    erasures). Internal inconsistencies surface as status 'failure',
    never an exception; more than d-1 erasures is a caller error.
    """
    word = _check_symbols(spec, received, "received")
    erased = np.zeros(spec.m, dtype=np.uint8)
    for p in erasures:
        if not 0 <= p < spec.m:
            raise ValueError(f"erasure position {p} out of range")
        erased[p] = 1
    if int(erased.sum()) > spec.d - 1:
        raise ValueError(f"more than d-1 = {spec.d - 1} erasures")
    out = np.zeros(spec.m, dtype=np.int32)
    status, corrections = _k.rs_decode_ee(word, erased, spec.tau,
                                          spec.ctx.log_table,
                                          spec.ctx.antilog_table,
                                          spec.ctx.q, out, spec._ws)
    if status != 0:
        return RsDecodeResult("failure", None, 0)
    return RsDecodeResult("corrected", out, corrections)


def rs_gmd_list(spec: RsCodeSpec, received, reliabilities) -> GmdCandidateList:
    """Conventional GMD: for alpha in {0, 2, .., d-1} erase the alpha
    least reliable positions (ties by position index) and collect the
    distinct decode successes."""
    word = _check_symbols(spec, received, "received")
    rels = np.asarray(reliabilities, dtype=np.float64)
    if rels.shape != (spec.m,):
        raise ValueError(f"reliabilities must have length {spec.m}")
    if not np.all(np.isfinite(rels)):
        raise ValueError("reliabilities must be finite")
    cands = np.zeros((spec.tau + 1, spec.m), dtype=np.int32)
    alphas = np.zeros(spec.tau + 1, dtype=np.int32)
    ncand = _k.rs_gmd_core(word, rels, spec.tau, spec.ctx.log_table,
                           spec.ctx.antilog_table, spec.ctx.q,
                           cands, alphas, spec._ws)
    out = tuple((cands[i].copy(), int(alphas[i])) for i in range(ncand))
    return GmdCandidateList(candidates=out)
