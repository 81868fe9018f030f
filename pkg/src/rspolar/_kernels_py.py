"""Pure-Python kernel backend.

Mirror of the compiled `_kernels` extension: same functions, same argument
conventions, same floating-point operation order, so results are
bit-identical across backends. This module is the readable reference; the
extension is the fast path.

Shared data conventions
-----------------------
SC lattice: ``lam`` is float64 (stages+1, n); row ``stages`` holds the
channel LLRs in internal (bit-reversed) order, row 0 the decision LLRs.
``bits`` is uint8 (stages+1, n) of partial sums; ``dec`` uint8 (n,) holds
the decisions. Row ``lev`` works on blocks of 2**lev columns.

Undo log: parallel arrays (lev, col, old) recording every bits/dec write;
``lev == -1`` marks a ``dec`` entry. Rewinding replays the log backwards.

GF tables: ``logt`` int32[q] with logt[0] unused, ``expt`` int32[2(q-1)]
(doubled antilog so products of logs need no modulo).
"""

from __future__ import annotations

from math import exp, fabs, log1p

import numpy as np

BACKEND_NAME = "python"
LLR_MAX = 40.0


# ---------------------------------------------------------------------------
# scalar LLR node operations


def _boxplus(a: float, b: float, minsum: bool) -> float:
    # check node: exact 2*atanh(tanh(a/2)tanh(b/2)) in stable form
    v = min(fabs(a), fabs(b))
    if (a >= 0.0) != (b >= 0.0):
        v = -v
    if not minsum:
        v += log1p(exp(-fabs(a + b))) - log1p(exp(-fabs(a - b)))
    if v > LLR_MAX:
        return LLR_MAX
    if v < -LLR_MAX:
        return -LLR_MAX
    return v


def _gnode(a: float, b: float, u: int) -> float:
    v = b + a if u == 0 else b - a
    if v > LLR_MAX:
        return LLR_MAX
    if v < -LLR_MAX:
        return -LLR_MAX
    return v


def _logsig(x: float) -> float:
    # log P(bit | llr) for the favoured bit sign: log(1/(1+e^-x))
    return -log1p(exp(-x))


# ---------------------------------------------------------------------------
# SC lattice primitives


def _update_llrs(lam, bits, pos: int, minsum: bool) -> float:
    stages = lam.shape[0] - 1
    nfresh = stages if pos == 0 else (pos & -pos).bit_length()
    for lev in range(nfresh - 1, -1, -1):
        h = 1 << lev
        blk = pos >> lev
        base = blk << lev
        up = lam[lev + 1]
        row = lam[lev]
        if blk & 1 == 0:
            for j in range(h):
                row[base + j] = _boxplus(up[base + j], up[base + h + j], minsum)
        else:
            p = base - h
            brow = bits[lev]
            for j in range(h):
                row[base + j] = _gnode(up[p + j], up[p + h + j], brow[p + j])
    return lam[0][pos]


def _update_bits(bits, dec, pos: int, u: int, logged: bool,
                 log_lev, log_col, log_old, log_len: int) -> int:
    stages = bits.shape[0] - 1
    if logged and log_len + 2 * bits.shape[1] + 2 > len(log_lev):
        raise RuntimeError("undo log capacity exceeded")
    if logged:
        log_lev[log_len] = -1
        log_col[log_len] = pos
        log_old[log_len] = dec[pos]
        log_len += 1
        log_lev[log_len] = 0
        log_col[log_len] = pos
        log_old[log_len] = bits[0][pos]
        log_len += 1
    dec[pos] = u
    bits[0][pos] = u
    lev = 0
    a = pos
    while (a & 1) and lev < stages - 1:
        h = 1 << lev
        left = (a - 1) << lev
        right = a << lev
        src = bits[lev]
        dst = bits[lev + 1]
        if logged:
            for j in range(2 * h):
                log_lev[log_len] = lev + 1
                log_col[log_len] = left + j
                log_old[log_len] = dst[left + j]
                log_len += 1
        for j in range(h):
            dst[left + j] = src[left + j] ^ src[right + j]
            dst[left + h + j] = src[right + j]
        a >>= 1
        lev += 1
    return log_len


def sc_rewind(bits, dec, log_lev, log_col, log_old, log_from: int, log_to: int) -> None:
    """Undo logged bits/dec writes in [log_from, log_to), newest first."""
    for i in range(log_to - 1, log_from - 1, -1):
        lev = log_lev[i]
        if lev < 0:
            dec[log_col[i]] = log_old[i]
        else:
            bits[lev][log_col[i]] = log_old[i]


def sc_decode_range(lam, bits, dec, frozen, forced_mask, forced_bits,
                    start: int, stop: int, out_llrs, minsum: bool,
                    log_lev, log_col, log_old, log_len: int, logged: bool) -> int:
    """Decode positions [start, stop); returns the new undo-log length.

    Every position gets a decision LLR in out_llrs[pos - start]. Forced
    positions take the supplied bit, frozen positions 0, the rest
    sign(llr) with ties to 0.
    """
    for pos in range(start, stop):
        llr = _update_llrs(lam, bits, pos, minsum)
        out_llrs[pos - start] = llr
        if forced_mask[pos]:
            u = forced_bits[pos]
        elif frozen[pos]:
            u = 0
        else:
            u = 1 if llr < 0.0 else 0
        log_len = _update_bits(bits, dec, pos, u, logged,
                               log_lev, log_col, log_old, log_len)
    return log_len


def sc_symbol_dfs(lam, bits, dec, frozen, start: int, nbits: int, minsum: bool,
                  out_logq, out_pathllr, log_lev, log_col, log_old) -> int:
    """Walk all 2**nbits patterns of the next nbits info positions.

    Frozen positions inside the span are decided 0 on every path and their
    likelihood factors are included. out_logq[p] gets the unnormalized log
    path probability of pattern p (bit d of p = decision at the d-th info
    position), out_pathllr[p] the nbits info decision LLRs along that path.
    The lattice is fully rewound before returning; the return value is the
    position one past the span's last info bit.
    """
    llr_stack = np.zeros(nbits)
    end_pos, log_len = _dfs_walk(lam, bits, dec, frozen, start, 0, nbits, 0.0,
                                 minsum, out_logq, out_pathllr, llr_stack, 0,
                                 log_lev, log_col, log_old, 0)
    sc_rewind(bits, dec, log_lev, log_col, log_old, 0, log_len)
    return end_pos


def _dfs_walk(lam, bits, dec, frozen, pos, depth, nbits, acc, minsum,
              out_logq, out_pathllr, llr_stack, pattern,
              log_lev, log_col, log_old, log_len):
    while frozen[pos]:
        llr = _update_llrs(lam, bits, pos, minsum)
        acc = acc + _logsig(llr)
        log_len = _update_bits(bits, dec, pos, 0, True,
                               log_lev, log_col, log_old, log_len)
        pos += 1
    llr = _update_llrs(lam, bits, pos, minsum)
    llr_stack[depth] = llr
    end_pos = pos + 1
    for u in (0, 1):
        mark = log_len
        lp = acc + _logsig(llr if u == 0 else -llr)
        sub_len = _update_bits(bits, dec, pos, u, True,
                               log_lev, log_col, log_old, mark)
        pat = pattern | (u << depth)
        if depth == nbits - 1:
            out_logq[pat] = lp
            out_pathllr[pat, :] = llr_stack[:nbits]
        else:
            end_pos, sub_len = _dfs_walk(lam, bits, dec, frozen, pos + 1,
                                         depth + 1, nbits, lp, minsum,
                                         out_logq, out_pathllr, llr_stack, pat,
                                         log_lev, log_col, log_old, sub_len)
        sc_rewind(bits, dec, log_lev, log_col, log_old, mark, sub_len)
    return end_pos, log_len


def genie_chunk(rows, err_counts, lam, minsum: bool) -> None:
    """Tally raw SC decision errors for all-zero transmissions.

    Each row of ``rows`` is one trial's channel LLR vector (internal
    order). With the genie forcing every decision to the true bit 0, the
    partial sums stay all-zero, so g reduces to a plain sum and no bit
    bookkeeping is needed. A decision LLR <= 0 counts as an error (a tie
    means the bit channel gave no information; see design notes).
    """
    stages = lam.shape[0] - 1
    n = lam.shape[1]
    for r in range(rows.shape[0]):
        lam[stages, :] = rows[r]
        for pos in range(n):
            nfresh = stages if pos == 0 else (pos & -pos).bit_length()
            for lev in range(nfresh - 1, -1, -1):
                h = 1 << lev
                blk = pos >> lev
                base = blk << lev
                up = lam[lev + 1]
                row = lam[lev]
                if blk & 1 == 0:
                    for j in range(h):
                        row[base + j] = _boxplus(up[base + j], up[base + h + j], minsum)
                else:
                    p = base - h
                    for j in range(h):
                        row[base + j] = _gnode(up[p + j], up[p + h + j], 0)
            if lam[0][pos] <= 0.0:
                err_counts[pos] += 1


# ---------------------------------------------------------------------------
# Reed-Solomon core


def _gf_mul(a: int, b: int, logt, expt) -> int:
    if a == 0 or b == 0:
        return 0
    return int(expt[logt[a] + logt[b]])


def rs_encode_parity(msg, pmat, logt, expt, out) -> None:
    """Parity symbols as a GF matrix-vector product out = pmat . msg."""
    for i in range(pmat.shape[0]):
        acc = 0
        for j in range(pmat.shape[1]):
            acc ^= _gf_mul(int(pmat[i, j]), int(msg[j]), logt, expt)
        out[i] = acc


def _poly_eval(coeffs, deg: int, x: int, logt, expt) -> int:
    # Horner, coeffs ascending
    acc = 0
    for i in range(deg, -1, -1):
        acc = _gf_mul(acc, x, logt, expt) ^ int(coeffs[i])
    return acc


def rs_decode_ee(word, erased, tau: int, logt, expt, q: int, out, ws) -> tuple[int, int]:
    """Berlekamp-Massey errors-and-erasures decoder.

    word: int32[m] received symbols; erased: uint8[m] erasure flags;
    out: int32[m] corrected codeword on success. ws: int32[7, m+2]
    scratch. Returns (status, corrections) with status 0 = corrected,
    1 = failure. Guaranteed exact when 2e + f <= 2*tau.

    Position j has locator alpha^j; syndromes are S_i = r(alpha^i) for
    i = 1..2*tau.
    """
    m = word.shape[0]
    nsyn = 2 * tau
    out[:] = word
    if nsyn == 0:
        return 0, 0
    synd = ws[0]  # synd[i] = S_i, i in 1..nsyn; synd[0] = 0
    synd[0] = 0
    allzero = True
    for i in range(1, nsyn + 1):
        x = int(expt[i % (q - 1)])  # alpha^i
        s = _poly_eval(word, m - 1, x, logt, expt)
        synd[i] = s
        if s != 0:
            allzero = False
    if allzero:
        return 0, 0

    # erasure locator Gamma(x) = prod (1 - X_l x), ascending coeffs
    gamma = ws[1]
    gamma[0] = 1
    f = 0
    for p in range(m):
        if erased[p]:
            xl = int(expt[p % (q - 1)])
            gamma[f + 1] = 0
            for i in range(f + 1, 0, -1):
                gamma[i] ^= _gf_mul(xl, int(gamma[i - 1]), logt, expt)
            f += 1

    # Forney syndromes T(x) = S(x) Gamma(x) mod x^(nsyn+1), S(x) = sum S_i x^i
    tsyn = ws[2]
    for i in range(nsyn + 1):
        acc = 0
        for j in range(max(1, i - f), i + 1):
            acc ^= _gf_mul(int(synd[j]), int(gamma[i - j]), logt, expt)
        tsyn[i] = acc

    # BM on the sequence T_{f+1} .. T_{nsyn}
    nseq = nsyn - f
    lam_p = ws[3]
    bpoly = ws[4]
    lam_p[:nsyn + 1] = 0
    bpoly[:nsyn + 1] = 0
    lam_p[0] = 1
    bpoly[0] = 1
    big_l = 0
    bb = 1
    shift = 1
    for k in range(nseq):
        d = int(tsyn[f + 1 + k])
        for i in range(1, big_l + 1):
            d ^= _gf_mul(int(lam_p[i]), int(tsyn[f + 1 + k - i]), logt, expt)
        if d == 0:
            shift += 1
            continue
        coef = _gf_mul(d, int(expt[q - 1 - logt[bb]]), logt, expt)
        if 2 * big_l <= k:
            tmp = ws[5]
            tmp[:nsyn + 1] = lam_p[:nsyn + 1]
            for i in range(nsyn + 1 - shift):
                lam_p[i + shift] ^= _gf_mul(coef, int(bpoly[i]), logt, expt)
            big_l = k + 1 - big_l
            bpoly[:nsyn + 1] = tmp[:nsyn + 1]
            bb = d
            shift = 1
        else:
            for i in range(nsyn + 1 - shift):
                lam_p[i + shift] ^= _gf_mul(coef, int(bpoly[i]), logt, expt)
            shift += 1
    if 2 * big_l > nseq:
        return 1, 0
    deg_lam = 0
    for i in range(nsyn, -1, -1):
        if lam_p[i] != 0:
            deg_lam = i
            break
    if deg_lam != big_l:
        return 1, 0

    # errata locator Psi = Lambda * Gamma
    deg_psi = deg_lam + f
    psi = ws[6]
    psi[:deg_psi + 1] = 0
    for i in range(deg_lam + 1):
        li = int(lam_p[i])
        if li == 0:
            continue
        for j in range(f + 1):
            psi[i + j] ^= _gf_mul(li, int(gamma[j]), logt, expt)

    # Chien over the m code positions
    nroots = 0
    corrections = 0
    root_pos = ws[5]
    for p in range(m):
        xinv = int(expt[(q - 1 - p % (q - 1)) % (q - 1)])  # alpha^-p
        if _poly_eval(psi, deg_psi, xinv, logt, expt) == 0:
            if nroots < deg_psi:
                root_pos[nroots] = p
            nroots += 1
    if nroots != deg_psi:
        return 1, 0

    # Omega = S(x) Psi(x) mod x^(nsyn+1); S has zero constant term
    omega = ws[1]  # gamma no longer needed
    deg_omega = min(nsyn, deg_psi + nsyn)
    for i in range(deg_omega + 1):
        acc = 0
        for j in range(max(1, i - deg_psi), i + 1):
            acc ^= _gf_mul(int(synd[j]), int(psi[i - j]), logt, expt)
        omega[i] = acc

    # Forney: e_p = X_p * Omega(X_p^-1) / Psi'(X_p^-1)
    for ri in range(deg_psi):
        p = int(root_pos[ri])
        xinv = int(expt[(q - 1 - p % (q - 1)) % (q - 1)])
        num = _poly_eval(omega, deg_omega, xinv, logt, expt)
        den = 0
        # Psi'(x): odd-degree terms shifted down
        xi = 1
        for i in range(1, deg_psi + 1, 2):
            den ^= _gf_mul(int(psi[i]), xi, logt, expt)
            xi = _gf_mul(xi, _gf_mul(xinv, xinv, logt, expt), logt, expt)
        if den == 0:
            return 1, 0
        ev = _gf_mul(num, int(expt[q - 1 - logt[den]]), logt, expt)
        ev = _gf_mul(ev, int(expt[p % (q - 1)]), logt, expt)
        if ev == 0:
            if not erased[p]:
                return 1, 0
            continue
        out[p] = int(out[p]) ^ ev
        corrections += 1

    # the corrected word must be a codeword
    for i in range(1, nsyn + 1):
        x = int(expt[i % (q - 1)])
        if _poly_eval(out, m - 1, x, logt, expt) != 0:
            out[:] = word
            return 1, 0
    return 0, corrections


def rs_gmd_core(word, rels, tau: int, logt, expt, q: int,
                out_cands, out_alphas, ws) -> int:
    """GMD trial loop: erase the alpha least reliable positions for
    alpha in {0, 2, .., 2*tau} and collect distinct decode successes.

    Returns the number of candidates written to out_cands (each a full
    codeword row) / out_alphas. Ordering of equal reliabilities is by
    position index.
    """
    m = word.shape[0]
    order = sorted(range(m), key=lambda j: (rels[j], j))
    erased = np.zeros(m, dtype=np.uint8)
    cw = np.zeros(m, dtype=np.int32)
    ncand = 0
    for alpha in range(0, 2 * tau + 1, 2):
        erased[:] = 0
        for i in range(alpha):
            erased[order[i]] = 1
        status, _ = rs_decode_ee(word, erased, tau, logt, expt, q, cw, ws)
        if status != 0:
            continue
        dup = False
        for c in range(ncand):
            if np.array_equal(out_cands[c, :m], cw):
                dup = True
                break
        if not dup:
            out_cands[ncand, :m] = cw
            out_alphas[ncand] = alpha
            ncand += 1
    return ncand
