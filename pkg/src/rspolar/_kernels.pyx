# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False, language_level=3
"""Compiled kernel backend.

Bit-for-bit mirror of `_kernels_py` (same float operation order, same tie
rules), plus whole-frame encode/decode monoliths that keep the Monte
Carlo hot loop out of Python. See _kernels_py for the documented
reference semantics.
"""

from libc.math cimport exp, fabs, log, log1p

import numpy as np

BACKEND_NAME = "compiled"
LLR_MAX = 40.0

cdef double _LMAX = 40.0
cdef double _NEG_INF = -1.0e300

DEF MAX_T = 16


# ---------------------------------------------------------------------------
# scalar node operations

cdef inline double _boxplus(double a, double b, bint minsum) noexcept nogil:
    cdef double w = fabs(b)
    cdef double v = fabs(a)
    if w < v:
        v = w
    if (a >= 0.0) != (b >= 0.0):
        v = -v
    if not minsum:
        v += log1p(exp(-fabs(a + b))) - log1p(exp(-fabs(a - b)))
    if v > _LMAX:
        return _LMAX
    if v < -_LMAX:
        return -_LMAX
    return v


cdef inline double _gnode(double a, double b, int u) noexcept nogil:
    cdef double v
    if u == 0:
        v = b + a
    else:
        v = b - a
    if v > _LMAX:
        return _LMAX
    if v < -_LMAX:
        return -_LMAX
    return v


cdef inline double _logsig(double x) noexcept nogil:
    return -log1p(exp(-x))


# ---------------------------------------------------------------------------
# SC lattice primitives

cdef double _update_llrs_c(double[:, ::1] lam, unsigned char[:, ::1] bits,
                           int pos, bint minsum) noexcept nogil:
    cdef int stages = lam.shape[0] - 1
    cdef int nfresh, lev, h, blk, base, p, j, tmp
    if pos == 0:
        nfresh = stages
    else:
        nfresh = 1
        tmp = pos
        while (tmp & 1) == 0:
            tmp >>= 1
            nfresh += 1
    for lev in range(nfresh - 1, -1, -1):
        h = 1 << lev
        blk = pos >> lev
        base = blk << lev
        if (blk & 1) == 0:
            for j in range(h):
                lam[lev, base + j] = _boxplus(lam[lev + 1, base + j],
                                              lam[lev + 1, base + h + j], minsum)
        else:
            p = base - h
            for j in range(h):
                lam[lev, base + j] = _gnode(lam[lev + 1, p + j],
                                            lam[lev + 1, p + h + j],
                                            bits[lev, p + j])
    return lam[0, pos]


cdef int _update_bits_c(unsigned char[:, ::1] bits, unsigned char[::1] dec,
                        int pos, int u, bint logged,
                        int[::1] log_lev, int[::1] log_col,
                        unsigned char[::1] log_old, int log_len) noexcept nogil:
    cdef int stages = bits.shape[0] - 1
    cdef int lev = 0
    cdef int a = pos
    cdef int h, left, right, j
    if logged:
        log_lev[log_len] = -1
        log_col[log_len] = pos
        log_old[log_len] = dec[pos]
        log_len += 1
        log_lev[log_len] = 0
        log_col[log_len] = pos
        log_old[log_len] = bits[0, pos]
        log_len += 1
    dec[pos] = <unsigned char> u
    bits[0, pos] = <unsigned char> u
    while (a & 1) and lev < stages - 1:
        h = 1 << lev
        left = (a - 1) << lev
        right = a << lev
        if logged:
            for j in range(2 * h):
                log_lev[log_len] = lev + 1
                log_col[log_len] = left + j
                log_old[log_len] = bits[lev + 1, left + j]
                log_len += 1
        for j in range(h):
            bits[lev + 1, left + j] = bits[lev, left + j] ^ bits[lev, right + j]
            bits[lev + 1, left + h + j] = bits[lev, right + j]
        a >>= 1
        lev += 1
    return log_len


cdef void _rewind_c(unsigned char[:, ::1] bits, unsigned char[::1] dec,
                    int[::1] log_lev, int[::1] log_col,
                    unsigned char[::1] log_old,
                    int log_from, int log_to) noexcept nogil:
    cdef int i, lev
    for i in range(log_to - 1, log_from - 1, -1):
        lev = log_lev[i]
        if lev < 0:
            dec[log_col[i]] = log_old[i]
        else:
            bits[lev, log_col[i]] = log_old[i]


def sc_rewind(unsigned char[:, ::1] bits, unsigned char[::1] dec,
              int[::1] log_lev, int[::1] log_col, unsigned char[::1] log_old,
              int log_from, int log_to):
    _rewind_c(bits, dec, log_lev, log_col, log_old, log_from, log_to)


cdef int _decode_range_c(double[:, ::1] lam, unsigned char[:, ::1] bits,
                         unsigned char[::1] dec, const unsigned char[::1] frozen,
                         unsigned char[::1] forced_mask,
                         unsigned char[::1] forced_bits,
                         int start, int stop, double[::1] out_llrs,
                         bint minsum, int[::1] log_lev, int[::1] log_col,
                         unsigned char[::1] log_old, int log_len,
                         bint logged) noexcept nogil:
    cdef int pos, u
    cdef double llr
    for pos in range(start, stop):
        llr = _update_llrs_c(lam, bits, pos, minsum)
        out_llrs[pos - start] = llr
        if forced_mask[pos]:
            u = forced_bits[pos]
        elif frozen[pos]:
            u = 0
        else:
            u = 1 if llr < 0.0 else 0
        log_len = _update_bits_c(bits, dec, pos, u, logged,
                                 log_lev, log_col, log_old, log_len)
    return log_len


def sc_decode_range(double[:, ::1] lam, unsigned char[:, ::1] bits,
                    unsigned char[::1] dec, const unsigned char[::1] frozen,
                    unsigned char[::1] forced_mask,
                    unsigned char[::1] forced_bits,
                    int start, int stop, double[::1] out_llrs, bint minsum,
                    int[::1] log_lev, int[::1] log_col,
                    unsigned char[::1] log_old, int log_len, bint logged):
    return _decode_range_c(lam, bits, dec, frozen, forced_mask, forced_bits,
                           start, stop, out_llrs, minsum,
                           log_lev, log_col, log_old, log_len, logged)


cdef int _dfs_c(double[:, ::1] lam, unsigned char[:, ::1] bits,
                unsigned char[::1] dec, const unsigned char[::1] frozen,
                int pos, int depth, int nbits, double acc, bint minsum,
                double[::1] out_logq, double[:, ::1] out_pathllr,
                double* llr_stack, int pattern,
                int[::1] log_lev, int[::1] log_col,
                unsigned char[::1] log_old, int log_len,
                int* end_pos) noexcept nogil:
    cdef double llr, lp
    cdef int u, mark, sub, pat, d
    while frozen[pos]:
        llr = _update_llrs_c(lam, bits, pos, minsum)
        acc = acc + _logsig(llr)
        log_len = _update_bits_c(bits, dec, pos, 0, True,
                                 log_lev, log_col, log_old, log_len)
        pos += 1
    llr = _update_llrs_c(lam, bits, pos, minsum)
    llr_stack[depth] = llr
    end_pos[0] = pos + 1
    for u in range(2):
        mark = log_len
        if u == 0:
            lp = acc + _logsig(llr)
        else:
            lp = acc + _logsig(-llr)
        sub = _update_bits_c(bits, dec, pos, u, True,
                             log_lev, log_col, log_old, mark)
        pat = pattern | (u << depth)
        if depth == nbits - 1:
            out_logq[pat] = lp
            for d in range(nbits):
                out_pathllr[pat, d] = llr_stack[d]
        else:
            sub = _dfs_c(lam, bits, dec, frozen, pos + 1, depth + 1, nbits,
                         lp, minsum, out_logq, out_pathllr, llr_stack, pat,
                         log_lev, log_col, log_old, sub, end_pos)
        _rewind_c(bits, dec, log_lev, log_col, log_old, mark, sub)
    return log_len


cdef int _symbol_dfs_c(double[:, ::1] lam, unsigned char[:, ::1] bits,
                       unsigned char[::1] dec, const unsigned char[::1] frozen,
                       int start, int nbits, bint minsum,
                       double[::1] out_logq, double[:, ::1] out_pathllr,
                       int[::1] log_lev, int[::1] log_col,
                       unsigned char[::1] log_old) noexcept nogil:
    cdef double llr_stack[MAX_T]
    cdef int end_pos = start
    cdef int final_len = _dfs_c(lam, bits, dec, frozen, start, 0, nbits, 0.0,
                                minsum, out_logq, out_pathllr, llr_stack, 0,
                                log_lev, log_col, log_old, 0, &end_pos)
    _rewind_c(bits, dec, log_lev, log_col, log_old, 0, final_len)
    return end_pos


def sc_symbol_dfs(double[:, ::1] lam, unsigned char[:, ::1] bits,
                  unsigned char[::1] dec, const unsigned char[::1] frozen,
                  int start, int nbits, bint minsum,
                  double[::1] out_logq, double[:, ::1] out_pathllr,
                  int[::1] log_lev, int[::1] log_col,
                  unsigned char[::1] log_old):
    if nbits > MAX_T:
        raise ValueError(f"nbits must be <= {MAX_T}")
    return _symbol_dfs_c(lam, bits, dec, frozen, start, nbits, minsum,
                         out_logq, out_pathllr, log_lev, log_col, log_old)


def genie_chunk(const double[:, ::1] rows, long long[::1] err_counts,
                double[:, ::1] lam, bint minsum):
    cdef int stages = lam.shape[0] - 1
    cdef int n = lam.shape[1]
    cdef int r, pos, nfresh, lev, h, blk, base, p, j, tmp
    with nogil:
        for r in range(rows.shape[0]):
            for j in range(n):
                lam[stages, j] = rows[r, j]
            for pos in range(n):
                if pos == 0:
                    nfresh = stages
                else:
                    nfresh = 1
                    tmp = pos
                    while (tmp & 1) == 0:
                        tmp >>= 1
                        nfresh += 1
                for lev in range(nfresh - 1, -1, -1):
                    h = 1 << lev
                    blk = pos >> lev
                    base = blk << lev
                    if (blk & 1) == 0:
                        for j in range(h):
                            lam[lev, base + j] = _boxplus(
                                lam[lev + 1, base + j],
                                lam[lev + 1, base + h + j], minsum)
                    else:
                        p = base - h
                        for j in range(h):
                            lam[lev, base + j] = _gnode(
                                lam[lev + 1, p + j],
                                lam[lev + 1, p + h + j], 0)
                if lam[0, pos] <= 0.0:
                    err_counts[pos] += 1


# ---------------------------------------------------------------------------
# Reed-Solomon core

cdef inline int _gmul(int a, int b, const int[::1] logt, const int[::1] expt) noexcept nogil:
    if a == 0 or b == 0:
        return 0
    return expt[logt[a] + logt[b]]


cdef inline int _ginv(int a, int q, const int[::1] logt, const int[::1] expt) noexcept nogil:
    return expt[q - 1 - logt[a]]


cdef int _poly_eval_c(const int[::1] coeffs, int deg, int x,
                      const int[::1] logt, const int[::1] expt) noexcept nogil:
    cdef int acc = 0
    cdef int i
    for i in range(deg, -1, -1):
        acc = _gmul(acc, x, logt, expt) ^ coeffs[i]
    return acc


def rs_encode_parity(const int[::1] msg, const int[:, ::1] pmat,
                     const int[::1] logt, const int[::1] expt, int[::1] out):
    cdef int i, j, acc
    for i in range(pmat.shape[0]):
        acc = 0
        for j in range(pmat.shape[1]):
            acc ^= _gmul(pmat[i, j], msg[j], logt, expt)
        out[i] = acc


cdef (int, int) _rs_decode_ee_c(const int[::1] word, const unsigned char[::1] erased,
                                int tau, const int[::1] logt, const int[::1] expt, int q,
                                int[::1] out, int[:, ::1] ws) noexcept nogil:
    cdef int m = word.shape[0]
    cdef int nsyn = 2 * tau
    cdef int i, j, k, x, s, f, p
    cdef bint allzero = True
    for i in range(m):
        out[i] = word[i]
    if nsyn == 0:
        return 0, 0
    cdef int[::1] synd = ws[0]
    synd[0] = 0
    for i in range(1, nsyn + 1):
        x = expt[i % (q - 1)]
        s = _poly_eval_c(word, m - 1, x, logt, expt)
        synd[i] = s
        if s != 0:
            allzero = False
    if allzero:
        return 0, 0

    cdef int[::1] gamma = ws[1]
    gamma[0] = 1
    f = 0
    cdef int xl
    for p in range(m):
        if erased[p]:
            xl = expt[p % (q - 1)]
            gamma[f + 1] = 0
            for i in range(f + 1, 0, -1):
                gamma[i] ^= _gmul(xl, gamma[i - 1], logt, expt)
            f += 1

    cdef int[::1] tsyn = ws[2]
    cdef int acc, lo
    for i in range(nsyn + 1):
        acc = 0
        lo = i - f
        if lo < 1:
            lo = 1
        for j in range(lo, i + 1):
            acc ^= _gmul(synd[j], gamma[i - j], logt, expt)
        tsyn[i] = acc

    cdef int nseq = nsyn - f
    cdef int[::1] lam_p = ws[3]
    cdef int[::1] bpoly = ws[4]
    for i in range(nsyn + 1):
        lam_p[i] = 0
        bpoly[i] = 0
    lam_p[0] = 1
    bpoly[0] = 1
    cdef int big_l = 0
    cdef int bb = 1
    cdef int shift = 1
    cdef int d, coef
    cdef int[::1] tmp = ws[5]
    for k in range(nseq):
        d = tsyn[f + 1 + k]
        for i in range(1, big_l + 1):
            d ^= _gmul(lam_p[i], tsyn[f + 1 + k - i], logt, expt)
        if d == 0:
            shift += 1
            continue
        coef = _gmul(d, _ginv(bb, q, logt, expt), logt, expt)
        if 2 * big_l <= k:
            for i in range(nsyn + 1):
                tmp[i] = lam_p[i]
            for i in range(nsyn + 1 - shift):
                lam_p[i + shift] ^= _gmul(coef, bpoly[i], logt, expt)
            big_l = k + 1 - big_l
            for i in range(nsyn + 1):
                bpoly[i] = tmp[i]
            bb = d
            shift = 1
        else:
            for i in range(nsyn + 1 - shift):
                lam_p[i + shift] ^= _gmul(coef, bpoly[i], logt, expt)
            shift += 1
    if 2 * big_l > nseq:
        return 1, 0
    cdef int deg_lam = 0
    for i in range(nsyn, -1, -1):
        if lam_p[i] != 0:
            deg_lam = i
            break
    if deg_lam != big_l:
        return 1, 0

    cdef int deg_psi = deg_lam + f
    cdef int[::1] psi = ws[6]
    for i in range(deg_psi + 1):
        psi[i] = 0
    cdef int li
    for i in range(deg_lam + 1):
        li = lam_p[i]
        if li == 0:
            continue
        for j in range(f + 1):
            psi[i + j] ^= _gmul(li, gamma[j], logt, expt)

    cdef int nroots = 0
    cdef int corrections = 0
    cdef int[::1] root_pos = ws[5]
    cdef int xinv
    for p in range(m):
        xinv = expt[(q - 1 - p % (q - 1)) % (q - 1)]
        if _poly_eval_c(psi, deg_psi, xinv, logt, expt) == 0:
            if nroots < deg_psi:
                root_pos[nroots] = p
            nroots += 1
    if nroots != deg_psi:
        return 1, 0

    cdef int[::1] omega = ws[1]
    cdef int deg_omega = nsyn
    if deg_psi + nsyn < deg_omega:
        deg_omega = deg_psi + nsyn
    for i in range(deg_omega + 1):
        acc = 0
        lo = i - deg_psi
        if lo < 1:
            lo = 1
        for j in range(lo, i + 1):
            acc ^= _gmul(synd[j], psi[i - j], logt, expt)
        omega[i] = acc

    cdef int ri, num, den, xi, ev
    for ri in range(deg_psi):
        p = root_pos[ri]
        xinv = expt[(q - 1 - p % (q - 1)) % (q - 1)]
        num = _poly_eval_c(omega, deg_omega, xinv, logt, expt)
        den = 0
        xi = 1
        for i in range(1, deg_psi + 1, 2):
            den ^= _gmul(psi[i], xi, logt, expt)
            xi = _gmul(xi, _gmul(xinv, xinv, logt, expt), logt, expt)
        if den == 0:
            return 1, 0
        ev = _gmul(num, _ginv(den, q, logt, expt), logt, expt)
        ev = _gmul(ev, expt[p % (q - 1)], logt, expt)
        if ev == 0:
            if not erased[p]:
                return 1, 0
            continue
        out[p] = out[p] ^ ev
        corrections += 1

    for i in range(1, nsyn + 1):
        x = expt[i % (q - 1)]
        if _poly_eval_c(out, m - 1, x, logt, expt) != 0:
            for j in range(m):
                out[j] = word[j]
            return 1, 0
    return 0, corrections


def rs_decode_ee(const int[::1] word, const unsigned char[::1] erased, int tau,
                 const int[::1] logt, const int[::1] expt, int q, int[::1] out,
                 int[:, ::1] ws):
    cdef (int, int) res = _rs_decode_ee_c(word, erased, tau, logt, expt, q,
                                          out, ws)
    return res[0], res[1]


cdef void _sort_by_rel_c(const double[::1] rels, int[::1] order, int m) noexcept nogil:
    # insertion sort on (reliability, index), ascending
    cdef int i, j, key
    cdef double kr
    for i in range(m):
        order[i] = i
    for i in range(1, m):
        key = order[i]
        kr = rels[key]
        j = i - 1
        while j >= 0 and (rels[order[j]] > kr or
                          (rels[order[j]] == kr and order[j] > key)):
            order[j + 1] = order[j]
            j -= 1
        order[j + 1] = key


cdef int _rs_gmd_core_c(const int[::1] word, const double[::1] rels, int tau,
                        const int[::1] logt, const int[::1] expt, int q,
                        int[:, ::1] out_cands, int[::1] out_alphas,
                        int[:, ::1] ws, int[::1] order,
                        unsigned char[::1] erased, int[::1] cw) noexcept nogil:
    cdef int m = word.shape[0]
    cdef int ncand = 0
    cdef int alpha, i, c, status, corr
    cdef bint dup, same
    cdef (int, int) res
    _sort_by_rel_c(rels, order, m)
    for alpha in range(0, 2 * tau + 1, 2):
        for i in range(m):
            erased[i] = 0
        for i in range(alpha):
            erased[order[i]] = 1
        res = _rs_decode_ee_c(word, erased, tau, logt, expt, q, cw, ws)
        if res[0] != 0:
            continue
        dup = False
        for c in range(ncand):
            same = True
            for i in range(m):
                if out_cands[c, i] != cw[i]:
                    same = False
                    break
            if same:
                dup = True
                break
        if not dup:
            for i in range(m):
                out_cands[ncand, i] = cw[i]
            out_alphas[ncand] = alpha
            ncand += 1
    return ncand


def rs_gmd_core(const int[::1] word, const double[::1] rels, int tau,
                const int[::1] logt, const int[::1] expt, int q, int[:, ::1] out_cands,
                int[::1] out_alphas, int[:, ::1] ws):
    cdef int m = word.shape[0]
    order = np.zeros(m, dtype=np.int32)
    erased = np.zeros(m, dtype=np.uint8)
    cw = np.zeros(m, dtype=np.int32)
    return _rs_gmd_core_c(word, rels, tau, logt, expt, q, out_cands,
                          out_alphas, ws, order, erased, cw)


# ---------------------------------------------------------------------------
# whole-frame kernels


def frame_encode(const unsigned char[::1] payload, pack, unsigned char[:, ::1] out):
    cdef int n = pack.n
    cdef int t = pack.t
    cdef int m = pack.m
    cdef int r = pack.r
    cdef const int[::1] info_pos = pack.info_pos
    cdef const int[::1] bitrev = pack.bitrev
    cdef const int[::1] taus = pack.taus
    cdef const int[::1] kappas = pack.kappas
    cdef const int[::1] pmat = pack.pmat
    cdef const int[::1] pmat_off = pack.pmat_off
    cdef const int[::1] logt = pack.logt
    cdef const int[::1] expt = pack.expt
    syms_arr = np.zeros((r, m), dtype=np.int32)
    ub_arr = np.zeros(n, dtype=np.uint8)
    cdef int[:, ::1] syms = syms_arr
    cdef unsigned char[::1] ub = ub_arr
    cdef int i, j, d, kap, ntau, off, s, acc, row, base, dd, idx
    with nogil:
        off = 0
        for i in range(r):
            kap = kappas[i]
            ntau = taus[i]
            for j in range(kap):
                s = 0
                for d in range(t):
                    s |= (<int> payload[off + d]) << d
                syms[i, j] = s
                off += t
            base = pmat_off[i]
            for row in range(2 * ntau):
                acc = 0
                for j in range(kap):
                    acc ^= _gmul(pmat[base + row * kap + j], syms[i, j],
                                 logt, expt)
                syms[i, kap + row] = acc
        for j in range(m):
            for idx in range(n):
                ub[idx] = 0
            for i in range(r):
                s = syms[i, j]
                for d in range(t):
                    ub[info_pos[i * t + d]] = (s >> d) & 1
            dd = 1
            while dd < n:
                for idx in range(n):
                    if (idx & dd) == 0:
                        ub[idx] ^= ub[idx | dd]
                dd <<= 1
            for idx in range(n):
                out[j, idx] = ub[bitrev[idx]]


# decode mode codes (keep in sync with concat._MODE_CODE)
DEF MODE_SERIAL = 0
DEF MODE_HARD = 1
DEF MODE_GMD = 2
DEF MODE_AML = 3
DEF MODE_EML = 4


def frame_decode(const double[:, ::1] llrs, pack, ws, int mode,
                 unsigned char[::1] out_payload,
                 unsigned char[:, ::1] out_blockdata,
                 int[:, ::1] out_syms, unsigned char[::1] out_rowok):
    cdef int n = pack.n
    cdef int t = pack.t
    cdef int m = pack.m
    cdef int r = pack.r
    cdef int q = pack.q
    cdef int stages = pack.stages
    cdef const unsigned char[::1] frozen = pack.frozen
    cdef const int[::1] info_pos = pack.info_pos
    cdef const int[::1] bitrev = pack.bitrev
    cdef const int[::1] taus = pack.taus
    cdef const int[::1] kappas = pack.kappas
    cdef const int[::1] span_end = pack.span_end
    cdef const int[::1] logt = pack.logt
    cdef const int[::1] expt = pack.expt

    cdef double[:, :, ::1] lam3 = ws.lam
    cdef unsigned char[:, :, ::1] bits3 = ws.bits
    cdef unsigned char[:, ::1] dec2 = ws.dec
    cdef int[:, ::1] log_lev2 = ws.log_lev
    cdef int[:, ::1] log_col2 = ws.log_col
    cdef unsigned char[:, ::1] log_old2 = ws.log_old
    cdef long long[::1] log_len1 = ws.log_len
    cdef unsigned char[::1] fmask = ws.fmask
    cdef unsigned char[::1] fbits = ws.fbits
    cdef double[::1] out_llr = ws.out_llr
    cdef double[:, ::1] logq2 = ws.logq
    cdef double[:, ::1] pathllr = ws.pathllr
    cdef double[:, ::1] logp2 = ws.logp
    cdef double[:, ::1] bit_llr2 = ws.bit_llr
    cdef int[:, ::1] cands = ws.cands
    cdef int[::1] alphas = ws.alphas
    cdef double[::1] rels = ws.rels
    cdef int[::1] word = ws.hard
    cdef int[:, ::1] rs_ws = ws.rs_ws
    cdef int[::1] gmd_order = ws.gmd_order
    cdef unsigned char[::1] gmd_erased = ws.gmd_erased
    cdef int[::1] gmd_cw = ws.gmd_cw

    cdef int nsym = 1 << t
    cdef int i, j, d, s, pos, col, u, hard, stage_tau, start, stop
    cdef int ncand, c, best, dist, best_dist, status, corr, kap, off
    cdef double mx, tot, sc, best_sc
    cdef bint differ
    cdef (int, int) res

    with nogil:
        # per-block state init (channel row in internal bit-reversed order)
        for j in range(m):
            for col in range(n):
                lam3[j, stages, col] = llrs[j, bitrev[col]]
            for i in range(stages + 1):
                for col in range(n):
                    bits3[j, i, col] = 0
            for col in range(n):
                dec2[j, col] = 0
            log_len1[j] = 0

        if mode == MODE_SERIAL:
            for j in range(m):
                _decode_range_c(lam3[j], bits3[j], dec2[j], frozen,
                                fmask, fbits, 0, span_end[r], out_llr,
                                False, log_lev2[j], log_col2[j], log_old2[j],
                                0, False)
            for i in range(r):
                for j in range(m):
                    s = 0
                    for d in range(t):
                        s |= (<int> dec2[j, info_pos[i * t + d]]) << d
                    word[j] = s
                for j in range(m):
                    gmd_erased[j] = 0
                res = _rs_decode_ee_c(word, gmd_erased, taus[i], logt, expt,
                                      q, gmd_cw, rs_ws)
                if res[0] == 0:
                    for j in range(m):
                        out_syms[i, j] = gmd_cw[j]
                    out_rowok[i] = 1
                else:
                    for j in range(m):
                        out_syms[i, j] = word[j]
                    out_rowok[i] = 0
        else:
            for i in range(r):
                start = span_end[i]
                stop = span_end[i + 1]
                stage_tau = taus[i]
                if mode == MODE_EML:
                    for j in range(m):
                        _symbol_dfs_c(lam3[j], bits3[j], dec2[j], frozen,
                                      start, t, False, logq2[j], pathllr,
                                      log_lev2[j], log_col2[j], log_old2[j])
                        mx = logq2[j, 0]
                        for s in range(1, nsym):
                            if logq2[j, s] > mx:
                                mx = logq2[j, s]
                        tot = 0.0
                        for s in range(nsym):
                            logp2[j, s] = exp(logq2[j, s] - mx)
                            tot += logp2[j, s]
                        for s in range(nsym):
                            logp2[j, s] /= tot
                        hard = 0
                        for s in range(1, nsym):
                            if logp2[j, s] > logp2[j, hard]:
                                hard = s
                        word[j] = hard
                        rels[j] = logp2[j, hard]
                        for s in range(nsym):
                            if logp2[j, s] > 0.0:
                                logp2[j, s] = log(logp2[j, s])
                            else:
                                logp2[j, s] = _NEG_INF
                else:
                    for j in range(m):
                        log_len1[j] = _decode_range_c(
                            lam3[j], bits3[j], dec2[j], frozen, fmask, fbits,
                            start, stop, out_llr, False,
                            log_lev2[j], log_col2[j], log_old2[j], 0, True)
                        s = 0
                        for d in range(t):
                            pos = info_pos[i * t + d]
                            bit_llr2[j, d] = out_llr[pos - start]
                            s |= (<int> dec2[j, pos]) << d
                        word[j] = s
                        if mode != MODE_HARD:
                            for s in range(nsym):
                                sc = 0.0
                                for d in range(t):
                                    if (s >> d) & 1 == 0:
                                        sc += _logsig(bit_llr2[j, d])
                                    else:
                                        sc += _logsig(-bit_llr2[j, d])
                                logq2[j, s] = sc
                            rels[j] = exp(logq2[j, word[j]])
                            mx = logq2[j, 0]
                            for s in range(1, nsym):
                                if logq2[j, s] > mx:
                                    mx = logq2[j, s]
                            tot = 0.0
                            for s in range(nsym):
                                logp2[j, s] = exp(logq2[j, s] - mx)
                                tot += logp2[j, s]
                            for s in range(nsym):
                                logp2[j, s] /= tot
                            for s in range(nsym):
                                if logp2[j, s] > 0.0:
                                    logp2[j, s] = log(logp2[j, s])
                                else:
                                    logp2[j, s] = _NEG_INF

                # outer decode of this stage's word
                if mode == MODE_HARD:
                    for j in range(m):
                        gmd_erased[j] = 0
                    res = _rs_decode_ee_c(word, gmd_erased, stage_tau, logt,
                                          expt, q, gmd_cw, rs_ws)
                    if res[0] == 0:
                        for j in range(m):
                            out_syms[i, j] = gmd_cw[j]
                        out_rowok[i] = 1
                    else:
                        for j in range(m):
                            out_syms[i, j] = word[j]
                        out_rowok[i] = 0
                else:
                    ncand = _rs_gmd_core_c(word, rels, stage_tau, logt, expt,
                                           q, cands, alphas, rs_ws, gmd_order,
                                           gmd_erased, gmd_cw)
                    if ncand == 0:
                        for j in range(m):
                            out_syms[i, j] = word[j]
                        out_rowok[i] = 0
                    else:
                        best = 0
                        if mode == MODE_GMD:
                            best_dist = m + 1
                            for c in range(ncand):
                                dist = 0
                                for j in range(m):
                                    if cands[c, j] != word[j]:
                                        dist += 1
                                if dist < best_dist:
                                    best_dist = dist
                                    best = c
                        else:
                            best_sc = -1.0e308
                            for c in range(ncand):
                                sc = 0.0
                                for j in range(m):
                                    sc += logp2[j, cands[c, j]]
                                if sc > best_sc:
                                    best_sc = sc
                                    best = c
                        for j in range(m):
                            out_syms[i, j] = cands[best, j]
                        out_rowok[i] = 1

                # feed the corrected symbols back into every block
                for j in range(m):
                    s = out_syms[i, j]
                    if mode == MODE_EML:
                        for d in range(t):
                            pos = info_pos[i * t + d]
                            fmask[pos] = 1
                            fbits[pos] = (s >> d) & 1
                        _decode_range_c(lam3[j], bits3[j], dec2[j], frozen,
                                        fmask, fbits, start, stop, out_llr,
                                        False, log_lev2[j], log_col2[j],
                                        log_old2[j], 0, False)
                        for d in range(t):
                            fmask[info_pos[i * t + d]] = 0
                    else:
                        differ = False
                        for d in range(t):
                            if dec2[j, info_pos[i * t + d]] != ((s >> d) & 1):
                                differ = True
                                break
                        if differ:
                            _rewind_c(bits3[j], dec2[j], log_lev2[j],
                                      log_col2[j], log_old2[j], 0,
                                      <int> log_len1[j])
                            for d in range(t):
                                pos = info_pos[i * t + d]
                                fmask[pos] = 1
                                fbits[pos] = (s >> d) & 1
                            _decode_range_c(lam3[j], bits3[j], dec2[j],
                                            frozen, fmask, fbits, start, stop,
                                            out_llr, False, log_lev2[j],
                                            log_col2[j], log_old2[j], 0, False)
                            for d in range(t):
                                fmask[info_pos[i * t + d]] = 0

        # outputs
        off = 0
        for i in range(r):
            kap = kappas[i]
            for j in range(kap):
                s = out_syms[i, j]
                for d in range(t):
                    out_payload[off + d] = (s >> d) & 1
                off += t
        for j in range(m):
            for i in range(r):
                s = out_syms[i, j]
                for d in range(t):
                    out_blockdata[j, i * t + d] = (s >> d) & 1
