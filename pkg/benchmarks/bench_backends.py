#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs each hot kernel on representative workloads through both backends
and prints a timing table. The pure-Python backend is orders of
magnitude slower, so iteration counts are scaled per backend.

Usage: python benchmarks/bench_backends.py
"""

import time

import numpy as np

from rspolar import _backend, _kernels_py
from rspolar.gf import GFContext
from rspolar.polar import bit_reversal_permutation


def timeit(fn, iters):
    t0 = time.perf_counter()
    for _ in range(iters):
        fn()
    return (time.perf_counter() - t0) / iters


def bench_sc_decode(mod, n=512):
    stages = n.bit_length() - 1
    rng = np.random.default_rng(0)
    llr = rng.normal(size=n) * 2
    rev = bit_reversal_permutation(n)
    lam = np.zeros((stages + 1, n))
    lam[stages] = llr[rev]
    bits = np.zeros((stages + 1, n), dtype=np.uint8)
    dec = np.zeros(n, dtype=np.uint8)
    frozen = np.ones(n, dtype=np.uint8)
    frozen[np.sort(rng.choice(n, n // 3, replace=False))] = 0
    fm = np.zeros(n, dtype=np.uint8)
    fb = np.zeros(n, dtype=np.uint8)
    out = np.zeros(n)
    cap = 8 * n + 16
    ll = np.zeros(cap, dtype=np.int32)
    lc = np.zeros(cap, dtype=np.int32)
    lo = np.zeros(cap, dtype=np.uint8)

    def run():
        bits[:] = 0
        dec[:] = 0
        mod.sc_decode_range(lam, bits, dec, frozen, fm, fb, 0, n, out,
                            False, ll, lc, lo, 0, False)
    return run


def bench_symbol_dfs(mod, n=512, t=4):
    stages = n.bit_length() - 1
    rng = np.random.default_rng(1)
    llr = rng.normal(size=n) * 2
    rev = bit_reversal_permutation(n)
    lam = np.zeros((stages + 1, n))
    lam[stages] = llr[rev]
    bits = np.zeros((stages + 1, n), dtype=np.uint8)
    dec = np.zeros(n, dtype=np.uint8)
    frozen = np.ones(n, dtype=np.uint8)
    frozen[np.sort(rng.choice(n, n // 3, replace=False))] = 0
    cap = 8 * n + 16
    ll = np.zeros(cap, dtype=np.int32)
    lc = np.zeros(cap, dtype=np.int32)
    lo = np.zeros(cap, dtype=np.uint8)
    logq = np.zeros(1 << t)
    pllr = np.zeros((1 << t, t))

    def run():
        mod.sc_symbol_dfs(lam, bits, dec, frozen, 0, t, False, logq, pllr,
                          ll, lc, lo)
    return run


def bench_rs_decode(mod):
    ctx = GFContext(4, 0x13)
    rng = np.random.default_rng(2)
    word = rng.integers(0, 16, 15).astype(np.int32)
    erased = np.zeros(15, dtype=np.uint8)
    out = np.zeros(15, dtype=np.int32)
    ws = np.zeros((7, 17), dtype=np.int32)

    def run():
        mod.rs_decode_ee(word, erased, 2, ctx.log_table, ctx.antilog_table,
                         16, out, ws)
    return run


def bench_genie(mod, n=512, rows=16):
    stages = n.bit_length() - 1
    rng = np.random.default_rng(3)
    data = rng.normal(size=(rows, n)) * 2 + 2
    counts = np.zeros(n, dtype=np.int64)
    lam = np.zeros((stages + 1, n))

    def run():
        mod.genie_chunk(data, counts, lam, False)
    return run


def bench_frame_decode(mode):
    from rspolar.channel import ChannelParams, transmit
    from rspolar.concat import concat_encode, decode_serial, decode_successive
    from rspolar.presets import adaptive_spec
    spec = adaptive_spec()
    ch = ChannelParams(kind="awgn", ebn0_db=2.0, rate=spec.total_rate, seed=4)
    rng = np.random.default_rng(4)
    payload = rng.integers(0, 2, spec.payload_bits, dtype=np.uint8)
    llr = transmit(ch, concat_encode(spec, payload).reshape(-1)).reshape(
        spec.m, spec.n)

    def run():
        if mode == "serial":
            decode_serial(spec, llr)
        else:
            decode_successive(spec, llr, mode)
    return run


def main():
    compiled = _backend.get_compiled_backend()
    rows = []
    cases = [
        ("sc_decode n=512", bench_sc_decode, 200, 2),
        ("symbol_dfs n=512 t=4", bench_symbol_dfs, 200, 2),
        ("rs_decode_ee (15,11)", bench_rs_decode, 5000, 200),
        ("genie_chunk 16x512", bench_genie, 50, 1),
    ]
    for name, factory, it_c, it_py in cases:
        t_py = timeit(factory(_kernels_py), it_py)
        t_c = timeit(factory(compiled), it_c) if compiled else float("nan")
        rows.append((name, t_c, t_py))
    print(f"{'kernel':28s} {'compiled':>12s} {'python':>12s} {'speedup':>9s}")
    for name, t_c, t_py in rows:
        sp = t_py / t_c if t_c == t_c else float("nan")
        print(f"{name:28s} {t_c * 1e6:10.1f}us {t_py * 1e6:10.1f}us {sp:8.0f}x")
    if compiled:
        print()
        print("whole-frame decode, reference instance (n=512, m=15, k=204):")
        for mode in ("serial", "successive_hard", "gmd", "gmd_aml", "gmd_eml"):
            t = timeit(bench_frame_decode(mode), 20)
            print(f"  {mode:16s} {t * 1e3:7.2f} ms/frame")
    else:
        print("\ncompiled backend not built; frame-decode timing skipped")


if __name__ == "__main__":
    main()
