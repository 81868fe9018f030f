"""Command-line interface: design, estimate, encode, decode, simulate, bound."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .channel import ChannelParams
from .concat import (ConcatSpec, DecodeMode, concat_encode, decode_serial,
                     decode_successive, design_target_rate, fep_bound,
                     frame_error_bound, frame_error_bound_log2, asymptotic_params)
from .polar import estimate_bitchannels_bec, estimate_bitchannels_mc
from .sim import SimConfig, atomic_write_text, points_to_csv, points_to_json, \
    run_sweep


def _load_spec(path: str) -> ConcatSpec:
    with open(path) as fh:
        return ConcatSpec.from_json(fh.read())


def _load_reliabilities(path: str) -> np.ndarray:
    with open(path) as fh:
        doc = json.load(fh)
    return np.asarray(doc["values"], dtype=np.float64)


def _cmd_estimate(args) -> int:
    if args.kind == "bec":
        values = estimate_bitchannels_bec(args.n, args.eps)
        params = {"kind": "bec", "eps": args.eps}
    else:
        ch = ChannelParams(kind="awgn", ebn0_db=args.ebn0, rate=args.rate)
        values = estimate_bitchannels_mc(args.n, ch, args.trials, args.seed)
        params = {"kind": "mc", "ebn0_db": args.ebn0, "rate": args.rate,
                  "trials": args.trials, "seed": args.seed}
    doc = {"format_version": 1, "n": args.n, **params,
           "values": values.tolist()}
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_design(args) -> int:
    if args.reliabilities:
        rel = _load_reliabilities(args.reliabilities)
    else:
        ch = ChannelParams(kind="awgn", ebn0_db=args.design_ebn0,
                           rate=args.target_rate)
        rel = estimate_bitchannels_mc(args.n, ch, args.trials, args.seed)
    if len(rel) != args.n:
        raise ValueError(f"reliability vector has {len(rel)} entries, want {args.n}")
    k_range = [args.k] if args.k else (args.k_min, args.k_max)
    spec = design_target_rate(rel, t=args.t, m=args.m,
                              target_rate=args.target_rate, k_range=k_range,
                              prim_poly=args.prim_poly,
                              meta={"design_ebn0_db": args.design_ebn0,
                                    "design_trials": args.trials,
                                    "design_seed": args.seed})
    atomic_write_text(args.out, spec.to_json() + "\n")
    print(f"k={spec.polar.k} rate={spec.total_rate:.6f} taus={list(spec.taus)}")
    return 0


def _cmd_encode(args) -> int:
    spec = _load_spec(args.spec)
    raw = np.fromfile(args.infile, dtype=np.uint8)
    fp = spec.payload_bits
    frame_bytes = (fp + 7) // 8
    if len(raw) == 0 or len(raw) % frame_bytes:
        raise ValueError(f"input must be a multiple of {frame_bytes} bytes "
                         f"(one {fp}-bit payload per frame)")
    nframes = len(raw) // frame_bytes
    out = []
    for f in range(nframes):
        payload = np.unpackbits(raw[f * frame_bytes:(f + 1) * frame_bytes],
                                bitorder="little")[:fp]
        cw = concat_encode(spec, payload)
        out.append(np.packbits(cw.reshape(-1), bitorder="little"))
    _atomic_write_bytes(args.out, b"".join(x.tobytes() for x in out))
    print(f"encoded {nframes} frame(s)")
    return 0


def _cmd_decode(args) -> int:
    spec = _load_spec(args.spec)
    llr = np.fromfile(args.infile, dtype="<f4").astype(np.float64)
    per = spec.frame_len
    if len(llr) == 0 or len(llr) % per:
        raise ValueError(f"input must hold a multiple of {per} float32 LLRs")
    nframes = len(llr) // per
    mode = DecodeMode.of(args.mode)
    frame_bytes = (spec.payload_bits + 7) // 8
    out = bytearray()
    nfail = 0
    for f in range(nframes):
        rows = llr[f * per:(f + 1) * per].reshape(spec.m, spec.n)
        if mode == DecodeMode.SERIAL:
            res = decode_serial(spec, rows)
        else:
            res = decode_successive(spec, rows, mode)
        nfail += int(np.any(~res.row_ok))
        padded = np.zeros(frame_bytes * 8, dtype=np.uint8)
        padded[:spec.payload_bits] = res.payload
        out += np.packbits(padded, bitorder="little").tobytes()
    _atomic_write_bytes(args.out, bytes(out))
    print(f"decoded {nframes} frame(s); {nfail} with outer-decode failures")
    return 0


def _atomic_write_bytes(path: str, data: bytes) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _cmd_simulate(args) -> int:
    if args.preset:
        from . import presets
        spec = presets.by_name(args.preset)
    else:
        spec = _load_spec(args.spec)
    modes = args.modes.split(",")
    snrs = [float(s) for s in args.snrs.split(",")]
    config = SimConfig(spec=spec, snrs_db=tuple(snrs), modes=tuple(modes),
                       trials=args.trials, seed=args.seed,
                       stop_frame_errors=args.stop_errors,
                       workers=args.workers)
    points = run_sweep(config)
    atomic_write_text(args.out + ".csv", points_to_csv(points))
    atomic_write_text(args.out + ".json", points_to_json(points, config))
    for p in points:
        print(p.csv_row())
    return 0


def _cmd_bound(args) -> int:
    printed = False
    if args.m is not None and args.tau is not None and args.pe is not None:
        v = fep_bound(args.m, args.tau, args.pe)
        print(f"fep_bound(m={args.m}, tau={args.tau}, pe={args.pe}) = {v:.6g}")
        printed = True
    if args.n is not None and args.m is not None and args.rate is not None \
            and args.eps is not None:
        v = frame_error_bound(args.n, args.m, args.rate, args.eps)
        l2 = frame_error_bound_log2(args.n, args.m, args.rate, args.eps)
        print(f"frame_error_bound(n={args.n}, m={args.m}, R_o={args.rate}, "
              f"eps={args.eps}) = {v:.6g}  (log2 = {l2:.6g})")
        printed = True
    if args.total_len is not None and args.eps is not None:
        p = asymptotic_params(args.total_len, args.eps)
        print(f"asymptotic_params(N={args.total_len}, eps={args.eps}): "
              f"n={p.n:.6g} m={p.m:.6g} R_o={p.r_outer:.6g} "
              f"feasible={p.feasible}")
        printed = True
    if not printed:
        raise ValueError("bound needs (--m --tau --pe), "
                         "(--n --m --rate --eps), or (--total-len --eps)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rspolar",
                                 description="RS-polar concatenated FEC tool")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("estimate", help="bit-channel reliability estimation")
    p.add_argument("--kind", choices=("mc", "bec"), default="mc")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ebn0", type=float, default=2.0)
    p.add_argument("--rate", type=float, default=1.0 / 3.0)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("design", help="construct a ConcatSpec JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--target-rate", type=float, default=1.0 / 3.0)
    p.add_argument("--k", type=int)
    p.add_argument("--k-min", type=int, default=172)
    p.add_argument("--k-max", type=int, default=256)
    p.add_argument("--prim-poly", type=int, default=None)
    p.add_argument("--reliabilities", help="JSON file from `estimate`")
    p.add_argument("--design-ebn0", type=float, default=2.0)
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_design)

    p = sub.add_parser("encode", help="payload file -> packed codeword bits")
    p.add_argument("--spec", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="float32 LLR file -> payload file")
    p.add_argument("--spec", required=True)
    p.add_argument("--mode", default="gmd_eml",
                   choices=[m.value for m in DecodeMode])
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("simulate", help="Monte Carlo sweep -> CSV + JSON")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--spec")
    g.add_argument("--preset",
                   choices=("adaptive-k204", "uniform-k232", "polar-n512-r13"))
    p.add_argument("--modes", required=True,
                   help="comma list: serial,successive_hard,gmd,gmd_aml,"
                        "gmd_eml or polar")
    p.add_argument("--snrs", required=True, help="comma list of Eb/N0 dB")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--stop-errors", type=int, default=200,
                   help="stop a cell after this many frame errors (0 = never)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("bound", help="closed-form bound calculators")
    p.add_argument("--m", type=int)
    p.add_argument("--tau", type=int)
    p.add_argument("--pe", type=float)
    p.add_argument("--n", type=float)
    p.add_argument("--rate", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--total-len", type=float)
    p.set_defaults(func=_cmd_bound)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
