"""Monte Carlo harness: reproducible sweeps over (SNR, mode) cells.

Every trial is keyed by (seed, snr, trial index) through a counter-based
Philox stream, so cells can be rerun in isolation, split across workers,
or early-stopped without changing any tally. The key deliberately
excludes the decoder mode: all modes at one SNR decode the same payload
and noise realizations (common random numbers), which makes mode
comparisons paired. Early stopping operates on fixed-size chunk
boundaries to keep parallel and serial runs byte-identical.
"""

from __future__ import annotations

import json
import multiprocessing
import os
import time
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, rng_for, transmit
from .concat import ConcatSpec, DecodeMode, concat_encode, decode_serial, \
    decode_successive
from .polar import PolarCodeSpec, polar_encode, polar_transform, sc_decode

CHUNK_TRIALS = 256
_SNR_KEY_OFFSET = 1 << 20

_MODE_KEYS = {"serial": 0, "successive_hard": 1, "gmd": 2, "gmd_aml": 3,
              "gmd_eml": 4, "polar": 5}

CSV_HEADER = "snr_db,mode,trials,block_errors,bler,frame_errors,fer,seed"


@dataclass(frozen=True)
class SimConfig:
    """One sweep: a spec, a channel family, SNR points, decoder modes.

    stop_frame_errors=0 disables early stopping; otherwise a cell stops
    at the first chunk boundary with at least that many frame errors.
    """

    spec: object                    # ConcatSpec or PolarCodeSpec
    snrs_db: tuple
    modes: tuple
    trials: int
    seed: int
    stop_frame_errors: int = 200
    workers: int = 1
    channel_kind: str = "awgn"
    eps: float = 0.0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.snrs_db and self.channel_kind == "awgn":
            raise ValueError("snr list must be non-empty")
        if not self.modes:
            raise ValueError("modes list must be non-empty")
        object.__setattr__(self, "snrs_db", tuple(float(s) for s in self.snrs_db))
        object.__setattr__(self, "modes", tuple(str(m) for m in self.modes))
        is_polar = isinstance(self.spec, PolarCodeSpec)
        for m in self.modes:
            if m not in _MODE_KEYS:
                raise ValueError(f"unknown mode {m!r}")
            if is_polar != (m == "polar"):
                raise ValueError(
                    f"mode {m!r} does not match spec type "
                    f"{'polar' if is_polar else 'concat'}")


@dataclass
class SimPoint:
    snr_db: float
    mode: str
    trials: int
    block_errors: int
    block_count: int
    frame_errors: int
    seed: int
    wall_time: float = 0.0

    @property
    def bler(self) -> float:
        return self.block_errors / self.block_count if self.block_count else 0.0

    @property
    def fer(self) -> float:
        return self.frame_errors / self.trials if self.trials else 0.0

    def csv_row(self) -> str:
        return (f"{self.snr_db:.12g},{self.mode},{self.trials},"
                f"{self.block_errors},{self.bler:.12g},{self.frame_errors},"
                f"{self.fer:.12g},{self.seed}")


class _ConcatRunner:
    def __init__(self, spec: ConcatSpec, mode: str, snr_db: float,
                 channel_kind: str, eps: float):
        self.spec = spec
        self.mode = mode
        self.params = ChannelParams(kind=channel_kind, ebn0_db=snr_db,
                                    rate=spec.total_rate, eps=eps)
        self.blocks_per_trial = spec.m

    def run_trial(self, rng) -> tuple:
        spec = self.spec
        payload = rng.integers(0, 2, spec.payload_bits, dtype=np.uint8)
        cw = concat_encode(spec, payload)
        # the transform is self-inverse: recover the true info blocks
        true_blocks = polar_transform(cw)[:, spec.polar.info_positions]
        llr = transmit(self.params, cw.reshape(-1), rng=rng).reshape(cw.shape)
        if self.mode == "serial":
            res = decode_serial(spec, llr)
        else:
            res = decode_successive(spec, llr, DecodeMode(self.mode))
        block_errs = int(np.any(res.block_data != true_blocks, axis=1).sum())
        frame_err = bool(np.any(res.payload != payload))
        return frame_err, block_errs


class _PolarRunner:
    def __init__(self, spec: PolarCodeSpec, snr_db: float,
                 channel_kind: str, eps: float):
        self.spec = spec
        self.params = ChannelParams(kind=channel_kind, ebn0_db=snr_db,
                                    rate=spec.rate, eps=eps)
        self.blocks_per_trial = 1

    def run_trial(self, rng) -> tuple:
        info = rng.integers(0, 2, self.spec.k, dtype=np.uint8)
        cw = polar_encode(self.spec, info)
        llr = transmit(self.params, cw, rng=rng)
        got, _, _ = sc_decode(self.spec, llr)
        err = bool(np.any(got != info))
        return err, int(err)


def _make_runner(spec, mode, snr_db, channel_kind, eps):
    if mode == "polar":
        return _PolarRunner(spec, snr_db, channel_kind, eps)
    return _ConcatRunner(spec, mode, snr_db, channel_kind, eps)


def _trial_stream_key(snr_db: float) -> tuple:
    # mode intentionally absent: common random numbers across decoders
    return (int(round(snr_db * 1000.0)) + _SNR_KEY_OFFSET,)


def _run_chunk(runner, seed: int, snr_db: float, mode: str,
               start: int, count: int) -> tuple:
    key = _trial_stream_key(snr_db)
    fe = be = 0
    for trial in range(start, start + count):
        rng = rng_for(seed, *key, trial)
        frame_err, block_errs = runner.run_trial(rng)
        fe += frame_err
        be += block_errs
    return fe, be


# worker-process state (fork start method)
_W = {}


def _worker_init(spec, channel_kind, eps):
    _W["spec"] = spec
    _W["channel_kind"] = channel_kind
    _W["eps"] = eps
    _W["runners"] = {}


def _worker_chunk(args):
    seed, snr_db, mode, start, count = args
    key = (snr_db, mode)
    if key not in _W["runners"]:
        _W["runners"][key] = _make_runner(_W["spec"], mode, snr_db,
                                          _W["channel_kind"], _W["eps"])
    return _run_chunk(_W["runners"][key], seed, snr_db, mode, start, count)


def run_point(spec, snr_db: float, mode: str, trials: int, seed: int,
              stop_frame_errors: int = 0, workers: int = 1,
              channel_kind: str = "awgn", eps: float = 0.0,
              pool=None) -> SimPoint:
    """Simulate one (snr, mode) cell; identical output for any worker count.

    Early stop is evaluated at chunk boundaries in trial order, so the
    stopping point never depends on scheduling.
    """
    t0 = time.perf_counter()
    chunks = [(seed, snr_db, mode, s, min(CHUNK_TRIALS, trials - s))
              for s in range(0, trials, CHUNK_TRIALS)]
    fe = be = done = 0
    own_pool = pool is None and workers > 1
    if own_pool:
        pool = multiprocessing.get_context("fork").Pool(
            workers, initializer=_worker_init,
            initargs=(spec, channel_kind, eps))
    try:
        if pool is None:
            runner = _make_runner(spec, mode, snr_db, channel_kind, eps)
            for c in chunks:
                cfe, cbe = _run_chunk(runner, c[0], c[1], c[2], c[3], c[4])
                fe += cfe
                be += cbe
                done += c[4]
                if stop_frame_errors and fe >= stop_frame_errors:
                    break
        else:
            # dispatch in bounded waves so early stop wastes at most a wave
            wave = max(4 * workers, 4)
            stop = False
            for w0 in range(0, len(chunks), wave):
                batch = chunks[w0:w0 + wave]
                for (cfe, cbe), c in zip(pool.map(_worker_chunk, batch), batch):
                    fe += cfe
                    be += cbe
                    done += c[4]
                    if stop_frame_errors and fe >= stop_frame_errors:
                        stop = True
                        break
                if stop:
                    break
    finally:
        if own_pool:
            pool.close()
            pool.join()
    per_trial = spec.m if mode != "polar" else 1
    return SimPoint(snr_db=snr_db, mode=mode, trials=done,
                    block_errors=be, block_count=done * per_trial,
                    frame_errors=fe, seed=seed,
                    wall_time=time.perf_counter() - t0)


def run_sweep(config: SimConfig) -> list:
    """All (snr, mode) cells of the sweep, row order = snr-major."""
    points = []
    pool = None
    try:
        if config.workers > 1:
            pool = multiprocessing.get_context("fork").Pool(
                config.workers, initializer=_worker_init,
                initargs=(config.spec, config.channel_kind, config.eps))
        for snr in config.snrs_db:
            for mode in config.modes:
                points.append(run_point(
                    config.spec, snr, mode, config.trials, config.seed,
                    stop_frame_errors=config.stop_frame_errors,
                    workers=config.workers, channel_kind=config.channel_kind,
                    eps=config.eps, pool=pool))
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    return points


# ---------------------------------------------------------------------------
# result files


def atomic_write_text(path: str, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def points_to_csv(points) -> str:
    lines = [CSV_HEADER]
    lines.extend(p.csv_row() for p in points)
    return "\n".join(lines) + "\n"


def points_to_json(points, config: SimConfig | None = None) -> str:
    doc = {"format_version": 1, "results": []}
    if config is not None:
        spec = config.spec
        doc["config"] = {
            "scheme": "polar" if isinstance(spec, PolarCodeSpec) else "concat",
            "snrs_db": list(config.snrs_db),
            "modes": list(config.modes),
            "trials": config.trials,
            "seed": config.seed,
            "stop_frame_errors": config.stop_frame_errors,
            "channel_kind": config.channel_kind,
            "eps": config.eps,
        }
        if isinstance(spec, ConcatSpec):
            doc["config"]["spec"] = spec.to_json_dict()
        else:
            doc["config"]["spec"] = {
                "scheme": "polar", "n": spec.n, "k": spec.k,
                "frozen_positions": np.flatnonzero(spec.frozen_mask).tolist(),
            }
    for p in points:
        doc["results"].append({
            "snr_db": p.snr_db, "mode": p.mode, "trials": p.trials,
            "block_errors": p.block_errors, "block_count": p.block_count,
            "bler": p.bler, "frame_errors": p.frame_errors, "fer": p.fer,
            "seed": p.seed, "wall_time": p.wall_time,
        })
    return json.dumps(doc, indent=2) + "\n"
