"""Ready-made instances of the n=512, m=15, t=4, rate-1/3 design.

The bit-channel reliabilities come from a committed fixture: genie-aided
Monte Carlo over AWGN at Eb/N0 = 2 dB (rate 1/3), 10^5 trials, seed 20507.
Regenerate with `rspolar estimate --kind mc --n 512 --ebn0 2 --rate
0.3333333333333333 --trials 100000 --seed 20507`.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import numpy as np

from .concat import ConcatSpec, design_target_rate
from .gf import GFContext
from .polar import PolarCodeSpec, select_frozen

FIXTURE_NAME = "awgn_n512_ebn0_2db_100k.json"
FIXTURE_SEED = 20507
PRESET_NAMES = ("adaptive-k204", "uniform-k232", "polar-n512-r13")


@lru_cache(maxsize=None)
def awgn2db_reliabilities() -> np.ndarray:
    """The archived n=512 design reliability vector (see module docstring)."""
    with resources.files("rspolar.fixtures").joinpath(FIXTURE_NAME).open() as fh:
        doc = json.load(fh)
    vals = np.asarray(doc["values"], dtype=np.float64)
    vals.setflags(write=False)
    return vals


@lru_cache(maxsize=None)
def adaptive_spec(k: int = 204) -> ConcatSpec:
    """Rate-adaptive scheme bisected to total rate 1/3 at inner dimension k."""
    rel = awgn2db_reliabilities()
    spec = design_target_rate(rel, t=4, m=15, target_rate=1.0 / 3.0,
                              k_range=[k],
                              meta={"design_ebn0_db": 2.0,
                                    "design_trials": 100000,
                                    "design_seed": FIXTURE_SEED})
    return spec


@lru_cache(maxsize=None)
def uniform_spec(k: int = 232, tau: int = 2) -> ConcatSpec:
    """Uniform outer protection: every outer code is (m, m-2*tau)."""
    rel = awgn2db_reliabilities()
    polar = select_frozen(rel, k)
    return ConcatSpec(polar=polar, ctx=GFContext(4), m=15,
                      taus=(tau,) * (k // 4),
                      meta={"design_ebn0_db": 2.0,
                            "design_trials": 100000,
                            "design_seed": FIXTURE_SEED})


@lru_cache(maxsize=None)
def baseline_polar_spec(k: int = 171) -> PolarCodeSpec:
    """Stand-alone rate-1/3 polar code built from the same estimates."""
    return select_frozen(awgn2db_reliabilities(), k)


def by_name(name: str):
    if name == "adaptive-k204":
        return adaptive_spec()
    if name == "uniform-k232":
        return uniform_spec()
    if name == "polar-n512-r13":
        return baseline_polar_spec()
    raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
