"""Interleaved Reed-Solomon + polar concatenated forward error correction.

Construction (including rate-adaptive outer-rate assignment), encoding,
serial/successive/GMD/GMD-ML decoding, analytic bound calculators, and a
reproducible AWGN/BEC Monte Carlo simulation harness.
"""

from ._backend import BACKEND_NAME, HAS_FRAME_KERNELS, LLR_MAX
from .channel import ChannelParams, transmit
from .concat import (ConcatSpec, DecodeMode, concat_encode, decode_serial,
                     decode_successive, design_rate_adaptive,
                     design_target_rate, fep_bound, frame_error_bound,
                     symbol_reliability_from_llrs, asymptotic_params)
from .gf import GFContext
from .polar import (PolarCodeSpec, ScState, estimate_bitchannels_bec,
                    estimate_bitchannels_mc, polar_encode, polar_transform,
                    resume_with, sc_decode, sc_decode_span, sc_symbol_paths,
                    select_frozen)
from .rs import RsCodeSpec, rs_decode, rs_encode, rs_gmd_list
from .sim import SimConfig, run_sweep

__version__ = "0.1.0"
