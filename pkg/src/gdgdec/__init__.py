"""Guided-decimation-guessing decoding for quantum LDPC codes.

Subpackages cover GF(2) linear algebra, bivariate bicycle code
construction, detector-model building and sampling, min-sum belief
propagation, ordered-statistics baselines, the guided-decimation ensemble
decoder, sliding-window orchestration, and a Monte-Carlo harness with a
command-line interface.
"""

from .codes import BivariatePoly, CssCode, build_bb_code
from .gdg import DecisionTreeConfig, gdg_decode, preset
from .gf2 import BitVector, SparseBitMatrix
from .noise_model import DetectorModel, parse_dem, export_dem
from .osd import OsdConfig, bp_osd_decode
from .window import WindowPlan, sliding_decode

__all__ = [
    "BivariatePoly", "CssCode", "build_bb_code",
    "DecisionTreeConfig", "gdg_decode", "preset",
    "BitVector", "SparseBitMatrix",
    "DetectorModel", "parse_dem", "export_dem",
    "OsdConfig", "bp_osd_decode",
    "WindowPlan", "sliding_decode",
]

__version__ = "1.0.0"
