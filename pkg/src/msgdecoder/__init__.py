"""Local message-passing cellular-automaton decoders for topological codes."""

from .lattice import Boundary, Geometry, Norm, direction
from .noise import NoiseKind, NoiseRealization, NoiseSpec, fractal_pattern, sample
from .decoder import (
    TIMEOUT,
    DecoderParams,
    DecoderState,
    NonemptySyndrome,
    Rule,
    compute_syndrome,
    decoder_step,
    feedback_step,
    force,
    logical_class,
    micro_step,
    run_until_clean,
)

__version__ = "0.1.0"

__all__ = [
    "Boundary",
    "DecoderParams",
    "DecoderState",
    "Geometry",
    "NoiseKind",
    "NoiseRealization",
    "NoiseSpec",
    "NonemptySyndrome",
    "Norm",
    "Rule",
    "TIMEOUT",
    "compute_syndrome",
    "decoder_step",
    "direction",
    "feedback_step",
    "force",
    "fractal_pattern",
    "logical_class",
    "micro_step",
    "run_until_clean",
    "sample",
]
