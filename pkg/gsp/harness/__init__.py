"""Soundness harness: program generation, verdicts, corpus and fuzzing."""

from gsp.harness.corpus import CorpusError, CorpusReport, run_corpus
from gsp.harness.fuzz import FuzzReport, fuzz, program_seed
from gsp.harness.generator import GenConfig, generate_program
from gsp.harness.verdicts import (
    AllowedError,
    SoundnessViolation,
    StaticReject,
    Timeout,
    Verdict,
    WellTypedValue,
    erase,
    soundness_verdict,
)

__all__ = [
    "AllowedError",
    "CorpusError",
    "CorpusReport",
    "FuzzReport",
    "GenConfig",
    "SoundnessViolation",
    "StaticReject",
    "Timeout",
    "Verdict",
    "WellTypedValue",
    "erase",
    "fuzz",
    "generate_program",
    "program_seed",
    "run_corpus",
    "soundness_verdict",
]
