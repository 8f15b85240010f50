"""Chordal structure learning from conditional-independence answers."""

from .citest import CiDecision, DataCi, g2_test
from .data import Dataset, load_csv, parse_csv
from .pc import BASELINE, LearnConfig, LearnResult, learn_skeleton, oracle_ci
from .sampler import sample_dataset
from .triangulate import chordalize

__all__ = [
    "BASELINE",
    "CiDecision",
    "DataCi",
    "Dataset",
    "LearnConfig",
    "LearnResult",
    "chordalize",
    "g2_test",
    "learn_skeleton",
    "load_csv",
    "oracle_ci",
    "parse_csv",
    "sample_dataset",
]
