"""Fault-tolerant matrix multiplication with grid-like checksum codes."""

from .baseline import ChecksumCodedProduct, checksum_detect_correct, checksum_multiply
from .corrector import CorrectionOutcome, OutcomeKind, Repair, correct, detect_and_correct
from .encoding import (
    GridCodedProduct,
    GridCodeSpec,
    coded_multiply,
    encode_left,
    encode_product,
    encode_right,
    validate_grid_structure,
)
from .injection import ErrorPattern, Fault, Scenario, Target, inject, sample_noise, sample_scenario
from .matrix import BACKEND, ShapeError, multiply, random_matrix, tau_struct
from .syndrome import PatternKind, Syndrome, classify_pattern, compute_syndrome

__version__ = "0.1.0"
