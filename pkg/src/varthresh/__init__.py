"""Hebbian associative memories with per-neuron variable thresholds,
B-matrix fragment recall and quaternary networks."""

from .bmatrix import build_b_matrix, count_retrieved, min_fragment_length, permute_network, retrieve_from_fragment
from .core import DimensionError, MemorySet, PatternFormatError, RandomSource, random_memories
from .hebbian import LearningConfig, build_t_matrix, count_stored_fixed, is_stored_fixed, sgn, widrow_hoff_refine
from .quaternary import (
    QuaternaryLevels,
    convergence_ratio,
    delta_rule_train,
    quat_activation,
    quat_capacity_experiment,
    quat_next_state,
)
from .vthreshold import (
    ThresholdGrid,
    is_stored_variable,
    learn_thresholds_exact,
    learn_thresholds_grid,
    learn_thresholds_widrow,
    threshold_sign,
)

__version__ = "0.1.0"
