"""The five scale-free graph models and their degree scaling."""

from .config import (
    DEFAULT_MAX_VERTICES,
    MODEL_KINDS,
    MODEL_NAMES,
    ConfigError,
    Constraint,
    EdgeProbability,
    ModelConfig,
    ScalingConstants,
    ValidationReport,
    degree_power,
    edge_probability,
    normalize_kind,
    scaling_constants,
    unit_ball_volume,
    validate,
)
from .coupled import CoupledTriple, bernoulli_poisson_pair, coupling_gap, generate_coupled
from .generate import (
    DegreeSample,
    EdgeList,
    MemoryGuardError,
    PointSet,
    expected_vertex_count,
    generate,
    lattice_side,
    sample_edges,
    simulate_points,
    write_edge_list,
)
from .truncation import estimate_truncation_bias, gate_weight, minimal_buffer

__all__ = [
    "DEFAULT_MAX_VERTICES",
    "MODEL_KINDS",
    "MODEL_NAMES",
    "ConfigError",
    "Constraint",
    "CoupledTriple",
    "DegreeSample",
    "EdgeList",
    "EdgeProbability",
    "MemoryGuardError",
    "ModelConfig",
    "PointSet",
    "ScalingConstants",
    "ValidationReport",
    "bernoulli_poisson_pair",
    "coupling_gap",
    "degree_power",
    "edge_probability",
    "estimate_truncation_bias",
    "expected_vertex_count",
    "gate_weight",
    "generate",
    "generate_coupled",
    "lattice_side",
    "minimal_buffer",
    "normalize_kind",
    "sample_edges",
    "scaling_constants",
    "simulate_points",
    "unit_ball_volume",
    "validate",
    "write_edge_list",
]
