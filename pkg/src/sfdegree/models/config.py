"""Model configuration, regime checks and the degree scaling constants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

from ..weights import WeightDistribution

MODEL_KINDS = ("I", "II", "III", "IV", "V")
MODEL_NAMES = {
    "I": "lattice scale-free percolation",
    "II": "ultra-small scale-free lattice",
    "III": "continuum random connection model",
    "IV": "Norros-Reittu",
    "V": "Chung-Lu",
}
_ALIASES = {"1": "I", "2": "II", "3": "III", "4": "IV", "5": "V"}
SPATIAL = ("I", "II", "III")

DEFAULT_MAX_VERTICES = 30_000_000


class ConfigError(ValueError):
    """A configuration violates a hard constraint."""


def normalize_kind(kind) -> str:
    k = str(kind).strip().upper()
    k = _ALIASES.get(k, k)
    if k not in MODEL_KINDS:
        raise ConfigError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")
    return k


@dataclass(frozen=True)
class ModelConfig:
    """Parameters of one of the five graph models.

    ``n`` is the expected number of window vertices. ``buffer`` is the
    width added on every side of the window for models I and III (``None``
    means ``n**(1/d)``); model II ignores it because its box is sized
    exactly. ``max_vertices`` caps the expected number of simulated
    vertices.
    """

    kind: str
    weight: WeightDistribution
    n: int
    d: int = 1
    alpha: float = 2.0
    lam: float = 1.0
    buffer: Optional[float] = None
    mode: str = "fast"
    max_vertices: int = DEFAULT_MAX_VERTICES

    def __post_init__(self):
        object.__setattr__(self, "kind", normalize_kind(self.kind))
        if self.mode not in ("fast", "naive"):
            raise ConfigError(f"mode must be 'fast' or 'naive', got {self.mode!r}")
        if not isinstance(self.weight, WeightDistribution):
            raise ConfigError("weight must be a WeightDistribution")
        if int(self.n) != self.n or self.n < 1:
            raise ConfigError(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if int(self.d) != self.d or self.d < 1:
            raise ConfigError(f"d must be a positive integer, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        if not self.alpha > 0:
            raise ConfigError("alpha must be positive")
        if not self.lam > 0:
            raise ConfigError("lambda must be positive")
        if self.buffer is not None and not self.buffer >= 0:
            raise ConfigError("buffer must be >= 0")

    @property
    def spatial(self) -> bool:
        return self.kind in SPATIAL

    @property
    def side(self) -> float:
        """Side length of the observation window for models I-III."""
        return self.n ** (1.0 / self.d)

    @property
    def effective_buffer(self) -> float:
        return self.side if self.buffer is None else float(self.buffer)

    def with_n(self, n: int) -> "ModelConfig":
        return replace(self, n=n)

    def to_dict(self) -> dict:
        """Every field, with the weight law in its text form."""
        return {
            "model": self.kind,
            "weight": str(self.weight),
            "n": self.n,
            "d": self.d,
            "alpha": self.alpha,
            "lambda": self.lam,
            "buffer": self.buffer,
            "mode": self.mode,
            "max_vertices": self.max_vertices,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        from ..weights import parse_weight

        return cls(
            kind=data["model"],
            weight=parse_weight(data["weight"]),
            n=int(data["n"]),
            d=int(data.get("d", 1)),
            alpha=float(data.get("alpha", 2.0)),
            lam=float(data.get("lambda", 1.0)),
            buffer=None if data.get("buffer") is None else float(data["buffer"]),
            mode=data.get("mode", "fast"),
            max_vertices=int(data.get("max_vertices", DEFAULT_MAX_VERTICES)),
        )

    def echo(self) -> dict:
        out = {"model": self.kind, "weight": str(self.weight), "n": self.n, "mode": self.mode}
        if self.spatial:
            out["d"] = self.d
        if self.kind in ("I", "III"):
            out.update(alpha=self.alpha, **{"lambda": self.lam}, buffer=self.effective_buffer)
        return out


@dataclass
class Constraint:
    name: str
    status: str  # "satisfied" | "violated" | "outside-proven-regime"
    detail: str


@dataclass
class ValidationReport:
    constraints: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != "violated" for c in self.constraints)

    @property
    def proven(self) -> bool:
        return all(c.status == "satisfied" for c in self.constraints)

    def violations(self):
        return [c for c in self.constraints if c.status == "violated"]

    def raise_for_violations(self):
        bad = self.violations()
        if bad:
            raise ConfigError("; ".join(f"{c.name} violated ({c.detail})" for c in bad))


def validate(config: ModelConfig) -> ValidationReport:
    """Check the parameter regime in which the degree limit theorems hold."""
    rep = ValidationReport()
    beta = config.weight.beta
    if config.kind in ("I", "III"):
        bound = min(config.alpha, config.alpha * beta)
        ok = config.d < bound
        rep.constraints.append(
            Constraint(
                "d < min(alpha, alpha*beta)",
                "satisfied" if ok else "violated",
                f"d={config.d}, min(alpha, alpha*beta)={bound:g}",
            )
        )
    elif config.kind == "II":
        rep.constraints.append(
            Constraint(
                "β < d",
                "satisfied" if beta < config.d else "violated",
                f"beta={beta:g}, d={config.d}",
            )
        )
        rep.constraints.append(
            Constraint(
                "weight = invuniform",
                "satisfied" if config.weight.kind == "invuniform" else "violated",
                f"weight={config.weight}",
            )
        )
    elif config.kind == "V":
        rep.constraints.append(
            Constraint(
                "β > 2",
                "satisfied" if beta > 2 else "outside-proven-regime",
                f"beta={beta:g}",
            )
        )
    return rep


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


class ScalingConstants(NamedTuple):
    p: float
    gamma: float
    xi: float
    q_n: float
    v_d: float

    def q(self, weight: WeightDistribution, t: float) -> float:
        return weight.quantile_q(self.p, t)


def degree_power(config: ModelConfig) -> float:
    if config.kind in ("I", "III"):
        return config.d / config.alpha
    if config.kind == "II":
        return config.d - config.weight.beta
    return 1.0


def scaling_constants(config: ModelConfig) -> ScalingConstants:
    """Exponent p, tail index gamma = beta/p, prefactor xi and q(n)."""
    validate(config).raise_for_violations()
    d = config.d
    v_d = unit_ball_volume(d)
    p = degree_power(config)
    if config.kind in ("I", "III"):
        xi = (
            config.lam ** (d / config.alpha)
            * v_d
            * math.gamma(1.0 - d / config.alpha)
            * config.weight.moment(d / config.alpha)
        )
    elif config.kind == "II":
        xi = d * v_d / (d - config.weight.beta)
    else:
        xi = 1.0
    gamma = config.weight.beta / p
    q_n = config.weight.quantile_q(p, config.n)
    return ScalingConstants(p=p, gamma=gamma, xi=xi, q_n=q_n, v_d=v_d)


class EdgeProbability(NamedTuple):
    value: float
    kind: str  # "probability" or "intensity"


def edge_probability(config: ModelConfig, w_x, w_y, r=None, total_weight=None) -> EdgeProbability:
    """Connection probability of two vertices (Poisson intensity for model IV).

    ``r`` is their distance (models I-III); ``total_weight`` is L_n
    (models IV and V).
    """
    if config.spatial:
        if r is None or not r > 0:
            raise ValueError("distinct spatial vertices need a positive distance r")
        if config.kind == "II":
            return EdgeProbability(1.0 if min(w_x, w_y) >= r else 0.0, "probability")
        if math.isinf(r):
            return EdgeProbability(0.0, "probability")
        z = config.lam * w_x * w_y / r**config.alpha
        return EdgeProbability(-math.expm1(-z), "probability")
    if total_weight is None or not total_weight > 0:
        raise ValueError("models IV and V need the total weight L_n")
    mean = w_x * w_y / total_weight
    if config.kind == "IV":
        return EdgeProbability(mean, "intensity")
    return EdgeProbability(min(mean, 1.0), "probability")
