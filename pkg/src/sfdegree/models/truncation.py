"""Expected edges lost by simulating models I and III in a finite box."""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

from .config import ConfigError, ModelConfig, unit_ball_volume


def _shell_integral(a, radius, d, alpha, v_d):
    """d v_d * int_radius^inf r^(d-1) (1 - exp(-a r^-alpha)) dr, in closed form.

    With s = d/alpha and T = a radius^-alpha this equals
    v_d * (a^s * lowergamma(1-s, T) - radius^d * (1 - e^-T)).
    """
    if a <= 0:
        return 0.0
    s = d / alpha
    t = a * radius ** (-alpha)
    low = special.gamma(1.0 - s) * special.gammainc(1.0 - s, t)
    val = v_d * (a**s * low - radius**d * (-math.expm1(-t)))
    if t < 1e-6:
        # series form avoids cancellation: leading terms of the expansion in T
        val = v_d * d * a * radius ** (d - alpha) * (1.0 / (alpha - d) - t / (2.0 * (2 * alpha - d)))
    return max(val, 0.0)


def _effective(config):
    b = config.effective_buffer
    if config.kind == "I" and config.d >= 2:
        # lattice sites beyond B sit in unit cubes reaching no closer than B - sqrt(d)/2
        r0 = b - math.sqrt(config.d) / 2.0
        if r0 <= math.sqrt(config.d) / 2.0:
            return None
        kappa = 1.0 - math.sqrt(config.d) / (2.0 * r0)
        return r0, config.lam * kappa ** (-config.alpha)
    return b, config.lam


def estimate_truncation_bias(config: ModelConfig, w: float) -> float:
    """Upper bound on the expected number of edges a window vertex of weight w
    would have to vertices outside the simulated box.

    The bound treats every vertex at distance > B as missing, which holds at
    the worst window position. In dimension 1 the lattice sum is bounded by
    the integral because the summand is decreasing in distance; in higher
    lattice dimensions each site is replaced by its unit cube, with the
    distance and intensity adjusted so the integral still dominates.
    """
    if config.kind not in ("I", "III"):
        raise ConfigError("no truncation in this model")
    if w < 0:
        raise ValueError("weight must be nonnegative")
    if w == 0:
        return 0.0
    if not config.effective_buffer > 0:
        raise ConfigError("buffer must be positive")
    eff = _effective(config)
    if eff is None:
        return math.inf
    radius, lam = eff
    d, alpha = config.d, config.alpha
    v_d = unit_ball_volume(d)
    dist = config.weight

    y_max = math.log(1e300 / (lam * w * dist.xmin))

    def integrand(y):
        if y > y_max:
            return 0.0
        u = dist.xmin * math.exp(y)
        dens = u * float(dist.pdf(u))  # density of log(W / xmin) at y
        if dens == 0.0:
            return 0.0
        return _shell_integral(lam * w * u, radius, d, alpha, v_d) * dens

    # the shell integral changes from linear to power growth where T ~ 1
    knee = max(math.log(radius**alpha / (lam * w * dist.xmin)), 0.0)
    total = 0.0
    for lo, hi in ((0.0, knee), (knee, math.inf)):
        if hi > lo:
            val, _ = integrate.quad(integrand, lo, hi, epsabs=1e-14, epsrel=1e-8, limit=400)
            total += val
    return float(total)


def minimal_buffer(config: ModelConfig, w: float, target: float = 0.05) -> float:
    """Smallest buffer whose truncation bound at weight w is at most ``target``.

    Lattice models get an integer buffer.
    """
    from dataclasses import replace

    def bias(b):
        return estimate_truncation_bias(replace(config, buffer=b), w)

    lo, hi = 1.0, max(2.0, config.effective_buffer)
    while bias(hi) > target:
        lo, hi = hi, hi * 2.0
        if hi > 1e15:
            raise ConfigError("no finite buffer meets the truncation target")
    if bias(lo) <= target:
        hi = lo
    for _ in range(100):
        if hi - lo <= max(1e-6 * hi, 0.5 if config.kind == "I" else 0.0):
            break
        mid = 0.5 * (lo + hi)
        if bias(mid) > target:
            lo = mid
        else:
            hi = mid
    if config.kind == "I":
        hi = float(math.ceil(hi))
    return float(hi)


def gate_weight(config: ModelConfig, level: float = 0.999) -> float:
    """Weight quantile used by the truncation gate."""
    return float(config.weight.inverse_survival(1.0 - level))
