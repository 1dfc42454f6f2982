"""Regularly varying vertex-weight laws.

Three parametric families are supported, all with survival function of the
form ``P(W > w) = w**(-beta) * L(w)`` for a slowly varying ``L``:

``pareto(beta=b, xmin=m)``
    ``P(W > w) = (w / m)**(-b)`` for ``w >= m``.
``paretolog(beta=b, kappa=k)``
    ``P(W > w) = w**(-b) * (1 + log(w))**k`` for ``w >= 1``, with ``k <= 0``.
``invuniform(beta=b)``
    ``W = U**(-1/b)`` for uniform ``U``; same law as ``pareto(beta=b, xmin=1)``.

The text form above is what config files use. Arguments are ``key=value``
separated by commas; ``xmin`` defaults to 1 and ``kappa`` to -1.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np
from scipy import integrate

KINDS = ("pareto", "paretolog", "invuniform")

_SPEC_RE = re.compile(r"^\s*([a-zA-Z_]+)\s*\((.*)\)\s*$")


@dataclass(frozen=True)
class WeightDistribution:
    """An immutable weight law; see the module docstring for the families."""

    kind: str
    beta: float
    xmin: float = 1.0
    kappa: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown weight family {self.kind!r}; expected one of {KINDS}")
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.kind == "pareto" and not self.xmin > 0:
            raise ValueError("xmin must be positive")
        if self.kind != "pareto" and self.xmin != 1.0:
            raise ValueError(f"{self.kind} has lower endpoint 1")
        if self.kind == "paretolog" and self.kappa > 0:
            raise ValueError("kappa must be <= 0 so that the survival function is monotone")
        if self.kind != "paretolog" and self.kappa != 0.0:
            raise ValueError("kappa only applies to paretolog")

    @classmethod
    def pareto(cls, beta, xmin=1.0):
        return cls("pareto", float(beta), float(xmin))

    @classmethod
    def paretolog(cls, beta, kappa=-1.0):
        return cls("paretolog", float(beta), 1.0, float(kappa))

    @classmethod
    def invuniform(cls, beta):
        return cls("invuniform", float(beta))

    @property
    def has_closed_form(self) -> bool:
        return self.kind != "paretolog" or self.kappa == 0.0

    def __str__(self):
        if self.kind == "pareto":
            return f"pareto(beta={self.beta!r}, xmin={self.xmin!r})"
        if self.kind == "paretolog":
            return f"paretolog(beta={self.beta!r}, kappa={self.kappa!r})"
        return f"invuniform(beta={self.beta!r})"

    # -- distribution functions ------------------------------------------

    def survival(self, w):
        """P(W > w); equals 1 below the lower endpoint."""
        w = np.asarray(w, dtype=float)
        out = np.ones_like(w)
        above = w > self.xmin
        wa = w[above]
        if self.kind == "paretolog":
            out[above] = wa ** (-self.beta) * (1.0 + np.log(wa)) ** self.kappa
        else:
            out[above] = (wa / self.xmin) ** (-self.beta)
        return out if out.ndim else float(out)

    def pdf(self, w):
        w = np.asarray(w, dtype=float)
        out = np.zeros_like(w)
        above = w >= self.xmin
        wa = w[above]
        if self.kind == "paretolog":
            lg = 1.0 + np.log(wa)
            out[above] = wa ** (-self.beta - 1.0) * lg**self.kappa * (self.beta - self.kappa / lg)
        else:
            out[above] = self.beta / self.xmin * (wa / self.xmin) ** (-self.beta - 1.0)
        return out if out.ndim else float(out)

    def inverse_survival(self, u):
        """The w with P(W > w) = u, for u in (0, 1]. Inverse-CDF sampling uses this."""
        u = np.asarray(u, dtype=float)
        if self.kind != "paretolog" or self.kappa == 0.0:
            return self.xmin * u ** (-1.0 / self.beta)
        # solve beta*y - kappa*log1p(y) = -log(u) for y = log(w) >= 0
        target = -np.log(u)
        y = target / self.beta  # upper bound of the root; the map is concave increasing
        for _ in range(60):
            g = self.beta * y - self.kappa * np.log1p(y) - target
            dg = self.beta - self.kappa / (1.0 + y)
            step = g / dg
            y = np.maximum(y - step, 0.0)
            if np.all(np.abs(step) <= 1e-15 * np.maximum(y, 1.0)):
                break
        return np.exp(y)

    def sample(self, rng: np.random.Generator, size=None):
        """Inverse-CDF sample; every draw is >= xmin."""
        u = 1.0 - rng.random(size)  # in (0, 1]
        return self.inverse_survival(u)

    def sample_tail(self, threshold, rng: np.random.Generator, size=None):
        """Sample W conditioned on W >= threshold."""
        threshold = np.asarray(threshold, dtype=float)
        s = np.minimum(self.survival(threshold), 1.0)
        u = (1.0 - rng.random(size)) * s
        return np.maximum(self.inverse_survival(u), threshold)

    # -- quantile and moments -------------------------------------------

    def quantile_q(self, p, t, method="auto"):
        """Smallest x with P(W**p <= x) >= 1 - 1/t.

        At ``t == 1`` the lower endpoint ``xmin**p`` is returned.
        ``method="bisect"`` forces the bracketed bisection used for laws
        without a closed form.
        """
        if not p > 0:
            raise ValueError("power p must be positive")
        if not t >= 1:
            raise ValueError("level t must be >= 1")
        if method == "auto" and self.has_closed_form:
            return self.xmin**p * t ** (p / self.beta)
        if method not in ("auto", "bisect"):
            raise ValueError(f"unknown method {method!r}")
        return _bisect_quantile(self, p, t)

    def moment(self, s, method="auto"):
        """E[W**s]; ``math.inf`` when s >= beta."""
        if s < 0:
            raise ValueError("moment order must be >= 0")
        if s == 0:
            return 1.0
        if s >= self.beta:
            return math.inf
        if method == "auto" and self.has_closed_form:
            return self.beta / (self.beta - s) * self.xmin**s
        if method not in ("auto", "quad"):
            raise ValueError(f"unknown method {method!r}")
        return _quad_moment(self, s)


def _bisect_quantile(dist, p, t, rtol=1e-10, max_iter=200):
    lo = dist.xmin**p
    if t == 1:
        return lo
    level = 1.0 / t
    hi = lo * max(2.0, t) ** (2.0 * p / dist.beta)

    def exceeds(x):
        return dist.survival(x ** (1.0 / p)) > level

    while exceeds(hi):
        lo, hi = hi, 2.0 * hi
    for _ in range(max_iter):
        if hi - lo <= rtol * hi:
            break
        mid = 0.5 * (lo + hi)
        if exceeds(mid):
            lo = mid
        else:
            hi = mid
    return hi


def _quad_moment(dist, s):
    # E[W^s] = xmin^s + s * int_{xmin}^inf w^(s-1) P(W > w) dw, with w = xmin * e^y
    # evaluated in logs: log P(W > xmin e^y) = -beta*y + kappa*log(1 + y + log xmin)
    base = math.log(dist.xmin)

    def integrand(y):
        log_surv = -dist.beta * y
        if dist.kappa:
            log_surv += dist.kappa * math.log1p(y + base)
        return s * math.exp(s * (base + y) + log_surv)

    val, _ = integrate.quad(integrand, 0.0, math.inf, epsabs=0.0, epsrel=1e-10, limit=400)
    return dist.xmin**s + val


def parse_weight(text: str) -> WeightDistribution:
    """Parse ``pareto(beta=2.5, xmin=1)`` style text."""
    m = _SPEC_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse weight distribution {text!r}")
    kind = m.group(1).lower()
    args = {}
    body = m.group(2).strip()
    if body:
        for part in body.split(","):
            key, sep, value = part.partition("=")
            if not sep:
                raise ValueError(f"weight argument {part.strip()!r} is not key=value")
            try:
                args[key.strip().lower()] = float(value)
            except ValueError:
                raise ValueError(f"weight argument {key.strip()!r} is not a number") from None
    allowed = {"pareto": {"beta", "xmin"}, "paretolog": {"beta", "kappa"}, "invuniform": {"beta"}}
    if kind not in allowed:
        raise ValueError(f"unknown weight family {kind!r}")
    extra = set(args) - allowed[kind]
    if extra:
        raise ValueError(f"unknown argument(s) {sorted(extra)} for {kind}")
    if "beta" not in args:
        raise ValueError(f"{kind} requires beta")
    if kind == "pareto":
        return WeightDistribution.pareto(args["beta"], args.get("xmin", 1.0))
    if kind == "paretolog":
        return WeightDistribution.paretolog(args["beta"], args.get("kappa", -1.0))
    return WeightDistribution.invuniform(args["beta"])
