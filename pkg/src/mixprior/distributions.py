"""Distribution kernels in the exact parametrizations used across the package.

Two conventions deserve a warning because they differ from common textbook
forms:

* ``InvGamma(a_shape, b_scale)`` has kernel ``x^{-(a+1)} exp(-1/(b x))`` with
  normalizer ``1 / (b^a Gamma(a))``.  The field ``b_scale`` is therefore the
  reciprocal of the textbook inverse-gamma scale (textbook scale = ``1/b``).
* ``Gamma(a_shape, b_rate)`` has kernel ``x^{a-1} exp(-b x)``, i.e. ``b_rate``
  multiplies ``x`` in the exponent (a rate, even where sources call it a
  scale).

All descriptors are immutable; invalid hyperparameters are rejected at
construction, never clamped.  Samplers draw only from the generator passed in
by the caller, so concurrent use requires distinct generator instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import reg_lower_incomplete_gamma, standard_normal_cdf

__all__ = [
    "DistSpec",
    "NormalVar",
    "NormalPrec",
    "Gamma",
    "InvGamma",
    "Dirichlet",
    "log_pdf",
    "cdf",
    "sample",
]

_LOG_2PI = math.log(2.0 * math.pi)


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be a positive finite number, got {value}")
    return value


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    return value


def _maybe_scalar(arr):
    arr = np.asarray(arr)
    return float(arr) if arr.ndim == 0 else arr


class DistSpec:
    """Base class for the tagged distribution descriptors."""

    family: str = ""
    support: tuple[float, float] = (-math.inf, math.inf)

    def log_pdf(self, x):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size=None):
        raise NotImplementedError

    def mean(self):
        raise NotImplementedError


@dataclass(frozen=True)
class NormalVar(DistSpec):
    """Normal distribution with mean ``m`` and variance ``v``."""

    m: float
    v: float

    family = "normal_var"

    def __post_init__(self):
        object.__setattr__(self, "m", _require_finite("m", self.m))
        object.__setattr__(self, "v", _require_positive("v", self.v))

    def log_pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = -0.5 * (_LOG_2PI + math.log(self.v)) - 0.5 * (x - self.m) ** 2 / self.v
        return _maybe_scalar(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _maybe_scalar(standard_normal_cdf((x - self.m) / math.sqrt(self.v)))

    def sample(self, rng, size=None):
        return rng.normal(self.m, math.sqrt(self.v), size)

    def mean(self):
        return self.m


@dataclass(frozen=True)
class NormalPrec(DistSpec):
    """Normal distribution with mean ``m`` and precision ``vprec`` (= 1/variance)."""

    m: float
    vprec: float

    family = "normal_prec"

    def __post_init__(self):
        object.__setattr__(self, "m", _require_finite("m", self.m))
        object.__setattr__(self, "vprec", _require_positive("vprec", self.vprec))

    @property
    def variance(self) -> float:
        return 1.0 / self.vprec

    def log_pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = -0.5 * (_LOG_2PI - math.log(self.vprec)) - 0.5 * self.vprec * (x - self.m) ** 2
        return _maybe_scalar(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _maybe_scalar(standard_normal_cdf((x - self.m) * math.sqrt(self.vprec)))

    def sample(self, rng, size=None):
        return rng.normal(self.m, 1.0 / math.sqrt(self.vprec), size)

    def mean(self):
        return self.m


@dataclass(frozen=True)
class Gamma(DistSpec):
    """Gamma distribution, kernel ``x^{a-1} exp(-b x)`` with rate ``b_rate``."""

    a_shape: float
    b_rate: float

    family = "gamma"
    support = (0.0, math.inf)

    def __post_init__(self):
        object.__setattr__(self, "a_shape", _require_positive("a_shape", self.a_shape))
        object.__setattr__(self, "b_rate", _require_positive("b_rate", self.b_rate))

    def log_pdf(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0.0):
            raise ValueError("gamma density is defined for x > 0 only")
        a, b = self.a_shape, self.b_rate
        out = a * math.log(b) - math.lgamma(a) + (a - 1.0) * np.log(x) - b * x
        return _maybe_scalar(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        pos = x > 0.0
        out = np.zeros(x.shape)
        if np.any(pos):
            out[pos] = reg_lower_incomplete_gamma(self.a_shape, self.b_rate * x[pos])
        return _maybe_scalar(out)

    def sample(self, rng, size=None):
        return rng.gamma(self.a_shape, 1.0 / self.b_rate, size)

    def mean(self):
        return self.a_shape / self.b_rate


@dataclass(frozen=True)
class InvGamma(DistSpec):
    """Inverse gamma, kernel ``x^{-(a+1)} exp(-1/(b x))``; textbook scale is ``1/b``."""

    a_shape: float
    b_scale: float

    family = "inv_gamma"
    support = (0.0, math.inf)

    def __post_init__(self):
        object.__setattr__(self, "a_shape", _require_positive("a_shape", self.a_shape))
        object.__setattr__(self, "b_scale", _require_positive("b_scale", self.b_scale))

    def log_pdf(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0.0):
            raise ValueError("inverse gamma density is defined for x > 0 only")
        a, b = self.a_shape, self.b_scale
        out = -(a + 1.0) * np.log(x) - 1.0 / (b * x) - a * math.log(b) - math.lgamma(a)
        return _maybe_scalar(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        pos = x > 0.0
        out = np.zeros(x.shape)
        if np.any(pos):
            out[pos] = 1.0 - reg_lower_incomplete_gamma(self.a_shape, 1.0 / (self.b_scale * x[pos]))
        return _maybe_scalar(out)

    def sample(self, rng, size=None):
        # if G ~ Gamma(shape=a, rate=1/b) then 1/G has the kernel above
        return 1.0 / rng.gamma(self.a_shape, self.b_scale, size)

    def mean(self):
        if self.a_shape <= 1.0:
            raise ValueError("inverse gamma mean requires a_shape > 1")
        return 1.0 / (self.b_scale * (self.a_shape - 1.0))


@dataclass(frozen=True)
class Dirichlet(DistSpec):
    """Dirichlet distribution on the probability simplex with weights ``d``."""

    d: tuple[float, ...]

    family = "dirichlet"

    def __post_init__(self):
        d = tuple(float(v) for v in np.asarray(self.d, dtype=float).ravel())
        if len(d) < 2:
            raise ValueError("dirichlet needs at least 2 concentration entries")
        for i, v in enumerate(d):
            if not math.isfinite(v) or v <= 0.0:
                raise ValueError(f"d[{i}] must be a positive finite number, got {v}")
        object.__setattr__(self, "d", d)

    @property
    def dim(self) -> int:
        return len(self.d)

    def log_pdf(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise ValueError(f"expected simplex vectors of length {self.dim}, got shape {x.shape}")
        if np.any(x <= 0.0) or np.any(np.abs(x.sum(axis=-1) - 1.0) > 1e-9):
            raise ValueError("x must lie in the interior of the probability simplex")
        d = np.asarray(self.d)
        log_norm = math.lgamma(float(d.sum())) - sum(math.lgamma(v) for v in self.d)
        out = log_norm + ((d - 1.0) * np.log(x)).sum(axis=-1)
        return _maybe_scalar(out)

    def cdf(self, x):
        raise NotImplementedError("cdf is not supported for Dirichlet distributions")

    def sample(self, rng, size=None):
        # normalized independent gamma draws
        shape = (self.dim,) if size is None else (int(size), self.dim)
        g = rng.gamma(np.asarray(self.d), 1.0, shape)
        return g / g.sum(axis=-1, keepdims=True)

    def mean(self):
        d = np.asarray(self.d)
        return d / d.sum()


def log_pdf(dist: DistSpec, x):
    """Natural-log density of ``dist`` at ``x``."""
    return dist.log_pdf(x)


def cdf(dist: DistSpec, x):
    """CDF of ``dist`` at ``x`` (unsupported for Dirichlet)."""
    return dist.cdf(x)


def sample(dist: DistSpec, rng: np.random.Generator, size=None):
    """Draw from ``dist`` using the caller-supplied generator."""
    return dist.sample(rng, size)
