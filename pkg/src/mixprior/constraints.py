"""Identifiability and regularity constraints on mixture-model priors.

Covers the nondecreasing ordering constraint (weak inequalities, so the
equal-components diagonal stays inside the constrained support), the
second-order stationarity check for Markov-switching AR(2) models through
the block matrix built from transition probabilities and squared companion
matrices, and rejection sampling from constrained priors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .coherence import MixturePriorGroup

if TYPE_CHECKING:
    from .modelspec import ModelSpec

__all__ = [
    "OrderingConstraint",
    "CompanionMatrix",
    "StationarityProblem",
    "StationarityResult",
    "ParameterDraw",
    "RejectionCapError",
    "SpectralRadiusError",
    "ConfigurationError",
    "indicator_ordered",
    "sample_ordered",
    "build_p2",
    "spectral_radius",
    "companion_spectral_radius",
    "is_stationary_msar2",
    "is_stationary_ar2",
    "regularity_indicator",
    "sample_constrained_prior",
    "sample_constrained_priors",
]

REGULARITY_KINDS = ("none", "ar2_stationarity", "msar2_stationarity")

DEFAULT_REJECTION_CAP = 1_000_000


class RejectionCapError(RuntimeError):
    """Rejection sampling exhausted its attempt budget."""

    def __init__(self, message: str, *, attempts: int, accepted: int):
        super().__init__(message)
        self.attempts = attempts
        self.accepted = accepted
        self.acceptance_rate = accepted / attempts if attempts else 0.0


class SpectralRadiusError(RuntimeError):
    """The spectral radius estimate failed to converge."""


class ConfigurationError(ValueError):
    """A constraint kind does not fit the shape of the model it is attached to."""


@dataclass(frozen=True)
class OrderingConstraint:
    """Marks the one group per model whose coordinates are sampled nondecreasing."""

    group_label: str
    direction: str = "nondecreasing"


def indicator_ordered(values) -> bool:
    """True iff the coordinates are nondecreasing (ties allowed)."""
    values = np.asarray(values, dtype=float)
    return bool(np.all(np.diff(values) >= 0.0))


def sample_ordered(group: MixturePriorGroup, rng: np.random.Generator, size: int | None = None,
                   max_attempts: int | None = None):
    """Draw from the order-constrained joint prior of ``group``.

    Identical components admit an exact construction (sort one iid draw,
    valid because the constrained density is the symmetric product restricted
    to the nondecreasing cone).  Heterogeneous components fall back to
    rejection sampling with an attempt cap.
    """
    if not group.ordered:
        raise ValueError("group does not carry an ordering constraint")
    n = 1 if size is None else int(size)
    k = group.k
    if k == 1:
        draws = np.asarray(group.components[0].sample(rng, size=n), dtype=float).reshape(n, 1)
        return draws[0] if size is None else draws

    if group.identical:
        draws = np.asarray(group.components[0].sample(rng, size=(n, k)), dtype=float)
        draws.sort(axis=1)
        return draws[0] if size is None else draws

    if max_attempts is None:
        max_attempts = max(DEFAULT_REJECTION_CAP, 20 * n)
    rows: list[np.ndarray] = []
    accepted = 0
    attempts = 0
    while accepted < n:
        batch = min(max(4 * (n - accepted), 1024), max_attempts - attempts)
        if batch <= 0:
            rate = accepted / attempts if attempts else 0.0
            raise RejectionCapError(
                f"ordered rejection sampler exceeded {max_attempts} attempts "
                f"(empirical acceptance rate {rate:.3g})",
                attempts=attempts, accepted=accepted,
            )
        proposal = np.column_stack(
            [np.asarray(c.sample(rng, size=batch), dtype=float) for c in group.components]
        )
        keep = np.all(np.diff(proposal, axis=1) >= 0.0, axis=1)
        rows.append(proposal[keep])
        accepted += int(keep.sum())
        attempts += batch
    draws = np.concatenate(rows, axis=0)[:n]
    return draws[0] if size is None else draws


@dataclass(frozen=True)
class CompanionMatrix:
    """AR(2) companion matrix [[phi1, phi2], [1, 0]] for one regime."""

    phi1: float
    phi2: float

    def __post_init__(self):
        for name in ("phi1", "phi2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    def as_array(self) -> np.ndarray:
        return np.array([[self.phi1, self.phi2], [1.0, 0.0]])


@dataclass(frozen=True, eq=False)
class StationarityProblem:
    """Transition matrix plus one companion matrix per regime."""

    p: np.ndarray
    regimes: tuple[CompanionMatrix, ...]

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError(f"transition matrix must be square, got shape {p.shape}")
        k = p.shape[0]
        if k < 1:
            raise ValueError("need at least one state")
        if not np.all(np.isfinite(p)) or np.any(p < 0.0):
            raise ValueError("transition probabilities must be finite and nonnegative")
        if np.any(np.abs(p.sum(axis=1) - 1.0) > 1e-12):
            raise ValueError("every transition-matrix row must sum to 1 (within 1e-12)")
        regimes = tuple(self.regimes)
        if len(regimes) != k:
            raise ValueError(f"expected {k} regimes, got {len(regimes)}")
        p.flags.writeable = False
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "regimes", regimes)

    @property
    def k(self) -> int:
        return self.p.shape[0]


def build_p2(problem: StationarityProblem) -> np.ndarray:
    """Assemble the 4K x 4K stationarity matrix.

    Row-block r (destination regime) and column-block c (source regime) hold
    ``p[c, r] * kron(Phi_r, Phi_r)``; with all regimes equal this reduces to
    ``kron(p.T, kron(Phi, Phi))``.
    """
    k = problem.k
    out = np.zeros((4 * k, 4 * k))
    kron_blocks = [np.kron(reg.as_array(), reg.as_array()) for reg in problem.regimes]
    for r in range(k):
        for c in range(k):
            out[4 * r:4 * r + 4, 4 * c:4 * c + 4] = problem.p[c, r] * kron_blocks[r]
    return out


def _gelfand(a: np.ndarray, tol: float, max_iter: int):
    # rho = lim ||A^(2^j)||^(1/2^j); bracket with max-row-sum and Frobenius norms.
    # Both norm estimates overshoot rho by ~c/m, so agreement of the bracket
    # alone can converge to a jointly shifted value; additionally require the
    # successive estimates to settle (their gap is ~half the remaining error)
    # and cancel the leading 1/m term by extrapolation.
    b = a.copy()
    log_scale = 0.0
    m = 1.0
    previous = math.inf
    estimate = math.inf
    width = math.inf
    for _ in range(max_iter):
        norm_inf = float(np.max(np.abs(b).sum(axis=1)))
        if norm_inf == 0.0:
            return 0.0, 0.0, True
        norm_fro = float(np.linalg.norm(b))
        est_inf = math.exp((log_scale + math.log(norm_inf)) / m)
        est_fro = math.exp((log_scale + math.log(norm_fro)) / m)
        previous, estimate = estimate, min(est_inf, est_fro)
        width = abs(est_inf - est_fro)
        step = abs(estimate - previous)
        if m > 2.0 and width <= 0.125 * tol and step <= 0.125 * tol:
            extrapolated = 2.0 * estimate - previous
            return max(0.0, min(extrapolated, estimate)), width, True
        scaled = b / norm_inf
        b = scaled @ scaled
        if not np.all(np.isfinite(b)):
            break
        log_scale = 2.0 * (log_scale + math.log(norm_inf))
        m *= 2.0
    return estimate, width, False


def spectral_radius(a, tol: float = 1e-10, max_iter: int = 100) -> float:
    """Spectral radius of a square matrix with possibly signed entries.

    Power iteration is not valid here, so the estimate comes from repeated
    squaring, bracketing the limit with the max-row-sum and Frobenius norms
    until the bracket width drops below ``tol``.  A dense QR eigensolve is
    the fallback when the bracket stalls.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    if a.shape[0] == 1:
        return abs(float(a[0, 0]))
    estimate, width, converged = _gelfand(a, tol, max_iter)
    if converged:
        return estimate
    try:
        return float(np.max(np.abs(np.linalg.eigvals(a))))
    except np.linalg.LinAlgError as err:
        raise SpectralRadiusError(
            f"no convergence within {max_iter} squarings (last bracket width {width:.3g}, "
            f"estimate {estimate:.12g}) and the dense eigensolver failed"
        ) from err


def companion_spectral_radius(phi1, phi2):
    """rho of the AR(2) companion matrix, from the roots of x^2 - phi1 x - phi2."""
    phi1 = np.asarray(phi1, dtype=float)
    phi2 = np.asarray(phi2, dtype=float)
    disc = phi1 * phi1 + 4.0 * phi2
    real = disc >= 0.0
    sqrt_disc = np.sqrt(np.where(real, disc, 0.0))
    real_rho = np.maximum(np.abs(phi1 + sqrt_disc), np.abs(phi1 - sqrt_disc)) / 2.0
    complex_rho = np.sqrt(np.maximum(-phi2, 0.0))
    out = np.where(real, real_rho, complex_rho)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class StationarityResult:
    """Stationarity verdict; ``boundary`` flags a radius within tol of 1."""

    stationary: bool
    rho: float
    boundary: bool


def is_stationary_msar2(problem: StationarityProblem, tol: float = 1e-10) -> StationarityResult:
    """Sufficient second-order stationarity check: rho of the block matrix < 1."""
    rho = spectral_radius(build_p2(problem), tol=tol)
    return StationarityResult(stationary=rho < 1.0, rho=rho, boundary=abs(rho - 1.0) <= tol)


_AR2_BOUNDARY_BAND = 1e-8


def is_stationary_ar2(phi1: float, phi2: float) -> bool:
    """AR(2) stationarity via the companion spectral radius.

    Cross-checked against the stationarity-triangle inequalities; genuine
    disagreement away from the boundary signals a numerical bug.
    """
    phi1, phi2 = float(phi1), float(phi2)
    rho = spectral_radius(CompanionMatrix(phi1, phi2).as_array(), tol=1e-12)
    by_radius = rho < 1.0
    by_triangle = (phi2 > -1.0) and (phi1 + phi2 < 1.0) and (phi2 - phi1 < 1.0)
    if by_radius != by_triangle and abs(rho - 1.0) > _AR2_BOUNDARY_BAND:
        raise AssertionError(
            f"stationarity checks disagree at phi=({phi1}, {phi2}): "
            f"rho={rho!r} vs triangle={by_triangle}"
        )
    return by_radius


@dataclass(frozen=True, eq=False)
class ParameterDraw:
    """One point from a model's prior: common parameters, group vectors, transition rows."""

    delta: dict
    groups: dict
    eta: np.ndarray | None = None


def _scalar_value(model: "ModelSpec", draw: ParameterDraw, name: str) -> float:
    if name in draw.delta:
        return float(draw.delta[name])
    if name in draw.groups:
        values = np.asarray(draw.groups[name], dtype=float).ravel()
        if values.size != 1:
            raise ConfigurationError(
                f"parameter {name!r} switches across {values.size} regimes; "
                "the nested stationarity constraint needs a scalar"
            )
        return float(values[0])
    raise ConfigurationError(f"model {model.name!r} does not define parameter {name!r}")


def _regime_values(model: "ModelSpec", draw: ParameterDraw, name: str, k: int) -> np.ndarray:
    if name in draw.groups:
        values = np.asarray(draw.groups[name], dtype=float).ravel()
        if values.size == k:
            return values
        if values.size == 1:
            return np.full(k, values[0])
        raise ConfigurationError(f"parameter {name!r} has {values.size} values, expected {k}")
    if name in draw.delta:
        return np.full(k, float(draw.delta[name]))
    raise ConfigurationError(f"model {model.name!r} does not define parameter {name!r}")


def regularity_indicator(model: "ModelSpec", draw: ParameterDraw) -> bool:
    """Evaluate the model's regularity constraint at one parameter point.

    Membership is tested in [0, 1): the constrained statistic is the AR(2)
    companion radius for nested and intermediate models and the block-matrix
    radius for fully switching models.
    """
    kind = model.regularity
    if kind == "none":
        return True
    if kind == "ar2_stationarity":
        phi1 = _scalar_value(model, draw, "phi1")
        phi2 = _scalar_value(model, draw, "phi2")
        return bool(companion_spectral_radius(phi1, phi2) < 1.0)
    if kind == "msar2_stationarity":
        if model.kind != "markov_switching" or draw.eta is None:
            raise ConfigurationError(
                "msar2_stationarity needs a markov_switching model with transition rows"
            )
        k = model.k
        phi1 = _regime_values(model, draw, "phi1", k)
        phi2 = _regime_values(model, draw, "phi2", k)
        regimes = tuple(CompanionMatrix(phi1[i], phi2[i]) for i in range(k))
        problem = StationarityProblem(p=np.asarray(draw.eta, dtype=float), regimes=regimes)
        return bool(spectral_radius(build_p2(problem)) < 1.0)
    raise ConfigurationError(f"unknown regularity kind {kind!r}")


def _draw_prior_point(model: "ModelSpec", rng: np.random.Generator) -> ParameterDraw:
    delta = {name: dist.sample(rng) for name, dist in model.delta_priors.items()}
    groups = {}
    for label, group in model.groups.items():
        if group.ordered:
            groups[label] = np.asarray(sample_ordered(group, rng), dtype=float)
        else:
            groups[label] = np.asarray([c.sample(rng) for c in group.components], dtype=float)
    eta = None
    if model.eta_prior is not None:
        eta = np.vstack([row.sample(rng) for row in model.eta_prior])
    return ParameterDraw(delta=delta, groups=groups, eta=eta)


def sample_constrained_prior(model: "ModelSpec", rng: np.random.Generator,
                             max_attempts: int = DEFAULT_REJECTION_CAP):
    """One draw from the model's constrained prior, with the empirical acceptance rate."""
    draws, rate = sample_constrained_priors(model, 1, rng, max_attempts=max_attempts)
    return draws[0], rate


def sample_constrained_priors(model: "ModelSpec", n: int, rng: np.random.Generator,
                              max_attempts: int | None = None):
    """``n`` draws from the constrained prior via rejection on the regularity indicator."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    if max_attempts is None:
        max_attempts = max(DEFAULT_REJECTION_CAP, 20 * n)
    draws: list[ParameterDraw] = []
    attempts = 0
    while len(draws) < n:
        if attempts >= max_attempts:
            rate = len(draws) / attempts if attempts else 0.0
            raise RejectionCapError(
                f"constrained prior sampler exceeded {max_attempts} attempts with "
                f"{len(draws)} accepted draws (empirical acceptance rate {rate:.3g})",
                attempts=attempts, accepted=len(draws),
            )
        candidate = _draw_prior_point(model, rng)
        attempts += 1
        if regularity_indicator(model, candidate):
            draws.append(candidate)
    return draws, len(draws) / attempts
