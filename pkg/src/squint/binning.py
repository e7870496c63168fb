"""Binned data processing of the homodyne record.

The continuous quadrature p is sorted into three bins split at +/-a:

    "-": p < -a        "0": |p| <= a        "+": p > a

Collapsing "-" and "+" into a single outcome "out" recovers the older
two-bin scheme. All occurrence probabilities reduce to error functions
of the standardized bin edges

    lower, upper = sqrt(2/eta) * (alpha0 sin(theta)/2 -+ a)

so that P0 = (erf(upper) - erf(lower))/2, P+ = erfc(upper)/2 and
P- = erfc(-lower)/2. Tails are evaluated through erfc to keep relative
precision when a bin probability is tiny.

The three-bin scheme has two payoffs over the two-bin one: the phase
sensitivity no longer diverges at theta = 0, and both the fringe
resolution and the best sensitivity improve at fixed photon budget.

Scalars or NumPy arrays are accepted wherever ``theta`` appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.special import erf, erfc

from .errors import ConfigError, NumericalFailure
from .model import ModelParams, noise_ratio, noise_ratio_deriv
from .numerics import bisect_root, golden_section_min, sign_change_brackets

_ISQRT_PI = 1.0 / math.sqrt(math.pi)

OUTCOMES = ("-", "0", "+")
BINARY_OUTCOMES = ("0", "out")


@dataclass(frozen=True)
class BinningScheme:
    """Half bin width ``a`` and optional outcome eigenvalues.

    ``eigenvalues`` maps outcome labels to the values averaged by
    scaled_signal: keys {"0", "out"} for the two-bin observable or
    {"-", "0", "+"} for the three-bin one. When omitted, the two-bin
    convention mu_out = 0, mu_0 = 1/erf(sqrt(2) a e^r) is used, which
    normalizes the theta = 0 peak of the signal to exactly 1.
    """

    a: float
    eigenvalues: Mapping[str, float] | None = field(default=None)

    def __post_init__(self) -> None:
        if not (self.a > 0.0):
            raise ConfigError(f"half bin width a must be > 0, got {self.a}")
        if self.eigenvalues is not None:
            keys = frozenset(self.eigenvalues)
            if keys not in (frozenset(BINARY_OUTCOMES), frozenset(OUTCOMES)):
                raise ConfigError(
                    "eigenvalues must cover exactly {'0', 'out'} or {'-', '0', '+'}, "
                    f"got {sorted(keys)}"
                )
            for k, v in self.eigenvalues.items():
                if not math.isfinite(v):
                    raise ConfigError(f"eigenvalue for outcome {k!r} is not finite")


@dataclass(frozen=True)
class OutcomeProbs:
    """Occurrence probabilities of the three outcomes; they sum to 1."""

    p_minus: float
    p_zero: float
    p_plus: float

    def as_dict(self) -> dict[str, float]:
        return {"-": self.p_minus, "0": self.p_zero, "+": self.p_plus}


@dataclass(frozen=True)
class OutcomeDerivs:
    """Phase derivatives dP_k/d(theta); they sum to 0."""

    dp_minus: float
    dp_zero: float
    dp_plus: float

    def as_dict(self) -> dict[str, float]:
        return {"-": self.dp_minus, "0": self.dp_zero, "+": self.dp_plus}


@dataclass(frozen=True)
class PhaseSensitivity:
    """A per-shot phase uncertainty, possibly divergent.

    Divergent values carry value = inf together with a reason code;
    they are never silently produced by overflow.
    """

    value: float
    divergent: bool = False
    reason: str | None = None

    def __float__(self) -> float:
        return self.value


def scaled_bin_edges(params: ModelParams, scheme: BinningScheme, theta):
    """Standardized bin edges (lower, upper) entering the error functions.

    upper - lower = 2a*sqrt(2/eta) > 0 for every theta.
    """
    eta = noise_ratio(params, theta)
    scale = np.sqrt(2.0 / eta)
    s = params.alpha0 * np.sin(theta) / 2.0
    return scale * (s - scheme.a), scale * (s + scheme.a)


def outcome_probs(params: ModelParams, scheme: BinningScheme, theta) -> OutcomeProbs:
    """Occurrence probabilities of the outcomes "-", "0", "+"."""
    lower, upper = scaled_bin_edges(params, scheme, theta)
    p_minus = 0.5 * erfc(-lower)
    p_plus = 0.5 * erfc(upper)
    # central bin: pick the tail-stable difference when both edges sit
    # on the same side of the mean
    direct = 0.5 * (erf(upper) - erf(lower))
    right = 0.5 * (erfc(lower) - erfc(upper))
    left = 0.5 * (erfc(-upper) - erfc(-lower))
    p_zero = np.where(lower > 1.0, right, np.where(upper < -1.0, left, direct))
    return OutcomeProbs(_match(theta, p_minus), _match(theta, p_zero), _match(theta, p_plus))


def outcome_derivs(params: ModelParams, scheme: BinningScheme, theta) -> OutcomeDerivs:
    """Analytic dP_k/d(theta), including the phase dependence of the noise."""
    eta = noise_ratio(params, theta)
    eta_d = noise_ratio_deriv(params, theta)
    scale = np.sqrt(2.0 / eta)
    s = params.alpha0 * np.sin(theta) / 2.0
    s_d = params.alpha0 * np.cos(theta) / 2.0
    lower = scale * (s - scheme.a)
    upper = scale * (s + scheme.a)
    chain = eta_d / (2.0 * eta)
    lower_d = scale * (s_d - (s - scheme.a) * chain)
    upper_d = scale * (s_d - (s + scheme.a) * chain)
    flux_lower = _ISQRT_PI * np.exp(-lower * lower) * lower_d
    flux_upper = _ISQRT_PI * np.exp(-upper * upper) * upper_d
    dp_minus = flux_lower
    dp_plus = -flux_upper
    dp_zero = flux_upper - flux_lower
    return OutcomeDerivs(_match(theta, dp_minus), _match(theta, dp_zero), _match(theta, dp_plus))


def per_outcome_cfi(params: ModelParams, scheme: BinningScheme, theta, outcome: str):
    """Fisher information f_k = (dP_k/dtheta)^2 / P_k of one outcome.

    Defined as 0 wherever the derivative vanishes. A probability that
    underflows to zero while its derivative does not indicates the
    working point left the numerically representable regime and raises
    NumericalFailure rather than returning garbage.
    """
    if outcome not in OUTCOMES:
        raise ConfigError(f"unknown outcome {outcome!r}; expected one of {OUTCOMES}")
    probs = outcome_probs(params, scheme, theta).as_dict()[outcome]
    derivs = outcome_derivs(params, scheme, theta).as_dict()[outcome]
    return _information_term(probs, derivs, theta)


def multi_cfi(params: ModelParams, scheme: BinningScheme, theta):
    """Total Fisher information of the three-bin measurement.

    Strictly positive at theta = 0 whenever alpha0 > 0, which is what
    removes the small-phase divergence of the two-bin scheme.
    """
    probs = outcome_probs(params, scheme, theta)
    derivs = outcome_derivs(params, scheme, theta)
    total = 0.0
    for p, d in ((probs.p_minus, derivs.dp_minus), (probs.p_zero, derivs.dp_zero),
                 (probs.p_plus, derivs.dp_plus)):
        total = total + _information_term(p, d, theta)
    return total


def binary_cfi(params: ModelParams, scheme: BinningScheme, theta):
    """Fisher information of the two-bin measurement; 0 where dP0 = 0."""
    probs = outcome_probs(params, scheme, theta)
    dp_zero = outcome_derivs(params, scheme, theta).dp_zero
    # complement from the tails: 1 - p_zero cancels catastrophically
    # when the central bin swallows everything
    p_out = probs.p_minus + probs.p_plus
    den = probs.p_zero * p_out
    num = np.asarray(dp_zero, dtype=float) ** 2
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.where(num == 0.0, 0.0, num / np.where(den > 0.0, den, 1.0))
    bad = (np.asarray(den) == 0.0) & (num > 0.0)
    if np.any(bad):
        raise NumericalFailure("central-bin probability underflowed with nonzero slope")
    return _match(theta, out)


def binary_sensitivity(params: ModelParams, scheme: BinningScheme, theta: float) -> PhaseSensitivity:
    """Error-propagation sensitivity sqrt(P0 (1-P0)) / |dP0| of the two-bin scheme.

    Saturates the two-bin Cramer-Rao bound wherever it is finite:
    binary_sensitivity * sqrt(binary_cfi) = 1. At stationary points of
    P0 (notably theta = 0) it is flagged divergent instead of
    overflowing.
    """
    probs = outcome_probs(params, scheme, theta)
    dp_zero = float(outcome_derivs(params, scheme, theta).dp_zero)
    if dp_zero == 0.0:
        return PhaseSensitivity(math.inf, divergent=True, reason="stationary-signal")
    den = float(probs.p_zero) * float(probs.p_minus + probs.p_plus)
    if den == 0.0:
        return PhaseSensitivity(math.inf, divergent=True, reason="degenerate-probabilities")
    return PhaseSensitivity(math.sqrt(den) / abs(dp_zero))


def crb_multi(f_mul: float, n_shots: int) -> PhaseSensitivity:
    """Cramer-Rao phase uncertainty 1/sqrt(N * F) for N shots."""
    if n_shots < 1:
        raise ConfigError(f"n_shots must be >= 1, got {n_shots}")
    if f_mul < 0.0:
        raise ConfigError(f"Fisher information must be >= 0, got {f_mul}")
    if f_mul == 0.0:
        return PhaseSensitivity(math.inf, divergent=True, reason="zero-information")
    return PhaseSensitivity(1.0 / math.sqrt(n_shots * f_mul))


def multi_sensitivity(params: ModelParams, scheme: BinningScheme, theta: float) -> PhaseSensitivity:
    """Per-shot three-bin sensitivity 1/sqrt(multi_cfi)."""
    return crb_multi(float(multi_cfi(params, scheme, theta)), 1)


def default_binary_eigenvalues(params: ModelParams, scheme: BinningScheme) -> dict[str, float]:
    """Peak-normalizing two-bin eigenvalues: mu_out = 0, mu_0 = 1/P0(0)."""
    p0_at_zero = erf(math.sqrt(2.0) * scheme.a * math.exp(params.r))
    return {"0": 1.0 / p0_at_zero, "out": 0.0}


def scaled_signal(params: ModelParams, scheme: BinningScheme, theta):
    """Averaged observable sum_k mu_k P_k(theta).

    With the default eigenvalues the signal peaks at exactly 1 at
    theta = 0, which fixes the half-maximum level at 1/2 regardless of
    purity.
    """
    eig = scheme.eigenvalues
    if eig is None:
        eig = default_binary_eigenvalues(params, scheme)
    probs = outcome_probs(params, scheme, theta)
    if frozenset(eig) == frozenset(BINARY_OUTCOMES):
        return eig["0"] * probs.p_zero + eig["out"] * (1.0 - probs.p_zero)
    return eig["-"] * probs.p_minus + eig["0"] * probs.p_zero + eig["+"] * probs.p_plus


def center_bin_fwhm(
    params: ModelParams, scheme: BinningScheme, *, grid_points: int = 2001, xtol: float = 1e-10
) -> float:
    """Full width at half maximum of the peak-normalized central-bin fringe.

    The normalized P0 peaks at exactly 1 at theta = 0, so the width is
    twice the first downward crossing of 1/2 on (0, pi], located by a
    grid scan and polished by bisection. The fringe revives near
    theta = pi, hence only the first crossing counts.

    Raises NumericalFailure when no half crossing exists in (0, pi]
    (the fringe is never resolved at this bin width).
    """
    peak = erf(math.sqrt(2.0) * scheme.a * math.exp(params.r))
    target = 0.5 * peak

    def excess(t: float) -> float:
        return float(outcome_probs(params, scheme, t).p_zero) - target

    thetas = np.linspace(0.0, math.pi, grid_points)
    values = np.asarray(outcome_probs(params, scheme, thetas).p_zero) - target
    brackets = sign_change_brackets(thetas, values)
    if not brackets:
        raise NumericalFailure(
            f"fringe-resolution failure: normalized central-bin signal never "
            f"falls to half maximum for a={scheme.a}"
        )
    i, j = brackets[0]
    half = bisect_root(excess, float(thetas[i]), float(thetas[j]), xtol=xtol)
    return 2.0 * half


def best_binary_sensitivity(
    params: ModelParams, scheme: BinningScheme, *, grid_points: int = 2001, xtol: float = 1e-10
) -> tuple[float, float]:
    """Optimal working point of the two-bin scheme on (0, pi/2].

    Returns (theta_min, sensitivity). The grid scan handles the many
    shallow local structures; golden-section search polishes the
    winning bracket.
    """
    thetas = np.linspace(0.0, math.pi / 2.0, grid_points + 1)[1:]
    f_bin = np.asarray(binary_cfi(params, scheme, thetas), dtype=float)
    with np.errstate(divide="ignore"):
        sens = np.where(f_bin > 0.0, 1.0 / np.sqrt(f_bin), np.inf)
    i = int(np.argmin(sens))
    if not math.isfinite(sens[i]):
        raise NumericalFailure("two-bin sensitivity is divergent on the whole scan window")

    def objective(t: float) -> float:
        return float(binary_sensitivity(params, scheme, t))

    lo = float(thetas[max(i - 1, 0)])
    hi = float(thetas[min(i + 1, len(thetas) - 1)])
    theta_min = golden_section_min(objective, lo, hi, xtol=xtol)
    value = objective(theta_min)
    if value > sens[i]:  # refinement must never lose to the grid
        theta_min, value = float(thetas[i]), float(sens[i])
    return theta_min, value


def improvement_db(delta_theta: float, n_bar: float) -> float:
    """Sensitivity gain over the shot-noise limit, in decibels.

    dB = 10 log10(SNL / delta_theta) with SNL = 1/sqrt(n_bar); positive
    when the scheme beats shot noise.
    """
    if not (delta_theta > 0.0):
        raise ConfigError(f"delta_theta must be > 0, got {delta_theta}")
    if not (n_bar > 0.0):
        raise ConfigError(f"n_bar must be > 0, got {n_bar}")
    snl = 1.0 / math.sqrt(n_bar)
    return 10.0 * math.log10(snl / delta_theta)


def _information_term(p, dp, theta):
    """(dp)^2/p with the 0/0 -> 0 convention and an underflow guard."""
    num = np.asarray(dp, dtype=float) ** 2
    p_arr = np.asarray(p, dtype=float)
    bad = (p_arr == 0.0) & (num > 0.0)
    if np.any(bad):
        raise NumericalFailure("outcome probability underflowed with nonzero slope")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(num == 0.0, 0.0, num / np.where(p_arr > 0.0, p_arr, 1.0))
    return _match(theta, out)


def _match(template, value):
    """Return value as a float when the template argument was scalar."""
    if np.isscalar(template) or np.ndim(template) == 0:
        return float(value)
    return value
