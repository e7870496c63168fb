"""Closed-form Gaussian model of the squeezed-state interferometer.

A coherent beam of real amplitude alpha0 enters one port of a balanced
two-path interferometer; the other port carries a squeezed vacuum with
squeeze magnitude r and purity rho (phases fixed so the squeezing helps:
arg(coherent) = 0, arg(squeeze) = pi). A single-port homodyne detector
measures the quadrature p behind the second beam splitter.

For this configuration the outcome statistics are fully Gaussian:

    P(p|theta) = Normal(mean = -(alpha0/2) sin(theta),
                        variance = eta(theta)/4)

where eta(theta) is the quadrature noise relative to the vacuum level,

    eta = (1 + cos t)^2 / (4 nu) + sin^2 t / (4 mu) + (1 - cos t)/2,
    mu = rho^2 exp(-2r),   nu = exp(2r).

This expression is an algebraic rearrangement of the usual four-term
quotient into a sum of non-negative terms, so eta(0) = 1/nu and
eta(pi) = 1 hold to the last bit even for strong squeezing.

Everything in this module is a pure function of its arguments and is
NumPy-ufunc friendly: ``theta`` and ``p`` may be scalars or arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class InputState:
    """Physical configuration of the two input beams.

    alpha0: real coherent amplitude, >= 0 (quadrature units).
    r:      squeeze magnitude, >= 0.
    purity: purity of the squeezed input, in (0, 1].
    """

    alpha0: float
    r: float
    purity: float = 1.0

    def __post_init__(self) -> None:
        if not (self.alpha0 >= 0.0):
            raise ConfigError(f"alpha0 must be >= 0, got {self.alpha0}")
        if not (self.r >= 0.0):
            raise ConfigError(f"squeeze magnitude r must be >= 0, got {self.r}")
        if not (0.0 < self.purity <= 1.0):
            raise ConfigError(f"purity must lie in (0, 1], got {self.purity}")

    @classmethod
    def from_e_minus_r(cls, alpha0: float, e_minus_r: float, purity: float = 1.0) -> "InputState":
        """Build from the squeeze factor e^(-r) instead of r."""
        if not (0.0 < e_minus_r <= 1.0):
            raise ConfigError(f"e^-r must lie in (0, 1], got {e_minus_r}")
        return cls(alpha0, -math.log(e_minus_r), purity)

    @classmethod
    def from_sinh2r(cls, alpha0: float, sinh2r: float, purity: float = 1.0) -> "InputState":
        """Build from the squeezed-mode photon number sinh^2(r)."""
        if sinh2r < 0.0:
            raise ConfigError(f"sinh^2 r must be >= 0, got {sinh2r}")
        return cls(alpha0, math.asinh(math.sqrt(sinh2r)), purity)

    @property
    def sinh2r(self) -> float:
        return math.sinh(self.r) ** 2

    @property
    def e_minus_r(self) -> float:
        return math.exp(-self.r)

    @property
    def n_bar(self) -> float:
        """Mean total photon number injected by both beams."""
        return self.alpha0**2 + self.sinh2r


def input_state(
    *,
    alpha0: float | None = None,
    n_bar: float | None = None,
    r: float | None = None,
    e_minus_r: float | None = None,
    sinh2r: float | None = None,
    purity: float = 1.0,
) -> InputState:
    """Build an InputState from any one squeeze form plus alpha0 or n_bar.

    Exactly one of (r, e_minus_r, sinh2r) and exactly one of
    (alpha0, n_bar) must be given. When n_bar is given, the coherent
    amplitude absorbs the photon budget left by the squeezed mode:
    alpha0^2 = n_bar - sinh^2 r, which must be non-negative.
    """
    squeeze = [x for x in (r, e_minus_r, sinh2r) if x is not None]
    if len(squeeze) != 1:
        raise ConfigError("give exactly one of r, e_minus_r, sinh2r")
    if r is not None:
        if r < 0.0:
            raise ConfigError(f"r must be >= 0, got {r}")
        r_val = float(r)
    elif e_minus_r is not None:
        if not (0.0 < e_minus_r <= 1.0):
            raise ConfigError(f"e^-r must lie in (0, 1], got {e_minus_r}")
        r_val = -math.log(e_minus_r)
    else:
        assert sinh2r is not None
        if sinh2r < 0.0:
            raise ConfigError(f"sinh^2 r must be >= 0, got {sinh2r}")
        r_val = math.asinh(math.sqrt(sinh2r))

    if (alpha0 is None) == (n_bar is None):
        raise ConfigError("give exactly one of alpha0, n_bar")
    if alpha0 is None:
        assert n_bar is not None
        a0_sq = n_bar - math.sinh(r_val) ** 2
        if a0_sq < 0.0:
            raise ConfigError(
                f"n_bar={n_bar} is below the squeezed-mode photon number "
                f"sinh^2 r={math.sinh(r_val) ** 2:.6g}"
            )
        alpha0 = math.sqrt(a0_sq)
    return InputState(float(alpha0), r_val, purity)


@dataclass(frozen=True)
class ModelParams:
    """Derived Gaussian-model constants consumed by every formula.

    mu_tilde = purity^2 e^(-2r), nu_tilde = e^(2r); mu_tilde <= nu_tilde.
    """

    alpha0: float
    r: float
    purity: float
    mu_tilde: float
    nu_tilde: float
    n_bar: float


def derive_params(state: InputState) -> ModelParams:
    """Derive the Gaussian-model constants from the physical input state."""
    mu = state.purity**2 * math.exp(-2.0 * state.r)
    nu = math.exp(2.0 * state.r)
    return ModelParams(
        alpha0=state.alpha0,
        r=state.r,
        purity=state.purity,
        mu_tilde=mu,
        nu_tilde=nu,
        n_bar=state.n_bar,
    )


def noise_ratio(params: ModelParams, theta):
    """Quadrature noise at phase theta, as a variance ratio to vacuum.

    The measured quadrature is Gaussian with variance noise_ratio/4
    (vacuum variance is 1/4). Strictly positive for all theta;
    noise_ratio(0) = e^(-2r) and noise_ratio(pi) = 1 exactly.
    """
    c = np.cos(theta)
    s = np.sin(theta)
    # sum of non-negative terms: exact at theta = 0 and pi, no cancellation
    return (1.0 + c) ** 2 / (4.0 * params.nu_tilde) + s * s / (4.0 * params.mu_tilde) + (1.0 - c) / 2.0


def noise_ratio_deriv(params: ModelParams, theta):
    """d(noise_ratio)/d(theta); odd in theta, zero at 0 and pi."""
    c = np.cos(theta)
    s = np.sin(theta)
    return s * (0.5 + c / (2.0 * params.mu_tilde) - (1.0 + c) / (2.0 * params.nu_tilde))


def mean_signal(params: ModelParams, theta):
    """Mean of the measured quadrature: -(alpha0/2) sin(theta).

    As a fringe in theta this has FWHM 2*pi/3, the classical
    (Rayleigh) resolution benchmark the binned schemes are measured
    against.
    """
    return -(params.alpha0 / 2.0) * np.sin(theta)


def quadrature_pdf(params: ModelParams, theta, p):
    """Probability density of quadrature value p at phase theta."""
    eta = noise_ratio(params, theta)
    d = p - mean_signal(params, theta)
    return np.sqrt(2.0 / (np.pi * eta)) * np.exp(-2.0 * d * d / eta)


def continuous_cfi(params: ModelParams, theta):
    """Fisher information of the raw (unbinned) quadrature record.

    For a Gaussian model with mean m(theta) and variance v(theta) the
    information is m'^2/v + v'^2/(2 v^2); both terms are >= 0. The
    first term carries the fringe signal, the second the phase
    dependence of the squeezed noise.
    """
    eta = noise_ratio(params, theta)
    eta_d = noise_ratio_deriv(params, theta)
    mean_d = -(params.alpha0 / 2.0) * np.cos(theta)
    return 4.0 * mean_d * mean_d / eta + eta_d * eta_d / (2.0 * eta * eta)


def cfi_max(params: ModelParams) -> float:
    """Peak information of the unbinned record, attained at theta = 0."""
    return float(params.nu_tilde) * params.alpha0**2


def crb_min(params: ModelParams) -> float:
    """Best per-shot sensitivity without binning: 1/sqrt(cfi_max), exact."""
    if params.alpha0 == 0.0:
        raise ConfigError("crb_min is undefined for alpha0 = 0 (no fringe signal)")
    return 1.0 / math.sqrt(cfi_max(params))


def crb_min_approx(params: ModelParams) -> float:
    """Large-coherent-amplitude approximation e^(-r)/sqrt(n_bar).

    Reported alongside crb_min for diagnostics; accurate when
    alpha0^2 >> sinh^2 r.
    """
    if params.n_bar == 0.0:
        raise ConfigError("crb_min_approx is undefined for an empty input state")
    return math.exp(-params.r) / math.sqrt(params.n_bar)
