"""Phase estimators for binned homodyne counts.

Three protocols operate on one CountRecord:

* maximum likelihood: argmax of the multinomial log-likelihood
  sum_k N_k ln P_k(theta), with a Gaussian-approximation uncertainty
  sigma = 1/sqrt(|d^2 lnL/dtheta^2|) taken at the peak. The curvature
  of the log-likelihood is used (not of the likelihood itself) because
  likelihood values underflow at N ~ 1000 while the log stays tame;
  for a Gaussian peak the two definitions of sigma coincide.

* per-outcome inversion: solve P_k(theta) = N_k/N for the root nearest
  a seed phase. The central-bin probability is even in theta, so its
  root is found on [0, pi/2] and signed by sign(N- - N+): a positive
  phase pushes the fringe mean negative and feeds the "-" bin.

* composite: information-weighted average of the available inversion
  estimates, weights c_k proportional to the per-outcome Fisher
  information f_k evaluated at the inverted phase. Outcomes with zero
  counts or a failed inversion are dropped and the weights
  renormalized. Asymptotically this saturates the same Cramer-Rao
  bound as the MLE while staying closed-form per outcome.

The multinomial constant ln(N!/(N-!N0!N+!)) is theta-independent and
dropped from every likelihood.

By default all estimators evaluate the analytic outcome probabilities.
A CalibrationTable measured on a known phase grid (for instance from
an interferometer calibration run) can be passed instead; the
estimators then interpolate the tabulated curves and never touch the
analytic model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .binning import BinningScheme, outcome_probs, per_outcome_cfi
from .errors import ConfigError
from .model import ModelParams
from .numerics import bisect_root, golden_section_max, sign_change_brackets
from .sampler import CountRecord

DEFAULT_WINDOW = (-0.4, 0.4)
_GRID_POINTS = 2001


@dataclass(frozen=True)
class CalibrationTable:
    """Outcome probabilities tabulated on a phase grid.

    Rows must be normalized per phase; lookups interpolate linearly
    and derivative queries difference the interpolant on the grid
    scale. Queries outside the tabulated range are a caller error.
    """

    thetas: np.ndarray
    p_minus: np.ndarray
    p_zero: np.ndarray
    p_plus: np.ndarray

    def __post_init__(self) -> None:
        thetas = np.asarray(self.thetas, dtype=float)
        if thetas.ndim != 1 or len(thetas) < 5:
            raise ConfigError("calibration needs a 1-D grid of at least 5 phases")
        if np.any(np.diff(thetas) <= 0):
            raise ConfigError("calibration phases must be strictly increasing")
        total = np.asarray(self.p_minus) + np.asarray(self.p_zero) + np.asarray(self.p_plus)
        if np.max(np.abs(total - 1.0)) > 1e-6:
            raise ConfigError("calibration rows must be normalized to 1")

    @classmethod
    def from_model(
        cls,
        params: ModelParams,
        scheme: BinningScheme,
        thetas: np.ndarray,
    ) -> "CalibrationTable":
        """Tabulate the analytic model (useful as a calibration stand-in)."""
        probs = outcome_probs(params, scheme, np.asarray(thetas, dtype=float))
        return cls(
            np.asarray(thetas, dtype=float),
            np.asarray(probs.p_minus),
            np.asarray(probs.p_zero),
            np.asarray(probs.p_plus),
        )

    def span(self) -> tuple[float, float]:
        return float(self.thetas[0]), float(self.thetas[-1])

    def prob(self, outcome: str, theta):
        curve = {"-": self.p_minus, "0": self.p_zero, "+": self.p_plus}[outcome]
        return np.interp(theta, self.thetas, curve)

    def deriv(self, outcome: str, theta) -> float:
        step = float(np.min(np.diff(self.thetas)))
        lo, hi = self.span()
        left = max(float(theta) - step, lo)
        right = min(float(theta) + step, hi)
        return float(
            (self.prob(outcome, right) - self.prob(outcome, left)) / (right - left)
        )

    def information(self, outcome: str, theta: float) -> float:
        p = float(self.prob(outcome, theta))
        d = self.deriv(outcome, theta)
        if d == 0.0 or p <= 0.0:
            return 0.0
        return d * d / p


def _prob_curves(params, scheme, calibration):
    """Per-outcome probability lookup: analytic model or calibration."""
    if calibration is None:
        return lambda outcome, theta: outcome_probs(params, scheme, theta).as_dict()[outcome]
    return calibration.prob


def _information_at(params, scheme, calibration, outcome: str, theta: float) -> float:
    if calibration is None:
        return float(per_outcome_cfi(params, scheme, theta, outcome))
    return calibration.information(outcome, theta)


@dataclass(frozen=True)
class EstimateResult:
    """A phase estimate with provenance.

    sigma is the per-run uncertainty when the method defines one (MLE
    only); diagnostics carries method-specific detail such as composite
    weights or boundary flags. failure is None on success.
    """

    estimate: float
    sigma: float | None
    method: str
    diagnostics: dict = field(default_factory=dict)
    failure: str | None = None


@dataclass(frozen=True)
class InversionResult:
    """Root of P_k(theta) = freq, or the reason there is none.

    flag is None for a clean root, "clamped-high"/"clamped-low" when
    freq exceeded the attainable range and the nearest extremum was
    returned, "no-bracket" when no root could be localized (theta is
    then None).
    """

    theta: float | None
    outcome: str
    flag: str | None = None

    @property
    def usable(self) -> bool:
        return self.theta is not None


@dataclass(frozen=True)
class EvaluationSummary:
    """Replica statistics of one estimator at a known true phase."""

    theta_true: float
    mean_estimate: float
    bias: float
    std_dev: float
    rmse: float
    per_measurement: float  # sqrt(N) * rmse
    m_replicas: int
    n_shots: int


def log_likelihood(
    counts: CountRecord,
    params: ModelParams,
    scheme: BinningScheme,
    theta,
    calibration: CalibrationTable | None = None,
):
    """Multinomial log-likelihood up to its theta-independent constant.

    Returns -inf where an observed outcome has zero model probability.
    Accepts scalar or array theta.
    """
    lookup = _prob_curves(params, scheme, calibration)
    total = np.zeros(np.shape(theta), dtype=float)
    for outcome, n_k in counts.as_dict().items():
        if n_k == 0:
            continue  # 0 * ln(0) := 0 by multinomial convention
        p_arr = np.asarray(lookup(outcome, theta), dtype=float)
        with np.errstate(divide="ignore"):
            term = np.where(p_arr > 0.0, n_k * np.log(np.where(p_arr > 0.0, p_arr, 1.0)), -np.inf)
        total = total + term
    if np.ndim(theta) == 0:
        return float(total)
    return total


def mle(
    counts: CountRecord,
    params: ModelParams,
    scheme: BinningScheme,
    search_window: tuple[float, float] = DEFAULT_WINDOW,
    *,
    calibration: CalibrationTable | None = None,
    grid_points: int = _GRID_POINTS,
    xtol: float = 1e-9,
    curvature_step: float = 1e-4,
) -> EstimateResult:
    """Maximum-likelihood phase estimate with Gaussian-peak uncertainty."""
    lo, hi = search_window
    if not (-math.pi / 2 < lo < hi < math.pi / 2):
        raise ConfigError(f"search window must sit inside (-pi/2, pi/2), got {search_window}")
    if calibration is not None:
        cal_lo, cal_hi = calibration.span()
        if cal_lo > lo or cal_hi < hi:
            raise ConfigError("calibration grid does not cover the search window")

    def loglik(t):
        return log_likelihood(counts, params, scheme, t, calibration)

    thetas = np.linspace(lo, hi, grid_points)
    ll = loglik(thetas)
    i = int(np.argmax(ll))
    diagnostics: dict = {}
    if i == 0 or i == grid_points - 1:
        theta_hat = float(thetas[i])
        diagnostics["boundary_hit"] = True
    else:
        theta_hat = golden_section_max(
            loglik, float(thetas[i - 1]), float(thetas[i + 1]), xtol=xtol
        )
    h = curvature_step
    curvature = (
        loglik(theta_hat + h) - 2.0 * loglik(theta_hat) + loglik(theta_hat - h)
    ) / (h * h)
    diagnostics["log_likelihood_curvature"] = curvature
    if curvature < 0.0:
        sigma = 1.0 / math.sqrt(-curvature)
    else:
        sigma = None
        diagnostics["non_concave"] = True
    return EstimateResult(theta_hat, sigma, "mle", diagnostics)


def invert_outcome(
    outcome: str,
    freq: float,
    params: ModelParams,
    scheme: BinningScheme,
    seed_theta: float,
    *,
    calibration: CalibrationTable | None = None,
    search_window: tuple[float, float] = DEFAULT_WINDOW,
    sign_hint: float = 1.0,
    grid_points: int = _GRID_POINTS,
    xtol: float = 1e-10,
) -> InversionResult:
    """Invert P_k(theta) = freq for the root nearest seed_theta.

    For the side outcomes the search runs over ``search_window``. For
    the even central outcome it runs over [0, pi/2] and the sign of the
    result is sign(sign_hint) (callers pass N- - N+). Out-of-range
    frequencies clamp to the nearest attained value.
    """
    if not (0.0 <= freq <= 1.0):
        raise ConfigError(f"frequency must lie in [0, 1], got {freq}")
    lookup = _prob_curves(params, scheme, calibration)
    if outcome == "0":
        lo, hi = 0.0, math.pi / 2.0
        if calibration is not None:
            lo, hi = max(lo, calibration.span()[0]), min(hi, calibration.span()[1])
        grid = np.linspace(lo, hi, grid_points)
        target_seed = abs(seed_theta)
    elif outcome in ("-", "+"):
        grid = np.linspace(search_window[0], search_window[1], grid_points)
        target_seed = seed_theta
    else:
        raise ConfigError(f"unknown outcome {outcome!r}")

    curve = np.asarray(lookup(outcome, grid), dtype=float)
    residual = curve - freq
    brackets = sign_change_brackets(grid, residual)

    if not brackets:
        # no root: freq sits beyond the attainable range on this window
        if freq > curve.max():
            theta, flag = float(grid[int(np.argmax(curve))]), "clamped-high"
        elif freq < curve.min():
            theta, flag = float(grid[int(np.argmin(curve))]), "clamped-low"
        else:
            return InversionResult(None, outcome, "no-bracket")
        return _signed(theta, outcome, sign_hint, flag)

    def residual_at(t: float) -> float:
        return float(lookup(outcome, t)) - freq

    mids = np.array([0.5 * (grid[i] + grid[j]) for i, j in brackets])
    i, j = brackets[int(np.argmin(np.abs(mids - target_seed)))]
    theta = bisect_root(residual_at, float(grid[i]), float(grid[j]), xtol=xtol)
    return _signed(theta, outcome, sign_hint, None)


def _signed(theta: float, outcome: str, sign_hint: float, flag: str | None) -> InversionResult:
    if outcome == "0":
        theta = math.copysign(theta, sign_hint) if sign_hint != 0.0 else 0.0
    return InversionResult(theta, outcome, flag)


def composite_estimate(
    counts: CountRecord,
    params: ModelParams,
    scheme: BinningScheme,
    seed_theta: float | None = None,
    *,
    calibration: CalibrationTable | None = None,
    search_window: tuple[float, float] = DEFAULT_WINDOW,
) -> EstimateResult:
    """Information-weighted combination of the per-outcome inversions.

    With no seed given, a coarse-grid likelihood maximum seeds the
    root search, which keeps the estimator self-contained.
    """
    if seed_theta is None:
        grid = np.linspace(search_window[0], search_window[1], _GRID_POINTS)
        ll = log_likelihood(counts, params, scheme, grid, calibration)
        seed_theta = float(grid[int(np.argmax(ll))])
    sign_hint = float(counts.n_minus - counts.n_plus)

    inversions: dict[str, InversionResult] = {}
    weights: dict[str, float] = {}
    for outcome, n_k in counts.as_dict().items():
        if n_k == 0:
            continue
        inv = invert_outcome(
            outcome,
            n_k / counts.n_total,
            params,
            scheme,
            seed_theta,
            calibration=calibration,
            search_window=search_window,
            sign_hint=sign_hint,
        )
        inversions[outcome] = inv
        if inv.usable:
            weights[outcome] = _information_at(params, scheme, calibration, outcome, inv.theta)

    diagnostics = {"inversions": inversions, "seed_theta": seed_theta}
    total_weight = sum(weights.values())
    if not weights or total_weight <= 0.0:
        return EstimateResult(
            math.nan, None, "composite", diagnostics, failure="all-inversions-failed"
        )
    c = {k: w / total_weight for k, w in weights.items()}
    estimate = sum(c_k * inversions[k].theta for k, c_k in c.items())
    diagnostics["weights"] = c
    return EstimateResult(float(estimate), None, "composite", diagnostics)


def evaluate_replicas(
    estimates: Sequence[float | EstimateResult],
    theta_true: float,
    n_shots: int,
) -> EvaluationSummary:
    """Bias, spread and RMSE of per-replica estimates at a known phase.

    rmse is the root-mean-square deviation from theta_true (not from
    the sample mean), so rmse^2 = bias^2 + var*(M-1)/M with the sample
    variance var.
    """
    values = np.array(
        [e.estimate if isinstance(e, EstimateResult) else float(e) for e in estimates],
        dtype=float,
    )
    if len(values) < 2:
        raise ConfigError("need at least 2 replicas to evaluate an estimator")
    if np.any(~np.isfinite(values)):
        raise ConfigError("estimates contain failed (non-finite) entries; filter them first")
    mean = float(values.mean())
    rmse = float(np.sqrt(np.mean((values - theta_true) ** 2)))
    return EvaluationSummary(
        theta_true=theta_true,
        mean_estimate=mean,
        bias=mean - theta_true,
        std_dev=float(values.std(ddof=1)),
        rmse=rmse,
        per_measurement=math.sqrt(n_shots) * rmse,
        m_replicas=len(values),
        n_shots=n_shots,
    )
