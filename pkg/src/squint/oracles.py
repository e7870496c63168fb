"""Slow independent oracles used to verify the closed-form fast path.

Three cross-checks live here, deliberately built from machinery the
fast path never touches:

* the two-mode input Wigner function (product of a displaced vacuum
  Gaussian and a squeezed, possibly impure, Gaussian);
* the phase-space map of the whole interferometer (splitter, phase
  shift in one arm, splitter), a unitary linear map of the two complex
  mode variables, under which the output Wigner function is the input
  one at transformed arguments;
* a truncated two-mode Fock-space evaluator of the quantum Fisher
  information 4 Var(G) for the pure input, with G = J_x - n/2 built
  from sparse ladder operators.

Integrating the transformed Wigner function over the three undetected
quadratures must reproduce the closed-form outcome density; the Fock
QFI must upper-bound every classical Fisher information. Both checks
run in test suites, not in the CLI fast path (they are orders of
magnitude slower than the closed forms).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, NumericalFailure
from .model import InputState, ModelParams


@dataclass(frozen=True)
class PhaseSpacePoint:
    """Real quadratures of the two modes: alpha = x_a + i p_a, beta = x_b + i p_b."""

    x_a: float
    p_a: float
    x_b: float
    p_b: float


@dataclass(frozen=True)
class FockState:
    """Truncated two-mode Fock amplitudes (cutoff+1 per mode), unit norm.

    ``tail`` is the probability weight lost to truncation before
    renormalization.
    """

    amplitudes: np.ndarray
    cutoff: int
    tail: float


def wigner_input(params: ModelParams, point: PhaseSpacePoint):
    """Input Wigner function: displaced vacuum times squeezed Gaussian.

    Normalized to 1 over the four quadratures; peaks at
    (x_a, p_a, x_b, p_b) = (alpha0, 0, 0, 0).
    """
    mu, nu = params.mu_tilde, params.nu_tilde
    coherent = (2.0 / np.pi) * np.exp(
        -2.0 * ((point.x_a - params.alpha0) ** 2 + point.p_a**2)
    )
    squeezed = (2.0 * np.sqrt(mu * nu) / np.pi) * np.exp(
        -2.0 * (mu * point.x_b**2 + nu * point.p_b**2)
    )
    return coherent * squeezed


def output_transform(point: PhaseSpacePoint, theta: float) -> PhaseSpacePoint:
    """Phase-space argument map of the interferometer at phase theta.

    With u = (e^{i theta} - 1)/2 and v = (e^{i theta} + 1)/2 the mode
    variables map as (alpha, beta) -> (u alpha + v beta, -v alpha - u beta),
    a unitary map: |alpha|^2 + |beta|^2 is preserved. At theta = 0 it
    reduces to the pure mode swap (beta, -alpha).
    """
    phase = complex(math.cos(theta), math.sin(theta))
    u = (phase - 1.0) / 2.0
    v = (phase + 1.0) / 2.0
    alpha = point.x_a + 1j * point.p_a
    beta = point.x_b + 1j * point.p_b
    alpha_out = u * alpha + v * beta
    beta_out = -v * alpha - u * beta
    return PhaseSpacePoint(alpha_out.real, alpha_out.imag, beta_out.real, beta_out.imag)


def _transform_matrix(theta: float) -> np.ndarray:
    """output_transform as a real 4x4 matrix on (x_a, p_a, x_b, p_b)."""
    basis = np.eye(4)
    columns = []
    for col in basis:
        out = output_transform(PhaseSpacePoint(*col), theta)
        columns.append([out.x_a, out.p_a, out.x_b, out.p_b])
    return np.array(columns).T


def marginal_pdf_numeric(
    params: ModelParams,
    theta: float,
    p: float,
    *,
    nodes: int = 64,
    span: float = 12.0,
) -> float:
    """Outcome density at quadrature p by integrating the output Wigner function.

    The output Wigner function (the input one at transformed
    arguments) is integrated over the three undetected quadratures
    with a tensor Gauss-Legendre rule. The integration box is centered
    on the conditional mean of the integrand's own Gaussian geometry
    and spans ``span`` conditional standard deviations per axis, so
    the only closed-form knowledge used is the linear transform
    itself.

    Raises NumericalFailure when the box cannot be conditioned
    (degenerate covariance), which does not occur for valid params.
    """
    transform = _transform_matrix(theta)
    # precision of exp(-(Rv - c)^T A (Rv - c)) in the integration variables v
    weights = np.diag([2.0, 2.0, 2.0 * params.mu_tilde, 2.0 * params.nu_tilde])
    precision = 2.0 * transform.T @ weights @ transform
    try:
        covariance = np.linalg.inv(precision)
        center = np.linalg.solve(transform, np.array([params.alpha0, 0.0, 0.0, 0.0]))
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"integration box conditioning failed: {exc}") from exc

    keep = [0, 2, 3]  # x_a, x_b, p_b; index 1 (p_a) is fixed at p
    sigma_kk = covariance[np.ix_(keep, keep)]
    sigma_kp = covariance[keep, 1]
    sigma_pp = covariance[1, 1]
    cond_mean = center[keep] + sigma_kp / sigma_pp * (p - center[1])
    cond_cov = sigma_kk - np.outer(sigma_kp, sigma_kp) / sigma_pp
    cond_sd = np.sqrt(np.diag(cond_cov))

    x, w = np.polynomial.legendre.leggauss(nodes)
    axes = [cond_mean[i] + span * cond_sd[i] * x for i in range(3)]
    wts = [span * cond_sd[i] * w for i in range(3)]
    xa, xb, pb = np.meshgrid(axes[0], axes[1], axes[2], indexing="ij", sparse=True)
    pa = p
    out = [
        transform[i, 0] * xa + transform[i, 1] * pa + transform[i, 2] * xb + transform[i, 3] * pb
        for i in range(4)
    ]
    values = wigner_input(params, PhaseSpacePoint(out[0], out[1], out[2], out[3]))
    return float(np.einsum("ijk,i,j,k->", values, wts[0], wts[1], wts[2]))


def _coherent_amplitudes(alpha0: float, cutoff: int) -> np.ndarray:
    if alpha0 == 0.0:
        vec = np.zeros(cutoff + 1)
        vec[0] = 1.0
        return vec
    n = np.arange(cutoff + 1)
    log_c = -0.5 * alpha0**2 + n * math.log(alpha0) - 0.5 * np.array(
        [math.lgamma(k + 1.0) for k in n]
    )
    return np.exp(log_c)


def _squeezed_amplitudes(r: float, cutoff: int) -> np.ndarray:
    """Squeezed vacuum with squeeze phase pi: real positive even amplitudes."""
    vec = np.zeros(cutoff + 1)
    vec[0] = 1.0 / math.sqrt(math.cosh(r))
    t = math.tanh(r)
    for m in range(1, cutoff // 2 + 1):
        vec[2 * m] = vec[2 * m - 2] * t * math.sqrt((2.0 * m - 1.0) / (2.0 * m))
    return vec


def suggested_cutoff(state: InputState) -> int:
    """Truncation at which the QFI itself has converged below 1e-8.

    The squeezed-mode requirement is stiffer than mere state-norm
    convergence because the generator variance weights high photon
    numbers quadratically.
    """
    coherent = state.alpha0**2 + 10.0 * state.alpha0 + 20.0
    squeezed = 10.0 + 60.0 * state.r + 25.0 * state.r**2
    return int(math.ceil(max(coherent, squeezed)))


def build_fock_state(state: InputState, cutoff: int, *, max_tail: float = 1e-8) -> FockState:
    """Truncated product state (coherent) x (squeezed vacuum), renormalized.

    Only pure squeezed inputs are supported (purity = 1). Refuses with
    a cutoff hint when the truncation tail exceeds ``max_tail``.
    """
    if state.purity != 1.0:
        raise ConfigError("Fock-space oracle handles pure inputs only (purity = 1)")
    if cutoff < 2:
        raise ConfigError(f"cutoff must be >= 2, got {cutoff}")
    coherent = _coherent_amplitudes(state.alpha0, cutoff)
    squeezed = _squeezed_amplitudes(state.r, cutoff)
    tail = 1.0 - float(coherent @ coherent) * float(squeezed @ squeezed)
    if tail > max_tail:
        raise ConfigError(
            f"truncation tail {tail:.3e} exceeds {max_tail:.1e} at cutoff {cutoff}; "
            f"try cutoff >= {suggested_cutoff(state)}"
        )
    psi = np.kron(coherent, squeezed)
    psi /= np.linalg.norm(psi)
    return FockState(psi, cutoff, tail)


def qfi_fock(state: InputState, cutoff: int | None = None) -> float:
    """Quantum Fisher information 4 Var(G) of the pure input state.

    G = J_x - n/2 generates the phase shift inside the interferometer
    after absorbing the splitters; its variance upper-bounds every
    classical Fisher information of any measurement at the output.
    Evaluated by sparse ladder-operator action on a truncated two-mode
    Fock vector.
    """
    if cutoff is None:
        cutoff = suggested_cutoff(state)
    fock = build_fock_state(state, cutoff)
    dim = cutoff + 1
    n = np.arange(dim, dtype=float)
    raising = sp.diags(np.sqrt(n[1:]), -1)
    lowering = raising.T
    number = sp.diags(n)
    identity = sp.identity(dim)
    j_x = 0.5 * (sp.kron(raising, lowering) + sp.kron(lowering, raising))
    n_total = sp.kron(number, identity) + sp.kron(identity, number)
    generator = (j_x - 0.5 * n_total).tocsr()
    g_psi = generator @ fock.amplitudes
    mean_g = float(fock.amplitudes @ g_psi)
    mean_g2 = float(g_psi @ g_psi)
    return 4.0 * (mean_g2 - mean_g**2)
