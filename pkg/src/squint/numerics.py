"""Small deterministic 1-D solvers used by the fringe and estimator code.

Nothing here is adaptive or clever: every caller first localizes the
feature of interest on a dense grid, then hands a single bracket to
bisection (roots) or golden-section search (extrema). That keeps the
solvers trivially robust and the results reproducible bit-for-bit.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import NumericalFailure

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    xtol: float,
    f_lo: float | None = None,
    max_iter: int = 200,
) -> float:
    """Find a root of f in [lo, hi] by bisection.

    f(lo) and f(hi) must have opposite signs (zero counts as either).
    Converges to absolute tolerance ``xtol`` on the abscissa.
    """
    if f_lo is None:
        f_lo = f(lo)
    f_hi = f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise NumericalFailure(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol:
            return mid
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_section_min(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    xtol: float,
    max_iter: int = 300,
) -> float:
    """Locate the minimizer of a unimodal f on [lo, hi] to ``xtol``."""
    c = hi - _INV_GOLDEN * (hi - lo)
    d = lo + _INV_GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_GOLDEN * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def golden_section_max(
    f: Callable[[float], float], lo: float, hi: float, *, xtol: float
) -> float:
    return golden_section_min(lambda x: -f(x), lo, hi, xtol=xtol)


def sign_change_brackets(grid: Sequence[float], values: Sequence[float]) -> list[tuple[int, int]]:
    """Indices (i, i+1) of consecutive grid cells whose values straddle zero."""
    v = np.asarray(values, dtype=float)
    sign = np.sign(v)
    idx = np.where(sign[:-1] * sign[1:] < 0.0)[0]
    exact = np.where(sign == 0.0)[0]
    pairs = [(int(i), int(i) + 1) for i in idx]
    for i in exact:
        j = int(i)
        pairs.append((max(j - 1, 0), min(j + 1, len(v) - 1)))
    return sorted(set(pairs))


def refine_grid_minimum(
    f: Callable[[float], float],
    grid: np.ndarray,
    values: np.ndarray,
    *,
    xtol: float,
) -> tuple[float, float]:
    """Polish the grid argmin of f with golden-section search.

    Returns (argmin, minimum). Grid-edge minima are returned unrefined.
    """
    i = int(np.argmin(values))
    if i == 0 or i == len(grid) - 1:
        return float(grid[i]), float(values[i])
    x = golden_section_min(f, float(grid[i - 1]), float(grid[i + 1]), xtol=xtol)
    return x, f(x)
