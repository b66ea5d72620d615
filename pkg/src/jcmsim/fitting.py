"""Power-law fits of the fidelity decay.

Fidelity series are fitted as straight lines in log-log coordinates,
ln(1-F) = a + b*ln(t/T), over a configurable window of t/T.  Ordinary
(unweighted) least squares is the default; weighting each point by its
fidelity standard error is available behind a flag.  Points where Monte
Carlo fluctuation pushed F to or above 1 have no logarithm and are dropped,
not clamped, and the drop count is reported.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FitResult:
    """Least-squares line in log-log coordinates."""

    a: float            # intercept
    b: float            # slope
    stderr_a: float
    stderr_b: float
    window_lo: float    # in t/T
    window_hi: float
    n_points: int
    n_excluded: int
    rms_residual: float


def _wls_line(x: np.ndarray, y: np.ndarray, w: np.ndarray):
    """Weighted least-squares line fit with parameter standard errors."""
    sw = w.sum()
    xbar = (w * x).sum() / sw
    ybar = (w * y).sum() / sw
    dx = x - xbar
    sxx = (w * dx * dx).sum()
    if sxx <= 0.0:
        raise ValueError("degenerate abscissa: all points at one t/T")
    b = (w * dx * (y - ybar)).sum() / sxx
    a = ybar - b * xbar
    resid = y - (a + b * x)
    n = x.size
    dof = max(n - 2, 1)
    s2 = (w * resid**2).sum() / dof
    stderr_b = np.sqrt(s2 / sxx)
    stderr_a = np.sqrt(s2 * (1.0 / sw + xbar**2 / sxx))
    rms = float(np.sqrt(np.mean(resid**2)))
    return a, b, stderr_a, stderr_b, rms


def loglog_fit(
    t_over_T: np.ndarray,
    F: np.ndarray,
    window: tuple[float, float],
    stderr_F: np.ndarray | None = None,
    weighted: bool = False,
) -> FitResult:
    """Fit ln(1-F) against ln(t/T) on window_lo <= t/T <= window_hi.

    With ``weighted=True`` points are weighted by 1/sigma^2 where sigma is
    the standard error of ln(1-F) propagated from ``stderr_F``.
    """
    lo, hi = float(window[0]), float(window[1])
    if not 0.0 < lo < hi:
        raise ValueError(f"window must satisfy 0 < lo < hi (got {window})")
    t = np.asarray(t_over_T, dtype=float)
    f = np.asarray(F, dtype=float)
    sel = (t >= lo) & (t <= hi)
    one_minus = 1.0 - f[sel]
    usable = one_minus > 0.0
    n_excluded = int(sel.sum() - usable.sum())
    x = np.log(t[sel][usable])
    y = np.log(one_minus[usable])
    if x.size < 2:
        raise ValueError(
            f"need at least 2 usable points in the window (got {x.size}, "
            f"{n_excluded} excluded with 1-F <= 0)"
        )
    if weighted:
        if stderr_F is None:
            raise ValueError("weighted fit requires stderr_F")
        sig = np.asarray(stderr_F, dtype=float)[sel][usable] / one_minus[usable]
        if np.any(sig <= 0.0):
            raise ValueError("weighted fit requires positive stderr_F everywhere")
        w = 1.0 / sig**2
    else:
        w = np.ones_like(x)
    a, b, sa, sb, rms = _wls_line(x, y, w)
    return FitResult(float(a), float(b), float(sa), float(sb),
                     lo, hi, int(x.size), n_excluded, rms)


def intercept_shift(fit1: FitResult, fit2: FitResult,
                    slope_tol: float = 0.1) -> tuple[float, float]:
    """a2 - a1 between two fits on the same window, with combined error.

    The shift is only meaningful when both lines share the window and have
    compatible slopes, so mismatches raise.
    """
    if (abs(fit1.window_lo - fit2.window_lo) > 1e-12
            or abs(fit1.window_hi - fit2.window_hi) > 1e-12):
        raise ValueError(
            f"incompatible windows: [{fit1.window_lo}, {fit1.window_hi}] vs "
            f"[{fit2.window_lo}, {fit2.window_hi}]"
        )
    if abs(fit1.b - fit2.b) > slope_tol:
        raise ValueError(
            f"slopes differ by {abs(fit1.b - fit2.b):.3f} > {slope_tol}; "
            "intercept shift is not meaningful"
        )
    shift = fit2.a - fit1.a
    err = float(np.hypot(fit1.stderr_a, fit2.stderr_a))
    return float(shift), err
