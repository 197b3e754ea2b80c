"""Closed-form spectra and special potential strengths of the (6, 4) well.

A Heun series truncates to a degree-N polynomial when two conditions hold
together:

* first condition, mu + nu + N*alpha = 0.  It fixes eps as a function of
  U0*d^2 (see :func:`eigenvalue`);
* second condition, the (N+1)x(N+1) tridiagonal determinant vanishes.  It
  picks out a discrete set of U0 for each d (see :func:`special_strengths`).
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import InvalidInputError, NoBoundStateError, TerminationNotAchievedError
from .heun import (
    HeunParams,
    SeriesCoefficients,
    params_antisymmetric,
    params_symmetric,
    series_coefficients,
)

log = logging.getLogger(__name__)

_DET_RESCALE_ABOVE = 1e50


class Parity(str, enum.Enum):
    SYMMETRIC = "s"
    ANTISYMMETRIC = "a"

    @classmethod
    def parse(cls, value) -> "Parity":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        if key in ("s", "sym", "symmetric", "even"):
            return cls.SYMMETRIC
        if key in ("a", "anti", "antisymmetric", "odd"):
            return cls.ANTISYMMETRIC
        raise InvalidInputError(f"unknown parity {value!r}")


def threshold_offset(n_index: int, parity) -> int:
    """d*sqrt(U0) must exceed this for the degree-N state to be bound."""
    if n_index < 0:
        raise InvalidInputError(f"N must be >= 0, got {n_index}")
    return 3 + 4 * n_index if Parity.parse(parity) is Parity.SYMMETRIC else 5 + 4 * n_index


def eigenvalue(n_index: int, parity, u0: float, d: float) -> float:
    """Closed-form energy eps = -(c + 4N - d*sqrt(U0))^2 / (4 d^2).

    c is 3 for symmetric and 5 for antisymmetric states.
    """
    if not (u0 > 0 and d > 0):
        raise InvalidInputError(f"u0 and d must be positive, got u0={u0}, d={d}")
    offset = threshold_offset(n_index, parity)
    s = d * math.sqrt(u0)
    if not s > offset:
        raise NoBoundStateError(
            f"N={n_index} {Parity.parse(parity).name.lower()} state needs d*sqrt(U0) > {offset}, got {s:.6g}")
    return -((offset - s) ** 2) / (4.0 * d * d)


def state_params(n_index: int, parity, u0: float, d: float) -> HeunParams:
    """Parity-appropriate Heun parameters with eps fixed by the first condition."""
    eps = eigenvalue(n_index, parity, u0, d)
    if Parity.parse(parity) is Parity.SYMMETRIC:
        return params_symmetric(u0, d, eps)
    return params_antisymmetric(u0, d, eps)


def first_condition_residual(params: HeunParams, n_index: int) -> float:
    """mu + nu + N*alpha; zero when C_{N+2} vanishes."""
    return params.mu + params.nu + n_index * params.alpha


def first_condition_residual_delta_form(params: HeunParams, n_index: int) -> float:
    """The same condition as delta/alpha + (beta + gamma)/2 + N + 1.

    Equals ``first_condition_residual / alpha``; undefined for alpha = 0.
    """
    return params.delta / params.alpha + 0.5 * (params.beta + params.gamma) + n_index + 1


def q_shift(n: int, params: HeunParams) -> float:
    return (n - 1) * (n + params.beta + params.gamma)


def tridiagonal_bands(params: HeunParams, n_index: int):
    """Diagonal, super- and sub-diagonal of the (N+1)x(N+1) termination matrix."""
    size = n_index + 1
    rows = np.arange(1, size + 1)
    diag = np.array([params.mu - q_shift(n, params) + (n - 1) * params.alpha for n in rows])
    upper = np.array([n * (n + params.beta) for n in rows[:-1]])
    lower = np.array([(size - n) * params.alpha for n in rows[:-1]])
    return diag, upper, lower


def _determinant_scaled(params, n_index):
    diag, upper, lower = tridiagonal_bands(params, n_index)
    d_prev, d_cur, exp10 = 1.0, diag[0], 0
    for k in range(1, len(diag)):
        d_prev, d_cur = d_cur, diag[k] * d_cur - upper[k - 1] * lower[k - 1] * d_prev
        if abs(d_cur) > _DET_RESCALE_ABOVE:
            d_prev /= _DET_RESCALE_ABOVE
            d_cur /= _DET_RESCALE_ABOVE
            exp10 += 50
    return d_cur, exp10


def delta_determinant(params: HeunParams, n_index: int) -> float:
    """Determinant of the second termination condition.

    Evaluated through the leading-principal-minor recurrence
    D_k = a_k D_{k-1} - b_{k-1} c_{k-1} D_{k-2}; intermediate minors are
    rescaled past 1e50 so the sign survives even when the value itself
    would overflow (then +-inf is returned).
    """
    if n_index < 0:
        raise InvalidInputError(f"N must be >= 0, got {n_index}")
    mant, exp10 = _determinant_scaled(params, n_index)
    if exp10 == 0:
        return float(mant)
    with np.errstate(over="ignore"):
        return float(mant * np.float64(10.0) ** exp10)


def _det_sign(n_index, parity, d, u0):
    mant, _ = _determinant_scaled(state_params(n_index, parity, u0, d), n_index)
    return np.sign(mant)


def _brackets(n_index, parity, d, s_lo, s_hi, step):
    n = max(int(math.ceil((s_hi - s_lo) / step)), 1)
    s = np.linspace(s_lo, s_hi, n + 1)
    s[0] = s_lo * (1.0 + 1e-12)  # beta = 0 exactly at the threshold
    signs = np.array([_det_sign(n_index, parity, d, (si / d) ** 2) for si in s])
    out = []
    for i in range(n):
        if signs[i] == 0:
            out.append((s[i], s[i]))
        elif signs[i] * signs[i + 1] < 0:
            out.append((s[i], s[i + 1]))
    if signs[-1] == 0:
        out.append((s[-1], s[-1]))
    return out


def special_strengths(n_index: int, parity, d: float = 1.0, u0_max: float = 5000.0,
                      grid_step: float = 0.05, tol: float = 1e-10) -> list:
    """All U0 in (threshold, u0_max] where the degree-N series terminates.

    beta is eliminated through the first condition, so only the
    determinant remains as a function of U0.  Sign changes are bracketed
    on a uniform grid in sqrt(U0) (``grid_step`` in units of 1/d) and
    refined by bisection to |dU0| <= tol.  A second scan at half the step
    catches pairs of roots hiding in a single cell.
    """
    parity = Parity.parse(parity)
    if not d > 0 or not grid_step > 0 or not tol > 0:
        raise InvalidInputError("d, grid_step and tol must be positive")
    offset = threshold_offset(n_index, parity)
    s_lo, s_hi = float(offset), d * math.sqrt(u0_max)
    if not s_hi > s_lo:
        raise InvalidInputError(f"u0_max={u0_max} is below the binding threshold {(offset / d) ** 2:.6g}")

    coarse = _brackets(n_index, parity, d, s_lo, s_hi, grid_step * d)
    fine = _brackets(n_index, parity, d, s_lo, s_hi, 0.5 * grid_step * d)
    if len(fine) > len(coarse):
        log.warning("N=%d %s: half-step scan found %d roots vs %d; grid_step %.3g is too coarse",
                    n_index, parity.name.lower(), len(fine), len(coarse), grid_step)
    brackets = fine if len(fine) >= len(coarse) else coarse

    f = lambda u0: _det_sign(n_index, parity, d, u0)  # noqa: E731
    roots = []
    for a, b in brackets:
        u_a, u_b = (a / d) ** 2, (b / d) ** 2
        if u_a == u_b:
            roots.append(u_a)
            continue
        roots.append(bisect(f, u_a, u_b, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=400))
    roots.sort()
    merged = []
    for r in roots:
        if merged and r - merged[-1] < 10 * tol:
            continue
        merged.append(r)
    if len(merged) > n_index + 1:
        log.warning("N=%d %s: found %d roots, more than N+1", n_index, parity.name.lower(), len(merged))
    return merged


@dataclass(frozen=True)
class EigenState:
    n_index: int
    parity: Parity
    u0: float
    d: float
    eps: float
    params: HeunParams
    coefficients: SeriesCoefficients

    @property
    def polynomial(self) -> np.ndarray:
        """v_0..v_N in ascending powers of xi (symmetric) or zeta^2 (antisymmetric)."""
        return self.coefficients.polynomial()


def build_state(n_index: int, parity, u0: float, d: float = 1.0) -> EigenState:
    """Assemble the polynomial eigenstate at a special U0.

    Raises TerminationNotAchievedError when the series does not cut off at
    degree N, i.e. when u0 is not actually a special strength.
    """
    parity = Parity.parse(parity)
    eps = eigenvalue(n_index, parity, u0, d)
    params = state_params(n_index, parity, u0, d)
    coeffs = series_coefficients(params, n_index + 2)
    if coeffs.terminated_at != n_index:
        v = coeffs.values
        raise TerminationNotAchievedError(
            f"series does not terminate at N={n_index} for U0={u0!r}, d={d!r}: "
            f"|v_{n_index + 1}|={abs(v[n_index + 1]):.3e}, |v_{n_index + 2}|={abs(v[n_index + 2]):.3e} "
            f"(max |v_k|, k<=N: {np.max(np.abs(v[: n_index + 1])):.3e})")
    return EigenState(n_index, parity, u0, d, eps, params, coeffs)


def nearest_special_strength(n_index: int, parity, u0: float, d: float = 1.0, window: float = 0.05):
    """Snap a rounded U0 (as printed to two decimals) onto the exact root within ``window``."""
    offset = threshold_offset(n_index, parity)
    u0_max = u0 + window
    if d * math.sqrt(u0_max) <= offset:
        return None
    roots = special_strengths(n_index, parity, d, u0_max=u0_max)
    close = [r for r in roots if abs(r - u0) <= window]
    return min(close, key=lambda r: abs(r - u0)) if close else None
