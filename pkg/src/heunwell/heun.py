"""Confluent Heun machinery for the (6, 4) double well.

The ODE handled here is

    y'' + (alpha + (beta + 1)/xi + (gamma + 1)/(xi - 1)) y'
        + (mu/xi + nu/(xi - 1)) y = 0,

with the Frobenius solution about xi = 0 normalised to y(0) = 1.  The
series coefficients obey A_n v_n = B_n v_{n-1} + C_n v_{n-2}, written in
the (delta, eta) parameterisation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DivergenceRiskError,
    IndicialDegeneracyError,
    InvalidIndexError,
    InvalidInputError,
    NoConvergenceError,
    UnboundStateError,
)

TERMINATION_TOL = 1e-8
EVAL_MARGIN = 1e-3
_RESCALE_ABOVE = 1e100
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class HeunParams:
    alpha: float
    beta: float
    gamma: float
    delta: float
    eta: float
    mu: float
    nu: float

    @classmethod
    def from_delta_eta(cls, alpha, beta, gamma, delta, eta):
        """Build from (alpha, beta, gamma, delta, eta), solving for (mu, nu)."""
        mu = 0.5 * alpha * (beta + 1.0) - 0.5 * (beta + gamma + beta * gamma) - eta
        nu = delta + 0.5 * alpha * (beta + gamma + 2.0) - mu
        return cls(alpha, beta, gamma, delta, eta, mu, nu)

    @classmethod
    def from_mu_nu(cls, alpha, beta, gamma, mu, nu):
        """Build from (alpha, beta, gamma, mu, nu), solving for (delta, eta)."""
        delta = mu + nu - 0.5 * alpha * (beta + gamma + 2.0)
        eta = 0.5 * alpha * (beta + 1.0) - mu - 0.5 * (beta + gamma + beta * gamma)
        return cls(alpha, beta, gamma, delta, eta, mu, nu)


def _check_physical(u0, d, eps):
    if not u0 > 0:
        raise InvalidInputError(f"u0 must be positive, got {u0}")
    if not d > 0:
        raise InvalidInputError(f"d must be positive, got {d}")
    if not eps < 0:
        raise UnboundStateError(f"bound states need eps < 0, got {eps}")


def params_symmetric(u0: float, d: float, eps: float) -> HeunParams:
    """Heun parameters of the even solution in xi = 1/cosh^2(x/d).

    beta takes the branch d*sqrt(-eps) > 0 so that xi^(beta/2) decays in
    the tails; alpha = -d*sqrt(u0) matches the e^(alpha xi/2) prefactor.
    """
    _check_physical(u0, d, eps)
    alpha = -d * math.sqrt(u0)
    beta = d * math.sqrt(-eps)
    gamma = -0.5
    mu = 0.25 * (alpha * (alpha + 2.0) + 2.0 * alpha * beta - beta * (beta + 1.0))
    nu = 0.25 * (alpha + beta * (beta + 1.0))
    delta = 0.25 * u0 * d * d
    eta = 0.25 * (1.0 - (eps + u0) * d * d)
    return HeunParams(alpha, beta, gamma, delta, eta, mu, nu)


def params_antisymmetric(u0: float, d: float, eps: float) -> HeunParams:
    """Heun parameters of the odd solution, a series in zeta^2 = tanh^2(x/d).

    The odd solution uses the mapped set (-alpha, -gamma, beta, -delta,
    eta + alpha^2/4) of the symmetric parameters; mu and nu are recovered
    from the two linear identities tying them to delta and eta.
    """
    s = params_symmetric(u0, d, eps)
    return HeunParams.from_delta_eta(-s.alpha, -s.gamma, s.beta, -s.delta,
                                     s.eta + 0.25 * s.alpha**2)


def recurrence_coeffs(params: HeunParams, n: int):
    """Return (A_n, B_n, C_n) for n >= 1."""
    if n < 1:
        raise InvalidIndexError(f"recurrence index must be >= 1, got {n}")
    a, b, g = params.alpha, params.beta, params.gamma
    A = 1.0 + b / n
    B = (1.0 + (b + g - a - 1.0) / n
         + (params.eta - 0.5 * (b + g - a) - 0.5 * a * b + 0.5 * b * g) / n**2)
    # cleared form, finite at alpha = 0
    C = (params.delta + a * (0.5 * (b + g) + n - 1.0)) / n**2
    return A, B, C


def _log2_abs(m, e):
    return -math.inf if m == 0.0 else math.log2(abs(m)) + e


@dataclass(frozen=True)
class SeriesCoefficients:
    """Coefficients v_0..v_nmax stored as mantissa * 2**exponent.

    The exponent only becomes nonzero when the recurrence grows past 1e100;
    ``values`` gives plain floats (inf where they truly overflow).
    """

    mantissas: np.ndarray
    exponents: np.ndarray
    terminated_at: Optional[int] = None

    @property
    def values(self) -> np.ndarray:
        return np.ldexp(self.mantissas, self.exponents)

    @property
    def n_max(self) -> int:
        return len(self.mantissas) - 1

    def __len__(self):
        return len(self.mantissas)

    def polynomial(self) -> np.ndarray:
        """Coefficients v_0..v_N of the terminated polynomial."""
        if self.terminated_at is None:
            raise ValueError("series did not terminate")
        return self.values[: self.terminated_at + 1].copy()


def _generate(params, n_max):
    """Run the recurrence, yielding (n, mantissa, exponent) for n = 0..n_max."""
    prev, cur, shift = 0.0, 1.0, 0
    yield 0, cur, shift
    for n in range(1, n_max + 1):
        A, B, C = recurrence_coeffs(params, n)
        if A == 0.0:
            raise IndicialDegeneracyError(n)
        prev, cur = cur, (B * cur + C * prev) / A
        if abs(cur) > _RESCALE_ABOVE:
            k = math.frexp(cur)[1]
            prev, cur = math.ldexp(prev, -k), math.ldexp(cur, -k)
            shift += k
        yield n, cur, shift


def _find_termination(log2_mags, tol=TERMINATION_TOL):
    log2_tol = math.log2(tol)
    running_max = 0.0  # log2 of max(1, |v_0|, ..., |v_N|)
    for N in range(len(log2_mags) - 2):
        running_max = max(running_max, log2_mags[N])
        floor = log2_tol + running_max
        if log2_mags[N + 1] <= floor and log2_mags[N + 2] <= floor:
            return N
    return None


def series_coefficients(params: HeunParams, n_max: int, tol: float = TERMINATION_TOL) -> SeriesCoefficients:
    """Coefficients of the Frobenius series up to degree ``n_max``.

    ``terminated_at`` is the smallest N with |v_{N+1}| and |v_{N+2}| both
    below ``tol * max(1, max_{k<=N} |v_k|)``; it needs n_max >= N + 2 to be seen.
    """
    if n_max < 0:
        raise InvalidIndexError(f"n_max must be >= 0, got {n_max}")
    mant = np.empty(n_max + 1)
    expo = np.empty(n_max + 1, dtype=int)
    for n, m, e in _generate(params, n_max):
        mant[n], expo[n] = m, e
    mags = [_log2_abs(m, e) for m, e in zip(mant, expo)]
    mant.flags.writeable = False
    expo.flags.writeable = False
    return SeriesCoefficients(mant, expo, _find_termination(mags, tol))


def evaluate(params: HeunParams, xi: float, tol: float = 1e-14, n_cap: int = 20000) -> float:
    """Sum the confluent Heun series at ``xi``.

    A terminated series is summed exactly as a polynomial.  Otherwise the
    sum stops once |v_n xi^n| + |v_{n+1} xi^{n+1}| < tol*|S| holds for two
    consecutive n; points within 1e-3 of the xi = 1 singularity are refused.
    """
    if xi < 0:
        raise InvalidInputError(f"xi must be >= 0, got {xi}")
    if xi == 0:
        return 1.0
    if xi > 1.0 - EVAL_MARGIN:
        coeffs = series_coefficients(params, min(n_cap, 512))
        if coeffs.terminated_at is None:
            raise DivergenceRiskError(
                f"xi={xi} is outside the safe disc |xi| <= {1 - EVAL_MARGIN} and the series does not terminate")
        return float(np.polynomial.polynomial.polyval(xi, coeffs.polynomial()))

    log_xi = math.log(xi)
    log2_tol = math.log2(TERMINATION_TOL)
    terms = []
    log2_mags = []
    running_max = 0.0
    total = 0.0
    hits = 0
    ratio = math.inf
    for n, m, e in _generate(params, n_cap):
        terms.append(0.0 if m == 0.0 else m * math.exp(e * _LN2 + n * log_xi))
        log2_mags.append(_log2_abs(m, e))
        total += terms[-1]
        if n >= 2:
            running_max = max(running_max, log2_mags[n - 2])
            floor = log2_tol + running_max
            if log2_mags[n - 1] <= floor and log2_mags[n] <= floor:
                # polynomial of degree n - 2; drop the numerically-zero tail
                return math.fsum(terms[: n - 1])
            tail = abs(terms[n - 1]) + abs(terms[n])
            ratio = tail / abs(total) if total else math.inf
            hits = hits + 1 if ratio < tol else 0
            if hits >= 2:
                return math.fsum(terms)
    raise NoConvergenceError(n_cap, ratio)
