"""Position-space wavefunctions of the polynomial eigenstates."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import simpson

from .errors import DegenerateSampleError, InvalidInputError
from .model import PotentialSpec, potential_value
from .spectrum import EigenState, Parity

NODE_FLOOR = 1e-10


@dataclass(frozen=True)
class WaveSample:
    grid: np.ndarray
    values: np.ndarray
    norm: float  # Simpson integral of values**2 over grid
    nodes: int


def _polyval(coeffs, t):
    return np.polynomial.polynomial.polyval(t, coeffs)


def psi_symmetric(state: EigenState, x):
    """xi^(beta/2) exp(alpha xi/2) P(xi) with xi = 1/cosh^2(x/d)."""
    if state.parity is not Parity.SYMMETRIC:
        raise InvalidInputError("psi_symmetric needs a symmetric state")
    p = state.params
    z = np.abs(np.asarray(x, dtype=float)) / state.d
    # ln xi = -2 ln cosh z, written to stay finite for large |z|
    log_xi = -2.0 * (z + np.log1p(np.exp(-2.0 * z)) - np.log(2.0))
    xi = np.exp(log_xi)
    out = np.exp(0.5 * p.beta * log_xi + 0.5 * p.alpha * xi) * _polyval(state.polynomial, xi)
    return out if out.ndim else float(out)


def psi_antisymmetric(state: EigenState, x):
    """zeta (1 - zeta^2)^(beta/2) exp(-alpha zeta^2/2) P(zeta^2), zeta = tanh(x/d).

    Here alpha and beta are the symmetric-set values, which map to -alpha'
    and gamma' of the stored (odd) parameter set.
    """
    if state.parity is not Parity.ANTISYMMETRIC:
        raise InvalidInputError("psi_antisymmetric needs an antisymmetric state")
    p = state.params
    alpha, beta = -p.alpha, p.gamma
    z = np.asarray(x, dtype=float) / state.d
    zeta = np.tanh(z)
    az = np.abs(z)
    # 1 - tanh^2 = sech^2, evaluated in logs as for xi above
    log_sech2 = -2.0 * (az + np.log1p(np.exp(-2.0 * az)) - np.log(2.0))
    zeta2 = zeta * zeta
    out = zeta * np.exp(0.5 * beta * log_sech2 - 0.5 * alpha * zeta2) * _polyval(state.polynomial, zeta2)
    return out if out.ndim else float(out)


def psi(state: EigenState, x):
    if state.parity is Parity.SYMMETRIC:
        return psi_symmetric(state, x)
    return psi_antisymmetric(state, x)


def count_nodes(sample, floor: float = NODE_FLOOR) -> int:
    """Strict sign changes among samples with |psi| above floor*max|psi|.

    Near-zero samples are skipped, so a shallow positive dip is not a node
    while the exact zero of an odd state at x = 0 is (its neighbours have
    opposite signs).
    """
    values = np.asarray(sample.values if isinstance(sample, WaveSample) else sample, dtype=float)
    peak = np.max(np.abs(values)) if values.size else 0.0
    if peak == 0.0:
        return 0
    signs = np.sign(values[np.abs(values) > floor * peak])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _simpson_norm(grid, values):
    return float(simpson(values * values, x=grid))


def make_sample(grid, values) -> WaveSample:
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    return WaveSample(grid, values, _simpson_norm(grid, values), count_nodes(values))


def sample(state: EigenState, x_max: float, n_points: int) -> WaveSample:
    """Unnormalised samples on a uniform grid over [-x_max, x_max]."""
    if not x_max > 0:
        raise InvalidInputError(f"x_max must be positive, got {x_max}")
    if n_points < 3 or n_points % 2 == 0:
        raise InvalidInputError(f"n_points must be odd and >= 3, got {n_points}")
    half = np.linspace(0.0, x_max, n_points // 2 + 1)
    grid = np.concatenate([-half[:0:-1], half])  # mirror-exact about 0
    return make_sample(grid, psi(state, grid))


def normalize(wave: WaveSample) -> WaveSample:
    """Scale to unit Simpson norm; the first nonzero value from the left is made positive."""
    nonzero = np.flatnonzero(wave.values)
    if nonzero.size == 0:
        raise DegenerateSampleError("cannot normalise an all-zero sample")
    norm = _simpson_norm(wave.grid, wave.values)
    scale = np.sign(wave.values[nonzero[0]]) / np.sqrt(norm)
    values = wave.values * scale
    return replace(wave, values=values, norm=_simpson_norm(wave.grid, values))


def schrodinger_residual(state: EigenState, x: float, h: float | None = None) -> float:
    """psi'' + (eps + U0 sinh^4(x/d)/cosh^6(x/d)) psi via a central difference."""
    h = 1e-4 * state.d if h is None else h
    p0 = psi(state, x)
    second = (psi(state, x - h) - 2.0 * p0 + psi(state, x + h)) / (h * h)
    k2 = state.eps - potential_value(PotentialSpec(state.u0, state.d), x)
    return float(second + k2 * p0)
