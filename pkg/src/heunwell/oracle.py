"""Numerov shooting solver for the (6, 4) well, independent of the Heun route.

Works in z = x/d, where the equation reads psi'' = -k^2(z) psi with
k^2(z) = eps d^2 + U0 d^2 sinh^4 z / cosh^6 z.  Bound states are found by
marching inward from a decayed tail and enforcing parity at z = 0.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numba
import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, InvalidInputError
from .model import PotentialSpec, potential_value
from .spectrum import Parity
from .wavefn import NODE_FLOOR, WaveSample, count_nodes, make_sample

log = logging.getLogger(__name__)

DEFAULT_STEP = 1e-4
DEFAULT_TOL = 1e-10
_RESCALE_ABOVE = 1e150


@numba.njit(cache=True)
def _march(k2, h, psi0, psi1, out):
    # phi = (1 + g) psi with g = h^2 k^2 / 12 obeys
    # phi_{i+1} = 2 phi_i - phi_{i-1} - 12 g_i psi_i; never forming 1 + g
    # in the difference keeps the full precision of small h^2 k^2
    n = k2.shape[0]
    g = (h * h / 12.0) * k2
    out[0] = psi0
    out[1] = psi1
    phi_prev = (1.0 + g[0]) * psi0
    phi = (1.0 + g[1]) * psi1
    log_scale = 0.0
    for i in range(1, n - 1):
        phi_next = 2.0 * phi - phi_prev - 12.0 * g[i] * out[i]
        out[i + 1] = phi_next / (1.0 + g[i + 1])
        phi_prev, phi = phi, phi_next
        if abs(out[i + 1]) > _RESCALE_ABOVE:
            for j in range(i + 2):
                out[j] /= _RESCALE_ABOVE
            phi_prev /= _RESCALE_ABOVE
            phi /= _RESCALE_ABOVE
            log_scale += math.log(_RESCALE_ABOVE)
    return log_scale


def k_squared(u0: float, d: float, eps: float, z):
    z = np.asarray(z, dtype=float)
    if u0 == 0:
        return np.full_like(z, eps * d * d)
    return d * d * (eps - potential_value(PotentialSpec(u0, d), z * d))


@dataclass(frozen=True)
class NumerovTrace:
    """Marched solution; the true psi is ``psi * exp(log_scale)``."""

    z: np.ndarray
    psi: np.ndarray
    log_scale: float


def numerov_integrate(u0: float, d: float, eps: float, z_start: float, z_end: float,
                      step: float, psi0: float, psi1: float) -> NumerovTrace:
    """March psi from z_start to z_end with signed ``step``.

    psi0, psi1 are the values at z_start and z_start + step.  When |psi|
    passes 1e150 the whole trace is scaled down and the factor is folded
    into ``log_scale``.  ``u0 = 0`` gives the free equation (k^2 = eps d^2).
    """
    if step == 0 or not d > 0 or u0 < 0:
        raise InvalidInputError("need step != 0, d > 0, u0 >= 0")
    n_float = (z_end - z_start) / step
    n = int(round(n_float))
    if n < 2 or abs(n - n_float) > 1e-6 * max(1.0, abs(n_float)):
        raise InvalidInputError(f"(z_end - z_start)/step must be an integer >= 2, got {n_float}")
    z = z_start + step * np.arange(n + 1)
    out = np.empty(n + 1)
    log_scale = _march(k_squared(u0, d, eps, z), float(abs(step)), float(psi0), float(psi1), out)
    return NumerovTrace(z, out, log_scale)


def default_z_max(eps: float, d: float) -> float:
    return 8.0 + 4.0 / math.sqrt(-eps * d * d)


def _inward(u0, d, eps, z_max, step):
    """March from z_max down to 0 with a decaying seed; returns (z, psi, g) ascending in z."""
    n = max(int(math.ceil(z_max / step)), 2)
    kappa = math.sqrt(-eps) * d
    tr = numerov_integrate(u0, d, eps, n * step, 0.0, -step, 1.0, math.exp(kappa * step))
    z, p = tr.z[::-1], tr.psi[::-1]
    g = (step * step / 12.0) * k_squared(u0, d, eps, z[:2])
    return z, p, g


def _defect(u0, d, eps, parity, z_max, step):
    z, p, g = _inward(u0, d, eps, z_max, step)
    scale = np.max(np.abs(p))
    if parity is Parity.ANTISYMMETRIC:
        return p[0] / scale
    # Numerov at z = 0 with psi(-h) = psi(h); reduces to a central psi'(0)
    return (2.0 * (p[1] - p[0]) + 2.0 * g[1] * p[1] + 10.0 * g[0] * p[0]) / (2.0 * step * scale)


@dataclass(frozen=True)
class ShootingResult:
    eps: float
    mismatch: float
    wave: WaveSample
    n_nodes: int
    parity: Parity


def _assemble(u0, d, eps, parity, z_max, step):
    z, p, _ = _inward(u0, d, eps, z_max, step)
    sign = 1.0 if parity is Parity.SYMMETRIC else -1.0
    if parity is Parity.ANTISYMMETRIC:
        p = p.copy()
        p[0] = 0.0  # odd by construction; the leftover defect is dropped
    x = d * np.concatenate([-z[:0:-1], z])
    values = np.concatenate([sign * p[:0:-1], p])
    values = values / np.max(np.abs(values))
    return make_sample(x, values)


def shoot_eigenvalue(u0: float, d: float, eps_lo: float, eps_hi: float, parity,
                     z_max: float | None = None, step: float = DEFAULT_STEP,
                     tol: float = DEFAULT_TOL) -> ShootingResult:
    """Converge the single eigenvalue of the given parity inside [eps_lo, eps_hi].

    The matching defect is psi'(0) for symmetric and psi(0) for
    antisymmetric states; it must change sign across the bracket.
    """
    parity = Parity.parse(parity)
    if not eps_lo < eps_hi < 0:
        raise InvalidInputError(f"need eps_lo < eps_hi < 0, got [{eps_lo}, {eps_hi}]")
    z_max = default_z_max(eps_hi, d) if z_max is None else z_max
    g = lambda e: _defect(u0, d, e, parity, z_max, step)  # noqa: E731
    g_lo, g_hi = g(eps_lo), g(eps_hi)
    if g_lo == 0:
        eps = eps_lo
    elif g_hi == 0:
        eps = eps_hi
    elif np.sign(g_lo) == np.sign(g_hi):
        raise BracketError(f"matching defect has no sign change on [{eps_lo}, {eps_hi}] ({parity.name.lower()})")
    else:
        eps = brentq(g, eps_lo, eps_hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500)
    mismatch = g(eps)
    wave = _assemble(u0, d, eps, parity, z_max, step)
    # the leftover defect pollutes psi near x = 0, where deep states are tiny
    nodes = count_nodes(wave, floor=max(NODE_FLOOR, 10.0 * abs(mismatch)))
    return ShootingResult(eps, mismatch, replace(wave, nodes=nodes), nodes, parity)


def spectrum_scan(u0: float, d: float, eps_min: float, n_brackets: int = 200,
                  eps_max: float | None = None, step: float = DEFAULT_STEP,
                  tol: float = DEFAULT_TOL) -> list:
    """All bound states with eps in [eps_min, eps_max], both parities, ascending in eps.

    ``eps_max`` defaults to 1e-3*eps_min; the tail start z_max is fixed
    from it for the whole scan so the defect is continuous in eps.
    """
    if not eps_min < 0:
        raise InvalidInputError(f"eps_min must be negative, got {eps_min}")
    eps_max = 1e-3 * eps_min if eps_max is None else eps_max
    if not eps_min < eps_max < 0:
        raise InvalidInputError(f"need eps_min < eps_max < 0, got [{eps_min}, {eps_max}]")
    z_max = default_z_max(eps_max, d)
    grid = np.linspace(eps_min, eps_max, n_brackets + 1)
    found = []
    for parity in Parity:
        g = np.array([_defect(u0, d, e, parity, z_max, step) for e in grid])
        for i in range(n_brackets):
            if g[i + 1] == 0 or g[i] * g[i + 1] < 0:
                found.append(shoot_eigenvalue(u0, d, grid[i], grid[i + 1], parity, z_max, step, tol))
    found.sort(key=lambda r: r.eps)
    nodes = [r.n_nodes for r in found]
    if nodes and nodes != list(range(nodes[0], nodes[0] + len(nodes))):
        log.warning("node counts %s are not consecutive; eps grid may be too coarse", nodes)
    return found
