"""Hyperbolic potential family V(x) = -V0 sinh^p(x/d) / cosh^q(x/d).

Everything downstream works in dimensionless units where 2m/hbar^2 is
absorbed, so the potential strength is U0 = 2 m V0 / hbar^2 and energies
are eps = 2 m E / hbar^2 (both inverse length squared).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InvalidFamilyError, InvalidInputError

FAMILIES = (-2, 0, 2, 4, 6)


class FamilyClass(str, enum.Enum):
    HYPERGEOMETRIC = "hypergeometric-reducible"
    HEUN_FIRST_CONDITION_FAILS = "heun-nonterminating-first-condition"
    HEUN_SECOND_CONDITION_FAILS = "heun-nonterminating-second-condition"
    HEUN_POLYNOMIAL = "heun-polynomial-capable"


def _check_family(q, p):
    if isinstance(q, bool) or isinstance(p, bool) or int(q) != q or int(p) != p:
        raise InvalidFamilyError(f"(q, p) must be integers, got ({q!r}, {p!r})")
    q, p = int(q), int(p)
    if q not in FAMILIES:
        raise InvalidFamilyError(f"q must be one of {FAMILIES}, got {q}")
    if p % 2 or not -2 <= p <= q:
        raise InvalidFamilyError(f"p must be even with -2 <= p <= q={q}, got {p}")
    return q, p


@dataclass(frozen=True)
class PotentialSpec:
    """Physical parameters (U0, d) plus family indices (q, p).

    Defaults to the (6, 4) hyperbolic double well.
    """

    u0: float
    d: float = 1.0
    q: int = 6
    p: int = 4

    def __post_init__(self):
        if not self.u0 > 0:
            raise InvalidInputError(f"u0 must be positive, got {self.u0}")
        if not self.d > 0:
            raise InvalidInputError(f"d must be positive, got {self.d}")
        _check_family(self.q, self.p)


def potential_value(spec: PotentialSpec, x):
    """Return -U0 sinh^p(x/d)/cosh^q(x/d); accepts scalars or arrays."""
    z = np.asarray(x, dtype=float) / spec.d
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        # sinh^p / cosh^q = tanh^p / cosh^(q-p); avoids inf/inf at large |z|
        v = -spec.u0 * np.tanh(z) ** spec.p / np.cosh(z) ** (spec.q - spec.p)
    return v if v.ndim else float(v)


def potential_minimum(spec: PotentialSpec, x_max: float | None = None, n_grid: int = 2001):
    """Locate the minimum of V on x >= 0 (grid scan, then golden-section).

    Returns ``(x_min, v_min)``.
    """
    x_max = 10.0 * spec.d if x_max is None else x_max
    x = np.linspace(0.0, x_max, n_grid)
    v = potential_value(spec, x)
    v = np.where(np.isfinite(v), v, np.inf)
    i = int(np.argmin(v))
    lo, hi = x[max(i - 1, 0)], x[min(i + 1, n_grid - 1)]
    if i in (0, n_grid - 1):
        return float(x[i]), float(v[i])
    res = minimize_scalar(lambda t: potential_value(spec, t), bracket=(lo, x[i], hi),
                          method="golden", tol=1e-12)
    return float(res.x), float(res.fun)


def classify_family(q: int, p: int) -> FamilyClass:
    """Solvability class of the (q, p) member.

    The q in {-2, 0, 2} families reduce to hypergeometric equations. For
    q = 4 the Heun parameter alpha vanishes while mu + nu does not, so the
    first termination condition can never hold. For q = 6 only p = 4
    satisfies the second condition as well.
    """
    q, p = _check_family(q, p)
    if q in (-2, 0, 2):
        return FamilyClass.HYPERGEOMETRIC
    if q == 4:
        return FamilyClass.HEUN_FIRST_CONDITION_FAILS
    if p == 4:
        return FamilyClass.HEUN_POLYNOMIAL
    return FamilyClass.HEUN_SECOND_CONDITION_FAILS


def all_families():
    """Yield every admissible (q, p) pair in ascending order."""
    for q in FAMILIES:
        for p in range(-2, q + 1, 2):
            yield q, p


def to_dimensionless(mass: float, energy: float, v0: float, hbar: float = 1.0):
    """Convert (m, E, V0, hbar) to ``(eps, u0)`` = (2mE/hbar^2, 2mV0/hbar^2)."""
    for name, val in (("mass", mass), ("v0", v0), ("hbar", hbar)):
        if not val > 0:
            raise InvalidInputError(f"{name} must be positive, got {val}")
    scale = 2.0 * mass / hbar**2
    return scale * energy, scale * v0
