"""Bound states of the hyperbolic double well V(x) = -V0 sinh^4(x/d)/cosh^6(x/d).

Polynomial (quasi-exact) eigenstates come from confluent Heun series that
terminate at special potential strengths; a Numerov shooting solver
provides an independent check and the non-polynomial states.
"""
from .errors import HeunWellError
from .heun import (
    HeunParams,
    SeriesCoefficients,
    evaluate,
    params_antisymmetric,
    params_symmetric,
    recurrence_coeffs,
    series_coefficients,
)
from .model import FamilyClass, PotentialSpec, classify_family, potential_value, to_dimensionless
from .spectrum import (
    EigenState,
    Parity,
    build_state,
    delta_determinant,
    eigenvalue,
    first_condition_residual,
    q_shift,
    special_strengths,
)
from .wavefn import WaveSample, count_nodes, normalize, psi, sample, schrodinger_residual
from .oracle import ShootingResult, numerov_integrate, shoot_eigenvalue, spectrum_scan

__version__ = "0.1.0"
