"""
Atom-molecule scattering near Efimov resonances.

Everything here is expressed through the log-periodic phase
``x = s0 ln(a0/a*)``, the inelasticity ``eta*`` and the universal constants
``(s0, alpha, beta, theta0)`` of :mod:`efimov.radial`.  The complex
atom-molecule scattering length is

    a+/a0 = alpha + beta cot(x + i eta*),

and in the s-wave, weak-absorption limit the cross sections in units of
``4 pi a0^2`` are

    sigma_e = (alpha^2 + beta^2) [sin^2(x + theta0) + sinh^2 eta*] / [sin^2 x + sinh^2 eta*]
    sigma_r = beta sinh(2 eta*) / (2 k a0 [sin^2 x + sinh^2 eta*])

Functions accept scalars or numpy arrays for ``a0_over_astar``.  Any object
exposing ``s0``, ``alpha``, ``beta`` and ``theta0`` (normally a
:class:`~efimov.radial.UniversalParams`) can stand in for ``up``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from .errors import DomainError, NumericalError, PoleError

POLE_TOL = 1e-12
# beyond this |Im z| the complex cotangent is evaluated in scaled form
_COT_SCALED = 20.0


@dataclass(frozen=True)
class EfimovParams:
    """Resonance position ``a_star`` and width parameter ``eta_star``."""

    a_star: float
    eta_star: float

    def __post_init__(self):
        if not self.a_star > 0:
            raise DomainError(f"a_star must be positive, got {self.a_star!r}")
        if not self.eta_star >= 0:
            raise DomainError(f"eta_star must be non-negative, got {self.eta_star!r}")


@dataclass(frozen=True)
class ThreeBodyParam:
    """Complex three-body parameter Lambda0 (inverse length)."""

    lambda0: complex


@dataclass(frozen=True)
class CrossSectionPoint:
    a0_over_astar: float
    x: float
    sigma_e: float
    sigma_r: float
    a_plus: complex
    pole: bool = False


@dataclass(frozen=True)
class ConsistencyReport:
    n_points: int
    max_rel_dev_elastic: float
    max_rel_dev_inelastic: float

    @property
    def max_rel_dev(self) -> float:
        return max(self.max_rel_dev_elastic, self.max_rel_dev_inelastic)

    @property
    def ok(self) -> bool:
        return self.max_rel_dev < 1e-10


def phase(up, a0_over_astar):
    """Log-periodic phase ``s0 ln(a0/a*)``."""
    ratio = np.asarray(a0_over_astar, dtype=float)
    if np.any(ratio <= 0):
        raise DomainError("a0/a* must be positive")
    return up.s0 * np.log(ratio)


def _check_eta(eta_star):
    if not eta_star >= 0:
        raise DomainError(f"eta_star must be non-negative, got {eta_star!r}")


def _check_pole(x, eta_star):
    if eta_star == 0 and np.any(np.abs(np.sin(x)) < POLE_TOL):
        raise PoleError("lossless resonance: a+ diverges at sin(s0 ln(a0/a*)) = 0")


def complex_cot(x, y):
    """``cot(x + i y)`` for real ``x, y``, overflow-free for large ``|y|``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        denom = 2.0 * (np.sin(x) ** 2 + np.sinh(y) ** 2)
        direct = (np.sin(2 * x) - 1j * np.sinh(2 * y)) / denom
        sech = 1.0 / np.cosh(2 * y)
        scaled = (np.sin(2 * x) * sech - 1j * np.tanh(2 * y)) / (1.0 - np.cos(2 * x) * sech)
    out = np.where(np.abs(y) > _COT_SCALED, scaled, direct)
    return out[()] if out.ndim == 0 else out


def a_plus_over_a0(up, a0_over_astar, eta_star: float):
    """Complex atom-molecule scattering length in units of a0.

    ``Im`` is non-positive for ``eta_star > 0``.  Raises :class:`PoleError`
    at a lossless resonance.
    """
    _check_eta(eta_star)
    x = phase(up, a0_over_astar)
    _check_pole(x, eta_star)
    return up.alpha + up.beta * complex_cot(x, eta_star)


def efimov_to_lambda0(ep: EfimovParams, up) -> ThreeBodyParam:
    shift = -math.atan(up.beta2 / up.beta1)
    return ThreeBodyParam(cmath.exp(complex(shift, ep.eta_star) / up.s0) / ep.a_star)


def lambda0_to_efimov(tb: ThreeBodyParam, up) -> EfimovParams:
    """Inverse of :func:`efimov_to_lambda0` on the principal branch.

    Uses ``Im(s0 ln(Lambda0 a*)) = eta*``, so Lambda0 must lie in the
    closed upper half plane with ``arg Lambda0 < pi``.
    """
    lam = complex(tb.lambda0)
    if lam == 0:
        raise DomainError("Lambda0 must be non-zero")
    arg = cmath.phase(lam)
    if arg < 0 or arg >= math.pi:
        raise DomainError(f"arg(Lambda0) = {arg} outside [0, pi): eta* would be negative")
    shift = -math.atan(up.beta2 / up.beta1)
    a_star = math.exp(shift / up.s0) / abs(lam)
    return EfimovParams(a_star=a_star, eta_star=up.s0 * arg)


def amplitude(a_plus: complex, ka0: float) -> complex:
    """s-wave amplitude ``-2 / (1/a+ + i k)`` in units of a0."""
    if ka0 < 0:
        raise DomainError(f"ka0 must be non-negative, got {ka0!r}")
    if a_plus == 0:
        return 0j
    return -2.0 / (1.0 / a_plus + 1j * ka0)


def combine_amplitudes(f_plus: Callable, f_minus: Callable, theta: float):
    """Amplitudes ``(fA, fB)`` for identical bosonic heavy atoms."""
    if not 0 <= theta <= math.pi:
        raise DomainError(f"theta must lie in [0, pi], got {theta!r}")
    even = f_plus(theta) + f_plus(math.pi - theta)
    odd = f_minus(theta) - f_minus(math.pi - theta)
    return even + odd, even - odd


def elastic_integral(f_a: Callable, f_b: Callable) -> float:
    """``(pi/4) int_0^pi (|fA|^2 + |fB|^2) sin(theta) dtheta``."""

    def integrand(theta):
        return (abs(f_a(theta)) ** 2 + abs(f_b(theta)) ** 2) * math.sin(theta)

    value, err = quad(integrand, 0.0, math.pi, epsabs=0.0, epsrel=1e-10, limit=200)
    if err > 1e-8 * max(abs(value), 1e-300):
        raise NumericalError(f"elastic quadrature did not converge (err={err:.3e})")
    return 0.25 * math.pi * value


def sigma_elastic(up, a0_over_astar, eta_star: float):
    """Elastic cross section in units of ``4 pi a0^2``."""
    _check_eta(eta_star)
    x = phase(up, a0_over_astar)
    _check_pole(x, eta_star)
    sx2 = np.sin(x) ** 2
    with np.errstate(over="ignore"):
        sh2 = np.sinh(eta_star) ** 2
    # 1 + (num - den)/den keeps the eta* -> infinity limit finite
    ratio = 1.0 + (np.sin(x + up.theta0) ** 2 - sx2) / (sx2 + sh2)
    return (up.alpha**2 + up.beta**2) * ratio


def sigma_inelastic(up, a0_over_astar, eta_star: float, ka0: float):
    """Inelastic cross section in units of ``4 pi a0^2``, weak-absorption limit."""
    _check_eta(eta_star)
    if not ka0 > 0:
        raise DomainError(f"ka0 must be positive, got {ka0!r}")
    x = phase(up, a0_over_astar)
    _check_pole(x, eta_star)
    sx2 = np.sin(x) ** 2
    if eta_star < 1.0:
        shape = np.sinh(2 * eta_star) / (sx2 + np.sinh(eta_star) ** 2)
    else:
        with np.errstate(over="ignore"):
            shape = 2.0 / math.tanh(eta_star) / (1.0 + sx2 / np.sinh(eta_star) ** 2)
    return up.beta * shape / (2.0 * ka0)


def inelastic_validity(up, a0_over_astar, eta_star: float, ka0: float) -> float:
    """``k |Im a+|``; the limit formulas need this to be small (< 0.1)."""
    return float(np.max(ka0 * np.abs(np.imag(a_plus_over_a0(up, a0_over_astar, eta_star)))))


def _rel_dev(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(np.abs(a), np.abs(b))
    with np.errstate(invalid="ignore", divide="ignore"):
        dev = np.where(scale > 0, np.abs(a - b) / scale, 0.0)
    return float(np.max(dev))


def consistency_check(up, a0_over_astar, eta_star: float, ka0: float) -> ConsistencyReport:
    """Compare the closed forms with ``|a+|^2`` and ``|Im a+|/(k a0)``."""
    a_plus = a_plus_over_a0(up, a0_over_astar, eta_star)
    from_complex_e = np.abs(a_plus) ** 2
    from_complex_r = np.abs(np.imag(a_plus)) / ka0
    closed_e = sigma_elastic(up, a0_over_astar, eta_star)
    closed_r = sigma_inelastic(up, a0_over_astar, eta_star, ka0)
    return ConsistencyReport(
        n_points=int(np.size(a_plus)),
        max_rel_dev_elastic=_rel_dev(from_complex_e, closed_e),
        max_rel_dev_inelastic=_rel_dev(from_complex_r, closed_r),
    )


def resonance_positions(up, n_range: Iterable[int]) -> List[float]:
    """Values of a0/a* where the losses peak, ``exp(pi n / s0)``, ascending."""
    return sorted(math.exp(math.pi * n / up.s0) for n in n_range)


def refine_maximum(fn: Callable[[float], float], lo: float, hi: float, xatol: float = 1e-12):
    """Bounded Brent maximization of ``fn`` on ``[lo, hi]``; returns ``(x, fn(x))``."""
    res = minimize_scalar(lambda t: -fn(t), bounds=(lo, hi), method="bounded",
                          options={"xatol": xatol, "maxiter": 500})
    if not res.success:
        raise NumericalError(f"maximizer did not converge: {res.message}")
    return float(res.x), float(-res.fun)


def locate_maxima(fn: Callable[[float], float], grid: Sequence[float]):
    """Interior local maxima of ``fn`` sampled on ``grid``, each refined by Brent.

    Returns a list of ``(x, fn(x))`` in grid order.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.array([fn(t) for t in grid])
    peaks = []
    for i in range(1, len(grid) - 1):
        if values[i] >= values[i - 1] and values[i] > values[i + 1]:
            peaks.append(refine_maximum(fn, grid[i - 1], grid[i + 1]))
    return peaks


def _period_maximum(fn: Callable[[float], float], n: int = 2048):
    # fn is pi-periodic in x; sample one period and refine around the best sample
    grid = np.linspace(-0.5 * math.pi, 0.5 * math.pi, n, endpoint=False)
    values = np.array([fn(t) for t in grid])
    k = int(np.argmax(values))
    h = grid[1] - grid[0]
    return refine_maximum(fn, grid[k] - h, grid[k] + h)


def peak_ratio(up, ka0: float, eta_star: float) -> float:
    """Ratio of elastic to inelastic maxima over one period of x.

    The two maxima are found independently, at fixed ``ka0``.  For small
    ``ka0`` and ``eta_star`` the result approaches ``beta * ka0 / eta_star``.
    """
    if not eta_star > 0:
        raise DomainError("eta_star must be positive for a finite peak ratio")

    def at_phase(f):
        return lambda x: float(f(math.exp(x / up.s0)))

    _, e_max = _period_maximum(at_phase(lambda r: sigma_elastic(up, r, eta_star)))
    _, r_max = _period_maximum(at_phase(lambda r: sigma_inelastic(up, r, eta_star, ka0)))
    return e_max / r_max


def scan(up, a0_over_astar: Iterable[float], eta_star: float, ka0: float) -> List[CrossSectionPoint]:
    """Cross sections on a grid of a0/a*, sorted ascending.

    Lossless resonances are returned with ``pole=True`` and NaN values
    instead of raising.
    """
    _check_eta(eta_star)
    if not ka0 > 0:
        raise DomainError(f"ka0 must be positive, got {ka0!r}")
    rows = []
    for ratio in sorted(float(r) for r in a0_over_astar):
        x = float(phase(up, ratio))
        try:
            a_plus = complex(a_plus_over_a0(up, ratio, eta_star))
            se = float(sigma_elastic(up, ratio, eta_star))
            sr = float(sigma_inelastic(up, ratio, eta_star, ka0))
            pole = False
        except PoleError:
            a_plus = complex(math.nan, math.nan)
            se = sr = math.nan
            pole = True
        rows.append(CrossSectionPoint(ratio, x, se, sr, a_plus, pole))
    return rows
