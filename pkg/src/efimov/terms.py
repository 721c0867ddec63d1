"""
Two-center zero-range problem for a light atom bound to two heavy atoms.

With the heavy atoms a distance ``R`` apart and lengths measured in units of
the light-heavy scattering length ``a0``, the bound levels of the light atom
are fixed by the transcendental conditions

    +exp(-G) = G - rho        (symmetric term, all rho > 0)
    -exp(-G) = G - rho        (antisymmetric term, rho >= 1)

with ``rho = R/a0`` and ``G = rho * kappa * a0``.  Both are solved for the
offset ``d = |G - rho|`` rather than ``G`` itself so that the detuning from
the free-molecule level, ``G**2/rho**2 - 1``, keeps full relative precision
at large ``rho`` where it decays like ``exp(-rho)``.

The symmetric term defines the effective potential of the heavy-heavy
radial equation at zero collision energy,

    V(rho) = -(M/2m) * (G**2/rho**2 - 1),

which tends to ``-(s0**2 + 1/4)/rho**2`` at small ``rho``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Union

import numpy as np

from .errors import DomainError, NoBoundStateError, SingularityError, SubThresholdError

ROOT_TOL = 1e-14
_MAX_ITER = 200


class Branch(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class MassRatio:
    """Heavy-to-light mass ratio M/m."""

    value: float

    def __post_init__(self):
        if not (self.value > 0 and math.isfinite(self.value)):
            raise DomainError(f"mass ratio must be positive and finite, got {self.value!r}")

    def __float__(self):
        return float(self.value)


MassRatioLike = Union[MassRatio, float]


def _as_ratio(mr: MassRatioLike) -> float:
    return float(mr.value if isinstance(mr, MassRatio) else MassRatio(float(mr)).value)


@dataclass(frozen=True)
class TermPoint:
    """One sample of a molecular term.

    ``energy`` is in units of the free-molecule binding energy |eps0|, ``v``
    is the dimensionless radial potential.  For the antisymmetric branch ``v``
    is the repulsive analog and is only meant for plotting.
    """

    branch: Branch
    rho: float
    g: float
    kappa_a0: float
    energy: float
    v: float


def solve_increasing(
    h: Callable[[float], float],
    dh: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = ROOT_TOL,
) -> float:
    """Root of an increasing function on ``[lo, hi]`` by safeguarded Newton.

    Requires ``h(lo) <= 0 <= h(hi)``.  A Newton step is taken from the
    current iterate whenever it lands strictly inside the bracket; otherwise
    the bracket is bisected.  The bracket shrinks every iteration, so the
    method cannot diverge.
    """
    h_lo, h_hi = h(lo), h(hi)
    if h_lo > 0 or h_hi < 0:
        raise DomainError(f"root not bracketed on [{lo}, {hi}]: h={h_lo}, {h_hi}")
    if h_lo == 0:
        return lo
    if h_hi == 0:
        return hi

    x = 0.5 * (lo + hi)
    for _ in range(_MAX_ITER):
        hx = h(x)
        if hx == 0:
            return x
        if hx < 0:
            lo = x
        else:
            hi = x
        slope = dh(x)
        x_new = x - hx / slope if slope > 0 else lo - 1.0
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= tol or hi - lo <= tol:
            return x_new
        x = x_new
    return x


@lru_cache(maxsize=None)
def omega_constant() -> float:
    """Solution of ``exp(-w) = w``, i.e. G at vanishing separation (0.567143...)."""
    return solve_increasing(
        lambda w: w - math.exp(-w),
        lambda w: 1.0 + math.exp(-w),
        0.5,
        0.6,
    )


def s0_threshold() -> float:
    """Smallest mass ratio with a real channel exponent, 1/(2 Omega^2)."""
    return 0.5 / omega_constant() ** 2


def plus_offset(rho: float) -> float:
    """``G - rho`` for the symmetric term, in ``(0, 1]``."""
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho!r}")
    if math.isinf(rho):
        return 0.0
    return solve_increasing(
        lambda d: d - math.exp(-rho - d),
        lambda d: 1.0 + math.exp(-rho - d),
        0.0,
        1.0,
    )


def minus_offset(rho: float) -> float:
    """``rho - G`` for the antisymmetric term, in ``(0, 1]``."""
    if not rho >= 1:
        raise NoBoundStateError(f"antisymmetric level exists only for rho >= 1, got {rho!r}")
    if rho == 1:
        return 1.0
    if math.isinf(rho):
        return 0.0
    return solve_increasing(
        lambda d: d - math.exp(d - rho),
        lambda d: 1.0 - math.exp(d - rho),
        0.0,
        min(1.0, rho),
    )


def g_plus(rho: float) -> float:
    return rho + plus_offset(rho)


def g_minus(rho: float) -> float:
    if rho == 1:
        return 0.0
    return max(rho - minus_offset(rho), 0.0)


def branch_residual(branch: Branch, rho: float, g: float) -> float:
    """Residual of the defining equation, ``sign*exp(-G) - (G - rho)``."""
    sign = 1.0 if branch is Branch.PLUS else -1.0
    return sign * math.exp(-g) - (g - rho)


def scaled_potential(rho: float, mr: MassRatioLike) -> float:
    """``rho**2 * V(rho)`` on the symmetric term; bounded as rho -> 0."""
    d = plus_offset(rho)
    return -0.5 * _as_ratio(mr) * d * (2.0 * rho + d)


def potential(rho: float, mr: MassRatioLike) -> float:
    """Effective radial potential V(rho) of the symmetric term."""
    d = plus_offset(rho)
    return -0.5 * _as_ratio(mr) * d * (2.0 * rho + d) / (rho * rho)


def term_point(branch: Branch, rho: float, mr: MassRatioLike) -> TermPoint:
    ratio = _as_ratio(mr)
    if branch is Branch.PLUS:
        d = plus_offset(rho)
        g = rho + d
        detuning = d * (2.0 * rho + d) / (rho * rho)
    else:
        d = minus_offset(rho)
        g = g_minus(rho)
        detuning = -d * (2.0 * rho - d) / (rho * rho)
    kappa_a0 = g / rho
    return TermPoint(
        branch=branch,
        rho=rho,
        g=g,
        kappa_a0=kappa_a0,
        energy=0.0 - kappa_a0**2,
        v=-0.5 * ratio * detuning,
    )


def s0(mr: MassRatioLike) -> float:
    """Channel exponent ``sqrt(Omega^2 M/2m - 1/4)``.

    Raises
    ------
    SubThresholdError
        If ``M/m <= 1/(2 Omega^2)`` (about 1.5546).
    """
    ratio = _as_ratio(mr)
    radicand = omega_constant() ** 2 * ratio / 2.0 - 0.25
    if radicand <= 0:
        raise SubThresholdError(
            f"mass ratio {ratio} is at or below the threshold "
            f"1/(2 Omega^2) = {s0_threshold():.6f}; s0 is not real"
        )
    return math.sqrt(radicand)


def _orbital(kappa: float, r: np.ndarray) -> np.ndarray:
    return math.sqrt(kappa / (2.0 * math.pi)) * np.exp(-kappa * r) / r


def chi_eval(branch: Branch, r, rho: float):
    """Light-atom wavefunction of the two-center problem.

    Parameters
    ----------
    branch : Branch
        Symmetric (PLUS) or antisymmetric (MINUS) level.
    r : array_like, shape (..., 3)
        Position(s) of the light atom relative to the midpoint of the heavy
        pair, in units of a0.  The heavy atoms sit at ``(0, 0, +-rho/2)``.
    rho : float
        Heavy-heavy separation in units of a0.

    Returns
    -------
    float or ndarray
        Wavefunction in units of a0**(-3/2), normalized to one.
    """
    if branch is Branch.PLUS:
        g = g_plus(rho)
        sign = 1.0
    else:
        if not rho > 1:
            raise NoBoundStateError(f"antisymmetric level is not normalizable at rho={rho!r}")
        g = g_minus(rho)
        sign = -1.0
    kappa = g / rho

    pts = np.asarray(r, dtype=float)
    if pts.shape[-1] != 3:
        raise DomainError("r must have a trailing dimension of length 3")
    half = np.array([0.0, 0.0, 0.5 * rho])
    r1 = np.linalg.norm(pts - half, axis=-1)
    r2 = np.linalg.norm(pts + half, axis=-1)
    if np.any(r1 == 0) or np.any(r2 == 0):
        raise SingularityError("wavefunction is singular at the well centers")

    norm = math.sqrt(0.5 / (1.0 + sign * math.exp(-g)))
    out = norm * (_orbital(kappa, r1) + sign * _orbital(kappa, r2))
    return out[()] if out.ndim == 0 else out
