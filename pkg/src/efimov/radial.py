"""
Zero-energy radial equation ``u'' = V(rho) u`` and its universal coefficients.

Two canonical solutions are seeded at small ``rho`` with the inverse-square
forms

    u1 = sqrt(rho) cos(s0 ln rho),    u2 = sqrt(rho) sin(s0 ln rho),

propagated outward, and matched at large ``rho`` to the free asymptotes
``u_i = alpha_i + beta_i rho``.  The combinations

    alpha = -(alpha1 beta1 + alpha2 beta2) / (beta1^2 + beta2^2)
    beta  =  (alpha1 beta2 - alpha2 beta1) / (beta1^2 + beta2^2)

depend on the mass ratio only and parametrize the log-periodic
atom-molecule scattering length.

Integration runs in ``t = ln rho`` on the state ``(u, rho du/drho)``, for
which the equation reads

    du/dt = p,    dp/dt = p + rho^2 V(rho) u.

``rho^2 V`` stays bounded at the origin, so equal steps in ``t`` resolve the
log-periodic oscillation there and the adaptive controller opens the step up
in the exponentially quiet tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from . import terms
from .errors import DomainError, StiffnessError, TailNotConvergedError
from .terms import MassRatioLike

TAIL_TOL = 1e-12


@dataclass(frozen=True)
class RadialNumerics:
    rho_min: float = 1e-4
    rho_max: float = 40.0
    rel_tol: float = 1e-10

    def __post_init__(self):
        if not 0 < self.rho_min < 1 < self.rho_max:
            raise DomainError(
                f"need 0 < rho_min < 1 < rho_max, got ({self.rho_min}, {self.rho_max})"
            )
        if not 0 < self.rel_tol <= 1e-6:
            raise DomainError(f"rel_tol must lie in (0, 1e-6], got {self.rel_tol}")


@dataclass(frozen=True)
class SolutionState:
    """Values and rho-derivatives of the two canonical solutions at ``rho``."""

    rho: float
    u1: float
    du1: float
    u2: float
    du2: float

    @property
    def wronskian(self) -> float:
        return self.u1 * self.du2 - self.u2 * self.du1


@dataclass(frozen=True)
class Trajectory:
    """Accepted integration steps; arrays share the leading axis."""

    rho: np.ndarray
    u1: np.ndarray
    du1: np.ndarray
    u2: np.ndarray
    du2: np.ndarray

    @property
    def wronskian(self) -> np.ndarray:
        return self.u1 * self.du2 - self.u2 * self.du1

    @property
    def end(self) -> SolutionState:
        return SolutionState(
            float(self.rho[-1]),
            float(self.u1[-1]),
            float(self.du1[-1]),
            float(self.u2[-1]),
            float(self.du2[-1]),
        )


@dataclass(frozen=True)
class Diagnostics:
    numerics: RadialNumerics
    n_steps: int
    wronskian_max_rel_err: float
    asymptotic_wronskian: float
    # max relative change of (alpha, beta, theta0) under rho_min/2 and rho_max+10
    refinement_rel_change: Optional[float] = None


@dataclass(frozen=True)
class UniversalParams:
    mass_ratio: float
    s0: float
    alpha1: float
    beta1: float
    alpha2: float
    beta2: float
    alpha: float
    beta: float
    theta0: float
    diagnostics: Optional[Diagnostics] = field(default=None, compare=False)


def seed_pair(rho_min: float, s0: float) -> SolutionState:
    """Canonical inverse-square solutions and their derivatives at ``rho_min``."""
    phase = s0 * math.log(rho_min)
    c, s = math.cos(phase), math.sin(phase)
    root = math.sqrt(rho_min)
    return SolutionState(
        rho=rho_min,
        u1=root * c,
        du1=(0.5 * c - s0 * s) / root,
        u2=root * s,
        du2=(0.5 * s + s0 * c) / root,
    )


def propagate(
    mr: MassRatioLike,
    rho_min: float,
    rho_max: float,
    rel_tol: float = 1e-10,
    potential: Optional[Callable[[float], float]] = None,
) -> Trajectory:
    """Integrate both canonical solutions from ``rho_min`` to ``rho_max``.

    ``potential`` overrides V(rho) (it must return V, not rho^2 V); the
    seeds still use the s0 of ``mr``.
    """
    s0 = terms.s0(mr)
    if not 0 < rho_min < rho_max:
        raise DomainError(f"need 0 < rho_min < rho_max, got ({rho_min}, {rho_max})")

    if potential is None:
        def rho2v(rho):
            return terms.scaled_potential(rho, mr)
    else:
        def rho2v(rho):
            return rho * rho * potential(rho)

    def rhs(t, y):
        w = rho2v(math.exp(t))
        return [y[1], y[1] + w * y[0], y[3], y[3] + w * y[2]]

    seed = seed_pair(rho_min, s0)
    y0 = [seed.u1, rho_min * seed.du1, seed.u2, rho_min * seed.du2]
    sol = solve_ivp(
        rhs,
        (math.log(rho_min), math.log(rho_max)),
        y0,
        method="DOP853",
        rtol=rel_tol,
        atol=rel_tol * 1e-3 * math.sqrt(rho_min),
    )
    if sol.status != 0:
        raise StiffnessError(f"radial integration failed: {sol.message}")

    rho = np.exp(sol.t)
    rho[0], rho[-1] = rho_min, rho_max
    u1, p1, u2, p2 = sol.y
    return Trajectory(rho=rho, u1=u1, du1=p1 / rho, u2=u2, du2=p2 / rho)


def integrate(
    mr: MassRatioLike,
    num: RadialNumerics = RadialNumerics(),
    potential: Optional[Callable[[float], float]] = None,
) -> SolutionState:
    return propagate(mr, num.rho_min, num.rho_max, num.rel_tol, potential).end


def asymptotic_coeffs(end: SolutionState, mr: Optional[MassRatioLike] = None):
    """Intercepts and slopes ``(alpha1, beta1, alpha2, beta2)`` of the asymptotes.

    When ``mr`` is given the tail is checked first: the potential at
    ``end.rho`` must be below 1e-12 in magnitude.
    """
    if mr is not None:
        v_end = abs(terms.potential(end.rho, mr))
        if v_end >= TAIL_TOL:
            raise TailNotConvergedError(
                f"|V({end.rho})| = {v_end:.3e} >= {TAIL_TOL}; increase rho_max"
            )
    beta1, beta2 = end.du1, end.du2
    alpha1 = end.u1 - end.rho * beta1
    alpha2 = end.u2 - end.rho * beta2
    return alpha1, beta1, alpha2, beta2


def combine(alpha1: float, beta1: float, alpha2: float, beta2: float):
    """The scattering-length combinations ``(alpha, beta, theta0)``."""
    norm = beta1**2 + beta2**2
    alpha = -(alpha1 * beta1 + alpha2 * beta2) / norm
    beta = (alpha1 * beta2 - alpha2 * beta1) / norm
    # beta > 0 puts theta0 in (0, pi) with sin(theta0) > 0
    theta0 = math.atan2(beta, alpha)
    return alpha, beta, theta0


def _params_once(ratio: float, num: RadialNumerics) -> UniversalParams:
    s0 = terms.s0(ratio)
    path = propagate(ratio, num.rho_min, num.rho_max, num.rel_tol)
    a1, b1, a2, b2 = asymptotic_coeffs(path.end, ratio)
    alpha, beta, theta0 = combine(a1, b1, a2, b2)
    diag = Diagnostics(
        numerics=num,
        n_steps=len(path.rho),
        wronskian_max_rel_err=float(np.max(np.abs(path.wronskian / s0 - 1.0))),
        asymptotic_wronskian=a1 * b2 - a2 * b1,
    )
    return UniversalParams(ratio, s0, a1, b1, a2, b2, alpha, beta, theta0, diag)


@lru_cache(maxsize=64)
def _universal_params_cached(ratio: float, num: RadialNumerics, refine: bool) -> UniversalParams:
    base = _params_once(ratio, num)
    if not refine:
        return base
    change = 0.0
    for alt in (
        replace(num, rho_min=num.rho_min / 2),
        replace(num, rho_max=num.rho_max + 10),
    ):
        other = _params_once(ratio, alt)
        for a, b in (
            (base.alpha, other.alpha),
            (base.beta, other.beta),
            (base.theta0, other.theta0),
        ):
            change = max(change, abs(b - a) / abs(a))
    return replace(base, diagnostics=replace(base.diagnostics, refinement_rel_change=change))


def universal_params(
    mr: MassRatioLike,
    num: RadialNumerics = RadialNumerics(),
    refine: bool = True,
) -> UniversalParams:
    """Mass-ratio dependent constants of the radial law.

    With ``refine`` the computation is repeated with ``rho_min`` halved and
    ``rho_max`` extended by 10, and the largest relative change in
    ``(alpha, beta, theta0)`` is stored in
    ``diagnostics.refinement_rel_change``.

    Examples
    --------
    >>> up = universal_params(87 / 7)
    >>> round(up.s0, 3), round(up.alpha, 2), round(up.beta, 2), round(up.theta0, 2)
    (1.322, 2.17, 2.55, 0.87)
    """
    return _universal_params_cached(terms._as_ratio(mr), num, refine)
