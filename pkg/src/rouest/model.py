"""Model parameterizations and stationary quantities.

A reflected Ornstein-Uhlenbeck process

    dX_t = kappa (theta - X_t) dt + sigma dW_t + dL_t,   X_t >= 0,

with reflection at zero has the invariant density of a normal distribution
conditioned to the non-negative half line.  The estimation pipeline works
in the parameterization

    u = theta,    v = sqrt(2 kappa) theta / sigma,

in which the invariant density and the first two stationary moments do not
depend on sigma.  This module houses both parameter triples, the maps
between them, the invariant density pi and speed measure m, the stationary
moment functions and their Jacobians.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .specfun import normal_cdf, normal_pdf

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class ROUParams:
    """Model triple (kappa, theta, sigma), all strictly positive."""

    kappa: float
    theta: float
    sigma: float

    def __post_init__(self):
        for name in ("kappa", "theta", "sigma"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class ReparamUV:
    """Working parameterization (u, v, sigma) of the moment system."""

    u: float
    v: float
    sigma: float

    def __post_init__(self):
        for name in ("u", "v", "sigma"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


def to_uv(p):
    """Map (kappa, theta, sigma) to the working triple (u, v, sigma)."""
    return ReparamUV(u=p.theta, v=math.sqrt(2.0 * p.kappa) * p.theta / p.sigma,
                     sigma=p.sigma)


def from_uv(q):
    """Recover (kappa, theta, sigma) from (u, v, sigma).

    theta = u, kappa = v^2 sigma^2 / (2 u^2); inverse of :func:`to_uv`.
    """
    return ROUParams(kappa=q.v**2 * q.sigma**2 / (2.0 * q.u**2), theta=q.u,
                     sigma=q.sigma)


def recovery_jacobian(q):
    """Jacobian of the recovery map (u, v, sigma) -> (theta, kappa, sigma).

    Rows are ordered (theta, kappa, sigma); the theta and sigma rows are
    unit vectors since the map is the identity in those coordinates.
    """
    u, v, s = q.u, q.v, q.sigma
    return np.array([
        [1.0, 0.0, 0.0],
        [-v**2 * s**2 / u**3, v * s**2 / u**2, v**2 * s / u**2],
        [0.0, 0.0, 1.0],
    ])


def hazard_ratio(v):
    """phi(v) / Phi(v): the mean shift of the left-truncated normal.

    Phi(v) equals 1 - Phi(-v) exactly, and for v > 0 it lies in [1/2, 1),
    so the ratio is computed without cancellation and decays to zero as
    v grows.
    """
    return normal_pdf(v) / normal_cdf(v)


def _validate_state(x):
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0):
        raise DomainError("state argument must be non-negative")
    return arr


def invariant_density(q, x):
    """Stationary density pi(x) = (v/u) phi(v x/u - v) / Phi(v) for x >= 0.

    Depends only on (u, v), not on sigma.  Accepts scalars or arrays.
    """
    arr = _validate_state(x)
    z = q.v * arr / q.u - q.v
    out = (q.v / q.u) * np.exp(-0.5 * z * z) / _SQRT_2PI / normal_cdf(q.v)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def speed_measure(q, x):
    """Speed density m(x) = (2/sigma^2) exp(-v^2/2 + v^2 x/u - v^2 x^2/(2u^2)).

    Shares its exponent with pi, so pi/m is constant in x; eigenfunctions
    of the generator are orthonormal in L^2(m).
    """
    arr = _validate_state(x)
    u, v = q.u, q.v
    expo = -0.5 * v**2 + v**2 * arr / u - 0.5 * v**2 * arr**2 / u**2
    out = (2.0 / q.sigma**2) * np.exp(expo)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def stationary_mean(u, v):
    """E[X_inf] = u + (u/v) phi(v)/Phi(v)."""
    return u + (u / v) * hazard_ratio(v)


def stationary_second_moment(u, v):
    """E[X_inf^2] = u^2/v^2 + u^2 + (u^2/v) phi(v)/Phi(v)."""
    return u**2 / v**2 + u**2 + (u**2 / v) * hazard_ratio(v)


def stationary_moment_jacobian(u, v):
    """Analytic Jacobian of (E[X_inf], E[X_inf^2]) with respect to (u, v).

    Uses d/dv [phi(v)/Phi(v)] = -r(v)(v + r(v)); hand-differentiated so the
    moment solver gets exact derivatives.
    """
    r = hazard_ratio(v)
    # d/dv of r/v
    drv = -r * (v * v + r * v + 1.0) / (v * v)
    d11 = 1.0 + r / v
    d12 = u * drv
    d21 = 2.0 * u * (1.0 / v**2 + 1.0 + r / v)
    d22 = u**2 * (-2.0 / v**3 + drv)
    return np.array([[d11, d12], [d21, d22]])
