"""Real-order special functions used by the spectral expansion.

Provides the Euler Gamma function, the Kummer confluent hypergeometric
function M(a, b, z), the standard normal pdf/cdf, and the Hermite function
H_nu(x) of arbitrary real order together with its derivative in the order
parameter.

The Hermite function is evaluated through its confluent-hypergeometric
representation (Lebedev, "Special Functions and Their Applications",
section 10.2):

    H_nu(x) = 2^nu sqrt(pi) [ M(-nu/2, 1/2, x^2) / Gamma((1-nu)/2)
                              - 2x M((1-nu)/2, 3/2, x^2) / Gamma(-nu/2) ]

When one of the Gamma arguments hits a non-positive integer the
corresponding term vanishes (1/Gamma is zero at a pole); this continuation
recovers the classical Hermite polynomials at non-negative integer order.

Accuracy note: for x <= 0 the two terms reinforce and the formula is
accurate to near machine precision.  For large positive x they cancel
against intermediates of size exp(x^2), so the absolute error grows like
eps * exp(x^2) while the true value is only O((2x)^nu).  Every caller in
this package pairs H_nu with a Gaussian weight exp(-x^2) which absorbs
that loss; standalone callers should treat |x| > 5 results as
absolute-error bounded, not relative.  Arguments beyond HERMITE_MAX_X are
rejected to keep intermediates finite.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._jit import njit
from .errors import ConvergenceError, DomainError, PoleError

# Direct Taylor series of M(a, b, z) is used throughout.  Terms peak near
# k ~ z, so KUMMER_MAX_Z is limited by the default term budget; negative z
# makes the series alternate with exp(|z|)-sized cancellation, hence the
# much tighter lower bound.
KUMMER_MAX_Z = 200.0
KUMMER_MIN_Z = -36.0
HERMITE_MAX_X = 12.0

_SQRT_PI = math.sqrt(math.pi)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_ORDER_STEP = 1e-5  # central-difference step for d/dnu


@dataclass(frozen=True)
class Tolerance:
    """Convergence budget for series evaluation."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_terms: int = 500

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_TOL = Tolerance()

# Tighter budget used internally by the eigenproblem, where root residuals
# are resolved far below the public default.
_TIGHT = Tolerance(abs_tol=1e-300, rel_tol=1e-15, max_terms=800)


def _is_nonpos_int(x):
    return x <= 0.0 and x == math.floor(x)


def gamma(x):
    """Euler Gamma function.

    Raises PoleError at non-positive integers.  Accurate to at least 12
    significant digits for |x| <= 50 (delegates to the platform libm).
    """
    x = float(x)
    if _is_nonpos_int(x):
        raise PoleError(f"gamma pole at x={x}")
    return math.gamma(x)


@njit(cache=True)
def _kummer_series(a, b, z, abs_tol, rel_tol, max_terms):
    """Taylor series of M(a,b,z); returns (value, terms_used, converged)."""
    total = 1.0
    term = 1.0
    k = 0
    small = 0
    while k < max_terms:
        term *= (a + k) * z / ((b + k) * (k + 1.0))
        total += term
        k += 1
        # Terms can grow until k ~ |z|; require two consecutive small
        # terms past that point before declaring convergence.
        if abs(term) <= abs_tol + rel_tol * abs(total):
            if k > abs(z):
                small += 1
                if small >= 2:
                    return total, k, True
        else:
            small = 0
    return total, k, False


def kummer_m(a, b, z, tol=DEFAULT_TOL):
    """Kummer confluent hypergeometric function M(a, b, z).

    M(a,b,z) = sum_k (a)_k z^k / ((b)_k k!), summed directly.  The domain
    is KUMMER_MIN_Z <= z <= KUMMER_MAX_Z; outside it the series is either
    cancellation-unsafe (z very negative) or exceeds the term budget.
    """
    a, b, z = float(a), float(b), float(z)
    if _is_nonpos_int(b):
        raise PoleError(f"kummer_m pole at b={b}")
    if z < KUMMER_MIN_Z or z > KUMMER_MAX_Z:
        raise DomainError(
            f"kummer_m argument z={z} outside [{KUMMER_MIN_Z}, {KUMMER_MAX_Z}]"
        )
    value, used, ok = _kummer_series(a, b, z, tol.abs_tol, tol.rel_tol, tol.max_terms)
    if not ok:
        raise ConvergenceError(
            f"kummer_m({a}, {b}, {z}) not converged after {used} terms"
        )
    return value


@njit(cache=True)
def _hermite_point(nu, x, abs_tol, rel_tol, max_terms):
    """Two-term Kummer representation of H_nu(x); (value, converged)."""
    z = x * x
    w1 = (1.0 - nu) / 2.0
    w2 = -nu / 2.0
    t1 = 0.0
    ok = True
    if not (w1 <= 0.0 and w1 == math.floor(w1)):
        m1, _, ok1 = _kummer_series(-nu / 2.0, 0.5, z, abs_tol, rel_tol, max_terms)
        t1 = m1 / math.gamma(w1)
        ok = ok and ok1
    t2 = 0.0
    if not (w2 <= 0.0 and w2 == math.floor(w2)):
        m2, _, ok2 = _kummer_series(w1, 1.5, z, abs_tol, rel_tol, max_terms)
        t2 = 2.0 * x * m2 / math.gamma(w2)
        ok = ok and ok2
    return 2.0**nu * _SQRT_PI * (t1 - t2), ok


@njit(cache=True)
def _hermite_grid(nus, xs, abs_tol, rel_tol, max_terms):
    """H_nu(x) on the cartesian grid nus x xs (hot path for quadrature)."""
    out = np.empty((nus.shape[0], xs.shape[0]))
    for i in range(nus.shape[0]):
        for j in range(xs.shape[0]):
            val, ok = _hermite_point(nus[i], xs[j], abs_tol, rel_tol, max_terms)
            if not ok:
                raise RuntimeError("Kummer series did not converge")
            out[i, j] = val
    return out


def _check_hermite_args(nu, x):
    nu, x = float(nu), float(x)
    if abs(x) > HERMITE_MAX_X:
        raise DomainError(f"hermite argument |x|={abs(x)} exceeds {HERMITE_MAX_X}")
    return nu, x


def hermite(nu, x, tol=_TIGHT):
    """Hermite function H_nu(x) of real order nu.

    Agrees with the classical Hermite polynomial for non-negative integer
    nu and satisfies the recurrence H_{nu+1} = 2x H_nu - 2 nu H_{nu-1}.
    """
    nu, x = _check_hermite_args(nu, x)
    value, ok = _hermite_point(nu, x, tol.abs_tol, tol.rel_tol, tol.max_terms)
    if not ok:
        raise ConvergenceError(f"hermite({nu}, {x}) series not converged")
    return value


def hermite_dnu(nu, x, tol=_TIGHT):
    """Derivative of H_nu(x) with respect to the order nu.

    Central finite difference with step 1e-5, truncation error O(step^2);
    the representation is smooth in nu across integer orders so the
    difference is well conditioned.
    """
    nu, x = _check_hermite_args(nu, x)
    hi, ok1 = _hermite_point(nu + _ORDER_STEP, x, tol.abs_tol, tol.rel_tol, tol.max_terms)
    lo, ok2 = _hermite_point(nu - _ORDER_STEP, x, tol.abs_tol, tol.rel_tol, tol.max_terms)
    if not (ok1 and ok2):
        raise ConvergenceError(f"hermite_dnu({nu}, {x}) series not converged")
    return (hi - lo) / (2.0 * _ORDER_STEP)


def hermite_grid(nus, xs, tol=_TIGHT):
    """Vectorized H on a grid of orders and arguments; shape (len(nus), len(xs))."""
    nus = np.atleast_1d(np.asarray(nus, dtype=np.float64))
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    if np.any(np.abs(xs) > HERMITE_MAX_X):
        raise DomainError(f"hermite argument beyond |x|={HERMITE_MAX_X}")
    return _hermite_grid(nus, xs, tol.abs_tol, tol.rel_tol, tol.max_terms)


def normal_pdf(x):
    """Standard normal density phi(x) = exp(-x^2/2)/sqrt(2 pi)."""
    return math.exp(-0.5 * float(x) ** 2) * _INV_SQRT_2PI


def normal_cdf(x):
    """Standard normal distribution function Phi(x), via erfc for tail accuracy."""
    return 0.5 * math.erfc(-float(x) / math.sqrt(2.0))
