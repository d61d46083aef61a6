"""Spectral expansion of the transition density and the lag-h pair moment.

The generator of the reflected process, restricted to L^2 of the speed
measure m, has a purely discrete spectrum.  Writing lam_i = lt_i sigma^2,
the transition density over a step h is

    p_h(x, y) = pi(y) + m(y) sum_i exp(-lt_i sigma^2 h) phi_i(x) phi_i(y),

where the scaled eigenvalues lt_i solve

    H_{2 u^2 lt / v^2 - 1}(-v / sqrt(2)) = 0

in the real order of the Hermite function H, and the eigenfunctions are

    phi_i(x) = sigma (v/(sqrt(2) u))^{3/2} e^{v^2/4}
               H_{nu_i}((v x/u - v)/sqrt(2))
               / sqrt(2 lt_i delta_i H_{nu_i}(-v/sqrt(2))),

with nu_i = 2 u^2 lt_i / v^2 and delta_i the order-derivative of
H_{nu-1}(-v/sqrt(2)) at nu_i.  The sign of each phi_i is fixed so that
phi_i(0) > 0; all quantities computed here use products phi_i(x) phi_i(y)
and are sign-invariant.

The lag-h pair moment E[X_0 X_h] under stationarity reduces to

    g3(sigma) = g1(u, v)^2 + sum_i exp(-lt_i sigma^2 h) w_i,

with sigma-independent weights w_i = A_i B_i, A_i = int x pi phi_i dx and
B_i = int y m phi_i dy (phi_i carries a factor sigma and m a factor
1/sigma^2, so the product is sigma-free).  The weights are cached on the
basis, making each g3 evaluation O(N) inside the volatility solve.
"""

from dataclasses import dataclass

import numpy as np

from . import model
from ._quad import integrate
from .errors import BracketError, DomainError
from .specfun import hermite, hermite_dnu, hermite_grid

DEFAULT_MODES = 12

_SCAN_STEP = 0.05
_SCAN_WINDOW0 = 50.0
_ORDER_BISECT_TOL = 1e-12
_RESIDUAL_SCALE_TOL = 1e-9
_QUAD_TOL = 1e-10


@dataclass(frozen=True)
class SpectralBasis:
    """Truncated eigen-decomposition for one (u, v).

    ``lambdas_tilde`` hold the sigma-scaled eigenvalues, strictly
    increasing; ``orders`` the Hermite orders nu_i; ``norm_constants`` the
    sigma-free coefficients c_i with phi_i(x) = sigma c_i H_{nu_i}(z(x));
    ``delta_i`` the order-derivatives entering the normalization;
    ``pair_weights`` the cached w_i = A_i B_i of the pair-moment series.
    """

    u: float
    v: float
    n_modes: int
    lambdas_tilde: np.ndarray
    orders: np.ndarray
    norm_constants: np.ndarray
    delta_i: np.ndarray
    pair_weights: np.ndarray

    def scaled_arg(self, x):
        """Map state x >= 0 to the Hermite argument (v x/u - v)/sqrt(2)."""
        return (self.v * np.asarray(x, dtype=np.float64) / self.u - self.v) / np.sqrt(2.0)


def _order_equation_values(orders, v):
    """H_mu(-v/sqrt2) for an array of orders mu (the eigenvalue equation)."""
    x0 = -v / np.sqrt(2.0)
    return hermite_grid(orders, np.array([x0]))[:, 0]


def solve_eigenvalues(u, v, n_modes):
    """Smallest n_modes scaled eigenvalues, strictly increasing.

    Scans the order variable mu = 2 u^2 lt / v^2 - 1 upward from zero in
    steps of 0.05, growing the window geometrically until n_modes sign
    changes are found, then bisects each bracket to 1e-12 in mu.  A root
    is accepted only if the residual is small relative to the neighbouring
    function values (|H| varies over many orders of magnitude, so raw
    residuals are meaningless).
    """
    if not (u > 0 and v > 0):
        raise ValueError("u and v must be positive")
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    x0 = -v / np.sqrt(2.0)

    window = _SCAN_WINDOW0
    for _ in range(8):
        grid = np.arange(0.0, window + _SCAN_STEP, _SCAN_STEP)
        vals = _order_equation_values(grid, v)
        flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        if len(flips) >= n_modes:
            break
        window *= 2.0
    else:
        raise BracketError(
            f"could not bracket {n_modes} eigenvalues scanning orders up to {window}"
        )

    roots = []
    for idx in flips[:n_modes]:
        a, b = grid[idx], grid[idx + 1]
        fa = vals[idx]
        while b - a > _ORDER_BISECT_TOL:
            c = 0.5 * (a + b)
            fc = hermite(c, x0)
            if fc == 0.0:
                a = b = c
                break
            if (fc > 0) == (fa > 0):
                a, fa = c, fc
            else:
                b = c
        mu = 0.5 * (a + b)
        scale = abs(hermite(mu - _SCAN_STEP, x0)) + abs(hermite(mu + _SCAN_STEP, x0))
        if abs(hermite(mu, x0)) >= _RESIDUAL_SCALE_TOL * scale:
            raise BracketError(
                f"root candidate mu={mu} rejected: residual above scaled tolerance"
            )
        roots.append(mu)

    mus = np.array(roots)
    lts = (mus + 1.0) * v**2 / (2.0 * u**2)
    if not np.all(np.diff(lts) > 0):
        raise BracketError("eigenvalues not strictly increasing")
    return lts


def _norm_constants(u, v, lts):
    """Sign-fixed coefficients c_i and order-derivatives delta_i."""
    x0 = -v / np.sqrt(2.0)
    orders = 2.0 * u**2 * lts / v**2
    consts = np.empty_like(lts)
    deltas = np.empty_like(lts)
    prefactor = (v / (np.sqrt(2.0) * u)) ** 1.5 * np.exp(v**2 / 4.0)
    for i, nu in enumerate(orders):
        delta = hermite_dnu(nu - 1.0, x0)
        h_at0 = hermite(nu, x0)
        square = 2.0 * lts[i] * delta * h_at0
        if not square > 0:
            raise BracketError(
                f"normalization 2*lt*delta*H = {square} not positive at mode {i + 1}"
            )
        deltas[i] = delta
        c = prefactor / np.sqrt(square)
        # fix phi_i(0) > 0
        consts[i] = c if h_at0 > 0 else -c
    return orders, consts, deltas


def _pair_weights(u, v, orders, consts, quad_tol=_QUAD_TOL):
    """w_i = A_i B_i with A_i = int x pi phi_i dx, B_i = int y m phi_i dy.

    Computed on the sigma-free factors: phi_i/sigma = c_i H_{nu_i}(z) and
    sigma^2 m = 2 exp(...), whose product reproduces A_i B_i exactly.
    """
    q = model.ReparamUV(u=u, v=v, sigma=1.0)
    upper = u + 12.0 * u / v
    weights = np.empty_like(orders)
    for i, nu in enumerate(orders):
        def a_integrand(xs, nu=nu, i=i):
            hv = hermite_grid(np.array([nu]), (v * xs / u - v) / np.sqrt(2.0))[0]
            return xs * model.invariant_density(q, xs) * consts[i] * hv

        def b_integrand(ys, nu=nu, i=i):
            hv = hermite_grid(np.array([nu]), (v * ys / u - v) / np.sqrt(2.0))[0]
            # sigma^2 * m(y) evaluated at sigma = 1
            return ys * model.speed_measure(q, ys) * consts[i] * hv

        a_i = integrate(a_integrand, 0.0, upper, tol=quad_tol)
        b_i = integrate(b_integrand, 0.0, upper, tol=quad_tol)
        weights[i] = a_i * b_i
    return weights


def build_basis(u, v, n_modes=DEFAULT_MODES):
    """Construct the truncated basis at (u, v): eigenvalues, normalization
    constants, and cached pair-moment weights."""
    lts = solve_eigenvalues(u, v, n_modes)
    orders, consts, deltas = _norm_constants(u, v, lts)
    weights = _pair_weights(u, v, orders, consts)
    return SpectralBasis(
        u=float(u), v=float(v), n_modes=int(n_modes),
        lambdas_tilde=lts, orders=orders, norm_constants=consts,
        delta_i=deltas, pair_weights=weights,
    )


def eigenfunction(basis, i, sigma, x):
    """Evaluate phi_i(x) (1-based mode index) at volatility sigma.

    Accepts scalar or array x >= 0.
    """
    if not 1 <= i <= basis.n_modes:
        raise IndexError(f"mode index {i} outside 1..{basis.n_modes}")
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0):
        raise DomainError("state argument must be non-negative")
    z = basis.scaled_arg(arr)
    hv = hermite_grid(np.array([basis.orders[i - 1]]), np.atleast_1d(z))[0]
    out = sigma * basis.norm_constants[i - 1] * hv
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def _phi_matrix(basis, sigma, x):
    """phi_i(x_j) for all modes at once; x is a 1-d array."""
    z = basis.scaled_arg(x)
    hv = hermite_grid(basis.orders, z)
    return sigma * basis.norm_constants[:, None] * hv


def transition_density(basis, sigma, h, x, y):
    """Truncated transition density p_{N,h}(x, y).

    Truncation can leave slightly negative values deep in the tails;
    callers must not assume pointwise positivity.
    """
    if h <= 0:
        raise DomainError("h must be positive")
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if np.any(xa < 0) or np.any(ya < 0):
        raise DomainError("state arguments must be non-negative")
    scalar = xa.ndim == 0 and ya.ndim == 0
    xf = np.atleast_1d(xa)
    yf = np.atleast_1d(ya)
    q = model.ReparamUV(u=basis.u, v=basis.v, sigma=sigma)
    decay = np.exp(-basis.lambdas_tilde * sigma**2 * h)
    phix = _phi_matrix(basis, sigma, xf)
    phiy = _phi_matrix(basis, sigma, yf)
    series = np.einsum("i,ij,ij->j", decay, phix, phiy)
    out = model.invariant_density(q, yf) + model.speed_measure(q, yf) * series
    return float(out[0]) if scalar else out.reshape(xa.shape)


def _check_basis(basis, u, v):
    if not (np.isclose(basis.u, u) and np.isclose(basis.v, v)):
        raise ValueError(
            f"basis built for (u={basis.u}, v={basis.v}) but asked for (u={u}, v={v})"
        )


def pair_moment(u, v, sigma, h, basis):
    """Stationary lag-h moment E[X_0 X_h] by the separable reduction.

    g3 = g1(u,v)^2 + sum_i exp(-lt_i sigma^2 h) w_i with cached w_i.
    """
    _check_basis(basis, u, v)
    if h <= 0 or sigma <= 0:
        raise DomainError("h and sigma must be positive")
    g1 = model.stationary_mean(u, v)
    decay = np.exp(-basis.lambdas_tilde * sigma**2 * h)
    return g1 * g1 + float(np.dot(decay, basis.pair_weights))


def pair_moment_dsigma2(u, v, sigma, h, basis):
    """Derivative of the pair moment with respect to sigma^2.

    Equals -h sum_i lt_i exp(-lt_i sigma^2 h) w_i; strictly negative
    whenever any weight is nonzero, which certifies that the pair moment
    is strictly decreasing in sigma.
    """
    _check_basis(basis, u, v)
    if h <= 0 or sigma <= 0:
        raise DomainError("h and sigma must be positive")
    decay = np.exp(-basis.lambdas_tilde * sigma**2 * h)
    return -h * float(np.dot(basis.lambdas_tilde * decay, basis.pair_weights))


def truncation_tail(basis, sigma, h):
    """Magnitude of the last retained series term, exp(-lt_N sigma^2 h)|w_N|.

    Reported as a diagnostic for the truncation level.
    """
    lt = basis.lambdas_tilde[-1]
    return float(np.exp(-lt * sigma**2 * h) * abs(basis.pair_weights[-1]))
