"""Special-function kernel backing every analytic detection formula.

Provides the Gaussian Q-function and its inverse, regularized incomplete
gamma functions, modified Bessel I, the generalized Marcum Q-function of
integer order, a non-central chi-square sampler, and Chebyshev-Gauss
quadrature nodes.  All functions are pure; samplers take an explicit
``numpy.random.Generator``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import DomainError, NumericError

__all__ = [
    "Tolerance",
    "q_function",
    "q_inverse",
    "reg_lower_gamma",
    "reg_upper_gamma",
    "bessel_i",
    "marcum_q",
    "marcum_q_inv_b",
    "noncentral_chi2_sample",
    "chebyshev_gauss_nodes",
]


@dataclass(frozen=True)
class Tolerance:
    """Convergence targets shared by the iterative routines."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_iter: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_iter < 1:
            raise DomainError("max_iter must be >= 1")


# Probabilities are clamped only within this distance of [0, 1]; anything
# further out indicates a numerical failure and raises instead.
_CLAMP_SLACK = 1e-12


def _as_probability(x: float, slack: float = _CLAMP_SLACK) -> float:
    if math.isnan(x):
        raise NumericError("probability computation produced NaN")
    if x < 0.0:
        if x >= -slack:
            return 0.0
        raise NumericError(f"probability {x} below 0 beyond clamp slack")
    if x > 1.0:
        if x <= 1.0 + slack:
            return 1.0
        raise NumericError(f"probability {x} above 1 beyond clamp slack")
    return x


def q_function(x: float) -> float:
    """Gaussian tail probability Q(x) = P{N(0,1) > x}."""
    if not math.isfinite(x):
        raise DomainError("q_function requires finite input")
    return 0.5 * float(special.erfc(x / math.sqrt(2.0)))


# Acklam's rational approximation for the standard normal quantile;
# accurate to ~1e-9 before refinement.
_ACK_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
          1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_ACK_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
          6.680131188771972e+01, -1.328068155288572e+01)
_ACK_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
          -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_ACK_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
          3.754408661907416e+00)


def _normal_quantile_seed(p: float) -> float:
    a, b, c, d = _ACK_A, _ACK_B, _ACK_C, _ACK_D
    p_low = 0.02425
    if p < p_low:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    if p <= 1.0 - p_low:
        q = p - 0.5
        r = q * q
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / \
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    q = math.sqrt(-2.0 * math.log(1.0 - p))
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)


def q_inverse(p: float) -> float:
    """Inverse of :func:`q_function`: returns x with Q(x) = p, 0 < p < 1.

    Rational initial guess refined by two Newton steps on Q itself.
    """
    if not (0.0 < p < 1.0):
        raise DomainError("q_inverse requires 0 < p < 1")
    x = -_normal_quantile_seed(p)  # Q(x) = p  <=>  Phi(-x) = p
    for _ in range(2):
        pdf = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
        if pdf == 0.0:
            break
        x += (q_function(x) - p) / pdf
    return x


def reg_lower_gamma(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x) = gamma(s, x)/Gamma(s)."""
    if s <= 0:
        raise DomainError("reg_lower_gamma requires s > 0")
    if x < 0:
        raise DomainError("reg_lower_gamma requires x >= 0")
    return float(special.gammainc(s, x))


def reg_upper_gamma(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x)."""
    if s <= 0:
        raise DomainError("reg_upper_gamma requires s > 0")
    if x < 0:
        raise DomainError("reg_upper_gamma requires x >= 0")
    return float(special.gammaincc(s, x))


def bessel_i(m: int, x: float) -> float:
    """Modified Bessel function of the first kind, integer order m >= 0.

    Evaluated through the scaled form exp(x)*ive(m, x) so intermediate
    overflow cannot occur for x <= 700 even though iv itself would.
    """
    if m < 0 or int(m) != m:
        raise DomainError("bessel_i requires integer order m >= 0")
    if x < 0:
        raise DomainError("bessel_i requires x >= 0")
    if x == 0.0:
        return 1.0 if m == 0 else 0.0
    val = float(special.ive(m, x)) * math.exp(x) if x > 600.0 else float(special.iv(m, x))
    if math.isinf(val):
        raise NumericError(f"bessel_i overflow at m={m}, x={x}")
    return val


@lru_cache(maxsize=128)
def _poisson_weights(lam: float):
    """Poisson(lam) pmf over a window carrying all but ~1e-18 of the mass,
    plus the exact masses of the two truncated tails.

    The log-domain exponents are O(lam log lam), whose float rounding
    mis-scales every weight by up to ~lam*eps; the window mass is known
    exactly from the Poisson tail identity, so the common mode is
    renormalized away.  Cached because threshold and power bisections
    re-evaluate the same non-centrality with many different thresholds.
    """
    half = max(40.0, 10.0 * math.sqrt(lam))
    k_lo = max(0, int(math.floor(lam - half)))
    k_hi = int(math.ceil(lam + half))
    ks = np.arange(k_lo, k_hi + 1)
    log_w = ks * math.log(lam) - lam - special.gammaln(ks + 1.0)
    w = np.exp(log_w)
    tail_lo = float(special.gammaincc(k_lo, lam)) if k_lo >= 1 else 0.0
    tail_hi = float(special.gammainc(k_hi + 1, lam))
    w *= (1.0 - tail_lo - tail_hi) / float(w.sum())
    w.flags.writeable = False
    ks.flags.writeable = False
    return ks, w, tail_lo, tail_hi


def _marcum_q_many(m: int, a: float, b: np.ndarray) -> np.ndarray:
    """Vectorized-in-b Marcum Q via the canonical Poisson-weighted series

        Q_m(a, b) = sum_k  e^{-a^2/2} (a^2/2)^k / k!  *  Q(m + k, b^2/2),

    truncated where the neglected tail mass is below ~1e-18.  For scalar b
    the incomplete-gamma factor is evaluated only on its transition strip
    |m + k - x| <~ 12 sqrt(x); outside it the factor is 0 or 1 to below
    1e-12 and the remaining Poisson mass is added in closed form.
    """
    lam = 0.5 * a * a
    x = 0.5 * np.square(b, dtype=float)
    if lam == 0.0:
        return special.gammaincc(m, x)
    ks, w, tail_lo, tail_hi = _poisson_weights(lam)

    if x.shape == (1,):
        xv = float(x[0])
        if xv == 0.0:
            return np.array([1.0])
        margin = 12.0 * math.sqrt(xv) + 60.0
        cut_lo = xv - m - margin   # below: gammaincc ~ 0
        cut_hi = xv - m + margin   # above: gammaincc ~ 1
        i_lo = int(np.searchsorted(ks, cut_lo, side="left"))
        i_hi = int(np.searchsorted(ks, cut_hi, side="right"))
        strip = slice(i_lo, i_hi)
        high_mass = float(w[i_hi:].sum()) + tail_hi
        if i_lo >= i_hi:
            return np.array([high_mass if cut_hi < ks[0] else tail_hi])
        g = special.gammaincc(m + ks[strip], xv)
        val = float(w[strip] @ g) + high_mass
        if i_lo == 0:
            val += tail_lo * float(g[0])
        return np.array([val])

    g = special.gammaincc(m + ks[:, None], x[None, :])
    out = w @ g
    # reassign the truncated tail mass to the window edges
    out += tail_lo * g[0] + tail_hi * g[-1]
    out[x == 0.0] = 1.0
    return out


def marcum_q(m: int, a: float, b: float) -> float:
    """Generalized Marcum Q-function Q_m(a, b) of positive integer order.

    Boundary clamp slack is the series' own truncation tolerance: the
    Poisson-weighted sum spans tens of thousands of terms at large a, and
    plain float accumulation wanders a few 1e-12 past the boundary.
    """
    if m < 1 or int(m) != m:
        raise DomainError("marcum_q requires integer order m >= 1")
    if a < 0 or b < 0:
        raise DomainError("marcum_q requires a >= 0 and b >= 0")
    val = float(_marcum_q_many(int(m), a, np.array([b], dtype=float))[0])
    return _as_probability(val, slack=Tolerance().abs_tol)


def marcum_q_inv_b(m: int, a: float, p: float, tol: Tolerance = Tolerance()) -> float:
    """Solve Q_m(a, b) = p for b >= 0 by bracketing and bisection."""
    if not (0.0 < p < 1.0):
        raise DomainError("marcum_q_inv_b requires 0 < p < 1")
    lo = 0.0
    hi = max(1.0, a + math.sqrt(2.0 * m))
    grow = 0
    while marcum_q(m, a, hi) > p:
        hi *= 2.0
        grow += 1
        if grow > tol.max_iter:
            raise NumericError("marcum_q_inv_b failed to bracket the root")
    for _ in range(tol.max_iter):
        mid = 0.5 * (lo + hi)
        val = marcum_q(m, a, mid)
        if abs(val - p) <= tol.abs_tol:
            return mid
        if val > p:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol.abs_tol * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def noncentral_chi2_sample(rng: np.random.Generator, k: int, lam: float,
                           size: int | None = None):
    """Draw from the non-central chi-square chi2_k(lam).

    The non-centrality sits on the first coordinate's mean (sqrt(lam));
    the remaining k-1 degrees of freedom are a central chi-square block.
    """
    if k < 1 or int(k) != k:
        raise DomainError("noncentral_chi2_sample requires integer k >= 1")
    if lam < 0:
        raise DomainError("noncentral_chi2_sample requires lam >= 0")
    first = np.square(rng.standard_normal(size) + math.sqrt(lam))
    if k == 1:
        return first
    return first + rng.chisquare(k - 1, size)


def chebyshev_gauss_nodes(n_quad: int) -> tuple[np.ndarray, np.ndarray]:
    """Chebyshev-Gauss nodes cos((2n-1)pi/2N) and uniform weights pi/N.

    The caller supplies the sqrt(1-x^2) Jacobian, so these integrate
    f(x)/sqrt(1-x^2) exactly for polynomial f.
    """
    if n_quad < 1:
        raise DomainError("chebyshev_gauss_nodes requires n_quad >= 1")
    idx = np.arange(1, n_quad + 1)
    nodes = np.cos((2 * idx - 1) * np.pi / (2 * n_quad))
    weights = np.full(n_quad, np.pi / n_quad)
    return nodes, weights
