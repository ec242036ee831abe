"""Closed-form false-alarm / detection probabilities for the five detector
scenarios, the amplitude-scaling (xi) estimator, the statistical-GLRT
coefficient machinery, threshold inversion, and ROC-curve generation.

Conventions
-----------
All probabilities are parameterized by :class:`SensingParams` in normalized
units: ``snr_total`` is the total received sensing SNR-time product
Lambda = P * T * g_s / sigma_s^2 for the *total* transmit power P, and
``zeta`` is the communication-echo SNR rho_c * P * g_s / sigma_s^2.
Thresholds ``kappa`` live in absolute log-likelihood units; the lambda-scaled
sweep grids used for presentation are produced by :func:`default_kappa_grid`.

The T >> 1 simplification ||s||^2 = T is the default analytic path.  It is
exact for the unit-modulus sensing waveform used by the simulation layer,
so no waveform-energy gap separates these formulas from the Monte-Carlo
oracle.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import special
from scipy.integrate import quad

from .errors import DomainError, H0LimitError, NumericError, SingularConfigError
from .scenario import LinkBudget
from .specfun import (Tolerance, _marcum_q_many, marcum_q, marcum_q_inv_b,
                      q_function, q_inverse, reg_lower_gamma, reg_upper_gamma)

__all__ = [
    "DetectorKind",
    "SensingParams",
    "OperatingPoint",
    "ApproxCoefficients",
    "SaturationWarning",
    "params_from_link",
    "lambda_scale",
    "coherent_pfa",
    "coherent_pd",
    "glrt_unknown_h_pfa",
    "glrt_unknown_h_pd",
    "energy_pfa",
    "energy_pd",
    "interfered_known_h_pfa",
    "interfered_known_h_pd",
    "xi_residual",
    "estimate_xi",
    "approx_coefficients",
    "bound_coefficients",
    "interfered_unknown_h_pfa",
    "interfered_unknown_h_pd",
    "pfa",
    "pd",
    "threshold_for_pfa",
    "roc_curve",
    "default_kappa_grid",
]


class DetectorKind(enum.Enum):
    """The five analyzed detection scenarios."""

    COHERENT_KNOWN_H = "coherent"            # waveform + channel known
    GLRT_UNKNOWN_H = "glrt"                  # waveform known, channel estimated
    ENERGY_ESTIMATED_SC = "energy"           # comm symbols estimated -> energy detector
    INTERFERED_KNOWN_H = "interfered-known"  # comm treated as noise, channel known
    INTERFERED_UNKNOWN_H = "interfered-unknown"


class SaturationWarning(RuntimeWarning):
    """A probability below 1e-300 was rounded to exactly 0."""


_SATURATION_FLOOR = 1e-300


def _saturate(p: float) -> float:
    """Round mathematically-positive probabilities below 1e-300 (including
    silent exp/erfc underflow to 0.0) to exactly 0 with a flag."""
    if 0.0 <= p < _SATURATION_FLOOR:
        warnings.warn("probability saturated to 0", SaturationWarning, stacklevel=3)
        return 0.0
    return p


@dataclass(frozen=True)
class SensingParams:
    """Normalized operating point of a detector.

    snr_total : Lambda = P*T*g_s/sigma_s^2 for the total transmit power.
    t_symbols : coherent processing length T.
    rho_c     : fraction of power carrying communication symbols.
    zeta      : comm-echo SNR rho_c*P*g_s/sigma_s^2; derived from the other
                fields when omitted, validated for consistency when given.
    kappa     : decision threshold in log-likelihood units.
    n_quad    : Chebyshev-Gauss order for the quadrature-based PD.
    """

    snr_total: float
    t_symbols: int
    rho_c: float = 1.0
    zeta: float | None = None
    kappa: float = 0.0
    n_quad: int = 1000

    def __post_init__(self):
        if self.snr_total < 0:
            raise DomainError("snr_total must be >= 0")
        if self.t_symbols < 1:
            raise DomainError("t_symbols must be >= 1")
        if not (0.0 <= self.rho_c <= 1.0):
            raise DomainError("rho_c must lie in [0, 1]")
        if self.n_quad < 1:
            raise DomainError("n_quad must be >= 1")
        derived = self.rho_c * self.snr_total / self.t_symbols
        if self.zeta is None:
            object.__setattr__(self, "zeta", derived)
        elif not math.isclose(self.zeta, derived, rel_tol=1e-9, abs_tol=1e-15):
            raise DomainError(
                f"zeta={self.zeta} inconsistent with rho_c*snr_total/T={derived}")

    @property
    def rho_s(self) -> float:
        return 1.0 - self.rho_c

    def at(self, kappa: float) -> "SensingParams":
        return replace(self, kappa=kappa)


@dataclass(frozen=True)
class OperatingPoint:
    """One (PFA, PD) pair at threshold kappa."""

    kappa: float
    pfa: float
    pd: float

    def __post_init__(self):
        if not (0.0 <= self.pfa <= 1.0 and 0.0 <= self.pd <= 1.0):
            raise DomainError("pfa and pd must lie in [0, 1]")


@dataclass(frozen=True)
class ApproxCoefficients:
    """Coefficients (alpha, beta) of the statistical-GLRT two-chi-square
    reduction, plus the scaling estimate xi_hat and the matched-filter
    energy statistic vartheta they derive from."""

    alpha: float
    beta: float
    xi_hat: float
    vartheta: float

    def __post_init__(self):
        if not math.isfinite(self.beta):
            raise DomainError("beta must be finite")
        if self.vartheta < 0:
            raise DomainError("vartheta must be >= 0")


def params_from_link(link: LinkBudget, t_symbols: int, rho_c: float = 1.0,
                     p_w: float | None = None, kappa: float = 0.0,
                     n_quad: int = 1000) -> SensingParams:
    """Build SensingParams from a physical link budget."""
    p = link.p_total_w if p_w is None else p_w
    return SensingParams(
        snr_total=p * t_symbols * link.g_s / link.sigma_s2_w,
        t_symbols=t_symbols,
        rho_c=rho_c,
        kappa=kappa,
        n_quad=n_quad,
    )


def lambda_scale(link: LinkBudget, t_symbols: int, p_w: float | None = None) -> float:
    """Threshold-sweep unit lambda = P*||h_s s||^2/sigma_s^2 (= P*T*g_s/sigma_s^2
    for the exactly-normalized waveform)."""
    p = link.p_total_w if p_w is None else p_w
    return p * t_symbols * link.g_s / link.sigma_s2_w


# --- communication-assisted sensing ------------------------------------------

def coherent_pfa(params: SensingParams) -> float:
    """Q((kappa + Lambda) / sqrt(2 Lambda)) for the known-everything LRT."""
    lam = params.snr_total
    if lam <= 0:
        raise DomainError("coherent detector requires snr_total > 0")
    return _saturate(q_function((params.kappa + lam) / math.sqrt(2.0 * lam)))


def coherent_pd(params: SensingParams) -> float:
    """Q((kappa - Lambda) / sqrt(2 Lambda))."""
    lam = params.snr_total
    if lam <= 0:
        raise DomainError("coherent detector requires snr_total > 0")
    return _saturate(q_function((params.kappa - lam) / math.sqrt(2.0 * lam)))


def glrt_unknown_h_pfa(kappa: float) -> float:
    """exp(-kappa); independent of the transmit power."""
    if kappa < 0:
        raise DomainError("glrt_unknown_h_pfa requires kappa >= 0")
    return _saturate(math.exp(-kappa))


def glrt_unknown_h_pd(params: SensingParams) -> float:
    """Q_1(sqrt(2 Lambda), sqrt(2 kappa))."""
    if params.kappa < 0:
        raise DomainError("glrt_unknown_h_pd requires kappa >= 0")
    return marcum_q(1, math.sqrt(2.0 * params.snr_total), math.sqrt(2.0 * params.kappa))


def energy_pfa(t_symbols: int, kappa: float) -> float:
    """Q_T(0, sqrt(2 kappa)) = regularized upper gamma Q(T, kappa)."""
    if t_symbols < 1:
        raise DomainError("t_symbols must be >= 1")
    if kappa < 0:
        raise DomainError("energy_pfa requires kappa >= 0")
    if t_symbols == 1:  # two-dof chi-square: identical to the GLRT exponential
        return glrt_unknown_h_pfa(kappa)
    return _saturate(reg_upper_gamma(t_symbols, kappa))


def energy_pd(params: SensingParams) -> float:
    """Q_T(sqrt(2 Lambda), sqrt(2 kappa))."""
    if params.kappa < 0:
        raise DomainError("energy_pd requires kappa >= 0")
    return marcum_q(params.t_symbols, math.sqrt(2.0 * params.snr_total),
                    math.sqrt(2.0 * params.kappa))


# --- communication-interfered sensing, known channel --------------------------

def _interfered_threshold_radicand(params: SensingParams) -> float:
    z = params.zeta
    return (2.0 * (1.0 + z) / z) * (
        params.kappa + params.t_symbols * math.log1p(z)
        + params.rho_s * params.t_symbols / params.rho_c)


def _check_interfered(params: SensingParams) -> None:
    if params.rho_c <= 0.0 or params.zeta <= 0.0:
        raise SingularConfigError(
            "interfered detectors require rho_c > 0 and zeta > 0")


def interfered_known_h_pfa(params: SensingParams) -> float:
    """Q_T(sqrt(2 rho_s T / (rho_c zeta)), sqrt((2(1+zeta)/zeta) *
    (kappa + T ln(1+zeta) + rho_s T / rho_c)))."""
    _check_interfered(params)
    rad = _interfered_threshold_radicand(params)
    if rad < 0:  # threshold below the statistic's support
        return 1.0
    a = math.sqrt(2.0 * params.rho_s * params.t_symbols / (params.rho_c * params.zeta))
    return _saturate(marcum_q(params.t_symbols, a, math.sqrt(rad)))


def interfered_known_h_pd(params: SensingParams) -> float:
    """Same threshold with the alternative-hypothesis non-centrality
    (2T/(rho_c zeta)) (rho_c zeta^2 + rho_s (1+zeta)^2)."""
    _check_interfered(params)
    rad = _interfered_threshold_radicand(params)
    if rad < 0:
        return 1.0
    z = params.zeta
    nc = (2.0 * params.t_symbols / (params.rho_c * z)) * (
        params.rho_c * z * z + params.rho_s * (1.0 + z) ** 2)
    return _saturate(marcum_q(params.t_symbols, math.sqrt(nc), math.sqrt(rad)))


# --- communication-interfered sensing, unknown channel -------------------------

def xi_residual(xi: float, r_tilde: np.ndarray, s_s: np.ndarray, p_w: float,
                rho_s: float, rho_c: float, sigma_s2_w: float) -> float:
    """Stationarity residual of the ML amplitude-scaling estimate.

    The three-term derivative of the fit objective reduces to scalars in
    u = |s_s^H r|^2 and ||r||^2; its root is the estimate xi_hat.
    """
    if xi < 0:
        raise DomainError("xi must be >= 0")
    r = np.asarray(r_tilde)
    s = np.asarray(s_s)
    t = s.shape[0]
    u = abs(np.vdot(s, r)) ** 2
    e = float(np.vdot(r, r).real)
    c = math.sqrt(rho_s * p_w)
    d = rho_c * p_w * xi * xi * u + sigma_s2_w
    fit = e - 2.0 * c * xi * u + c * c * xi * xi * t * u
    term1 = 2.0 * t * rho_c * p_w * u * xi / d
    term2 = -2.0 * rho_c * p_w * u * xi * fit / (d * d)
    term3 = (2.0 * xi * c * c * t * u - 2.0 * c * u) / d
    res = term1 + term2 + term3
    if not math.isfinite(res):
        raise NumericError("xi_residual is not finite")
    return res


def estimate_xi(r_tilde: np.ndarray, s_s: np.ndarray, p_w: float, rho_s: float,
                rho_c: float, sigma_s2_w: float, tol: Tolerance = Tolerance()) -> float:
    """Bisection root of :func:`xi_residual` on [0, b], b doubled until the
    sign changes.  Returns 0 when no sign change appears within 60
    doublings (no detectable signal component)."""
    if float(np.vdot(s_s, s_s).real) <= 0:
        raise DomainError("estimate_xi requires a non-trivial waveform")
    f0 = xi_residual(0.0, r_tilde, s_s, p_w, rho_s, rho_c, sigma_s2_w)
    if f0 == 0.0:
        return 0.0
    lo, hi = 0.0, 1.0 / math.sqrt(max(p_w, 1e-300))
    found = False
    for _ in range(60):
        if xi_residual(hi, r_tilde, s_s, p_w, rho_s, rho_c, sigma_s2_w) * f0 < 0:
            found = True
            break
        lo, hi = 0.0, hi * 2.0
    if not found:
        return 0.0
    for _ in range(tol.max_iter):
        mid = 0.5 * (lo + hi)
        fm = xi_residual(mid, r_tilde, s_s, p_w, rho_s, rho_c, sigma_s2_w)
        if fm * f0 > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol.abs_tol * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def approx_coefficients(xi_hat: float, hypothesis: str, *, kappa: float,
                        t_symbols: int, p_w: float, rho_s: float, rho_c: float,
                        sigma_s2_w: float, e_gs2: float) -> ApproxCoefficients:
    """(alpha, beta) of the two-chi-square reduction at a given xi_hat.

    vartheta is the statistical matched-filter energy: 0 under H0 and
    rho_s * P * ||s_s||^4 * E|h_s|^2 under H1 (||s_s||^2 = T).  The H0
    value makes the printed formulas divide by zero, so requesting H0
    raises :class:`H0LimitError`; null-hypothesis probabilities must go
    through :func:`bound_coefficients`, which evaluates the limiting form.
    """
    if hypothesis not in ("H0", "H1"):
        raise DomainError(f"unknown hypothesis {hypothesis!r}")
    if hypothesis == "H0":
        raise H0LimitError()
    t = t_symbols
    vartheta = rho_s * p_w * float(t) ** 2 * e_gs2
    scale = rho_c * p_w * xi_hat * xi_hat * vartheta
    if scale <= 0:
        raise H0LimitError("rho_c*P*xi^2*vartheta = 0; use the limiting form")
    ratio = sigma_s2_w / scale
    log_term = t * math.log(sigma_s2_w / (scale + sigma_s2_w))
    alpha = 2.0 * (kappa - log_term) * (1.0 + ratio)
    beta = 1.0 + ratio - ratio * (1.0 - math.sqrt(rho_s * p_w) * xi_hat * t) ** 2
    return ApproxCoefficients(alpha=alpha, beta=beta, xi_hat=xi_hat, vartheta=vartheta)


def bound_coefficients(params: SensingParams) -> ApproxCoefficients:
    """Operating coefficients of the statistical GLRT in reduced form.

    Evaluating the coefficient formulas at the statistical stationary
    point xi = 1/(sqrt(rho_s P) ||s_s||^2) cancels every xi-dependent
    term and leaves

        beta  = (1 + zeta) / zeta,
        alpha = (2 (1 + zeta) / zeta) (kappa + T ln(1 + zeta)),

    which is also the vartheta -> 0 limit used for the null hypothesis.
    """
    _check_interfered(params)
    z = params.zeta
    t = params.t_symbols
    beta = (1.0 + z) / z
    alpha = (2.0 * (1.0 + z) / z) * (params.kappa + t * math.log1p(z))
    # statistical stationary point in normalized units (sigma^2 = 1)
    p_norm = params.snr_total / t
    xi_stat = (1.0 / (math.sqrt(params.rho_s * p_norm) * t)
               if params.rho_s > 0 and p_norm > 0 else math.inf)
    vartheta = params.rho_s * p_norm * float(t) ** 2
    return ApproxCoefficients(alpha=alpha, beta=beta, xi_hat=xi_stat, vartheta=vartheta)


def interfered_unknown_h_pfa(coeffs: ApproxCoefficients, t_symbols: int) -> float:
    """Null-hypothesis probability Pr{X0 >= alpha - beta*Y0} with
    X0 ~ chi2_{2(T-1)} and Y0 ~ chi2_2.

    beta > 1 uses the finite-sum closed form (log-domain terms); beta = 1
    collapses to the plain energy tail Q(T, alpha/2); beta < 1 falls back
    to adaptive integration of the pre-summation integral, where the
    closed form would need an incomplete gamma of negative argument.
    """
    t = t_symbols
    if t < 1:
        raise DomainError("t_symbols must be >= 1")
    alpha, beta = coeffs.alpha, coeffs.beta
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    if alpha == 0.0:
        return 1.0
    if beta <= 0:
        raise DomainError("beta must be > 0")
    if t == 1:
        return _saturate(math.exp(-alpha / (2.0 * beta)))
    if abs(beta - 1.0) < 1e-9:
        return _saturate(reg_upper_gamma(t, alpha / 2.0))
    if beta > 1.0:
        # whole expression assembled in the log domain: individual terms can
        # reach exp(+-hundreds) while the product stays within [0, 1]
        z = (alpha / (2.0 * beta)) * (beta - 1.0)
        ls = np.arange(1, t)
        glow = special.gammainc(ls, z)
        lead = -alpha / (2.0 * beta)
        val = math.exp(lead)
        if (glow > 0).any():
            with np.errstate(divide="ignore"):
                log_terms = ls * math.log(beta / (beta - 1.0)) + np.log(glow)
            total_log = float(special.logsumexp(log_terms[glow > 0]))
            val += math.exp(lead + total_log - math.log(beta))
        if val > 1.0 + 1e-9:
            raise NumericError(f"finite-sum PFA overflowed: {val}")
        return _saturate(min(val, 1.0))
    integrand = lambda y: 0.5 * math.exp(-0.5 * y) * reg_lower_gamma(t - 1, 0.5 * (alpha - beta * y))
    below, err = quad(integrand, 0.0, alpha / beta, limit=200)
    if err > 1e-8:
        raise NumericError(f"PFA integral error estimate {err} too large")
    return _saturate(min(max(1.0 - below, 0.0), 1.0))


def interfered_unknown_h_pd(coeffs: ApproxCoefficients, params: SensingParams,
                            n_quad: int | None = None) -> float:
    """Chebyshev-Gauss approximation of Pr{X1 >= alpha - beta*Y1} with
    X1 ~ chi2_{2(T-1)}(2 Lambda (T-1)/T) and Y1 ~ chi2_2(2 Lambda / T),
    Lambda being the total received SNR-time product.

    The Bessel factor is evaluated in scaled-exponential form; the
    combined exponent is <= 0 by AM-GM, so the node weights cannot
    overflow.
    """
    n = params.n_quad if n_quad is None else n_quad
    if n < 1:
        raise DomainError("n_quad must be >= 1")
    t = params.t_symbols
    if t < 2:
        raise DomainError("quadrature PD requires t_symbols >= 2")
    alpha, beta = coeffs.alpha, coeffs.beta
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    if beta <= 0:
        raise DomainError("beta must be > 0")
    if alpha == 0.0:
        return 1.0
    lam_t = params.snr_total / t
    theta = (2.0 * np.arange(1, n + 1) - 1.0) * np.pi / (2.0 * n)
    cos_t = np.cos(theta)
    bessel_arg = np.sqrt((alpha / beta) * lam_t * (1.0 + cos_t))
    marcum_b = np.sqrt((alpha / 2.0) * (1.0 - cos_t))
    q_vals = _marcum_q_many(t - 1, math.sqrt(2.0 * params.snr_total * (t - 1) / t),
                            marcum_b)
    log_weight = bessel_arg - lam_t - (alpha / (4.0 * beta)) * (1.0 + cos_t)
    terms = np.sin(theta) * np.exp(log_weight) * special.ive(0, bessel_arg) * (1.0 - q_vals)
    val = 1.0 - (np.pi * alpha / (4.0 * beta * n)) * float(terms.sum())
    # quadrature truncation can undershoot 0 / overshoot 1 by its own error
    if not -1e-6 <= val <= 1.0 + 1e-9:
        raise NumericError(f"quadrature PD out of range: {val}")
    return _saturate(min(max(val, 0.0), 1.0))


# --- uniform dispatch ----------------------------------------------------------

def pfa(kind: DetectorKind, params: SensingParams) -> float:
    """False-alarm probability of ``kind`` at the params' threshold."""
    if kind is DetectorKind.COHERENT_KNOWN_H:
        return coherent_pfa(params)
    if kind is DetectorKind.GLRT_UNKNOWN_H:
        return glrt_unknown_h_pfa(params.kappa)
    if kind is DetectorKind.ENERGY_ESTIMATED_SC:
        return energy_pfa(params.t_symbols, params.kappa)
    if kind is DetectorKind.INTERFERED_KNOWN_H:
        return interfered_known_h_pfa(params)
    if kind is DetectorKind.INTERFERED_UNKNOWN_H:
        coeffs = bound_coefficients(params)
        if coeffs.alpha < 0:  # threshold below the statistic's support
            return 1.0
        return interfered_unknown_h_pfa(coeffs, params.t_symbols)
    raise DomainError(f"unknown detector kind {kind!r}")


def pd(kind: DetectorKind, params: SensingParams) -> float:
    """Detection probability of ``kind`` at the params' threshold."""
    if kind is DetectorKind.COHERENT_KNOWN_H:
        return coherent_pd(params)
    if kind is DetectorKind.GLRT_UNKNOWN_H:
        return glrt_unknown_h_pd(params)
    if kind is DetectorKind.ENERGY_ESTIMATED_SC:
        return energy_pd(params)
    if kind is DetectorKind.INTERFERED_KNOWN_H:
        return interfered_known_h_pd(params)
    if kind is DetectorKind.INTERFERED_UNKNOWN_H:
        coeffs = bound_coefficients(params)
        if coeffs.alpha < 0:
            return 1.0
        return interfered_unknown_h_pd(coeffs, params)
    raise DomainError(f"unknown detector kind {kind!r}")


def threshold_for_pfa(kind: DetectorKind, params: SensingParams,
                      pfa_target: float, tol: Tolerance = Tolerance()) -> float:
    """Threshold kappa with PFA(kappa) = pfa_target.

    Closed forms for the coherent and power-independent GLRT detectors;
    bracketed bisection on the matching PFA expression otherwise.
    """
    if not (0.0 < pfa_target < 1.0):
        raise DomainError("pfa_target must lie in (0, 1)")
    if kind is DetectorKind.COHERENT_KNOWN_H:
        lam = params.snr_total
        if lam <= 0:
            raise DomainError("coherent threshold requires snr_total > 0")
        return math.sqrt(2.0 * lam) * q_inverse(pfa_target) - lam
    if kind is DetectorKind.GLRT_UNKNOWN_H:
        return -math.log(pfa_target)

    if kind is DetectorKind.INTERFERED_KNOWN_H:
        # invert through the Marcum Q directly: the threshold enters only
        # via the radicand, which is affine in kappa
        _check_interfered(params)
        t, z = params.t_symbols, params.zeta
        a = math.sqrt(2.0 * params.rho_s * t / (params.rho_c * z))
        b_star = marcum_q_inv_b(t, a, pfa_target, tol)
        rad = b_star * b_star
        return (rad * z / (2.0 * (1.0 + z))
                - t * math.log1p(z) - params.rho_s * t / params.rho_c)

    if kind is DetectorKind.ENERGY_ESTIMATED_SC:
        lo = 0.0
    elif kind is DetectorKind.INTERFERED_UNKNOWN_H:
        _check_interfered(params)
        lo = -params.t_symbols * math.log1p(params.zeta)
    else:
        raise DomainError(f"unknown detector kind {kind!r}")

    f = lambda k: pfa(kind, params.at(k)) - pfa_target
    span = 1.0
    hi = lo + span
    grow = 0
    while f(hi) > 0:
        span *= 2.0
        hi = lo + span
        grow += 1
        if grow > tol.max_iter:
            raise NumericError("threshold_for_pfa failed to bracket")
    f_lo = f(lo)
    if f_lo < 0:
        raise NumericError("PFA below target over the whole support")
    for _ in range(tol.max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm) <= 1e-7 * pfa_target or (hi - lo) <= tol.abs_tol * max(1.0, abs(mid)):
            return mid
        if fm > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


_GRID_SPANS = {
    DetectorKind.COHERENT_KNOWN_H: (-2.5, 2.5),
    DetectorKind.GLRT_UNKNOWN_H: (0.0, 5.0),
    DetectorKind.ENERGY_ESTIMATED_SC: (10.0, 17.5),
    DetectorKind.INTERFERED_KNOWN_H: (-0.25, 0.25),
    DetectorKind.INTERFERED_UNKNOWN_H: (-0.25, 0.25),
}


def default_kappa_grid(kind: DetectorKind, lam: float, n_points: int = 101) -> np.ndarray:
    """Per-detector threshold sweep in units of lambda.

    Spans: coherent -2.5..2.5, GLRT 0..5, energy 10..17.5, interfered
    -0.25..0.25 (times lambda)."""
    if n_points < 1:
        raise DomainError("n_points must be >= 1")
    if lam <= 0:
        raise DomainError("lambda must be > 0")
    lo, hi = _GRID_SPANS[kind]
    return np.linspace(lo * lam, hi * lam, n_points)


def roc_curve(kind: DetectorKind, params: SensingParams,
              kappa_grid: np.ndarray) -> list[OperatingPoint]:
    """Evaluate (PFA, PD) along a threshold grid."""
    grid = np.asarray(kappa_grid, dtype=float)
    if grid.size == 0:
        raise DomainError("kappa_grid must be non-empty")
    return [OperatingPoint(kappa=float(k),
                           pfa=pfa(kind, params.at(float(k))),
                           pd=pd(kind, params.at(float(k))))
            for k in grid]
