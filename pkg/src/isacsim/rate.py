"""Achievable-rate formulas for the two communication modes and their
inversions (communication power needed to hit a rate target).

"free" means the sensing component is known at the user and removed by
successive interference cancellation; "interfered" means it is treated
as noise.  Rates are in b/s/Hz, computed through the natural log so one
log implementation serves every module.
"""

from __future__ import annotations

import math

from .errors import DomainError

__all__ = ["rate_sensing_free", "rate_sensing_interfered", "comm_power_for_rate"]

_LN2 = math.log(2.0)


def _check_nonneg(**vals):
    for name, v in vals.items():
        if v < 0:
            raise DomainError(f"{name} must be >= 0")


def rate_sensing_free(p_w: float, rho_c: float, g_c: float, sigma_c2_w: float) -> float:
    """log2(1 + rho_c * P * g_c / sigma_c^2)."""
    _check_nonneg(p_w=p_w, rho_c=rho_c, g_c=g_c)
    if sigma_c2_w <= 0:
        raise DomainError("sigma_c2_w must be > 0")
    snr = rho_c * p_w * g_c / sigma_c2_w
    return math.log1p(snr) / _LN2


def rate_sensing_interfered(p_w: float, rho_c: float, g_c: float, sigma_c2_w: float) -> float:
    """log2(1 + rho_c P g_c / (rho_s P g_c + sigma_c^2)) with rho_s = 1 - rho_c."""
    _check_nonneg(p_w=p_w, rho_c=rho_c, g_c=g_c)
    if sigma_c2_w <= 0:
        raise DomainError("sigma_c2_w must be > 0")
    rho_s = 1.0 - rho_c
    sinr = rho_c * p_w * g_c / (rho_s * p_w * g_c + sigma_c2_w)
    return math.log1p(sinr) / _LN2


def comm_power_for_rate(r_min: float, mode: str, rho_s_p_w: float,
                        g_c: float, sigma_c2_w: float) -> float:
    """Communication power rho_c*P that attains exactly ``r_min``.

    mode "free":        (2^R - 1) sigma_c^2 / g_c
    mode "interfered":  (2^R - 1) (rho_s P g_c + sigma_c^2) / g_c
    """
    if r_min < 0:
        raise DomainError("r_min must be >= 0")
    if mode not in ("free", "interfered"):
        raise DomainError(f"unknown rate mode {mode!r}")
    if g_c <= 0 or sigma_c2_w <= 0:
        raise DomainError("g_c and sigma_c2_w must be > 0")
    gain = math.expm1(r_min * _LN2)  # 2^R - 1
    if mode == "free":
        return gain * sigma_c2_w / g_c
    _check_nonneg(rho_s_p_w=rho_s_p_w)
    return gain * (rho_s_p_w * g_c + sigma_c2_w) / g_c
