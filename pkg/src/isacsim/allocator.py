"""Minimum-transmit-power allocation under rate, detection, and false-alarm
constraints, covering the eight combinations of the two communication modes
(sensing-free / sensing-interfered) and the sensing scenarios.

Structure of the solves:
  * assisted sensing (Cases I, II, V, VI): rho_c = 1 is optimal, so
    P_min = max(P_sensing_min, rate power);
  * interfered sensing (Cases III, IV, VII, VIII): the rate constraint is
    tight, the communication power is its closed-form inversion, and the
    sensing power is the outer 1-D bisection variable with the threshold
    re-inverted from the false-alarm target at every probe.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from . import detectors, rate
from .detectors import DetectorKind, SensingParams
from .errors import DomainError, InvalidTargetsError, NumericError
from .scenario import LinkBudget
from .specfun import q_inverse

__all__ = [
    "QosTargets",
    "CaseId",
    "AllocationResult",
    "TradeoffPoint",
    "min_sensing_power",
    "solve_case",
    "solve_all_cases",
    "tradeoff_curve",
    "rc_coexistence_pd",
    "verify_allocation",
]

_POWER_TOL_DB = 0.01
_PROB_TOL = 1e-7


@dataclass(frozen=True)
class QosTargets:
    """Constraint levels: rate floor, detection floor, false-alarm cap."""

    r_min: float
    pd_min: float
    pfa_delta: float

    def __post_init__(self):
        if self.r_min < 0:
            raise InvalidTargetsError("r_min must be >= 0")
        if not (0.0 < self.pfa_delta < self.pd_min < 1.0):
            raise InvalidTargetsError("need 0 < pfa_delta < pd_min < 1")


class CaseId(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"
    VII = "VII"
    VIII = "VIII"


_COMM_MODE = {
    CaseId.I: "free", CaseId.II: "free", CaseId.III: "free", CaseId.IV: "free",
    CaseId.V: "interfered", CaseId.VI: "interfered",
    CaseId.VII: "interfered", CaseId.VIII: "interfered",
}

_SENSING_KIND = {
    CaseId.I: DetectorKind.COHERENT_KNOWN_H,
    CaseId.II: DetectorKind.GLRT_UNKNOWN_H,
    CaseId.III: DetectorKind.INTERFERED_KNOWN_H,
    CaseId.IV: DetectorKind.INTERFERED_UNKNOWN_H,
    CaseId.V: DetectorKind.COHERENT_KNOWN_H,
    CaseId.VI: DetectorKind.GLRT_UNKNOWN_H,
    CaseId.VII: DetectorKind.INTERFERED_KNOWN_H,
    CaseId.VIII: DetectorKind.INTERFERED_UNKNOWN_H,
}


def comm_mode(case: CaseId) -> str:
    return _COMM_MODE[case]


def sensing_kind(case: CaseId, estimated_sc: bool = False) -> DetectorKind:
    """Detector used by a case; estimated_sc swaps the assisted cases'
    detector for the energy lower-bound variant."""
    kind = _SENSING_KIND[case]
    if estimated_sc:
        if kind in (DetectorKind.COHERENT_KNOWN_H, DetectorKind.GLRT_UNKNOWN_H):
            return DetectorKind.ENERGY_ESTIMATED_SC
        raise DomainError("estimated_sc applies only to the assisted cases")
    return kind


@dataclass(frozen=True)
class AllocationResult:
    """Solution of one allocation case."""

    case: CaseId
    p_min_w: float
    rho_c: float
    kappa: float            # threshold achieving PFA = pfa_delta at the optimum
    feasible: bool
    binding: frozenset      # subset of {"rate", "pd"} active at the optimum
    p_sensing_w: float      # sensing-power component of the optimum


@dataclass(frozen=True)
class TradeoffPoint:
    rho_c: float
    rate: float
    pd: float
    skipped: bool = False


def _assisted_params(link: LinkBudget, t_symbols: int, p_w: float) -> SensingParams:
    # assisted detectors exploit the whole superimposed waveform: Lambda uses P
    return detectors.params_from_link(link, t_symbols, rho_c=1.0, p_w=p_w)


def _interfered_params(link: LinkBudget, t_symbols: int, p_sens_w: float,
                       p_comm_w: float) -> SensingParams:
    p_tot = p_sens_w + p_comm_w
    return SensingParams(
        snr_total=p_tot * t_symbols * link.g_s / link.sigma_s2_w,
        t_symbols=t_symbols,
        rho_c=p_comm_w / p_tot,
    )


def _pd_at_pfa(kind: DetectorKind, params: SensingParams, pfa_delta: float) -> tuple[float, float]:
    kappa = detectors.threshold_for_pfa(kind, params, pfa_delta)
    return detectors.pd(kind, params.at(kappa)), kappa


def _bisect_power_db(pd_gap: Callable[[float], float], lo_dbw: float = -120.0,
                     hi_start_dbw: float = -120.0, hi_cap_dbw: float = 90.0) -> float:
    """Smallest power (watts) with pd_gap >= 0.

    pd_gap(p_w) must be non-decreasing; the upper bracket grows in 5 dB
    steps, then bisection in dB runs past the 0.01 dB power tolerance until
    the detection-probability residual is within 1e-7.  Returns the upper
    end of the final bracket so the constraint is met, not undershot.
    """
    hi = hi_start_dbw
    if pd_gap(10.0 ** (lo_dbw / 10.0)) >= 0.0:
        return 10.0 ** (lo_dbw / 10.0)
    while pd_gap(10.0 ** (hi / 10.0)) < 0.0:
        lo_dbw = hi
        hi += 5.0
        if hi > hi_cap_dbw:
            raise NumericError("sensing-power bracket exceeded 90 dBW")
    gap_hi = pd_gap(10.0 ** (hi / 10.0))
    while hi - lo_dbw > 1e-9 and not (hi - lo_dbw <= _POWER_TOL_DB and gap_hi <= _PROB_TOL):
        mid = 0.5 * (lo_dbw + hi)
        gap = pd_gap(10.0 ** (mid / 10.0))
        if gap >= 0.0:
            hi, gap_hi = mid, gap
        else:
            lo_dbw = mid
    return 10.0 ** (hi / 10.0)


def min_sensing_power(kind: DetectorKind, targets: QosTargets, link: LinkBudget,
                      t_symbols: int,
                      comm_power: float | Callable[[float], float] = 0.0) -> float:
    """Smallest sensing power meeting PD >= pd_min at PFA = pfa_delta.

    For the assisted kinds ``comm_power`` is ignored (the detector sees the
    whole waveform).  For the interfered kinds it is either the fixed
    communication power or a callable mapping sensing power to the
    communication power tied to it by the rate constraint.
    """
    if kind is DetectorKind.COHERENT_KNOWN_H:
        spread = q_inverse(targets.pfa_delta) - q_inverse(targets.pd_min)
        return link.sigma_s2_w * spread * spread / (2.0 * t_symbols * link.g_s)

    if kind in (DetectorKind.GLRT_UNKNOWN_H, DetectorKind.ENERGY_ESTIMATED_SC):
        def gap(p_w: float) -> float:
            params = _assisted_params(link, t_symbols, p_w)
            pd_val, _ = _pd_at_pfa(kind, params, targets.pfa_delta)
            return pd_val - targets.pd_min
        return _bisect_power_db(gap)

    if kind in (DetectorKind.INTERFERED_KNOWN_H, DetectorKind.INTERFERED_UNKNOWN_H):
        comm_of = comm_power if callable(comm_power) else (lambda _ps: comm_power)

        def gap(p_s: float) -> float:
            params = _interfered_params(link, t_symbols, p_s, comm_of(p_s))
            pd_val, _ = _pd_at_pfa(kind, params, targets.pfa_delta)
            return pd_val - targets.pd_min
        return _bisect_power_db(gap)

    raise DomainError(f"unknown detector kind {kind!r}")


def _infeasible(case: CaseId) -> AllocationResult:
    return AllocationResult(case=case, p_min_w=math.inf, rho_c=math.nan,
                            kappa=math.nan, feasible=False, binding=frozenset(),
                            p_sensing_w=math.inf)


def solve_case(case: CaseId, targets: QosTargets, link: LinkBudget,
               t_symbols: int, estimated_sc: bool = False) -> AllocationResult:
    """Minimum total power and optimal split for one case.

    The monotone detector families make the sensing solves feasible at some
    finite power; the bracket cap is still guarded and surfaces as an
    infeasible result rather than an exception.
    """
    kind = sensing_kind(case, estimated_sc)
    gain = 2.0 ** targets.r_min - 1.0
    comm_free = gain * link.sigma_c2_w / link.g_c

    if kind in (DetectorKind.COHERENT_KNOWN_H, DetectorKind.GLRT_UNKNOWN_H,
                DetectorKind.ENERGY_ESTIMATED_SC):
        # assisted: rho_c = 1; the sensing-free and interfered rates coincide there
        try:
            p_sens = min_sensing_power(kind, targets, link, t_symbols)
        except NumericError:
            return _infeasible(case)
        p_min = max(p_sens, comm_free)
        if math.isclose(p_sens, comm_free, rel_tol=1e-9):
            binding = frozenset({"rate", "pd"})
        elif p_sens > comm_free:
            binding = frozenset({"pd"})
        else:
            binding = frozenset({"rate"})
        params = _assisted_params(link, t_symbols, p_min)
        kappa = detectors.threshold_for_pfa(kind, params, targets.pfa_delta)
        return AllocationResult(case=case, p_min_w=p_min, rho_c=1.0, kappa=kappa,
                                feasible=True, binding=binding, p_sensing_w=p_sens)

    # interfered sensing: rate constraint tight, nested solve on sensing power
    if comm_mode(case) == "free":
        comm_of = lambda _ps: comm_free
    else:
        comm_of = lambda ps: gain * (ps * link.g_c + link.sigma_c2_w) / link.g_c

    try:
        p_sens = min_sensing_power(kind, targets, link, t_symbols, comm_of)
    except NumericError:
        return _infeasible(case)
    p_comm = comm_of(p_sens)
    p_min = p_comm + p_sens
    rho_c = p_comm / p_min
    params = _interfered_params(link, t_symbols, p_sens, p_comm)
    kappa = detectors.threshold_for_pfa(kind, params, targets.pfa_delta)
    binding = frozenset({"rate", "pd"}) if p_sens > 0 else frozenset({"rate"})
    return AllocationResult(case=case, p_min_w=p_min, rho_c=rho_c, kappa=kappa,
                            feasible=True, binding=binding, p_sensing_w=p_sens)


def solve_all_cases(targets: QosTargets, link: LinkBudget,
                    t_symbols: int) -> dict[CaseId, AllocationResult]:
    return {case: solve_case(case, targets, link, t_symbols) for case in CaseId}


def tradeoff_curve(case: CaseId, link: LinkBudget, t_symbols: int, p_w: float,
                   rho_c_grid, pfa_delta: float,
                   estimated_sc: bool = False) -> list[TradeoffPoint]:
    """(rho_c, rate, PD at PFA = pfa_delta) along a power-split sweep at
    fixed total power.  Singular rho_c = 0 points of the interfered kinds
    are emitted with ``skipped=True`` and NaN probability."""
    kind = sensing_kind(case, estimated_sc)
    mode = comm_mode(case)
    points = []
    for rho_c in rho_c_grid:
        rho_c = float(rho_c)
        if mode == "free":
            r = rate.rate_sensing_free(p_w, rho_c, link.g_c, link.sigma_c2_w)
        else:
            r = rate.rate_sensing_interfered(p_w, rho_c, link.g_c, link.sigma_c2_w)
        if kind in (DetectorKind.INTERFERED_KNOWN_H, DetectorKind.INTERFERED_UNKNOWN_H):
            if rho_c <= 0.0:
                points.append(TradeoffPoint(rho_c=rho_c, rate=r, pd=math.nan, skipped=True))
                continue
            params = detectors.params_from_link(link, t_symbols, rho_c=rho_c, p_w=p_w)
        else:
            params = _assisted_params(link, t_symbols, p_w)
        pd_val, _ = _pd_at_pfa(kind, params, pfa_delta)
        points.append(TradeoffPoint(rho_c=rho_c, rate=r, pd=pd_val))
    return points


def rc_coexistence_pd(link: LinkBudget, t_symbols: int, p_w: float, rho_s: float,
                      pfa_delta: float) -> float:
    """Radar/communication time-sharing baseline: the coherent detector
    run with half the symbols and only the sensing share of the power."""
    if not (0.0 <= rho_s <= 1.0):
        raise DomainError("rho_s must lie in [0, 1]")
    t_half = max(t_symbols // 2, 1)
    lam = rho_s * p_w * t_half * link.g_s / link.sigma_s2_w
    if lam <= 0.0:
        return pfa_delta  # chance-level endpoint of the ROC
    params = SensingParams(snr_total=lam, t_symbols=t_half)
    pd_val, _ = _pd_at_pfa(DetectorKind.COHERENT_KNOWN_H, params, pfa_delta)
    return pd_val


def verify_allocation(case: CaseId, result: AllocationResult, targets: QosTargets,
                      link: LinkBudget, t_symbols: int,
                      probe_db: float = 0.05, estimated_sc: bool = False) -> dict:
    """Feasibility certificate for a solved case.

    Re-evaluates the rate and the PD at the solution through the rate and
    detector modules, and checks that shrinking the total power by
    ``probe_db`` violates at least one constraint under the case's own
    allocation rule (local minimality).
    """
    kind = sensing_kind(case, estimated_sc)
    mode = comm_mode(case)

    if mode == "free":
        achieved_rate = rate.rate_sensing_free(result.p_min_w, result.rho_c,
                                               link.g_c, link.sigma_c2_w)
    else:
        achieved_rate = rate.rate_sensing_interfered(result.p_min_w, result.rho_c,
                                                     link.g_c, link.sigma_c2_w)

    if kind in (DetectorKind.INTERFERED_KNOWN_H, DetectorKind.INTERFERED_UNKNOWN_H):
        params = _interfered_params(link, t_symbols, result.p_sensing_w,
                                    result.p_min_w - result.p_sensing_w)
    else:
        params = _assisted_params(link, t_symbols, result.p_min_w)
    achieved_pd, kappa = _pd_at_pfa(kind, params, targets.pfa_delta)
    achieved_pfa = detectors.pfa(kind, params.at(kappa))

    # local-minimality probe: shrink total power, keep the case's allocation rule
    p_red = result.p_min_w * 10.0 ** (-probe_db / 10.0)
    if kind in (DetectorKind.COHERENT_KNOWN_H, DetectorKind.GLRT_UNKNOWN_H,
                DetectorKind.ENERGY_ESTIMATED_SC):
        rate_red = rate.rate_sensing_free(p_red, 1.0, link.g_c, link.sigma_c2_w)
        pd_red, _ = _pd_at_pfa(kind, _assisted_params(link, t_symbols, p_red),
                               targets.pfa_delta)
    else:
        # reduce sensing and communication proportionally, then re-check both
        p_sens_red = result.p_sensing_w * p_red / result.p_min_w
        p_comm_red = p_red - p_sens_red
        if mode == "free":
            rate_red = rate.rate_sensing_free(p_red, p_comm_red / p_red,
                                              link.g_c, link.sigma_c2_w)
        else:
            rate_red = rate.rate_sensing_interfered(p_red, p_comm_red / p_red,
                                                    link.g_c, link.sigma_c2_w)
        if result.p_sensing_w > 0:
            pd_red, _ = _pd_at_pfa(
                kind, _interfered_params(link, t_symbols, p_sens_red, p_comm_red),
                targets.pfa_delta)
        else:
            pd_red = achieved_pd
    violated = []
    if rate_red < targets.r_min - 1e-12:
        violated.append("rate")
    if pd_red < targets.pd_min - 1e-12:
        violated.append("pd")

    return {
        "rate": achieved_rate,
        "pd": achieved_pd,
        "pfa": achieved_pfa,
        "kappa": kappa,
        "reduced_power_violates": tuple(violated),
    }
