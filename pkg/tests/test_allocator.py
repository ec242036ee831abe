"""Power-allocation tests: closed-form sensing powers, case solutions,
tightness certificates, tradeoff frontiers, and the time-sharing baseline."""

import math

import numpy as np
import pytest

from isacsim import detectors, rate
from isacsim.allocator import (CaseId, QosTargets, min_sensing_power,
                               rc_coexistence_pd, solve_all_cases, solve_case,
                               tradeoff_curve, verify_allocation)
from isacsim.detectors import DetectorKind, SensingParams
from isacsim.errors import DomainError, InvalidTargetsError
from isacsim.scenario import watts_to_dbm

TARGETS = QosTargets(r_min=7.0, pd_min=0.6, pfa_delta=0.01)

# frozen normalized sensing requirements (40-digit oracle):
#   coherent: (Qinv(0.01) - Qinv(0.6))^2 / 2
#   glrt:     Q_1(sqrt(2L), sqrt(2 ln 100)) = 0.6
#   energy:   Q_20(sqrt(2L), sqrt(2k)) = 0.6 with regupper(20, k) = 0.01
LAM_COH = 3.3274130876351949
LAM_GLRT = 4.875753306262677
LAM_ENERGY_T20 = 13.994042736730350


class TestQosTargets:
    def test_detectability_ordering(self):
        with pytest.raises(InvalidTargetsError):
            QosTargets(r_min=1.0, pd_min=0.01, pfa_delta=0.6)
        with pytest.raises(InvalidTargetsError):
            QosTargets(r_min=-1.0, pd_min=0.6, pfa_delta=0.01)


class TestMinSensingPower:
    def test_coherent_closed_form(self, unit_link):
        t = 20
        p = min_sensing_power(DetectorKind.COHERENT_KNOWN_H, TARGETS, unit_link, t)
        assert p * t == pytest.approx(LAM_COH, rel=1e-9)

    def test_vanishes_as_pd_target_meets_pfa(self, unit_link):
        t = 20
        base = min_sensing_power(DetectorKind.COHERENT_KNOWN_H, TARGETS, unit_link, t)
        tight = QosTargets(r_min=7.0, pd_min=0.0101, pfa_delta=0.01)
        assert min_sensing_power(DetectorKind.COHERENT_KNOWN_H, tight, unit_link, t) \
            < 1e-4 * base

    def test_glrt_round_trip(self, unit_link):
        t = 20
        p = min_sensing_power(DetectorKind.GLRT_UNKNOWN_H, TARGETS, unit_link, t)
        assert p * t == pytest.approx(LAM_GLRT, rel=1e-5)
        params = SensingParams(snr_total=p * t, t_symbols=t)
        kappa = detectors.threshold_for_pfa(DetectorKind.GLRT_UNKNOWN_H, params, 0.01)
        assert detectors.glrt_unknown_h_pd(params.at(kappa)) == \
            pytest.approx(0.6, abs=1e-6)

    def test_energy_round_trip(self, unit_link):
        t = 20
        p = min_sensing_power(DetectorKind.ENERGY_ESTIMATED_SC, TARGETS, unit_link, t)
        assert p * t == pytest.approx(LAM_ENERGY_T20, rel=1e-5)


class TestSolveCase:
    def test_assisted_cases_allocate_everything_to_comm(self, default_link):
        for case in (CaseId.I, CaseId.II, CaseId.V, CaseId.VI):
            res = solve_case(case, TARGETS, default_link, 20)
            assert res.rho_c == 1.0 and res.feasible

    def test_case_v_equals_case_i_exactly(self, default_link):
        a = solve_case(CaseId.I, TARGETS, default_link, 20)
        b = solve_case(CaseId.V, TARGETS, default_link, 20)
        assert a.p_min_w == b.p_min_w and a.kappa == b.kappa
        a = solve_case(CaseId.II, TARGETS, default_link, 20)
        b = solve_case(CaseId.VI, TARGETS, default_link, 20)
        assert a.p_min_w == b.p_min_w and a.kappa == b.kappa

    def test_degenerate_rate_target(self, default_link):
        targets = QosTargets(r_min=0.0, pd_min=0.6, pfa_delta=0.01)
        res = solve_case(CaseId.I, targets, default_link, 20)
        assert res.rho_c == 1.0
        assert res.p_min_w == pytest.approx(res.p_sensing_w)
        assert res.binding == frozenset({"pd"})

    def test_interfered_cases_pin_both_constraints(self, default_link,
                                                   default_allocations):
        for case in (CaseId.III, CaseId.IV, CaseId.VII, CaseId.VIII):
            res = default_allocations[case]
            cert = verify_allocation(case, res, TARGETS, default_link, 20)
            assert cert["rate"] >= TARGETS.r_min - 1e-9
            assert cert["pd"] == pytest.approx(TARGETS.pd_min, abs=1e-6)
            assert cert["pfa"] == pytest.approx(TARGETS.pfa_delta, abs=1e-6)
            assert cert["reduced_power_violates"], case

    def test_case_iii_rate_exactly_at_target(self, default_link, default_allocations):
        res = default_allocations[CaseId.III]
        achieved = rate.rate_sensing_free(res.p_min_w, res.rho_c,
                                          default_link.g_c, default_link.sigma_c2_w)
        assert achieved == pytest.approx(TARGETS.r_min, abs=1e-9)

    def test_case_vii_costs_at_least_case_iii(self, unit_link):
        for pd_min in (0.3, 0.6, 0.9):
            targets = QosTargets(r_min=5.0, pd_min=pd_min, pfa_delta=0.01)
            p3 = solve_case(CaseId.III, targets, unit_link, 20).p_min_w
            p7 = solve_case(CaseId.VII, targets, unit_link, 20).p_min_w
            assert p7 >= p3 - 1e-12

    def test_monotone_in_targets(self, default_link):
        base = solve_case(CaseId.I, TARGETS, default_link, 20).p_min_w
        higher_rate = QosTargets(r_min=9.0, pd_min=0.6, pfa_delta=0.01)
        higher_pd = QosTargets(r_min=7.0, pd_min=0.95, pfa_delta=0.01)
        assert solve_case(CaseId.I, higher_rate, default_link, 20).p_min_w >= base
        assert solve_case(CaseId.I, higher_pd, default_link, 20).p_min_w >= base

    def test_estimated_sc_variant_needs_more_power(self, default_link):
        plain = solve_case(CaseId.I, TARGETS, default_link, 20)
        est = solve_case(CaseId.I, TARGETS, default_link, 20, estimated_sc=True)
        assert est.p_min_w >= plain.p_min_w

    def test_solve_all_cases(self, default_allocations):
        assert set(default_allocations) == set(CaseId)
        assert all(res.feasible for res in default_allocations.values())

    def test_reference_deltas(self, default_link):
        # normalized sensing-requirement ratios pin the assisted-case gaps
        p1 = solve_case(CaseId.I, TARGETS, default_link, 20)
        p2 = solve_case(CaseId.II, TARGETS, default_link, 20)
        gap = watts_to_dbm(p2.p_min_w) - watts_to_dbm(p1.p_min_w)
        assert gap == pytest.approx(10 * math.log10(LAM_GLRT / LAM_COH), abs=5e-3)


class TestTradeoff:
    def test_assisted_pd_constant(self, default_link):
        pts = tradeoff_curve(CaseId.I, default_link, 20, 6.4, np.linspace(0, 1, 11), 0.01)
        pds = {round(p.pd, 12) for p in pts}
        assert len(pds) == 1

    def test_interfered_monotonicity(self, unit_link):
        pts = tradeoff_curve(CaseId.VII, unit_link, 20, 1.0,
                             np.linspace(0.05, 1.0, 15), 0.01)
        rates = [p.rate for p in pts]
        pds = [p.pd for p in pts]
        assert all(b >= a - 1e-12 for a, b in zip(rates, rates[1:]))
        assert all(b <= a + 1e-9 for a, b in zip(pds, pds[1:]))

    def test_full_comm_endpoint_matches_pure_rate(self, default_link):
        pts = tradeoff_curve(CaseId.I, default_link, 20, 6.4, [1.0], 0.01)
        expected = rate.rate_sensing_free(6.4, 1.0, default_link.g_c,
                                          default_link.sigma_c2_w)
        assert pts[0].rate == pytest.approx(expected, rel=1e-12)

    def test_singular_origin_skipped(self, unit_link):
        pts = tradeoff_curve(CaseId.III, unit_link, 20, 1.0, [0.0, 0.5], 0.01)
        assert pts[0].skipped and math.isnan(pts[0].pd)
        assert not pts[1].skipped


class TestRcBaseline:
    def test_never_beats_assisted_isac(self, unit_link):
        # half the symbols and a power split cannot beat the full coherent
        # detector at equal total power
        t, p_w, pfa = 20, 0.8, 0.01
        params = SensingParams(snr_total=p_w * t, t_symbols=t)
        kappa = detectors.threshold_for_pfa(DetectorKind.COHERENT_KNOWN_H, params, pfa)
        pd_isac = detectors.coherent_pd(params.at(kappa))
        for rho_s in np.linspace(0.0, 1.0, 11):
            assert rc_coexistence_pd(unit_link, t, p_w, float(rho_s), pfa) <= pd_isac + 1e-12

    def test_chance_level_at_zero_power(self, unit_link):
        assert rc_coexistence_pd(unit_link, 20, 1.0, 0.0, 0.01) == pytest.approx(0.01)

    def test_domain(self, unit_link):
        with pytest.raises(DomainError):
            rc_coexistence_pd(unit_link, 20, 1.0, 1.5, 0.01)
