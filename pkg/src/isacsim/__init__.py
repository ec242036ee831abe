"""isacsim: detection/rate analysis and power allocation for a single-user,
single-target integrated sensing and communication link.

Layers:
  specfun    - special-function kernel (Q, incomplete gamma, Bessel I,
               Marcum Q, non-central chi-square, Chebyshev-Gauss nodes)
  scenario   - geometry, COST-Hata path loss, link budgets, power splits
  rate       - achievable-rate formulas and their inversions
  detectors  - closed-form PFA/PD for the five detector scenarios
  montecarlo - simulation oracle validating every closed form
  allocator  - minimum-power solutions for the eight operating cases
  cli        - csv/json (and optional figure) front end
"""

__version__ = "0.1.0"

from .allocator import (AllocationResult, CaseId, QosTargets, min_sensing_power,
                        rc_coexistence_pd, solve_all_cases, solve_case,
                        tradeoff_curve, verify_allocation)
from .detectors import (ApproxCoefficients, DetectorKind, OperatingPoint,
                        SensingParams, default_kappa_grid, lambda_scale,
                        params_from_link, roc_curve, threshold_for_pfa)
from .errors import (DomainError, H0LimitError, InvalidTargetsError, IsacError,
                     NumericError, SingularConfigError)
from .montecarlo import (EmpiricalRoc, TrialBatch, ValidationReport,
                         WaveformModel, empirical_roc, validate)
from .scenario import (Geometry, LinkBudget, PowerSplit, ScenarioConfig,
                       build_link_budget, cost_hata_path_loss, default_scenario,
                       dbm_to_watts, load_config, save_config, watts_to_dbm)
from .specfun import (Tolerance, bessel_i, chebyshev_gauss_nodes, marcum_q,
                      marcum_q_inv_b, noncentral_chi2_sample, q_function,
                      q_inverse, reg_lower_gamma, reg_upper_gamma)
