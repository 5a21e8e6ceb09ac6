#pragma once

#include <optional>

namespace simbound::bounds {

/**
Closed-form bounds on the value error |V - V_hat| between two MDPs whose
transition rows differ by at most eps_t in L1 and whose expected rewards
differ by at most eps_r, for any shared policy.

Inputs are validated, never clamped: eps_r outside [0,1], eps_t outside
[0,2] or a discount outside [0,1) indicate a measurement bug upstream and
are rejected with std::invalid_argument.
*/

/// Classic recursion-based bound: eps_r/(1-g) + g*eps_t / (2(1-g)^2).
double original_bound(double eps_r, double eps_t, double gamma);

/// Tight bound: 1/(1-g) - (1-eps_r) / (1 - g(1 - eps_t/2)). Achieved exactly
/// by the two-state witness pair, so no smaller bound is valid.
double tight_bound(double eps_r, double eps_t, double gamma);

/// Geometric lower bound (1 - eps_t/2)^t on the overlap mass of the two
/// MDPs' t-step state distributions from a shared start.
double overlap_lower_bound(double eps_t, int t);

/// Linear drift bound min(2, t*eps_t) on ||P^t - P_hat^t||_1; the naive L1
/// recursion accumulates eps_t per step and is capped by the simplex diameter.
double l1_drift_bound(double eps_t, int t);

/// Finite-horizon recursion bound: eps_r*H + eps_t*H(H-1)/4.
double fh_original_bound(double eps_r, double eps_t, int horizon);

/// Finite-horizon tight bound: H - (1-eps_r)(2/eps_t)(1 - (1-eps_t/2)^H),
/// with the removable eps_t = 0 singularity evaluated as eps_r*H.
double fh_tight_bound(double eps_r, double eps_t, int horizon);

/// Prior value-loss bound for option models: (eps_r + |S| eps_t R_MAX)/(1-g)^2.
/// Here eps_t is a per-entry transition gap, not a per-row L1 distance.
double hierarchy_existing_bound(double eps_r, double eps_t, double gamma, int n_states,
                                double r_max);

/// Tight option-model bound: R_MAX/(1-g) - (R_MAX - eps_r)/(1 - g + (|S|-1) eps_t).
double hierarchy_tight_bound(double eps_r, double eps_t, double gamma, int n_states,
                             double r_max);

/// Value loss of executing a policy that is optimal for the misspecified
/// model on the true one: twice the tight bound.
double optimal_policy_loss_bound(double eps_r, double eps_t, double gamma);

/// original_bound - tight_bound (>= 0). The original bound is the first-order
/// expansion of the tight one around zero misspecification, so this gap
/// shrinks quadratically.
double linearization_gap(double eps_r, double eps_t, double gamma);

/// Bound values assembled for reporting, with the maximum attainable value
/// for normalization.
struct BoundReport {
    double original = 0.0;
    double tight = 0.0;
    double v_max = 0.0;
    double ratio_original_over_tight = 1.0;
    std::optional<double> measured_gap;
};

BoundReport discounted_report(double eps_r, double eps_t, double gamma,
                              std::optional<double> measured_gap = std::nullopt);
BoundReport finite_horizon_report(double eps_r, double eps_t, int horizon,
                                  std::optional<double> measured_gap = std::nullopt);
BoundReport hierarchy_report(double eps_r, double eps_t, double gamma, int n_states,
                             double r_max,
                             std::optional<double> measured_gap = std::nullopt);

}  // namespace simbound::bounds
