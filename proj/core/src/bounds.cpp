#include "simbound/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace simbound::bounds {

namespace {

void check_eps(double eps_r, double eps_t) {
    if (!(eps_r >= 0.0 && eps_r <= 1.0)) {
        throw std::invalid_argument("bounds: eps_r must lie in [0,1]");
    }
    if (!(eps_t >= 0.0 && eps_t <= 2.0)) {
        throw std::invalid_argument("bounds: eps_t must lie in [0,2]");
    }
}

void check_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("bounds: discount must lie in [0,1)");
    }
}

void check_horizon(int horizon) {
    if (horizon < 1) throw std::invalid_argument("bounds: horizon must be >= 1");
}

// (1 - (1-x)^h) / x for x in (0, 1]; expm1/log1p keeps full precision for
// tiny x, where the direct form loses ~9 digits to cancellation.
double geometric_partial_sum(double x, int h) {
    if (x == 1.0) return 1.0;
    return -std::expm1(static_cast<double>(h) * std::log1p(-x)) / x;
}

}  // namespace

double original_bound(double eps_r, double eps_t, double gamma) {
    check_eps(eps_r, eps_t);
    check_gamma(gamma);
    const double one_minus = 1.0 - gamma;
    return eps_r / one_minus + gamma * eps_t / (2.0 * one_minus * one_minus);
}

double tight_bound(double eps_r, double eps_t, double gamma) {
    check_eps(eps_r, eps_t);
    check_gamma(gamma);
    // Denominator written as a sum of non-negative terms; 1 - g(1 - e/2)
    // cancels badly as gamma -> 1.
    const double denom = (1.0 - gamma) + gamma * (eps_t / 2.0);
    return 1.0 / (1.0 - gamma) - (1.0 - eps_r) / denom;
}

double overlap_lower_bound(double eps_t, int t) {
    check_eps(0.0, eps_t);
    if (t < 0) throw std::invalid_argument("overlap_lower_bound: t >= 0");
    return std::pow(1.0 - eps_t / 2.0, t);
}

double l1_drift_bound(double eps_t, int t) {
    check_eps(0.0, eps_t);
    if (t < 0) throw std::invalid_argument("l1_drift_bound: t >= 0");
    return std::min(2.0, static_cast<double>(t) * eps_t);
}

double fh_original_bound(double eps_r, double eps_t, int horizon) {
    check_eps(eps_r, eps_t);
    check_horizon(horizon);
    const double h = horizon;
    return eps_r * h + eps_t * h * (h - 1.0) / 4.0;
}

double fh_tight_bound(double eps_r, double eps_t, int horizon) {
    check_eps(eps_r, eps_t);
    check_horizon(horizon);
    if (eps_t == 0.0) return eps_r * horizon;
    return horizon - (1.0 - eps_r) * geometric_partial_sum(eps_t / 2.0, horizon);
}

double hierarchy_existing_bound(double eps_r, double eps_t, double gamma, int n_states,
                                double r_max) {
    check_gamma(gamma);
    if (n_states < 2) throw std::invalid_argument("hierarchy bounds: need |S| >= 2");
    if (r_max <= 0.0) throw std::invalid_argument("hierarchy bounds: r_max must be > 0");
    if (!(eps_r >= 0.0 && eps_r <= r_max)) {
        throw std::invalid_argument("hierarchy bounds: eps_r must lie in [0, r_max]");
    }
    if (eps_t < 0.0) throw std::invalid_argument("hierarchy bounds: eps_t must be >= 0");
    const double one_minus = 1.0 - gamma;
    return (eps_r + n_states * eps_t * r_max) / (one_minus * one_minus);
}

double hierarchy_tight_bound(double eps_r, double eps_t, double gamma, int n_states,
                             double r_max) {
    check_gamma(gamma);
    if (n_states < 2) throw std::invalid_argument("hierarchy bounds: need |S| >= 2");
    if (r_max <= 0.0) throw std::invalid_argument("hierarchy bounds: r_max must be > 0");
    if (!(eps_r >= 0.0 && eps_r <= r_max)) {
        throw std::invalid_argument("hierarchy bounds: eps_r must lie in [0, r_max]");
    }
    if (eps_t < 0.0) throw std::invalid_argument("hierarchy bounds: eps_t must be >= 0");
    const double denom = (1.0 - gamma) + (n_states - 1) * eps_t;
    return r_max / (1.0 - gamma) - (r_max - eps_r) / denom;
}

double optimal_policy_loss_bound(double eps_r, double eps_t, double gamma) {
    return 2.0 * tight_bound(eps_r, eps_t, gamma);
}

double linearization_gap(double eps_r, double eps_t, double gamma) {
    return original_bound(eps_r, eps_t, gamma) - tight_bound(eps_r, eps_t, gamma);
}

namespace {

double safe_ratio(double original, double tight) {
    // Both bounds vanish together (only at zero misspecification), where the
    // linearization makes the limiting ratio 1.
    if (tight == 0.0) return 1.0;
    return original / tight;
}

}  // namespace

BoundReport discounted_report(double eps_r, double eps_t, double gamma,
                              std::optional<double> measured_gap) {
    BoundReport report;
    report.original = original_bound(eps_r, eps_t, gamma);
    report.tight = tight_bound(eps_r, eps_t, gamma);
    report.v_max = 1.0 / (1.0 - gamma);
    report.ratio_original_over_tight = safe_ratio(report.original, report.tight);
    report.measured_gap = measured_gap;
    return report;
}

BoundReport finite_horizon_report(double eps_r, double eps_t, int horizon,
                                  std::optional<double> measured_gap) {
    BoundReport report;
    report.original = fh_original_bound(eps_r, eps_t, horizon);
    report.tight = fh_tight_bound(eps_r, eps_t, horizon);
    report.v_max = horizon;
    report.ratio_original_over_tight = safe_ratio(report.original, report.tight);
    report.measured_gap = measured_gap;
    return report;
}

BoundReport hierarchy_report(double eps_r, double eps_t, double gamma, int n_states,
                             double r_max, std::optional<double> measured_gap) {
    BoundReport report;
    report.original = hierarchy_existing_bound(eps_r, eps_t, gamma, n_states, r_max);
    report.tight = hierarchy_tight_bound(eps_r, eps_t, gamma, n_states, r_max);
    report.v_max = r_max / (1.0 - gamma);
    report.ratio_original_over_tight = safe_ratio(report.original, report.tight);
    report.measured_gap = measured_gap;
    return report;
}

}  // namespace simbound::bounds
