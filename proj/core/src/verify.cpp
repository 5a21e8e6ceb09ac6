#include "simbound/verify.hpp"

#include "simbound/adversary.hpp"
#include "simbound/bounds.hpp"
#include "simbound/hierarchy.hpp"
#include "simbound/mdp.hpp"
#include "simbound/rng.hpp"
#include "simbound/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace simbound::verify {

namespace {

constexpr int kTrajectorySteps = 30;

struct Suite {
    SuiteSummary summary;

    explicit Suite(std::string name, double tolerance) {
        summary.name = std::move(name);
        summary.tolerance = tolerance;
    }

    // quantity must stay at or below bound (+ absolute tolerance).
    void check_upper(double quantity, double bound) {
        ++summary.checks;
        if (quantity > bound + summary.tolerance) ++summary.violations;
        if (bound > 0.0) {
            summary.max_ratio = std::max(summary.max_ratio, quantity / bound);
        } else if (quantity > summary.tolerance) {
            summary.max_ratio = std::numeric_limits<double>::infinity();
        }
    }
};

Matrix random_stochastic_rows(Rng& rng, int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        double sum = 0.0;
        for (int j = 0; j < cols; ++j) {
            const double v = -std::log(1.0 - rng.uniform());
            m(i, j) = v;
            sum += v;
        }
        m.row(i) /= sum;
    }
    return m;
}

Mdp random_mdp(Rng& rng, int n, int m, double gamma) {
    std::vector<Matrix> transitions(m);
    for (int a = 0; a < m; ++a) transitions[a] = random_stochastic_rows(rng, n, n);
    Matrix rewards(n, m);
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < m; ++a) rewards(s, a) = rng.uniform();
    }
    return Mdp::renormalized(std::move(transitions), std::move(rewards), gamma);
}

double gamma_for_trial(int trial) {
    constexpr double kGammas[] = {0.5, 0.9, 0.99};
    return kGammas[trial % 3];
}

}  // namespace

Summary run_verification(int trials, int max_states, int max_actions,
                         std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("verify: trials >= 1");
    if (max_states < 2) throw std::invalid_argument("verify: max_states >= 2");
    if (max_actions < 1) throw std::invalid_argument("verify: max_actions >= 1");

    Summary summary;
    summary.seed = seed;
    summary.trials = trials;
    summary.max_states = max_states;
    summary.max_actions = max_actions;

    Suite tvd_identity("tvd_identity", 1e-12);
    Suite overlap_decay("overlap_decay", 1e-10);
    Suite overlap_retention("overlap_retention", 1e-12);
    Suite l1_drift("l1_drift", 1e-12);
    Suite policy_misspec("policy_misspec", 1e-12);
    Suite theorem_soundness("theorem_soundness", 1e-9);
    Suite original_soundness("original_soundness", 1e-9);
    Suite bounds_dominance("bounds_dominance", 1e-9);
    Suite hierarchy_soundness("hierarchy_soundness", 1e-9);
    Suite hierarchy_row_mass("hierarchy_row_mass", 1e-12);

    // --- MDP-pair trials: overlap machinery and value-gap soundness --------
    {
        Rng rng(seed, 0);
        for (int trial = 0; trial < trials; ++trial) {
            const int n = 2 + rng.uniform_int(max_states - 1);
            const int m = 1 + rng.uniform_int(max_actions);
            const double gamma = gamma_for_trial(trial);
            const Mdp base = random_mdp(rng, n, m, gamma);
            const double eps_t = 2.0 * rng.uniform() * rng.uniform();
            const double eps_r = rng.uniform() * rng.uniform();
            const Mdp perturbed =
                adversary::perturb_within(base, eps_t, eps_r, rng.next_u64());
            const Policy policy = Policy::stationary(random_stochastic_rows(rng, n, m));
            const int s0 = rng.uniform_int(n);

            const MisspecReport misspec = measure_misspec(base, perturbed);

            // Per-policy transition distance never exceeds the per-action max.
            const PolicyMatrices pm = build_policy_matrices(base, policy);
            const PolicyMatrices pm_hat = build_policy_matrices(perturbed, policy);
            for (int s = 0; s < n; ++s) {
                policy_misspec.check_upper(
                    (pm.p_pi.row(s) - pm_hat.p_pi.row(s)).lpNorm<1>(), misspec.eps_t);
            }

            const DistributionSeries series =
                overlap_trajectory(base, perturbed, policy, s0, kTrajectorySteps);
            const double retention = 1.0 - misspec.eps_t / 2.0;
            for (int t = 0; t <= kTrajectorySteps; ++t) {
                const double mass = series.overlap_mass[t];
                const double l1 = (series.p[t] - series.p_hat[t]).lpNorm<1>();
                tvd_identity.check_upper(std::abs(mass - (1.0 - l1 / 2.0)), 0.0);
                overlap_decay.check_upper(bounds::overlap_lower_bound(misspec.eps_t, t),
                                          mass);
                if (t > 0) {
                    overlap_retention.check_upper(series.overlap_mass[t - 1] * retention,
                                                  mass);
                    l1_drift.check_upper(l1, bounds::l1_drift_bound(misspec.eps_t, t));
                }
            }

            const Vector v = exact_value(base, policy);
            const Vector v_hat = exact_value(perturbed, policy);
            const double gap = (v - v_hat).lpNorm<Eigen::Infinity>();
            const double tight =
                bounds::tight_bound(misspec.eps_r, misspec.eps_t, gamma);
            const double original =
                bounds::original_bound(misspec.eps_r, misspec.eps_t, gamma);
            const double v_max = 1.0 / (1.0 - gamma);
            if (tight > 0.0) theorem_soundness.check_upper(gap, tight);
            if (original > 0.0 && original < v_max) {
                original_soundness.check_upper(gap, original);
            }
        }

        // Tightness witness: the search space contains a pair achieving the
        // bound exactly, so the suite's max ratio is pinned at 1.
        const auto pair = witness::two_state_witness(0.25, 0.5, 0.9);
        const Vector v = exact_value(pair.m, pair.policy);
        const Vector v_hat = exact_value(pair.m_hat, pair.policy);
        const MisspecReport misspec = measure_misspec(pair.m, pair.m_hat);
        theorem_soundness.check_upper(
            (v - v_hat).lpNorm<Eigen::Infinity>(),
            bounds::tight_bound(misspec.eps_r, misspec.eps_t, 0.9));
    }

    // --- bound dominance grids ---------------------------------------------
    {
        for (int ig = 0; ig <= 19; ++ig) {
            const double gamma = 0.999 * ig / 19.0;
            for (int ir = 0; ir <= 20; ++ir) {
                const double eps_r = ir / 20.0;
                for (int it = 0; it <= 20; ++it) {
                    const double eps_t = 2.0 * it / 20.0;
                    bounds_dominance.check_upper(
                        bounds::tight_bound(eps_r, eps_t, gamma),
                        bounds::original_bound(eps_r, eps_t, gamma));
                    const int horizon = 1 + 2 * it + ir;
                    bounds_dominance.check_upper(
                        bounds::fh_tight_bound(eps_r, eps_t, horizon),
                        bounds::fh_original_bound(eps_r, eps_t, horizon));
                    const int n_states = 2 + it;
                    const double eps_entry = eps_r / (n_states - 1);
                    bounds_dominance.check_upper(
                        bounds::hierarchy_tight_bound(eps_r, eps_entry, gamma, n_states,
                                                      1.0),
                        bounds::hierarchy_existing_bound(eps_r, eps_entry, gamma,
                                                         n_states, 1.0));
                }
            }
        }
    }

    // --- option-model soundness ---------------------------------------------
    {
        Rng rng(seed, 1);
        const int option_trials = std::max(1, trials / 10);
        for (int trial = 0; trial < option_trials; ++trial) {
            const int n = 2 + rng.uniform_int(std::min(max_states, 5) - 1);
            const int m = 1 + rng.uniform_int(max_actions);
            const double gamma = gamma_for_trial(trial);
            const Mdp base = random_mdp(rng, n, m, gamma);
            const Mdp perturbed = adversary::perturb_within(
                base, 0.5 * rng.uniform(), 0.5 * rng.uniform(), rng.next_u64());

            const int n_abstract = 1 + rng.uniform_int(n);
            std::vector<int> phi(n);
            for (int s = 0; s < n; ++s) {
                phi[s] = s < n_abstract ? s : rng.uniform_int(n_abstract);
            }
            const hierarchy::StateAbstraction abstraction(phi, n_abstract);

            hierarchy::OptionSet o_star{gamma, n, {}};
            hierarchy::OptionSet o_hat{gamma, n, {}};
            std::vector<int> selected(n_abstract);
            for (int k = 0; k < n_abstract; ++k) {
                hierarchy::PhiOption option{k, random_stochastic_rows(rng, n, m)};
                o_star.options.push_back(hierarchy::augment_absorbing(
                    hierarchy::multi_time_model(base, abstraction, option), gamma));
                o_hat.options.push_back(hierarchy::augment_absorbing(
                    hierarchy::multi_time_model(perturbed, abstraction, option), gamma));
                selected[k] = k;
            }

            for (const auto& set : {o_star, o_hat}) {
                for (const auto& model : set.options) {
                    for (Eigen::Index i = 0; i < model.p.rows(); ++i) {
                        hierarchy_row_mass.check_upper(
                            std::abs(model.p.row(i).sum() - gamma), 0.0);
                    }
                }
            }

            const auto [eps_t, eps_r] = hierarchy::option_misspec(o_star, o_hat);
            double r_sup = 0.0;
            for (const auto& set : {o_star, o_hat}) {
                for (const auto& model : set.options) {
                    r_sup = std::max(r_sup, model.r.maxCoeff());
                }
            }
            if (r_sup <= 0.0) continue;
            const Vector v = hierarchy::abstract_value(o_star, selected);
            const Vector v_hat = hierarchy::abstract_value(o_hat, selected);
            const double gap = (v - v_hat).lpNorm<Eigen::Infinity>();
            const double bound =
                bounds::hierarchy_tight_bound(eps_r, eps_t, gamma, n, r_sup);
            if (bound > 0.0) hierarchy_soundness.check_upper(gap, bound);
        }

        // Hierarchy witness: pins the suite's max ratio at 1.
        const auto hw = witness::hierarchy_witness(5, 0.2, 0.01, 0.9, 1.0);
        const Vector v = hierarchy::abstract_value(hw.o_star, hw.selected);
        const Vector v_hat = hierarchy::abstract_value(hw.o_hat, hw.selected);
        const auto [eps_t, eps_r] = hierarchy::option_misspec(hw.o_star, hw.o_hat);
        hierarchy_soundness.check_upper(
            (v - v_hat).lpNorm<Eigen::Infinity>(),
            bounds::hierarchy_tight_bound(eps_r, eps_t, 0.9, 5, 1.0));
    }

    for (Suite* suite :
         {&tvd_identity, &overlap_decay, &overlap_retention, &l1_drift, &policy_misspec,
          &theorem_soundness, &original_soundness, &bounds_dominance,
          &hierarchy_soundness, &hierarchy_row_mass}) {
        summary.suites.push_back(suite->summary);
        if (suite->summary.violations > 0) summary.all_passed = false;
    }
    return summary;
}

nlohmann::json summary_to_json(const Summary& summary) {
    nlohmann::json suites = nlohmann::json::array();
    for (const SuiteSummary& suite : summary.suites) {
        suites.push_back({{"name", suite.name},
                          {"checks", suite.checks},
                          {"violations", suite.violations},
                          {"max_ratio", suite.max_ratio},
                          {"tolerance", suite.tolerance}});
    }
    return nlohmann::json{{"seed", summary.seed},
                          {"trials", summary.trials},
                          {"max_states", summary.max_states},
                          {"max_actions", summary.max_actions},
                          {"all_passed", summary.all_passed},
                          {"suites", std::move(suites)}};
}

}  // namespace simbound::verify
