#include "simbound/witness.hpp"

#include "simbound/bounds.hpp"
#include "simbound/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace simbound;

TEST_CASE("two_state_witness structure and measured misspecification") {
    const auto pair = witness::two_state_witness(0.1, 0.3, 0.9);
    CHECK(pair.m.num_states() == 2);
    CHECK(pair.m.num_actions() == 1);
    CHECK(pair.m.transition(0, 0, 0) == 1.0);
    CHECK(pair.m.transition(1, 0, 1) == 1.0);
    CHECK(pair.m.reward(0, 0) == 1.0);
    CHECK(pair.m.reward(1, 0) == 0.0);
    CHECK(pair.m_hat.transition(0, 0, 1) == doctest::Approx(0.15).epsilon(1e-15));

    const MisspecReport report = measure_misspec(pair.m, pair.m_hat);
    CHECK(report.eps_t == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(report.eps_r == doctest::Approx(0.1).epsilon(1e-15));

    CHECK_THROWS_AS(witness::two_state_witness(1.2, 0.3, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(witness::two_state_witness(0.1, 2.3, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(witness::two_state_witness(0.1, 0.3, 1.0), std::invalid_argument);
}

TEST_CASE("two_state_witness: identical pair at zero misspecification") {
    const auto pair = witness::two_state_witness(0.0, 0.0, 0.9);
    const Vector v = exact_value(pair.m, pair.policy);
    const Vector v_hat = exact_value(pair.m_hat, pair.policy);
    CHECK((v - v_hat).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("two_state_witness gap equals the tight bound") {
    // The documented closed forms of both sides.
    const auto pair = witness::two_state_witness(0.1, 0.2, 0.9);
    const Vector v = exact_value(pair.m, pair.policy);
    const Vector v_hat = exact_value(pair.m_hat, pair.policy);
    CHECK(v(0) == doctest::Approx(10.0).epsilon(1e-13));
    CHECK(v_hat(0) == doctest::Approx(0.9 / 0.19).epsilon(1e-13));
    CHECK(v(0) - v_hat(0) ==
          doctest::Approx(5.2631578947368425).epsilon(1e-13));

    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const double eps_r = rng.uniform();
        const double eps_t = 2.0 * rng.uniform();
        const double gamma = 0.99 * rng.uniform();
        const auto w = witness::two_state_witness(eps_r, eps_t, gamma);
        const Vector a = exact_value(w.m, w.policy);
        const Vector b = exact_value(w.m_hat, w.policy);
        const double gap = (a - b).lpNorm<Eigen::Infinity>();
        const double bound = bounds::tight_bound(eps_r, eps_t, gamma);
        CHECK(std::abs(gap - bound) <= 1e-9);

        // Achievability: any strictly smaller constant-factor bound is beaten.
        if (bound > 1e-6) CHECK(gap > 0.99 * bound);

        const MisspecReport report = measure_misspec(w.m, w.m_hat);
        CHECK(std::abs(report.eps_t - eps_t) <= 1e-14);
        CHECK(std::abs(report.eps_r - eps_r) <= 1e-14);
    }
}

TEST_CASE("finite-horizon witness gap equals fh_tight_bound") {
    // H = 1 reduces to the reward error alone.
    const auto one = witness::two_state_witness_fh(0.4, 1.1, 1);
    const Matrix v1 = finite_horizon_value(one.m, one.policy, 1);
    const Matrix v1_hat = finite_horizon_value(one.m_hat, one.policy, 1);
    CHECK(v1(0, 0) - v1_hat(0, 0) == doctest::Approx(0.4).epsilon(1e-14));

    // Saturated reward error: the gap is the whole value range.
    const auto full = witness::two_state_witness_fh(1.0, 0.7, 6);
    const Matrix vf = finite_horizon_value(full.m, full.policy, 6);
    const Matrix vf_hat = finite_horizon_value(full.m_hat, full.policy, 6);
    CHECK(vf(0, 0) - vf_hat(0, 0) == doctest::Approx(6.0).epsilon(1e-13));

    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const double eps_r = rng.uniform();
        const double eps_t = 2.0 * rng.uniform();
        const int horizon = 1 + rng.uniform_int(40);
        const auto w = witness::two_state_witness_fh(eps_r, eps_t, horizon);
        const Matrix v = finite_horizon_value(w.m, w.policy, horizon);
        const Matrix v_hat = finite_horizon_value(w.m_hat, w.policy, horizon);
        const double gap = (v.row(0) - v_hat.row(0)).lpNorm<Eigen::Infinity>();
        CHECK(std::abs(gap - bounds::fh_tight_bound(eps_r, eps_t, horizon)) <= 1e-9);
    }
}

TEST_CASE("hierarchy witness construction") {
    const auto hw = witness::hierarchy_witness(10, 0.1, 0.01, 0.9, 1.0);
    CHECK(hw.o_star.options.size() == 10);

    // Per-entry transition gap equals eps_t on every off-home ground column.
    for (int s = 0; s < 10; ++s) {
        const auto& star = hw.o_star.options[s];
        const auto& hat = hw.o_hat.options[s];
        for (int s2 = 0; s2 < 10; ++s2) {
            const double diff = std::abs(star.p(0, s2) - hat.p(0, s2));
            if (s2 == s) {
                CHECK(diff == 0.0);
            } else {
                CHECK(diff == doctest::Approx(0.01).epsilon(1e-12));
            }
        }
        // Absorbing column entry of the perturbed side: (|S|-1) eps_t.
        CHECK(hat.p(0, 10) == doctest::Approx(9 * 0.01).epsilon(1e-10));
        CHECK(star.p(0, 10) == doctest::Approx(0.0));
        // Augmented rows sum to exactly gamma.
        CHECK(std::abs(star.p.row(0).sum() - 0.9) <= 1e-12);
        CHECK(std::abs(hat.p.row(0).sum() - 0.9) <= 1e-12);
    }

    const auto [eps_t, eps_r] = hierarchy::option_misspec(hw.o_star, hw.o_hat);
    CHECK(eps_t == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(eps_r == doctest::Approx(0.1).epsilon(1e-14));

    CHECK_THROWS_AS(witness::hierarchy_witness(10, 0.1, 0.2, 0.9, 1.0),
                    std::invalid_argument);  // 0.2 > gamma/(|S|-1)
    CHECK_THROWS_AS(witness::hierarchy_witness(1, 0.1, 0.01, 0.9, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(witness::hierarchy_witness(10, 1.5, 0.01, 0.9, 1.0),
                    std::invalid_argument);
}

TEST_CASE("hierarchy witness gap equals hierarchy_tight_bound") {
    const auto hw = witness::hierarchy_witness(10, 0.1, 0.01, 0.9, 1.0);
    const Vector v = hierarchy::abstract_value(hw.o_star, hw.selected);
    const Vector v_hat = hierarchy::abstract_value(hw.o_hat, hw.selected);
    CHECK(v(0) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK((v - v_hat).lpNorm<Eigen::Infinity>() ==
          doctest::Approx(5.2631578947368434).epsilon(1e-12));

    const auto zero = witness::hierarchy_witness(5, 0.0, 0.0, 0.8, 2.0);
    const Vector a = hierarchy::abstract_value(zero.o_star, zero.selected);
    const Vector b = hierarchy::abstract_value(zero.o_hat, zero.selected);
    CHECK((a - b).lpNorm<Eigen::Infinity>() <= 1e-12);

    Rng rng(55);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + rng.uniform_int(24);
        const double gamma = 0.3 + 0.6 * rng.uniform();
        const double r_max = 0.5 + rng.uniform();
        const double eps_r = r_max * rng.uniform();
        const double eps_t = gamma / (n - 1) * rng.uniform();
        const auto w = witness::hierarchy_witness(n, eps_r, eps_t, gamma, r_max);
        const Vector vs = hierarchy::abstract_value(w.o_star, w.selected);
        const Vector vh = hierarchy::abstract_value(w.o_hat, w.selected);
        const double gap = (vs - vh).lpNorm<Eigen::Infinity>();
        const double bound =
            bounds::hierarchy_tight_bound(eps_r, eps_t, gamma, n, r_max);
        CHECK(std::abs(gap - bound) <= 1e-9);
    }
}
