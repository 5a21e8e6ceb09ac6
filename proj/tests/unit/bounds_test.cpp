#include "simbound/bounds.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace simbound::bounds;

TEST_CASE("original_bound") {
    CHECK(original_bound(0.0, 0.0, 0.9) == 0.0);
    // 0.1/0.1 + 0.9*0.2/(2*0.01) = 1 + 9: exactly V_MAX, i.e. vacuous.
    CHECK(original_bound(0.1, 0.2, 0.9) == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(original_bound(0.1, 0.0, 0.5) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK_THROWS_AS(original_bound(0.1, 0.2, 1.0), std::invalid_argument);
}

TEST_CASE("tight_bound closed form and limits") {
    CHECK(tight_bound(0.37, 1.3, 0.0) == doctest::Approx(0.37).epsilon(1e-15));
    CHECK(tight_bound(1.0, 0.6, 0.9) == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(tight_bound(0.0, 0.0, 0.73) == 0.0);
    CHECK(tight_bound(0.1, 0.2, 0.9) ==
          doctest::Approx(5.2631578947368425).epsilon(1e-15));

    // Inputs are rejected, never clamped.
    CHECK_THROWS_AS(tight_bound(-0.1, 0.2, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(tight_bound(1.1, 0.2, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(tight_bound(0.1, 2.2, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(tight_bound(0.1, -0.2, 0.9), std::invalid_argument);
}

TEST_CASE("overlap_lower_bound and l1_drift_bound") {
    CHECK(overlap_lower_bound(0.7, 0) == 1.0);
    CHECK(overlap_lower_bound(2.0, 1) == 0.0);
    CHECK(overlap_lower_bound(2.0, 5) == 0.0);
    CHECK(overlap_lower_bound(0.4, 10) ==
          doctest::Approx(0.10737418240000006).epsilon(1e-15));

    CHECK(l1_drift_bound(0.5, 0) == 0.0);
    CHECK(l1_drift_bound(0.5, 3) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(l1_drift_bound(0.5, 10) == 2.0);
}

TEST_CASE("finite-horizon bounds") {
    CHECK(fh_original_bound(0.3, 0.8, 1) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(fh_original_bound(0.0, 0.2, 5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fh_original_bound(0.0, 0.0, 17) == 0.0);

    CHECK(fh_tight_bound(0.3, 0.0, 7) == doctest::Approx(2.1).epsilon(1e-15));
    CHECK(fh_tight_bound(1.0, 0.9, 11) == doctest::Approx(11.0).epsilon(1e-14));
    CHECK(fh_tight_bound(0.0, 0.5, 3) == doctest::Approx(0.6875).epsilon(1e-15));
    CHECK(fh_tight_bound(0.25, 2.0, 4) == doctest::Approx(4.0 - 0.75).epsilon(1e-14));

    CHECK_THROWS_AS(fh_tight_bound(0.1, 0.2, 0), std::invalid_argument);
}

TEST_CASE("fh_tight_bound is continuous at the eps_t singularity") {
    // The exact first-order deviation from the eps_t -> 0 limit is
    // (1 - eps_r) H(H-1)/4 * eps_t; the evaluation must not add noticeable
    // floating-point noise on top of it.
    for (const int horizon : {1, 2, 5, 20, 100}) {
        for (const double eps_r : {0.0, 0.4, 0.9}) {
            const double limit = eps_r * horizon;
            const double first_order =
                (1.0 - eps_r) * horizon * (horizon - 1.0) / 4.0 * 1e-9;
            const double deviation = fh_tight_bound(eps_r, 1e-9, horizon) - limit;
            CHECK(std::abs(deviation - first_order) <= 1e-9);
        }
    }
    // At modest horizons the deviation itself is far below 1e-6.
    for (const int horizon : {1, 2, 5, 20}) {
        CHECK(std::abs(fh_tight_bound(0.0, 1e-9, horizon)) <= 1e-6);
    }
}

TEST_CASE("hierarchy bounds") {
    CHECK(hierarchy_existing_bound(0.0, 0.0, 0.9, 10, 1.0) == 0.0);
    CHECK(hierarchy_existing_bound(0.1, 0.01, 0.9, 10, 1.0) ==
          doctest::Approx(20.0).epsilon(1e-13));
    // The transition term scales linearly with r_max.
    const double base = hierarchy_existing_bound(0.0, 0.01, 0.9, 10, 1.0);
    CHECK(hierarchy_existing_bound(0.0, 0.01, 0.9, 10, 3.0) ==
          doctest::Approx(3.0 * base).epsilon(1e-13));

    CHECK(hierarchy_tight_bound(0.0, 0.0, 0.9, 10, 1.0) == 0.0);
    CHECK(hierarchy_tight_bound(0.1, 0.01, 0.9, 10, 1.0) ==
          doctest::Approx(5.2631578947368434).epsilon(1e-15));
    CHECK(hierarchy_tight_bound(2.0, 0.3, 0.8, 4, 2.0) ==
          doctest::Approx(2.0 / 0.2).epsilon(1e-14));

    CHECK_THROWS_AS(hierarchy_tight_bound(1.5, 0.01, 0.9, 10, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(hierarchy_tight_bound(0.1, 0.01, 0.9, 1, 1.0),
                    std::invalid_argument);
}

TEST_CASE("optimal_policy_loss_bound is twice the tight bound") {
    CHECK(optimal_policy_loss_bound(0.0, 0.0, 0.9) == 0.0);
    CHECK(optimal_policy_loss_bound(0.1, 0.2, 0.9) ==
          doctest::Approx(10.526315789473685).epsilon(1e-15));
    for (const double eps : {0.05, 0.3, 0.9}) {
        CHECK(optimal_policy_loss_bound(eps, eps, 0.7) ==
              2.0 * tight_bound(eps, eps, 0.7));
    }
}

TEST_CASE("linearization_gap") {
    CHECK(linearization_gap(0.0, 0.0, 0.9) == 0.0);
    CHECK(linearization_gap(0.1, 0.2, 0.9) ==
          doctest::Approx(4.7368421052631628).epsilon(1e-14));

    // Second-order remainder: gap(e, e) / gap(e/2, e/2) -> 4 as e -> 0.
    const auto gap_at = [](double e) { return linearization_gap(e, e, 0.9); };
    CHECK(std::abs(gap_at(1e-2) / gap_at(5e-3) - 4.0) < 0.1);
    CHECK(std::abs(gap_at(1e-3) / gap_at(5e-4) - 4.0) < 0.01);

    // gap / e^2 approaches a finite positive constant.
    const double c_coarse = gap_at(1e-2) / 1e-4;
    const double c_fine = gap_at(1e-3) / 1e-6;
    CHECK(c_fine > 0.0);
    CHECK(std::abs(c_coarse - c_fine) / c_fine < 0.05);
}

TEST_CASE("dominance and monotonicity grids") {
    // tight <= original over a dense grid.
    for (int ig = 0; ig <= 15; ++ig) {
        const double gamma = 0.999 * ig / 15.0;
        for (int ir = 0; ir <= 15; ++ir) {
            const double eps_r = ir / 15.0;
            for (int it = 0; it <= 15; ++it) {
                const double eps_t = 2.0 * it / 15.0;
                CHECK(tight_bound(eps_r, eps_t, gamma) <=
                      original_bound(eps_r, eps_t, gamma) + 1e-9);
                CHECK(tight_bound(eps_r, eps_t, gamma) <= 1.0 / (1.0 - gamma) + 1e-9);
            }
        }
    }

    // fh_tight <= fh_original, fh_tight <= H.
    for (const int horizon : {1, 2, 3, 5, 10, 25, 50}) {
        for (int ir = 0; ir <= 10; ++ir) {
            for (int it = 1; it <= 10; ++it) {
                const double eps_r = ir / 10.0;
                const double eps_t = 2.0 * it / 10.0;
                CHECK(fh_tight_bound(eps_r, eps_t, horizon) <=
                      fh_original_bound(eps_r, eps_t, horizon) + 1e-9);
                CHECK(fh_tight_bound(eps_r, eps_t, horizon) <= horizon + 1e-9);
            }
        }
    }

    // Monotonicity of the tight bound in each argument.
    const auto grid_value = [](int i, int j, int k) {
        return tight_bound(i / 10.0, 2.0 * j / 10.0, 0.98 * k / 10.0);
    };
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            for (int k = 0; k < 10; ++k) {
                CHECK(grid_value(i, j, k) <= grid_value(i + 1, j, k) + 1e-12);
                CHECK(grid_value(i, j, k) <= grid_value(i, j + 1, k) + 1e-12);
                CHECK(grid_value(i, j, k) <= grid_value(i, j, k + 1) + 1e-12);
            }
        }
    }

    // Hierarchy pair on the spec's grid (a numerical check; dominance is not
    // claimed analytically).
    for (int n_states = 2; n_states <= 20; ++n_states) {
        for (int ir = 0; ir <= 6; ++ir) {
            for (int it = 0; it <= 6; ++it) {
                for (int ig = 0; ig <= 6; ++ig) {
                    const double eps_r = ir / 6.0;
                    const double eps_t = it / (6.0 * (n_states - 1));
                    const double gamma = 0.999 * ig / 6.0;
                    CHECK(hierarchy_tight_bound(eps_r, eps_t, gamma, n_states, 1.0) <=
                          hierarchy_existing_bound(eps_r, eps_t, gamma, n_states, 1.0) +
                              1e-9);
                }
            }
        }
    }
}

TEST_CASE("bound reports") {
    const BoundReport report = discounted_report(0.1, 0.2, 0.9, 5.0);
    CHECK(report.v_max == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(report.tight <= report.original);
    CHECK(report.measured_gap.has_value());
    CHECK(report.ratio_original_over_tight ==
          doctest::Approx(report.original / report.tight));

    const BoundReport zero = discounted_report(0.0, 0.0, 0.9);
    CHECK(zero.ratio_original_over_tight == 1.0);

    const BoundReport fh = finite_horizon_report(0.1, 0.2, 5);
    CHECK(fh.v_max == 5.0);
    CHECK(fh.tight <= fh.original + 1e-12);
}
