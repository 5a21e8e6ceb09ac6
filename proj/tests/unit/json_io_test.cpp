#include "simbound/json_io.hpp"

#include "simbound/rng.hpp"
#include "simbound/witness.hpp"

#include <doctest.h>

#include <cmath>

using namespace simbound;
using simbound::io::json;

namespace {

Mdp random_mdp(Rng& rng, int n, int m, double gamma) {
    std::vector<Matrix> transitions(m);
    for (int a = 0; a < m; ++a) {
        Matrix t(n, n);
        for (int s = 0; s < n; ++s) {
            for (int s2 = 0; s2 < n; ++s2) t(s, s2) = -std::log(1.0 - rng.uniform());
        }
        transitions[a] = t;
    }
    Matrix rewards(n, m);
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < m; ++a) rewards(s, a) = rng.uniform();
    }
    return Mdp::renormalized(std::move(transitions), std::move(rewards), gamma);
}

}  // namespace

TEST_CASE("mdp json schema") {
    const auto pair = witness::two_state_witness(0.1, 0.2, 0.9);
    const json j = io::mdp_to_json(pair.m_hat);
    CHECK(j.at("n_states") == 2);
    CHECK(j.at("n_actions") == 1);
    CHECK(j.at("discount") == 0.9);
    // s-major, then action, then next state.
    CHECK(j.at("transitions")[0][0][1].get<double>() == doctest::Approx(0.1));
    CHECK(j.at("rewards")[0][0].get<double>() == doctest::Approx(0.9));
}

TEST_CASE("mdp json round trip is exact") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Mdp mdp = random_mdp(rng, 2 + rng.uniform_int(4), 1 + rng.uniform_int(3),
                                   0.9 * rng.uniform());
        const Mdp back = io::mdp_from_json(io::mdp_to_json(mdp));
        CHECK(back.discount() == mdp.discount());
        for (int a = 0; a < mdp.num_actions(); ++a) {
            CHECK(back.transition(a) == mdp.transition(a));
        }
        CHECK(back.rewards() == mdp.rewards());
    }
}

TEST_CASE("policy json round trip") {
    const Policy stationary = Policy::uniform(3, 2);
    const json j = io::policy_to_json(stationary);
    CHECK(j.at("mode") == "stationary");
    const Policy back = io::policy_from_json(j);
    CHECK(back.is_stationary());
    CHECK(back.probs() == stationary.probs());

    const Policy seq = Policy::sequence({Matrix::Constant(2, 2, 0.5),
                                         Matrix::Constant(2, 2, 0.5)});
    const json js = io::policy_to_json(seq);
    CHECK(js.at("mode") == "sequence");
    const Policy seq_back = io::policy_from_json(js);
    CHECK_FALSE(seq_back.is_stationary());
    CHECK(seq_back.horizon() == 2);

    json bad = js;
    bad["mode"] = "adaptive";
    CHECK_THROWS_AS(io::policy_from_json(bad), std::invalid_argument);
}

TEST_CASE("option set json round trip") {
    const auto hw = witness::hierarchy_witness(4, 0.2, 0.05, 0.9, 1.0);
    const json j = io::option_set_to_json(hw.o_star);
    CHECK(j.at("gamma") == 0.9);
    CHECK(j.at("options").size() == 4);
    CHECK(j.at("options")[0].contains("home"));
    CHECK(j.at("options")[0].contains("r"));
    CHECK(j.at("options")[0].contains("p"));

    const hierarchy::OptionSet back = io::option_set_from_json(j);
    CHECK(back.gamma == hw.o_star.gamma);
    CHECK(back.n_ground == hw.o_star.n_ground);
    REQUIRE(back.options.size() == hw.o_star.options.size());
    for (std::size_t i = 0; i < back.options.size(); ++i) {
        CHECK(back.options[i].augmented);
        CHECK(back.options[i].p == hw.o_star.options[i].p);
        CHECK(back.options[i].r == hw.o_star.options[i].r);
    }

    // Values computed from the reloaded set are unchanged.
    const Vector v = hierarchy::abstract_value(back, hw.selected);
    const Vector v_orig = hierarchy::abstract_value(hw.o_star, hw.selected);
    CHECK(v == v_orig);
}

TEST_CASE("bound report json carries normalized values") {
    const auto report = bounds::discounted_report(0.1, 0.2, 0.9, 5.26);
    const json j = io::bound_report_to_json(report);
    CHECK(j.at("original_normalized").get<double>() ==
          doctest::Approx(report.original / report.v_max));
    CHECK(j.at("tight_normalized").get<double>() ==
          doctest::Approx(report.tight / report.v_max));
    CHECK(j.at("measured_gap").get<double>() == 5.26);

    const json no_gap = io::bound_report_to_json(bounds::discounted_report(0.1, 0.2, 0.9));
    CHECK_FALSE(no_gap.contains("measured_gap"));
}
