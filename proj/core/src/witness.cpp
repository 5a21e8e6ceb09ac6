#include "simbound/witness.hpp"

#include <stdexcept>

namespace simbound::witness {

namespace {

void check_eps(double eps_r, double eps_t) {
    if (!(eps_r >= 0.0 && eps_r <= 1.0)) {
        throw std::invalid_argument("witness: eps_r must lie in [0,1]");
    }
    if (!(eps_t >= 0.0 && eps_t <= 2.0)) {
        throw std::invalid_argument("witness: eps_t must lie in [0,2]");
    }
}

WitnessPair build_two_state(double eps_r, double eps_t, double discount) {
    Matrix self_loops = Matrix::Identity(2, 2);
    Matrix rewards(2, 1);
    rewards << 1.0, 0.0;

    Matrix leaky(2, 2);
    leaky << 1.0 - eps_t / 2.0, eps_t / 2.0,
             0.0, 1.0;
    Matrix rewards_hat(2, 1);
    rewards_hat << 1.0 - eps_r, 0.0;

    return WitnessPair{
        Mdp({self_loops}, rewards, discount),
        Mdp({leaky}, rewards_hat, discount),
        Policy::single_action(2, 1, 0),
    };
}

}  // namespace

WitnessPair two_state_witness(double eps_r, double eps_t, double gamma) {
    check_eps(eps_r, eps_t);
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("two_state_witness: discount must lie in [0,1)");
    }
    return build_two_state(eps_r, eps_t, gamma);
}

WitnessPair two_state_witness_fh(double eps_r, double eps_t, int horizon) {
    check_eps(eps_r, eps_t);
    if (horizon < 1) throw std::invalid_argument("two_state_witness_fh: horizon >= 1");
    WitnessPair pair = build_two_state(eps_r, eps_t, 1.0);
    std::vector<Matrix> steps(horizon, pair.policy.probs());
    pair.policy = Policy::sequence(std::move(steps));
    return pair;
}

HierarchyWitness hierarchy_witness(int n_states, double eps_r, double eps_t, double gamma,
                                   double r_max) {
    if (n_states < 2) throw std::invalid_argument("hierarchy_witness: need |S| >= 2");
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("hierarchy_witness: discount must lie in [0,1)");
    }
    if (r_max <= 0.0) throw std::invalid_argument("hierarchy_witness: r_max must be > 0");
    if (!(eps_r >= 0.0 && eps_r <= r_max)) {
        throw std::invalid_argument("hierarchy_witness: eps_r must lie in [0, r_max]");
    }
    const double uniform = gamma / (n_states - 1);
    if (!(eps_t >= 0.0 && uniform - eps_t >= 0.0)) {
        throw std::invalid_argument(
            "hierarchy_witness: eps_t must lie in [0, gamma/(|S|-1)]");
    }

    HierarchyWitness out;
    out.o_star.gamma = gamma;
    out.o_star.n_ground = n_states;
    out.o_hat = out.o_star;
    out.selected.resize(n_states);

    for (int s = 0; s < n_states; ++s) {
        hierarchy::OptionModel star;
        star.home = s;
        star.initiation = {s};
        star.n_ground = n_states;
        star.r = Vector::Constant(1, r_max);
        star.p = Matrix::Constant(1, n_states, uniform);
        star.p(0, s) = 0.0;

        hierarchy::OptionModel hat = star;
        hat.r = Vector::Constant(1, r_max - eps_r);
        hat.p = Matrix::Constant(1, n_states, uniform - eps_t);
        hat.p(0, s) = 0.0;

        out.o_star.options.push_back(
            hierarchy::augment_absorbing(star, gamma));
        out.o_hat.options.push_back(hierarchy::augment_absorbing(hat, gamma));
        out.selected[s] = s;
    }
    return out;
}

}  // namespace simbound::witness
