#include "simbound/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace simbound::io {

json mdp_to_json(const Mdp& mdp) {
    const int n = mdp.num_states();
    const int m = mdp.num_actions();
    json transitions = json::array();
    json rewards = json::array();
    for (int s = 0; s < n; ++s) {
        json per_action = json::array();
        json reward_row = json::array();
        for (int a = 0; a < m; ++a) {
            json row = json::array();
            for (int s2 = 0; s2 < n; ++s2) row.push_back(mdp.transition(s, a, s2));
            per_action.push_back(std::move(row));
            reward_row.push_back(mdp.reward(s, a));
        }
        transitions.push_back(std::move(per_action));
        rewards.push_back(std::move(reward_row));
    }
    return json{{"n_states", n},
                {"n_actions", m},
                {"discount", mdp.discount()},
                {"transitions", std::move(transitions)},
                {"rewards", std::move(rewards)}};
}

Mdp mdp_from_json(const json& j) {
    const int n = j.at("n_states").get<int>();
    const int m = j.at("n_actions").get<int>();
    const double discount = j.at("discount").get<double>();
    const json& transitions = j.at("transitions");
    const json& rewards = j.at("rewards");
    if (static_cast<int>(transitions.size()) != n ||
        static_cast<int>(rewards.size()) != n) {
        throw std::invalid_argument("mdp_from_json: state-major arrays of wrong length");
    }
    std::vector<Matrix> by_action(m, Matrix::Zero(n, n));
    Matrix reward_table(n, m);
    for (int s = 0; s < n; ++s) {
        if (static_cast<int>(transitions[s].size()) != m ||
            static_cast<int>(rewards[s].size()) != m) {
            throw std::invalid_argument("mdp_from_json: action arrays of wrong length");
        }
        for (int a = 0; a < m; ++a) {
            const json& row = transitions[s][a];
            if (static_cast<int>(row.size()) != n) {
                throw std::invalid_argument("mdp_from_json: transition row of wrong length");
            }
            for (int s2 = 0; s2 < n; ++s2) by_action[a](s, s2) = row[s2].get<double>();
            reward_table(s, a) = rewards[s][a].get<double>();
        }
    }
    return Mdp(std::move(by_action), std::move(reward_table), discount);
}

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) throw std::invalid_argument("matrix_from_json: empty matrix");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(j[i].size()) != cols) {
            throw std::invalid_argument("matrix_from_json: ragged rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
    }
    return m;
}

}  // namespace

json policy_to_json(const Policy& policy) {
    if (policy.is_stationary()) {
        return json{{"mode", "stationary"}, {"probs", matrix_to_json(policy.probs())}};
    }
    json steps = json::array();
    for (int h = 0; h < policy.horizon(); ++h) steps.push_back(matrix_to_json(policy.probs(h)));
    return json{{"mode", "sequence"}, {"probs", std::move(steps)}};
}

Policy policy_from_json(const json& j) {
    const std::string mode = j.at("mode").get<std::string>();
    const json& probs = j.at("probs");
    if (mode == "stationary") return Policy::stationary(matrix_from_json(probs));
    if (mode == "sequence") {
        std::vector<Matrix> steps;
        steps.reserve(probs.size());
        for (const json& step : probs) steps.push_back(matrix_from_json(step));
        return Policy::sequence(std::move(steps));
    }
    throw std::invalid_argument("policy_from_json: unknown mode '" + mode + "'");
}

json option_set_to_json(const hierarchy::OptionSet& set) {
    json options = json::array();
    for (const hierarchy::OptionModel& model : set.options) {
        json r = json::array();
        for (Eigen::Index i = 0; i < model.r.size(); ++i) r.push_back(model.r(i));
        options.push_back(
            json{{"home", model.home}, {"r", std::move(r)}, {"p", matrix_to_json(model.p)}});
    }
    return json{{"gamma", set.gamma}, {"options", std::move(options)}};
}

namespace {

hierarchy::OptionSet option_set_from_json_impl(
    const json& j, const hierarchy::StateAbstraction* abstraction) {
    hierarchy::OptionSet set;
    set.gamma = j.at("gamma").get<double>();
    const json& options = j.at("options");
    if (options.empty()) throw std::invalid_argument("option set: no options");

    int n_ground = 0;
    if (abstraction != nullptr) {
        n_ground = abstraction->n_ground();
    } else {
        // Single-state homes: the ground space is the set of homes.
        for (const json& o : options) {
            n_ground = std::max(n_ground, o.at("home").get<int>() + 1);
        }
    }
    for (const json& o : options) {
        hierarchy::OptionModel model;
        model.home = o.at("home").get<int>();
        if (abstraction != nullptr) {
            model.initiation = abstraction->block(model.home);
        } else {
            model.initiation = {model.home};
        }
        const json& r = o.at("r");
        model.r = Vector(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) model.r(static_cast<Eigen::Index>(i)) = r[i].get<double>();
        model.p = matrix_from_json(o.at("p"));
        model.n_ground = n_ground;
        if (model.p.rows() != static_cast<Eigen::Index>(model.initiation.size())) {
            throw std::invalid_argument("option set: p rows != initiation size");
        }
        if (model.p.cols() == n_ground + 1) {
            model.augmented = true;
        } else if (model.p.cols() == n_ground) {
            model.augmented = false;
        } else {
            throw std::invalid_argument("option set: p columns inconsistent with ground space");
        }
        set.options.push_back(std::move(model));
    }
    set.n_ground = n_ground;
    return set;
}

}  // namespace

hierarchy::OptionSet option_set_from_json(const json& j) {
    return option_set_from_json_impl(j, nullptr);
}

hierarchy::OptionSet option_set_from_json(const json& j,
                                          const hierarchy::StateAbstraction& abstraction) {
    return option_set_from_json_impl(j, &abstraction);
}

json misspec_to_json(const MisspecReport& report) {
    return json{{"eps_t", report.eps_t},
                {"eps_r", report.eps_r},
                {"argmax_t", {report.argmax_t.first, report.argmax_t.second}},
                {"argmax_r", {report.argmax_r.first, report.argmax_r.second}}};
}

json bound_report_to_json(const bounds::BoundReport& report) {
    json j{{"original", report.original},
           {"tight", report.tight},
           {"v_max", report.v_max},
           {"original_normalized", report.original / report.v_max},
           {"tight_normalized", report.tight / report.v_max},
           {"ratio_original_over_tight", report.ratio_original_over_tight}};
    if (report.measured_gap) j["measured_gap"] = *report.measured_gap;
    return j;
}

json search_result_to_json(const adversary::SearchResult& result) {
    return json{{"best_gap", result.best_gap},
                {"bound_value", result.bound_value},
                {"achievement_ratio", result.achievement_ratio},
                {"trace", result.trace},
                {"best_mdp_hat", mdp_to_json(result.best_mdp_hat)}};
}

void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return json::parse(in);
}

}  // namespace simbound::io
