#include "simbound/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace simbound {

namespace {

void validate_distribution_rows(const Matrix& rows, const std::string& what) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < rows.cols(); ++j) {
            const double v = rows(i, j);
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::invalid_argument(what + ": entry (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") outside [0,1]");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kRowSumTol) {
            throw std::invalid_argument(what + ": row " + std::to_string(i) +
                                        " sums to " + std::to_string(sum));
        }
    }
}

// Solves (I - c * P) x = b directly, then refines until the residual max
// norm drops to kSolveTol (typically one extra pass).
Vector solve_discounted_system(const Matrix& p, double c, const Vector& b) {
    const Eigen::Index n = p.rows();
    Matrix system = Matrix::Identity(n, n) - c * p;
    Eigen::PartialPivLU<Matrix> lu(system);
    Vector x = lu.solve(b);
    for (int pass = 0; pass < 6; ++pass) {
        Vector residual = b - system * x;
        if (residual.lpNorm<Eigen::Infinity>() <= kSolveTol) return x;
        x += lu.solve(residual);
    }
    if ((b - system * x).lpNorm<Eigen::Infinity>() <= kSolveTol) return x;
    throw std::runtime_error("value solve failed to reach residual tolerance");
}

}  // namespace

Mdp::Mdp(std::vector<Matrix> transitions_by_action, Matrix rewards, double discount)
    : transitions_(std::move(transitions_by_action)),
      rewards_(std::move(rewards)),
      discount_(discount) {
    const auto n_states = rewards_.rows();
    const auto n_actions = rewards_.cols();
    if (n_states < 1 || n_actions < 1) {
        throw std::invalid_argument("Mdp: needs at least one state and one action");
    }
    if (static_cast<Eigen::Index>(transitions_.size()) != n_actions) {
        throw std::invalid_argument("Mdp: one transition matrix required per action");
    }
    for (std::size_t a = 0; a < transitions_.size(); ++a) {
        const Matrix& t = transitions_[a];
        if (t.rows() != n_states || t.cols() != n_states) {
            throw std::invalid_argument("Mdp: transition matrix for action " +
                                        std::to_string(a) + " has wrong shape");
        }
        validate_distribution_rows(t, "Mdp transitions, action " + std::to_string(a));
    }
    for (Eigen::Index s = 0; s < n_states; ++s) {
        for (Eigen::Index a = 0; a < n_actions; ++a) {
            const double r = rewards_(s, a);
            if (!(r >= 0.0 && r <= 1.0)) {
                throw std::invalid_argument("Mdp: reward (" + std::to_string(s) + "," +
                                            std::to_string(a) + ") outside [0,1]");
            }
        }
    }
    if (!(discount_ >= 0.0 && discount_ <= 1.0)) {
        throw std::invalid_argument("Mdp: discount must lie in [0,1]");
    }
}

Mdp Mdp::renormalized(std::vector<Matrix> transitions_by_action, Matrix rewards,
                      double discount) {
    for (Matrix& t : transitions_by_action) {
        for (Eigen::Index s = 0; s < t.rows(); ++s) {
            const double sum = t.row(s).sum();
            if (sum <= 0.0) {
                throw std::invalid_argument("Mdp::renormalized: row with no mass");
            }
            t.row(s) /= sum;
        }
    }
    return Mdp(std::move(transitions_by_action), std::move(rewards), discount);
}

Policy::Policy(std::vector<Matrix> steps, bool stationary)
    : steps_(std::move(steps)), stationary_(stationary) {
    if (steps_.empty()) throw std::invalid_argument("Policy: no action probabilities");
    for (const Matrix& m : steps_) {
        if (m.rows() != steps_.front().rows() || m.cols() != steps_.front().cols()) {
            throw std::invalid_argument("Policy: inconsistent step shapes");
        }
        validate_distribution_rows(m, "Policy");
    }
}

Policy Policy::stationary(Matrix probs) {
    std::vector<Matrix> steps;
    steps.push_back(std::move(probs));
    return Policy(std::move(steps), true);
}

Policy Policy::sequence(std::vector<Matrix> probs_per_step) {
    return Policy(std::move(probs_per_step), false);
}

Policy Policy::single_action(int n_states, int n_actions, int action) {
    if (action < 0 || action >= n_actions) {
        throw std::invalid_argument("Policy::single_action: action out of range");
    }
    Matrix probs = Matrix::Zero(n_states, n_actions);
    probs.col(action).setOnes();
    return stationary(std::move(probs));
}

Policy Policy::uniform(int n_states, int n_actions) {
    return stationary(Matrix::Constant(n_states, n_actions, 1.0 / n_actions));
}

const Matrix& Policy::probs() const {
    if (!stationary_) throw std::invalid_argument("Policy: timestep index required");
    return steps_.front();
}

const Matrix& Policy::probs(int step) const {
    if (stationary_) return steps_.front();
    if (step < 0 || step >= horizon()) {
        throw std::invalid_argument("Policy: timestep out of range");
    }
    return steps_[step];
}

PolicyMatrices build_policy_matrices(const Mdp& mdp, const Matrix& action_probs) {
    const int n = mdp.num_states();
    const int m = mdp.num_actions();
    if (action_probs.rows() != n || action_probs.cols() != m) {
        throw std::invalid_argument("build_policy_matrices: policy shape mismatch");
    }
    PolicyMatrices out{Matrix::Zero(n, n), Vector::Zero(n)};
    for (int a = 0; a < m; ++a) {
        out.p_pi += action_probs.col(a).asDiagonal() * mdp.transition(a);
        out.r_pi += action_probs.col(a).cwiseProduct(mdp.rewards().col(a));
    }
    return out;
}

PolicyMatrices build_policy_matrices(const Mdp& mdp, const Policy& policy) {
    if (!policy.is_stationary()) {
        throw std::invalid_argument("build_policy_matrices: stationary policy required");
    }
    return build_policy_matrices(mdp, policy.probs());
}

Vector exact_value(const Mdp& mdp, const Policy& policy) {
    const double gamma = mdp.discount();
    if (gamma >= 1.0) {
        throw std::invalid_argument("exact_value: requires discount < 1");
    }
    const PolicyMatrices pm = build_policy_matrices(mdp, policy);
    if (gamma == 0.0) return pm.r_pi;
    return solve_discounted_system(pm.p_pi, gamma, pm.r_pi);
}

Matrix finite_horizon_value(const Mdp& mdp, const Policy& policy, int horizon) {
    if (horizon < 1) throw std::invalid_argument("finite_horizon_value: horizon >= 1");
    if (!policy.is_stationary() && policy.horizon() != horizon) {
        throw std::invalid_argument("finite_horizon_value: policy sequence length != horizon");
    }
    const int n = mdp.num_states();
    Matrix values = Matrix::Zero(horizon + 1, n);
    for (int h = horizon - 1; h >= 0; --h) {
        const PolicyMatrices pm = build_policy_matrices(mdp, policy.probs(h));
        values.row(h) =
            (pm.r_pi + pm.p_pi * values.row(h + 1).transpose()).transpose();
    }
    return values;
}

Vector t_step_distribution(const Mdp& mdp, const Policy& policy, int s0, int t) {
    if (s0 < 0 || s0 >= mdp.num_states()) {
        throw std::invalid_argument("t_step_distribution: start state out of range");
    }
    if (t < 0) throw std::invalid_argument("t_step_distribution: t >= 0");
    const PolicyMatrices pm = build_policy_matrices(mdp, policy);
    Eigen::RowVectorXd dist = Eigen::RowVectorXd::Zero(mdp.num_states());
    dist(s0) = 1.0;
    for (int i = 0; i < t; ++i) dist = dist * pm.p_pi;
    return dist.transpose();
}

Vector overlap(const Vector& p, const Vector& q) {
    if (p.size() != q.size()) throw std::invalid_argument("overlap: length mismatch");
    return p.cwiseMin(q);
}

MisspecReport measure_misspec(const Mdp& m, const Mdp& m_hat) {
    if (m.num_states() != m_hat.num_states() || m.num_actions() != m_hat.num_actions()) {
        throw std::invalid_argument("measure_misspec: dimension mismatch");
    }
    if (m.discount() != m_hat.discount()) {
        throw std::invalid_argument("measure_misspec: discount mismatch");
    }
    MisspecReport report;
    for (int a = 0; a < m.num_actions(); ++a) {
        for (int s = 0; s < m.num_states(); ++s) {
            const double dt =
                (m.transition(a).row(s) - m_hat.transition(a).row(s)).lpNorm<1>();
            if (dt > report.eps_t) {
                report.eps_t = dt;
                report.argmax_t = {s, a};
            }
            const double dr = std::abs(m.reward(s, a) - m_hat.reward(s, a));
            if (dr > report.eps_r) {
                report.eps_r = dr;
                report.argmax_r = {s, a};
            }
        }
    }
    return report;
}

DistributionSeries overlap_trajectory(const Mdp& m, const Mdp& m_hat, const Policy& policy,
                                      int s0, int t_max) {
    if (t_max < 0) throw std::invalid_argument("overlap_trajectory: t_max >= 0");
    if (m.num_states() != m_hat.num_states() || m.num_actions() != m_hat.num_actions()) {
        throw std::invalid_argument("overlap_trajectory: dimension mismatch");
    }
    if (s0 < 0 || s0 >= m.num_states()) {
        throw std::invalid_argument("overlap_trajectory: start state out of range");
    }
    const PolicyMatrices pm = build_policy_matrices(m, policy);
    const PolicyMatrices pm_hat = build_policy_matrices(m_hat, policy);

    DistributionSeries series;
    series.p.reserve(t_max + 1);
    series.p_hat.reserve(t_max + 1);
    series.overlap_mass.reserve(t_max + 1);

    Eigen::RowVectorXd dist = Eigen::RowVectorXd::Zero(m.num_states());
    dist(s0) = 1.0;
    Eigen::RowVectorXd dist_hat = dist;
    for (int t = 0;; ++t) {
        series.p.push_back(dist.transpose());
        series.p_hat.push_back(dist_hat.transpose());
        series.overlap_mass.push_back(dist.cwiseMin(dist_hat).sum());
        if (t == t_max) break;
        dist = dist * pm.p_pi;
        dist_hat = dist_hat * pm_hat.p_pi;
    }
    return series;
}

}  // namespace simbound
