#include "simbound/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace simbound::hierarchy {

namespace {

Vector solve_substochastic(const Matrix& p, const Vector& r) {
    const Eigen::Index n = p.rows();
    Matrix system = Matrix::Identity(n, n) - p;
    Eigen::PartialPivLU<Matrix> lu(system);
    Vector x = lu.solve(r);
    for (int pass = 0; pass < 6; ++pass) {
        Vector residual = r - system * x;
        if (residual.lpNorm<Eigen::Infinity>() <= kSolveTol) return x;
        x += lu.solve(residual);
    }
    if ((r - system * x).lpNorm<Eigen::Infinity>() <= kSolveTol) return x;
    throw std::runtime_error("hierarchy: abstract value solve failed to converge");
}

}  // namespace

StateAbstraction::StateAbstraction(std::vector<int> phi, int n_abstract)
    : phi_(std::move(phi)), blocks_(n_abstract) {
    if (n_abstract < 1) throw std::invalid_argument("StateAbstraction: n_abstract >= 1");
    for (std::size_t s = 0; s < phi_.size(); ++s) {
        const int a = phi_[s];
        if (a < 0 || a >= n_abstract) {
            throw std::invalid_argument("StateAbstraction: map value out of range");
        }
        blocks_[a].push_back(static_cast<int>(s));
    }
    for (int a = 0; a < n_abstract; ++a) {
        if (blocks_[a].empty()) {
            throw std::invalid_argument("StateAbstraction: abstract state " +
                                        std::to_string(a) + " is empty");
        }
    }
}

StateAbstraction StateAbstraction::identity(int n_states) {
    std::vector<int> phi(n_states);
    for (int s = 0; s < n_states; ++s) phi[s] = s;
    return StateAbstraction(std::move(phi), n_states);
}

OptionModel multi_time_model(const Mdp& base, const StateAbstraction& abstraction,
                             const PhiOption& option) {
    if (abstraction.n_ground() != base.num_states()) {
        throw std::invalid_argument("multi_time_model: abstraction size mismatch");
    }
    if (option.home < 0 || option.home >= abstraction.n_abstract()) {
        throw std::invalid_argument("multi_time_model: home abstract state out of range");
    }
    if (option.internal_policy.rows() != base.num_states() ||
        option.internal_policy.cols() != base.num_actions()) {
        throw std::invalid_argument("multi_time_model: internal policy shape mismatch");
    }
    const std::vector<int>& block = abstraction.block(option.home);
    const int k = static_cast<int>(block.size());
    const int n = base.num_states();
    const double gamma = base.discount();

    // Policy-conditioned one-step dynamics restricted to the home block:
    // p_in over the block, flow into every ground state for the exit split.
    Matrix p_full = Matrix::Zero(k, n);
    Vector r_in = Vector::Zero(k);
    for (int i = 0; i < k; ++i) {
        const int s = block[i];
        const auto pi_row = option.internal_policy.row(s);
        const double row_sum = pi_row.sum();
        if (pi_row.minCoeff() < 0.0 || std::abs(row_sum - 1.0) > kRowSumTol) {
            throw std::invalid_argument("multi_time_model: internal policy row " +
                                        std::to_string(s) + " is not a distribution");
        }
        for (int a = 0; a < base.num_actions(); ++a) {
            p_full.row(i) += pi_row(a) * base.transition(a).row(s);
            r_in(i) += pi_row(a) * base.reward(s, a);
        }
    }
    Matrix p_in(k, k);
    for (int j = 0; j < k; ++j) p_in.col(j) = p_full.col(block[j]);
    Matrix flow = p_full;
    for (int j = 0; j < k; ++j) flow.col(block[j]).setZero();

    // U = (I - gamma P_in)^-1 applied column-wise, with refinement.
    Matrix system = Matrix::Identity(k, k) - gamma * p_in;
    Eigen::PartialPivLU<Matrix> lu(system);
    auto solve_refined = [&](const Vector& b) {
        Vector x = lu.solve(b);
        for (int pass = 0; pass < 6; ++pass) {
            Vector residual = b - system * x;
            if (residual.lpNorm<Eigen::Infinity>() <= kSolveTol) break;
            x += lu.solve(residual);
        }
        return x;
    };

    OptionModel model;
    model.home = option.home;
    model.initiation = block;
    model.n_ground = n;
    model.augmented = false;
    model.r = solve_refined(r_in);
    model.p = Matrix::Zero(k, n);
    for (int s2 = 0; s2 < n; ++s2) {
        if (flow.col(s2).isZero(0.0)) continue;
        model.p.col(s2) = gamma * solve_refined(flow.col(s2));
    }
    return model;
}

OptionModel augment_absorbing(const OptionModel& model, double gamma) {
    if (model.augmented) {
        throw std::invalid_argument("augment_absorbing: model already augmented");
    }
    OptionModel out = model;
    out.augmented = true;
    out.p = Matrix::Zero(model.p.rows(), model.n_ground + 1);
    out.p.leftCols(model.n_ground) = model.p;
    for (Eigen::Index i = 0; i < model.p.rows(); ++i) {
        const double mass = model.p.row(i).sum();
        if (mass > gamma + kRowSumTol) {
            throw std::invalid_argument(
                "augment_absorbing: row mass exceeds gamma; model inconsistent with "
                "discounting");
        }
        out.p(i, model.n_ground) = std::max(0.0, gamma - mass);
    }
    return out;
}

namespace {

void check_paired(const OptionModel& a, const OptionModel& b) {
    if (a.home != b.home || a.initiation != b.initiation) {
        throw std::invalid_argument("option_misspec: paired options must share initiation");
    }
    if (a.n_ground != b.n_ground || a.augmented != b.augmented) {
        throw std::invalid_argument("option_misspec: paired options must share shape");
    }
}

}  // namespace

std::pair<double, double> option_misspec(const OptionSet& a, const OptionSet& b,
                                         const std::vector<int>& pairing) {
    if (a.options.size() != pairing.size()) {
        throw std::invalid_argument("option_misspec: pairing size mismatch");
    }
    double eps_t = 0.0;
    double eps_r = 0.0;
    for (std::size_t i = 0; i < a.options.size(); ++i) {
        const OptionModel& oa = a.options[i];
        if (pairing[i] < 0 || pairing[i] >= static_cast<int>(b.options.size())) {
            throw std::invalid_argument("option_misspec: pairing index out of range");
        }
        const OptionModel& ob = b.options[pairing[i]];
        check_paired(oa, ob);
        // Per-entry gaps; the s_x column is implied by the others and excluded.
        const int cols = oa.n_ground;
        eps_t = std::max(
            eps_t,
            (oa.p.leftCols(cols) - ob.p.leftCols(cols)).cwiseAbs().maxCoeff());
        eps_r = std::max(eps_r, (oa.r - ob.r).cwiseAbs().maxCoeff());
    }
    return {eps_t, eps_r};
}

std::pair<double, double> option_misspec(const OptionSet& a, const OptionSet& b) {
    std::vector<int> pairing(a.options.size());
    for (std::size_t i = 0; i < pairing.size(); ++i) pairing[i] = static_cast<int>(i);
    return option_misspec(a, b, pairing);
}

Vector abstract_value(const OptionSet& set, const std::vector<int>& selected) {
    if (set.options.empty()) throw std::invalid_argument("abstract_value: no options");
    const int n = set.n_ground;
    const bool augmented = set.options.front().augmented;
    const int dim = augmented ? n + 1 : n;

    Matrix p = Matrix::Zero(dim, dim);
    Vector r = Vector::Zero(dim);
    std::vector<bool> covered(n, false);
    for (const int idx : selected) {
        if (idx < 0 || idx >= static_cast<int>(set.options.size())) {
            throw std::invalid_argument("abstract_value: option index out of range");
        }
        const OptionModel& model = set.options[idx];
        if (model.augmented != augmented || model.n_ground != n) {
            throw std::invalid_argument("abstract_value: mixed model shapes");
        }
        for (std::size_t i = 0; i < model.initiation.size(); ++i) {
            const int s = model.initiation[i];
            if (covered[s]) {
                throw std::invalid_argument("abstract_value: state covered twice");
            }
            covered[s] = true;
            p.row(s) = model.p.row(static_cast<Eigen::Index>(i));
            r(s) = model.r(static_cast<Eigen::Index>(i));
        }
    }
    if (!std::all_of(covered.begin(), covered.end(), [](bool c) { return c; })) {
        throw std::invalid_argument("abstract_value: selected options do not cover all states");
    }
    if (augmented) {
        // Absorbing state: zero reward, value zero.
        p(n, n) = set.gamma;
    }
    Vector v = solve_substochastic(p, r);
    return v.head(n);
}

bounds::BoundReport hierarchy_gap_check(const OptionSet& o_star, const OptionSet& o_hat,
                                        const std::vector<int>& selected, double r_max) {
    const auto [eps_t, eps_r] = option_misspec(o_star, o_hat);
    if (o_star.gamma != o_hat.gamma) {
        throw std::invalid_argument("hierarchy_gap_check: discount mismatch");
    }
    const Vector v_star = abstract_value(o_star, selected);
    const Vector v_hat = abstract_value(o_hat, selected);
    const double gap = (v_star - v_hat).cwiseAbs().maxCoeff();
    return bounds::hierarchy_report(eps_r, eps_t, o_star.gamma, o_star.n_ground, r_max,
                                    gap);
}

}  // namespace simbound::hierarchy
