#include "simbound/adversary.hpp"

#include "simbound/bounds.hpp"
#include "simbound/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace simbound::adversary {

namespace {

constexpr double kBoundSlack = 1e-9;
constexpr std::int64_t kMaxCandidates = 10'000'000;

struct WorkingModel {
    std::vector<Matrix> transitions;
    Matrix rewards;
};

WorkingModel copy_model(const Mdp& mdp) {
    return WorkingModel{mdp.transitions(), mdp.rewards()};
}

// ||V_base - V_hat||_inf for the perturbed model under a stationary policy.
double max_value_gap(const Vector& v_base, const WorkingModel& wm, const Matrix& pi,
                     double gamma) {
    const int n = static_cast<int>(wm.rewards.rows());
    const int m = static_cast<int>(wm.rewards.cols());
    Matrix p_pi = Matrix::Zero(n, n);
    Vector r_pi = Vector::Zero(n);
    for (int a = 0; a < m; ++a) {
        p_pi += pi.col(a).asDiagonal() * wm.transitions[a];
        r_pi += pi.col(a).cwiseProduct(wm.rewards.col(a));
    }
    Matrix system = Matrix::Identity(n, n) - gamma * p_pi;
    Eigen::PartialPivLU<Matrix> lu(system);
    Vector v = lu.solve(r_pi);
    for (int pass = 0; pass < 4; ++pass) {
        Vector residual = r_pi - system * v;
        if (residual.lpNorm<Eigen::Infinity>() <= kSolveTol) break;
        v += lu.solve(residual);
    }
    return (v_base - v).lpNorm<Eigen::Infinity>();
}

// Matrix rows are strided views into column-major storage.
using RowRef = Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

// Keeps the row on the simplex after mass transports: entries are clamped
// to [0,1] and the (tiny) sum drift is folded into the largest entry.
void repair_row_sum(RowRef row) {
    Eigen::Index largest = 0;
    row.maxCoeff(&largest);
    const double err = 1.0 - row.sum();
    row(largest) = std::min(1.0, std::max(0.0, row(largest) + err));
}

// Moves `amount` of probability mass from column src to column dst, bounded
// by the available mass and headroom.
double apply_transport(RowRef row, int src, int dst,
                       double amount) {
    const double moved = std::min({amount, row(src), 1.0 - row(dst)});
    if (moved <= 0.0) return 0.0;
    row(src) -= moved;
    row(dst) += moved;
    return moved;
}

// Shrinks the deviation from base_row until the measured L1 distance is
// within budget; floating-point arithmetic can otherwise leave it a few
// ulps over after a long chain of transports.
void enforce_row_budget(RowRef row,
                        const Eigen::RowVectorXd& base_row, double eps_t) {
    for (int pass = 0; pass < 64; ++pass) {
        const double dist = (row - base_row).lpNorm<1>();
        if (dist <= eps_t) return;
        const double scale = (eps_t / dist) * (1.0 - 1e-12);
        row = base_row + scale * (row - base_row);
        repair_row_sum(row);
    }
    row = base_row;
}

// Reward shifted by delta, clipped to [0,1], with the measured deviation
// guaranteed not to exceed eps_r (nudged by an ulp when rounding lands
// outside the budget).
double shift_reward(double base, double delta, double eps_r) {
    double value = std::clamp(base + delta, 0.0, 1.0);
    value = std::clamp(value, base - eps_r, base + eps_r);
    while (std::abs(value - base) > eps_r) value = std::nextafter(value, base);
    return value;
}

// --- shared perturbation lattice -------------------------------------------
//
// brute_force_gap enumerates it exhaustively; hill_climb_max_gap walks it
// when grid_resolution > 0. Rows are base + k * (eps_t / 2g) with k integer,
// sum(k) = 0 and sum|k| <= 2g; rewards are base + j * (eps_r / g) with
// |j| <= g. Candidates leaving [0,1] are dropped, not clipped, so refining
// g by an integer factor only ever adds candidates.

Eigen::RowVectorXd lattice_row(const Eigen::RowVectorXd& base, const std::vector<int>& k,
                               double unit) {
    Eigen::RowVectorXd row = base;
    for (std::size_t i = 0; i < k.size(); ++i) row(i) = base(i) + k[i] * unit;
    return row;
}

bool row_entries_valid(const Eigen::RowVectorXd& row) {
    return row.minCoeff() >= 0.0 && row.maxCoeff() <= 1.0;
}

void enumerate_k_vectors(int n, int budget, std::vector<int>& current,
                         std::vector<std::vector<int>>& out) {
    const int pos = static_cast<int>(current.size());
    if (pos == n - 1) {
        // Last entry balances the sum to zero.
        int sum = 0;
        for (const int v : current) sum += v;
        const int last = -sum;
        int abs_total = std::abs(last);
        for (const int v : current) abs_total += std::abs(v);
        if (abs_total <= budget) {
            current.push_back(last);
            out.push_back(current);
            current.pop_back();
        }
        return;
    }
    int used = 0;
    for (const int v : current) used += std::abs(v);
    for (int v = -(budget - used); v <= budget - used; ++v) {
        current.push_back(v);
        enumerate_k_vectors(n, budget, current, out);
        current.pop_back();
    }
}

std::vector<Eigen::RowVectorXd> row_candidates(const Eigen::RowVectorXd& base,
                                               double eps_t, int g) {
    std::vector<Eigen::RowVectorXd> rows;
    if (eps_t == 0.0) {
        rows.push_back(base);
        return rows;
    }
    const double unit = eps_t / (2.0 * g);
    std::vector<std::vector<int>> ks;
    std::vector<int> current;
    enumerate_k_vectors(static_cast<int>(base.size()), 2 * g, current, ks);
    rows.reserve(ks.size());
    for (const auto& k : ks) {
        Eigen::RowVectorXd row = lattice_row(base, k, unit);
        if (row_entries_valid(row)) rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> reward_candidates(double base, double eps_r, int g) {
    std::vector<double> values;
    if (eps_r == 0.0) {
        values.push_back(base);
        return values;
    }
    const double unit = eps_r / g;
    values.reserve(2 * g + 1);
    for (int j = -g; j <= g; ++j) {
        const double v = base + j * unit;
        if (v >= 0.0 && v <= 1.0) values.push_back(v);
    }
    return values;
}

void check_budgets(double eps_t, double eps_r) {
    if (!(eps_t >= 0.0 && eps_t <= 2.0)) {
        throw std::invalid_argument("adversary: eps_t must lie in [0,2]");
    }
    if (!(eps_r >= 0.0 && eps_r <= 1.0)) {
        throw std::invalid_argument("adversary: eps_r must lie in [0,1]");
    }
}

}  // namespace

Mdp perturb_within(const Mdp& mdp, double eps_t, double eps_r, std::uint64_t seed) {
    check_budgets(eps_t, eps_r);
    Rng rng(seed);
    WorkingModel wm = copy_model(mdp);
    const int n = mdp.num_states();
    const int m = mdp.num_actions();

    for (int a = 0; a < m; ++a) {
        for (int s = 0; s < n; ++s) {
            auto row = wm.transitions[a].row(s);
            if (n >= 2 && eps_t > 0.0) {
                // n transports of at most eps_t/(2n) each keep the total L1
                // distance within eps_t.
                const double cap = eps_t / (2.0 * n);
                for (int move = 0; move < n; ++move) {
                    const int src = rng.uniform_int(n);
                    int dst = rng.uniform_int(n - 1);
                    if (dst >= src) ++dst;
                    apply_transport(row, src, dst, rng.uniform() * cap);
                }
                repair_row_sum(row);
                enforce_row_budget(row, mdp.transition(a).row(s), eps_t);
            }
            wm.rewards(s, a) =
                shift_reward(mdp.reward(s, a), rng.uniform(-eps_r, eps_r), eps_r);
        }
    }
    return Mdp(std::move(wm.transitions), std::move(wm.rewards), mdp.discount());
}

SearchResult hill_climb_max_gap(const Mdp& mdp, const Policy& policy,
                                const SearchConfig& config) {
    check_budgets(config.eps_t, config.eps_r);
    if (config.iterations < 1) throw std::invalid_argument("hill_climb: iterations >= 1");
    if (config.restarts < 1) throw std::invalid_argument("hill_climb: restarts >= 1");
    if (mdp.discount() >= 1.0) {
        throw std::invalid_argument("hill_climb: requires discount < 1");
    }
    const double gamma = mdp.discount();
    const Matrix& pi = policy.probs();
    const Vector v_base = exact_value(mdp, policy);
    const double bound =
        bounds::tight_bound(config.eps_r, config.eps_t, gamma);
    const int n = mdp.num_states();
    const int m = mdp.num_actions();
    const int g = config.grid_resolution;

    // Lattice state for grid mode: integer deviations per (s, a).
    const double t_unit = (g > 0 && config.eps_t > 0.0) ? config.eps_t / (2.0 * g) : 0.0;
    const double r_unit = (g > 0 && config.eps_r > 0.0) ? config.eps_r / g : 0.0;

    double best_gap = 0.0;
    WorkingModel best_model = copy_model(mdp);
    std::vector<double> trace(config.restarts, 0.0);

    const bool can_move_t = n >= 2 && config.eps_t > 0.0;
    const bool can_move_r = config.eps_r > 0.0;

    for (int restart = 0; restart < config.restarts; ++restart) {
        Rng rng(config.seed, static_cast<std::uint64_t>(restart));
        WorkingModel wm = copy_model(mdp);
        std::vector<std::vector<std::vector<int>>> kgrid;  // [a][s] -> k vector
        std::vector<std::vector<int>> jgrid;               // [a][s] -> reward index
        if (g > 0) {
            kgrid.assign(m, std::vector<std::vector<int>>(n, std::vector<int>(n, 0)));
            jgrid.assign(m, std::vector<int>(n, 0));
        }
        if (restart > 0 && g == 0) {
            wm = copy_model(perturb_within(mdp, config.eps_t, config.eps_r,
                                           rng.next_u64()));
        }
        if (restart > 0 && g > 0) {
            // Burn-in: random unconditional lattice moves for start diversity.
            for (int i = 0; i < n * m * (g + 1); ++i) {
                const int a = rng.uniform_int(m);
                const int s = rng.uniform_int(n);
                if (can_move_t && (!can_move_r || rng.uniform() < 0.5)) {
                    const int src = rng.uniform_int(n);
                    int dst = rng.uniform_int(n - 1);
                    if (dst >= src) ++dst;
                    std::vector<int>& k = kgrid[a][s];
                    k[src] -= 1;
                    k[dst] += 1;
                    int abs_total = 0;
                    for (const int v : k) abs_total += std::abs(v);
                    Eigen::RowVectorXd candidate =
                        lattice_row(mdp.transition(a).row(s), k, t_unit);
                    if (abs_total <= 2 * g && row_entries_valid(candidate)) {
                        wm.transitions[a].row(s) = candidate;
                    } else {
                        k[src] += 1;
                        k[dst] -= 1;
                    }
                } else if (can_move_r) {
                    const int dir = rng.uniform() < 0.5 ? -1 : 1;
                    int& j = jgrid[a][s];
                    const double candidate = mdp.reward(s, a) + (j + dir) * r_unit;
                    if (std::abs(j + dir) <= g && candidate >= 0.0 && candidate <= 1.0) {
                        j += dir;
                        wm.rewards(s, a) = candidate;
                    }
                }
            }
        }
        double current = max_value_gap(v_base, wm, pi, gamma);

        double step = config.step.initial;
        for (int iter = 0; iter < config.iterations; ++iter, step *= config.step.decay) {
            if (!can_move_t && !can_move_r) break;
            const int a = rng.uniform_int(m);
            const int s = rng.uniform_int(n);
            const bool move_transitions =
                can_move_t && (!can_move_r || rng.uniform() < 0.5);

            if (g == 0) {
                if (move_transitions) {
                    const int src = rng.uniform_int(n);
                    int dst = rng.uniform_int(n - 1);
                    if (dst >= src) ++dst;
                    const double amount = rng.uniform() * step * (config.eps_t / 2.0);
                    Eigen::RowVectorXd saved = wm.transitions[a].row(s);
                    auto row = wm.transitions[a].row(s);
                    if (apply_transport(row, src, dst, amount) > 0.0) {
                        repair_row_sum(row);
                        enforce_row_budget(row, mdp.transition(a).row(s), config.eps_t);
                        const double gap = max_value_gap(v_base, wm, pi, gamma);
                        if (gap > current) {
                            current = gap;
                        } else {
                            wm.transitions[a].row(s) = saved;
                        }
                    }
                } else if (can_move_r) {
                    const double delta =
                        (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform() * step;
                    const double saved = wm.rewards(s, a);
                    wm.rewards(s, a) =
                        shift_reward(mdp.reward(s, a),
                                     wm.rewards(s, a) - mdp.reward(s, a) + delta,
                                     config.eps_r);
                    const double gap = max_value_gap(v_base, wm, pi, gamma);
                    if (gap > current) {
                        current = gap;
                    } else {
                        wm.rewards(s, a) = saved;
                    }
                }
            } else {
                // Grid mode: single-unit lattice moves, recomputed from the
                // integer state so every visited row is bit-identical to the
                // brute-force candidate.
                if (move_transitions) {
                    const int src = rng.uniform_int(n);
                    int dst = rng.uniform_int(n - 1);
                    if (dst >= src) ++dst;
                    std::vector<int>& k = kgrid[a][s];
                    k[src] -= 1;
                    k[dst] += 1;
                    int abs_total = 0;
                    for (const int v : k) abs_total += std::abs(v);
                    Eigen::RowVectorXd candidate =
                        lattice_row(mdp.transition(a).row(s), k, t_unit);
                    bool ok = abs_total <= 2 * g && row_entries_valid(candidate);
                    double gap = 0.0;
                    if (ok) {
                        Eigen::RowVectorXd saved = wm.transitions[a].row(s);
                        wm.transitions[a].row(s) = candidate;
                        gap = max_value_gap(v_base, wm, pi, gamma);
                        if (gap <= current) {
                            wm.transitions[a].row(s) = saved;
                            ok = false;
                        }
                    }
                    if (ok) {
                        current = gap;
                    } else {
                        k[src] += 1;
                        k[dst] -= 1;
                    }
                } else if (can_move_r) {
                    const int dir = rng.uniform() < 0.5 ? -1 : 1;
                    int& j = jgrid[a][s];
                    const int j_new = j + dir;
                    const double candidate = mdp.reward(s, a) + j_new * r_unit;
                    if (std::abs(j_new) <= g && candidate >= 0.0 && candidate <= 1.0) {
                        const double saved = wm.rewards(s, a);
                        wm.rewards(s, a) = candidate;
                        const double gap = max_value_gap(v_base, wm, pi, gamma);
                        if (gap > current) {
                            current = gap;
                            j = j_new;
                        } else {
                            wm.rewards(s, a) = saved;
                        }
                    }
                }
            }
        }

        trace[restart] = current;
        if (current > best_gap) {
            best_gap = current;
            best_model = wm;
        }
    }

    Mdp best(std::move(best_model.transitions), std::move(best_model.rewards), gamma);
    if (best_gap > bound + kBoundSlack) {
        throw BoundViolation("hill_climb_max_gap: gap " + std::to_string(best_gap) +
                                 " exceeds tight bound " + std::to_string(bound),
                             best, best_gap, bound);
    }
    SearchResult result{best_gap, std::move(best), bound,
                        bound > 0.0 ? std::min(1.0, best_gap / bound) : 1.0,
                        std::move(trace)};
    return result;
}

double brute_force_gap(const Mdp& mdp, const Policy& policy, double eps_t, double eps_r,
                       int grid_resolution) {
    check_budgets(eps_t, eps_r);
    if (grid_resolution < 1) {
        throw std::invalid_argument("brute_force_gap: grid_resolution >= 1");
    }
    if (mdp.num_states() > 3 || mdp.num_actions() > 2) {
        throw std::invalid_argument(
            "brute_force_gap: instance too large (needs |S| <= 3 and |A| <= 2), got |S|=" +
            std::to_string(mdp.num_states()) + " |A|=" +
            std::to_string(mdp.num_actions()));
    }
    if (mdp.discount() >= 1.0) {
        throw std::invalid_argument("brute_force_gap: requires discount < 1");
    }

    const int n = mdp.num_states();
    const int m = mdp.num_actions();
    const Matrix& pi = policy.probs();
    const Vector v_base = exact_value(mdp, policy);

    struct Site {
        int s, a;
        std::vector<Eigen::RowVectorXd> rows;
        std::vector<double> rewards;
    };
    std::vector<Site> sites;
    std::int64_t total = 1;
    for (int a = 0; a < m; ++a) {
        for (int s = 0; s < n; ++s) {
            Site site{s, a,
                      row_candidates(mdp.transition(a).row(s), eps_t, grid_resolution),
                      reward_candidates(mdp.reward(s, a), eps_r, grid_resolution)};
            const auto count =
                static_cast<std::int64_t>(site.rows.size() * site.rewards.size());
            if (total > kMaxCandidates / count) {
                throw std::invalid_argument(
                    "brute_force_gap: instance too large (candidate count exceeds 1e7)");
            }
            total *= count;
            sites.push_back(std::move(site));
        }
    }

    WorkingModel wm = copy_model(mdp);
    WorkingModel best_model = wm;
    double best = 0.0;
    // Odometer over the per-site candidate lists.
    std::vector<std::size_t> row_idx(sites.size(), 0);
    std::vector<std::size_t> reward_idx(sites.size(), 0);
    for (const Site& site : sites) {
        wm.transitions[site.a].row(site.s) = site.rows[0];
        wm.rewards(site.s, site.a) = site.rewards[0];
    }
    for (;;) {
        const double gap = max_value_gap(v_base, wm, pi, mdp.discount());
        if (gap > best) {
            best = gap;
            best_model = wm;
        }

        std::size_t pos = 0;
        for (; pos < sites.size(); ++pos) {
            Site& site = sites[pos];
            if (++reward_idx[pos] < site.rewards.size()) {
                wm.rewards(site.s, site.a) = site.rewards[reward_idx[pos]];
                break;
            }
            reward_idx[pos] = 0;
            wm.rewards(site.s, site.a) = site.rewards[0];
            if (++row_idx[pos] < site.rows.size()) {
                wm.transitions[site.a].row(site.s) = site.rows[row_idx[pos]];
                break;
            }
            row_idx[pos] = 0;
            wm.transitions[site.a].row(site.s) = site.rows[0];
        }
        if (pos == sites.size()) break;
    }

    const double bound = bounds::tight_bound(eps_r, eps_t, mdp.discount());
    if (best > bound + kBoundSlack) {
        throw BoundViolation(
            "brute_force_gap: gap " + std::to_string(best) + " exceeds tight bound " +
                std::to_string(bound),
            Mdp(std::move(best_model.transitions), std::move(best_model.rewards),
                mdp.discount()),
            best, bound);
    }
    return best;
}

}  // namespace simbound::adversary
