#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace simbound {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Tolerance for validating that probability rows sum to one.
inline constexpr double kRowSumTol = 1e-12;
/// Residual tolerance enforced by the linear value solvers.
inline constexpr double kSolveTol = 1e-10;

/**
A tabular MDP: transition tensor T[s][a][s'], reward table R[s][a] and a
discount factor. Transitions are stored as one row-stochastic matrix per
action. Rewards must lie in [0, 1]. Immutable after construction; all
operations on it are pure functions, so instances can be shared freely
across threads.

Construction validates every row to kRowSumTol and rejects invalid input;
rows are never silently renormalized (that would corrupt misspecification
measurements). Use renormalized() when normalization is actually wanted.
*/
class Mdp {
  public:
    /// transitions_by_action[a] is the S x S transition matrix of action a.
    Mdp(std::vector<Matrix> transitions_by_action, Matrix rewards, double discount);

    /// Builds an Mdp after rescaling each transition row to sum to one.
    static Mdp renormalized(std::vector<Matrix> transitions_by_action, Matrix rewards,
                            double discount);

    int num_states() const { return static_cast<int>(rewards_.rows()); }
    int num_actions() const { return static_cast<int>(rewards_.cols()); }
    double discount() const { return discount_; }

    const Matrix& transition(int action) const { return transitions_[action]; }
    double transition(int s, int a, int s2) const { return transitions_[a](s, s2); }
    const std::vector<Matrix>& transitions() const { return transitions_; }

    const Matrix& rewards() const { return rewards_; }
    double reward(int s, int a) const { return rewards_(s, a); }

  private:
    std::vector<Matrix> transitions_;
    Matrix rewards_;
    double discount_;
};

/**
A policy: one action distribution per state. Stationary policies hold a
single S x A matrix; finite-horizon policies hold one matrix per timestep.
*/
class Policy {
  public:
    static Policy stationary(Matrix probs);
    static Policy sequence(std::vector<Matrix> probs_per_step);
    /// Point-mass policy that always picks `action`.
    static Policy single_action(int n_states, int n_actions, int action);
    static Policy uniform(int n_states, int n_actions);

    bool is_stationary() const { return stationary_; }
    /// Number of timesteps (sequence mode only).
    int horizon() const { return static_cast<int>(steps_.size()); }
    int num_states() const { return static_cast<int>(steps_.front().rows()); }
    int num_actions() const { return static_cast<int>(steps_.front().cols()); }

    const Matrix& probs() const;
    const Matrix& probs(int step) const;

  private:
    Policy(std::vector<Matrix> steps, bool stationary);

    std::vector<Matrix> steps_;
    bool stationary_;
};

/// Policy-conditioned state-state transition matrix and expected-reward vector.
struct PolicyMatrices {
    Matrix p_pi;  // S x S, row-stochastic
    Vector r_pi;  // S, entries in [0, 1]
};

/**
Measured misspecification between two MDPs on the same state-action space:
the largest L1 distance between paired transition rows and the largest
absolute reward difference, together with the (state, action) pairs that
attain them. Maximizing over (s, a) realizes the supremum over all policies,
because the per-policy row distance is convex in the mixture weights and so
peaks at a deterministic action.
*/
struct MisspecReport {
    double eps_t = 0.0;                 // in [0, 2]
    double eps_r = 0.0;                 // in [0, 1]
    std::pair<int, int> argmax_t{0, 0}; // (state, action)
    std::pair<int, int> argmax_r{0, 0};
};

/// Per-timestep state distributions of two MDPs from a shared start state,
/// plus the mass of their element-wise overlap.
struct DistributionSeries {
    std::vector<Vector> p;       // distribution under M at t = 0..t_max
    std::vector<Vector> p_hat;   // distribution under M-hat
    std::vector<double> overlap_mass;
};

/// P^pi(s, s') = sum_a T(s' | s, a) pi(a | s);  R^pi(s) = sum_a R(s, a) pi(a | s).
PolicyMatrices build_policy_matrices(const Mdp& mdp, const Policy& policy);

/// Same mixture for one step of a timestep-indexed policy.
PolicyMatrices build_policy_matrices(const Mdp& mdp, const Matrix& action_probs);

/**
Exact discounted value of a stationary policy, by direct dense solve of
(I - gamma P^pi) V = R^pi with iterative refinement. The returned vector has
Bellman residual at most kSolveTol in the max norm. Requires gamma < 1.
*/
Vector exact_value(const Mdp& mdp, const Policy& policy);

/**
Finite-horizon undiscounted values. Returns an (H+1) x S matrix V with
V(H, s) = 0 and V(h) = R^{pi_h} + P^{pi_h} V(h+1); the policy must be a
sequence of length H. The MDP's discount is ignored.
*/
Matrix finite_horizon_value(const Mdp& mdp, const Policy& policy, int horizon);

/// Row s0 of (P^pi)^t, computed by repeated vector-matrix products.
Vector t_step_distribution(const Mdp& mdp, const Policy& policy, int s0, int t);

/// Element-wise minimum of two non-negative vectors. For distributions its
/// mass equals 1 - ||p - q||_1 / 2 (the total variation identity).
Vector overlap(const Vector& p, const Vector& q);

/// Measures (eps_t, eps_r) between two MDPs sharing dimensions and discount.
MisspecReport measure_misspec(const Mdp& m, const Mdp& m_hat);

/**
Evolves both MDPs' state distributions from s0 for t_max steps under a
shared stationary policy and records the overlap mass at each step. The
mass starts at 1 and stays at or above (1 - eps_t/2)^t for the measured
eps_t of the pair.
*/
DistributionSeries overlap_trajectory(const Mdp& m, const Mdp& m_hat, const Policy& policy,
                                      int s0, int t_max);

}  // namespace simbound
