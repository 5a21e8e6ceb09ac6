#pragma once

#include "simbound/mdp.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace simbound::adversary {

/// Step-size schedule for hill climbing: geometric decay per iteration.
struct StepSchedule {
    double initial = 0.1;
    double decay = 0.995;
};

/**
Configuration of an adversarial search. The seed fully determines the run;
restarts own independent RNG streams derived from (seed, restart index), so
their results do not depend on execution order. grid_resolution = 0 searches
continuous perturbations; a positive value restricts moves to the same
lattice brute_force_gap enumerates (transition deviations in multiples of
eps_t/(2g), reward deviations in multiples of eps_r/g).
*/
struct SearchConfig {
    double eps_t = 0.0;
    double eps_r = 0.0;
    int iterations = 2000;
    int restarts = 20;
    std::uint64_t seed = 0;
    StepSchedule step;
    int grid_resolution = 0;
};

/// Outcome of a search. best_gap never exceeds bound_value; an exceedance
/// would falsify the tight bound (or reveal a bug) and aborts the search
/// with a BoundViolation carrying the offending model.
struct SearchResult {
    double best_gap = 0.0;
    Mdp best_mdp_hat;
    double bound_value = 0.0;
    double achievement_ratio = 0.0;  // best_gap / bound_value, 1 when bound is 0
    std::vector<double> trace;       // per-restart best gaps
};

/// Thrown when a search produces a gap above the bound it is checking.
class BoundViolation : public std::runtime_error {
  public:
    BoundViolation(std::string message, Mdp counterexample, double gap, double bound)
        : std::runtime_error(std::move(message)),
          counterexample_(std::move(counterexample)),
          gap_(gap),
          bound_(bound) {}

    const Mdp& counterexample() const { return counterexample_; }
    double gap() const { return gap_; }
    double bound() const { return bound_; }

  private:
    Mdp counterexample_;
    double gap_;
    double bound_;
};

/**
Randomly perturbs transitions and rewards within the given budgets. Transition
rows change by pairwise mass transport (take mass from one destination, give
it to another), which moves the row L1 distance by exactly twice the mass
moved and never leaves the simplex; rewards shift per (s, a) and are clipped
to [0, 1]. The returned MDP always measures at most (eps_t, eps_r) against
the input.
*/
Mdp perturb_within(const Mdp& mdp, double eps_t, double eps_r, std::uint64_t seed);

/**
Greedy stochastic search for the perturbation with the largest value gap
max_s |V(s) - V_hat(s)| under a fixed policy, with random restarts and a
geometrically decaying step. Deterministic given the seed. With the
two-state self-loop base the search recovers the full tight bound.
*/
SearchResult hill_climb_max_gap(const Mdp& mdp, const Policy& policy,
                                const SearchConfig& config);

/**
Exhaustive maximum over the perturbation lattice with `grid_resolution`
subdivisions of each budget. Only instances with at most 3 states, 2 actions
and 1e7 total candidates are accepted; larger ones are rejected with an
explicit size message. Refining the grid by an integer factor keeps all old
candidates, so the result is non-decreasing under refinement.
*/
double brute_force_gap(const Mdp& mdp, const Policy& policy, double eps_t, double eps_r,
                       int grid_resolution);

}  // namespace simbound::adversary
