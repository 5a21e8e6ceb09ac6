#pragma once

#include "simbound/hierarchy.hpp"
#include "simbound/mdp.hpp"

namespace simbound::witness {

/// A pair of MDPs sharing a single-action policy whose value gap attains a
/// bound exactly.
struct WitnessPair {
    Mdp m;
    Mdp m_hat;
    Policy policy;
};

/**
The two-state construction that attains the tight discounted bound: both
states self-loop in M with rewards (1, 0); M_hat lowers the first reward by
eps_r and leaks eps_t/2 of the first state's self-transition to the second.
State 0 is the rewarding state, state 1 the absorbing zero-reward state.
The measured misspecification equals (eps_t, eps_r) and the value gap at
state 0 equals tight_bound(eps_r, eps_t, gamma).
*/
WitnessPair two_state_witness(double eps_r, double eps_t, double gamma);

/// Same construction in the finite-horizon undiscounted setting; the gap at
/// state 0 after `horizon` steps equals fh_tight_bound(eps_r, eps_t, horizon).
/// The returned MDPs carry discount 1 and the policy is a length-H sequence.
WitnessPair two_state_witness_fh(double eps_r, double eps_t, int horizon);

/// Abstract option sets attaining the tight hierarchy bound, plus the
/// deterministic abstract policy (one option per state) to evaluate them with.
struct HierarchyWitness {
    hierarchy::OptionSet o_star;
    hierarchy::OptionSet o_hat;
    std::vector<int> selected;
};

/**
Symmetric option sets over n_states abstract states: each o* transitions to
every other state with discounted probability gamma/(n-1) and earns r_max;
each o_hat uses gamma/(n-1) - eps_t and earns r_max - eps_r. Both sets are
returned augmented, so all rows sum to exactly gamma. The abstract value gap
equals hierarchy_tight_bound(eps_r, eps_t, gamma, n_states, r_max).
*/
HierarchyWitness hierarchy_witness(int n_states, double eps_r, double eps_t, double gamma,
                                   double r_max);

}  // namespace simbound::witness
