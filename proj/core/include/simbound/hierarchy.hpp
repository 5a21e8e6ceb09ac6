#pragma once

#include "simbound/bounds.hpp"
#include "simbound/mdp.hpp"

#include <vector>

namespace simbound::hierarchy {

/**
A total map from ground states to abstract states. Every abstract state must
be hit by at least one ground state.
*/
class StateAbstraction {
  public:
    StateAbstraction(std::vector<int> phi, int n_abstract);
    static StateAbstraction identity(int n_states);

    int n_ground() const { return static_cast<int>(phi_.size()); }
    int n_abstract() const { return static_cast<int>(blocks_.size()); }
    int abstract_of(int ground) const { return phi_[ground]; }
    /// Ground states of one abstract state, in ascending order.
    const std::vector<int>& block(int abstract) const { return blocks_[abstract]; }

  private:
    std::vector<int> phi_;
    std::vector<std::vector<int>> blocks_;
};

/**
An option relative to one abstract state: it can start from any ground state
of its home abstract state, runs the given internal policy while inside it,
and terminates on the first step that leaves it. Only the home block's rows
of `internal_policy` are consulted.
*/
struct PhiOption {
    int home = 0;
    Matrix internal_policy;  // S x A action probabilities
};

/**
Multi-time model of one option: r(i) is the expected discounted reward
accumulated over an execution from the i-th initiation state, and p(i, s')
the total discounted probability of terminating in ground state s'. Row
masses of p are at most gamma; augmenting with the absorbing column s_x
(appended last) brings every row mass to exactly gamma.
*/
struct OptionModel {
    int home = 0;
    std::vector<int> initiation;  // ground states, ascending; row order of r and p
    Vector r;
    Matrix p;           // |initiation| x n_ground (+1 once augmented)
    int n_ground = 0;
    bool augmented = false;
};

/// A family of option models sharing a ground space and discount.
struct OptionSet {
    double gamma = 0.0;
    int n_ground = 0;
    std::vector<OptionModel> options;
};

/**
Computes the multi-time model of a phi-relative option by solving the
discounted occupancy system over the option's home block: with P_in the
policy-conditioned transitions inside the block and F the flows out of it,
U = (I - gamma P_in)^-1, r = U r_in and p = gamma U F.
*/
OptionModel multi_time_model(const Mdp& base, const StateAbstraction& abstraction,
                             const PhiOption& option);

/**
Appends the absorbing column s_x with entry gamma minus the row mass, so
that every row of p sums to exactly gamma. Rejects models whose row mass
already exceeds gamma (inconsistent with discounting) and models that are
already augmented.
*/
OptionModel augment_absorbing(const OptionModel& model, double gamma);

/**
Largest per-entry transition gap (excluding the s_x column) and per-entry
reward gap across paired options. pairing[i] selects the option of `b`
matched with a.options[i]; paired options must share home and initiation.
*/
std::pair<double, double> option_misspec(const OptionSet& a, const OptionSet& b,
                                         const std::vector<int>& pairing);

/// Identity pairing by index.
std::pair<double, double> option_misspec(const OptionSet& a, const OptionSet& b);

/**
Value of the deterministic abstract policy that runs option
set.options[selected[k]] at abstract state k. The selected options'
initiation sets must partition the ground space. Values are returned for
the ground states; the absorbing state, when present, is pinned at zero.
Accepts either all-augmented or all-raw models.
*/
Vector abstract_value(const OptionSet& set, const std::vector<int>& selected);

/**
Evaluates both option sets under the same abstract policy and compares the
largest per-state value gap to the hierarchy bounds at the measured
per-entry misspecification. r_max is the cap on multi-time rewards used by
the bound formulas.
*/
bounds::BoundReport hierarchy_gap_check(const OptionSet& o_star, const OptionSet& o_hat,
                                        const std::vector<int>& selected, double r_max);

}  // namespace simbound::hierarchy
