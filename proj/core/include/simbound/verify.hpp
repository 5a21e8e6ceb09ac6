#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace simbound::verify {

/**
One randomized (or gridded) inequality suite. Every check is normalized to a
ratio of (quantity / its bound); ratios at or below 1 plus the listed
absolute slack pass. max_ratio is the worst ratio observed, so a suite that
contains a tightness witness reports a ratio of exactly 1.
*/
struct SuiteSummary {
    std::string name;
    int checks = 0;
    int violations = 0;
    double max_ratio = 0.0;
    double tolerance = 0.0;
};

struct Summary {
    std::uint64_t seed = 0;
    int trials = 0;
    int max_states = 0;
    int max_actions = 0;
    bool all_passed = true;
    std::vector<SuiteSummary> suites;
};

/**
Runs every randomized invariant suite: the total-variation identity, the
geometric overlap decay, the capped linear L1 drift, per-policy
misspecification domination, value-gap soundness against the tight and the
classic bound, bound dominance grids, and option-model soundness with
augmented row masses. Fully deterministic given (trials, sizes, seed).
*/
Summary run_verification(int trials, int max_states, int max_actions, std::uint64_t seed);

nlohmann::json summary_to_json(const Summary& summary);

}  // namespace simbound::verify
