#pragma once

#include "simbound/adversary.hpp"
#include "simbound/bounds.hpp"
#include "simbound/hierarchy.hpp"
#include "simbound/mdp.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace simbound::io {

using nlohmann::json;

/*
File formats.

MDP:        { "n_states": int, "n_actions": int, "discount": float,
              "transitions": [[[float]]],   // [s][a][s']
              "rewards": [[float]] }        // [s][a]
Policy:     { "mode": "stationary" | "sequence",
              "probs": [[float]] or [[[float]]] }
Option set: { "gamma": float,
              "options": [ { "home": int, "r": [float], "p": [[float]] } ] }

Option-set rows follow the ascending ground-state order of each option's
initiation block. Loading reconstructs initiation sets from an abstraction;
the overload without one assumes single-state homes (as produced by the
hierarchy witness).
*/

json mdp_to_json(const Mdp& mdp);
Mdp mdp_from_json(const json& j);

json policy_to_json(const Policy& policy);
Policy policy_from_json(const json& j);

json option_set_to_json(const hierarchy::OptionSet& set);
hierarchy::OptionSet option_set_from_json(const json& j);
hierarchy::OptionSet option_set_from_json(const json& j,
                                          const hierarchy::StateAbstraction& abstraction);

json misspec_to_json(const MisspecReport& report);
json bound_report_to_json(const bounds::BoundReport& report);
json search_result_to_json(const adversary::SearchResult& result);

void save_json(const std::string& path, const json& j);
json load_json(const std::string& path);

}  // namespace simbound::io
