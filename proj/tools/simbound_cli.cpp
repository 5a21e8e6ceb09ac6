// Command-line front end: closed-form bound evaluation, Figure-style sweeps,
// tightness witnesses, randomized soundness verification and adversarial
// search. Machine-readable JSON goes to stdout, diagnostics to stderr; the
// exit code is zero iff every asserted inequality held.

#include "simbound/adversary.hpp"
#include "simbound/bounds.hpp"
#include "simbound/hierarchy.hpp"
#include "simbound/json_io.hpp"
#include "simbound/mdp.hpp"
#include "simbound/sweep.hpp"
#include "simbound/verify.hpp"
#include "simbound/witness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using simbound::io::json;

constexpr double kWitnessGapTol = 1e-9;

struct BoundArgs {
    double eps_r = 0.0;
    double eps_t = 0.0;
    double gamma = -1.0;
    int horizon = 0;
    int n_states = 0;
    double r_max = 1.0;
};

int run_bound(const BoundArgs& args) {
    json out;
    if (args.horizon > 0) {
        const auto report =
            simbound::bounds::finite_horizon_report(args.eps_r, args.eps_t, args.horizon);
        out = simbound::io::bound_report_to_json(report);
        out["family"] = "finite_horizon";
        out["horizon"] = args.horizon;
    } else {
        const auto report =
            simbound::bounds::discounted_report(args.eps_r, args.eps_t, args.gamma);
        out = simbound::io::bound_report_to_json(report);
        out["family"] = "discounted";
        out["gamma"] = args.gamma;
        out["optimal_policy_loss"] =
            simbound::bounds::optimal_policy_loss_bound(args.eps_r, args.eps_t, args.gamma);
        out["linearization_gap"] =
            simbound::bounds::linearization_gap(args.eps_r, args.eps_t, args.gamma);
        if (args.n_states > 0) {
            const auto hier = simbound::bounds::hierarchy_report(
                args.eps_r, args.eps_t, args.gamma, args.n_states, args.r_max);
            out["hierarchy"] = simbound::io::bound_report_to_json(hier);
            out["hierarchy"]["n_states"] = args.n_states;
            out["hierarchy"]["r_max"] = args.r_max;
        }
    }
    out["eps_r"] = args.eps_r;
    out["eps_t"] = args.eps_t;
    std::cout << out.dump(2) << "\n";
    return 0;
}

struct SweepArgs {
    std::string variable;
    double from = 0.0;
    double to = 0.0;
    int steps = 1;
    double eps_r = 0.0;
    double eps_t = 0.0;
    double gamma = 0.9;
    std::string output;
};

int run_sweep(const SweepArgs& args) {
    simbound::sweep::Spec spec;
    spec.variable = args.variable == "gamma" ? simbound::sweep::Variable::gamma
                                             : simbound::sweep::Variable::eps;
    spec.from = args.from;
    spec.to = args.to;
    spec.steps = args.steps;
    spec.eps_r = args.eps_r;
    spec.eps_t = args.eps_t;
    spec.gamma = args.gamma;

    const auto rows = simbound::sweep::run(spec);
    std::ofstream out(args.output);
    if (!out) {
        std::cerr << "error: cannot open '" << args.output << "' for writing\n";
        return 1;
    }
    simbound::sweep::write_csv(out, rows);
    if (!out) {
        std::cerr << "error: failed writing '" << args.output << "'\n";
        return 1;
    }
    std::cout << json{{"rows", rows.size()}, {"output", args.output}}.dump(2) << "\n";
    return 0;
}

struct WitnessArgs {
    std::string family;
    double eps_r = 0.0;
    double eps_t = 0.0;
    double gamma = 0.9;
    int horizon = 1;
    int n_states = 2;
    double r_max = 1.0;
    std::string output_dir;
};

int run_witness(const WitnessArgs& args) {
    namespace fs = std::filesystem;
    if (!args.output_dir.empty()) fs::create_directories(args.output_dir);
    const auto path_in_dir = [&](const std::string& name) {
        return (fs::path(args.output_dir) / name).string();
    };

    double gap = 0.0;
    double bound = 0.0;
    json out;
    if (args.family == "two-state") {
        const auto pair = simbound::witness::two_state_witness(args.eps_r, args.eps_t,
                                                               args.gamma);
        const auto v = simbound::exact_value(pair.m, pair.policy);
        const auto v_hat = simbound::exact_value(pair.m_hat, pair.policy);
        gap = (v - v_hat).lpNorm<Eigen::Infinity>();
        bound = simbound::bounds::tight_bound(args.eps_r, args.eps_t, args.gamma);
        if (!args.output_dir.empty()) {
            simbound::io::save_json(path_in_dir("m.json"), simbound::io::mdp_to_json(pair.m));
            simbound::io::save_json(path_in_dir("m_hat.json"),
                                    simbound::io::mdp_to_json(pair.m_hat));
            simbound::io::save_json(path_in_dir("policy.json"),
                                    simbound::io::policy_to_json(pair.policy));
        }
    } else if (args.family == "fh") {
        const auto pair = simbound::witness::two_state_witness_fh(args.eps_r, args.eps_t,
                                                                  args.horizon);
        const auto values =
            simbound::finite_horizon_value(pair.m, pair.policy, args.horizon);
        const auto values_hat =
            simbound::finite_horizon_value(pair.m_hat, pair.policy, args.horizon);
        gap = (values.row(0) - values_hat.row(0)).lpNorm<Eigen::Infinity>();
        bound = simbound::bounds::fh_tight_bound(args.eps_r, args.eps_t, args.horizon);
        if (!args.output_dir.empty()) {
            simbound::io::save_json(path_in_dir("m.json"), simbound::io::mdp_to_json(pair.m));
            simbound::io::save_json(path_in_dir("m_hat.json"),
                                    simbound::io::mdp_to_json(pair.m_hat));
            simbound::io::save_json(path_in_dir("policy.json"),
                                    simbound::io::policy_to_json(pair.policy));
        }
    } else if (args.family == "hierarchy") {
        const auto hw = simbound::witness::hierarchy_witness(
            args.n_states, args.eps_r, args.eps_t, args.gamma, args.r_max);
        const auto v = simbound::hierarchy::abstract_value(hw.o_star, hw.selected);
        const auto v_hat = simbound::hierarchy::abstract_value(hw.o_hat, hw.selected);
        gap = (v - v_hat).lpNorm<Eigen::Infinity>();
        bound = simbound::bounds::hierarchy_tight_bound(args.eps_r, args.eps_t, args.gamma,
                                                        args.n_states, args.r_max);
        if (!args.output_dir.empty()) {
            simbound::io::save_json(path_in_dir("o_star.json"),
                                    simbound::io::option_set_to_json(hw.o_star));
            simbound::io::save_json(path_in_dir("o_hat.json"),
                                    simbound::io::option_set_to_json(hw.o_hat));
        }
    } else {
        std::cerr << "error: unknown witness family '" << args.family << "'\n";
        return 1;
    }

    const double error = std::abs(gap - bound);
    out = json{{"family", args.family},
               {"gap", gap},
               {"bound", bound},
               {"abs_error", error},
               {"within_tolerance", error <= kWitnessGapTol}};
    std::cout << out.dump(2) << "\n";
    if (error > kWitnessGapTol) {
        std::cerr << "error: witness gap deviates from the bound by " << error << "\n";
        return 1;
    }
    return 0;
}

struct VerifyArgs {
    int trials = 1000;
    int max_states = 6;
    int max_actions = 3;
    std::uint64_t seed = 0;
};

int run_verify(const VerifyArgs& args) {
    const auto summary = simbound::verify::run_verification(args.trials, args.max_states,
                                                            args.max_actions, args.seed);
    std::cout << simbound::verify::summary_to_json(summary).dump(2) << "\n";
    return summary.all_passed ? 0 : 1;
}

struct SearchArgs {
    std::string mdp_path;
    std::string policy_path;
    std::string witness_family;
    double gamma = 0.9;
    double eps_r = 0.0;
    double eps_t = 0.0;
    int iterations = 2000;
    int restarts = 20;
    std::uint64_t seed = 0;
    int grid = 0;
    std::string output;
};

int run_search(const SearchArgs& args) {
    std::optional<simbound::Mdp> base;
    std::optional<simbound::Policy> policy;
    if (!args.witness_family.empty()) {
        if (args.witness_family != "two-state") {
            std::cerr << "error: only the two-state witness family seeds a search\n";
            return 1;
        }
        auto pair = simbound::witness::two_state_witness(0.0, 0.0, args.gamma);
        base = std::move(pair.m);
        policy = std::move(pair.policy);
    } else {
        base = simbound::io::mdp_from_json(simbound::io::load_json(args.mdp_path));
        if (!args.policy_path.empty()) {
            policy =
                simbound::io::policy_from_json(simbound::io::load_json(args.policy_path));
        } else {
            policy = simbound::Policy::uniform(base->num_states(), base->num_actions());
        }
    }

    simbound::adversary::SearchConfig config;
    config.eps_r = args.eps_r;
    config.eps_t = args.eps_t;
    config.iterations = args.iterations;
    config.restarts = args.restarts;
    config.seed = args.seed;
    config.grid_resolution = args.grid;

    try {
        const auto result = simbound::adversary::hill_climb_max_gap(*base, *policy, config);
        const json out = simbound::io::search_result_to_json(result);
        if (!args.output.empty()) simbound::io::save_json(args.output, out);
        std::cout << out.dump(2) << "\n";
        return 0;
    } catch (const simbound::adversary::BoundViolation& violation) {
        // A gap above the tight bound falsifies the theorem (or reveals a
        // bug); dump the counterexample for inspection and fail loudly.
        const std::string path =
            args.output.empty() ? "counterexample.json" : args.output;
        simbound::io::save_json(path, simbound::io::mdp_to_json(violation.counterexample()));
        std::cerr << "error: " << violation.what() << "\ncounterexample written to "
                  << path << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact value computation, misspecification measurement and tight "
                 "value-error bounds for tabular MDPs"};
    app.require_subcommand(1);

    BoundArgs bound_args;
    auto* bound = app.add_subcommand("bound", "Evaluate all applicable bounds");
    bound->add_option("--eps-r", bound_args.eps_r, "Reward misspecification")->required();
    bound->add_option("--eps-t", bound_args.eps_t, "Transition misspecification")
        ->required();
    auto* gamma_opt = bound->add_option("--gamma", bound_args.gamma, "Discount factor");
    auto* horizon_opt =
        bound->add_option("--horizon", bound_args.horizon, "Finite horizon");
    gamma_opt->excludes(horizon_opt);
    horizon_opt->excludes(gamma_opt);
    bound->add_option("--n-states", bound_args.n_states,
                      "Enable hierarchy bounds for this many states");
    bound->add_option("--r-max", bound_args.r_max, "Multi-time reward cap");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Write bound curves as CSV");
    sweep->add_option("--var", sweep_args.variable, "Sweep variable")
        ->required()
        ->check(CLI::IsMember({"gamma", "eps"}));
    sweep->add_option("--from", sweep_args.from)->required();
    sweep->add_option("--to", sweep_args.to)->required();
    sweep->add_option("--steps", sweep_args.steps)->required();
    sweep->add_option("--eps-r", sweep_args.eps_r, "Fixed eps_r (gamma sweep)");
    sweep->add_option("--eps-t", sweep_args.eps_t, "Fixed eps_t (gamma sweep)");
    sweep->add_option("--gamma", sweep_args.gamma, "Fixed discount (eps sweep)");
    sweep->add_option("--output", sweep_args.output, "CSV path")->required();

    WitnessArgs witness_args;
    auto* witness = app.add_subcommand("witness", "Construct a tightness witness");
    witness->add_option("--family", witness_args.family, "two-state | fh | hierarchy")
        ->required()
        ->check(CLI::IsMember({"two-state", "fh", "hierarchy"}));
    witness->add_option("--eps-r", witness_args.eps_r)->required();
    witness->add_option("--eps-t", witness_args.eps_t)->required();
    witness->add_option("--gamma", witness_args.gamma);
    witness->add_option("--horizon", witness_args.horizon);
    witness->add_option("--n-states", witness_args.n_states);
    witness->add_option("--r-max", witness_args.r_max);
    witness->add_option("--output", witness_args.output_dir, "Directory for JSON files");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Run randomized soundness suites");
    verify->add_option("--trials", verify_args.trials)->check(CLI::PositiveNumber);
    verify->add_option("--max-states", verify_args.max_states);
    verify->add_option("--max-actions", verify_args.max_actions);
    verify->add_option("--seed", verify_args.seed);

    SearchArgs search_args;
    auto* search = app.add_subcommand("search", "Adversarial search for the worst gap");
    auto* mdp_opt = search->add_option("--mdp", search_args.mdp_path, "Base MDP JSON");
    search->add_option("--policy", search_args.policy_path,
                       "Policy JSON (default: uniform)");
    auto* family_opt = search->add_option("--witness-family", search_args.witness_family,
                                          "Use a witness base MDP instead of a file");
    mdp_opt->excludes(family_opt);
    family_opt->excludes(mdp_opt);
    search->add_option("--gamma", search_args.gamma, "Discount of the witness base");
    search->add_option("--eps-r", search_args.eps_r)->required();
    search->add_option("--eps-t", search_args.eps_t)->required();
    search->add_option("--iterations", search_args.iterations);
    search->add_option("--restarts", search_args.restarts);
    search->add_option("--seed", search_args.seed);
    search->add_option("--grid", search_args.grid,
                       "Restrict moves to the brute-force lattice (0 = continuous)");
    search->add_option("--output", search_args.output, "Also write the result here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bound->parsed()) {
            if (bound_args.horizon == 0 && bound_args.gamma < 0.0) {
                std::cerr << "error: one of --gamma or --horizon is required\n";
                return 1;
            }
            return run_bound(bound_args);
        }
        if (sweep->parsed()) return run_sweep(sweep_args);
        if (witness->parsed()) return run_witness(witness_args);
        if (verify->parsed()) return run_verify(verify_args);
        if (search->parsed()) {
            if (search_args.mdp_path.empty() && search_args.witness_family.empty()) {
                std::cerr << "error: one of --mdp or --witness-family is required\n";
                return 1;
            }
            return run_search(search_args);
        }
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    }
    return 0;
}
