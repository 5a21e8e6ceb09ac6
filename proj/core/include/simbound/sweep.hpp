#pragma once

#include <iosfwd>
#include <vector>

namespace simbound::sweep {

enum class Variable {
    gamma,  // sweep the discount at fixed (eps_r, eps_t)
    eps,    // sweep eps_r = eps_t = value at fixed gamma
};

struct Spec {
    Variable variable = Variable::gamma;
    double from = 0.0;
    double to = 0.0;
    int steps = 1;      // number of rows; from == to collapses to a single row
    double eps_r = 0.0; // fixed when sweeping gamma
    double eps_t = 0.0;
    double gamma = 0.0; // fixed when sweeping eps
};

struct Row {
    double sweep_value;
    double original;
    double tight;
    double original_normalized;  // divided by V_MAX = 1/(1-gamma)
    double tight_normalized;
};

std::vector<Row> run(const Spec& spec);

/// CSV with header sweep_value,original,tight,original_normalized,
/// tight_normalized; every value printed with 17 significant digits so the
/// file round-trips the exact doubles.
void write_csv(std::ostream& out, const std::vector<Row>& rows);

std::vector<Row> read_csv(std::istream& in);

}  // namespace simbound::sweep
