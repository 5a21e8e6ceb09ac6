#include "simbound/sweep.hpp"

#include "simbound/bounds.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace simbound::sweep {

namespace {

std::string format_value(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

Row evaluate(const Spec& spec, double value) {
    double eps_r = spec.eps_r;
    double eps_t = spec.eps_t;
    double gamma = spec.gamma;
    if (spec.variable == Variable::gamma) {
        gamma = value;
    } else {
        eps_r = value;
        eps_t = value;
    }
    const double v_max = 1.0 / (1.0 - gamma);
    const double original = bounds::original_bound(eps_r, eps_t, gamma);
    const double tight = bounds::tight_bound(eps_r, eps_t, gamma);
    return Row{value, original, tight, original / v_max, tight / v_max};
}

}  // namespace

std::vector<Row> run(const Spec& spec) {
    if (spec.steps < 1) throw std::invalid_argument("sweep: steps must be >= 1");
    if (spec.to < spec.from) throw std::invalid_argument("sweep: range must ascend");
    std::vector<Row> rows;
    if (spec.from == spec.to || spec.steps == 1) {
        rows.push_back(evaluate(spec, spec.from));
        return rows;
    }
    rows.reserve(spec.steps);
    for (int i = 0; i < spec.steps; ++i) {
        const double value =
            spec.from + i * (spec.to - spec.from) / (spec.steps - 1);
        rows.push_back(evaluate(spec, value));
    }
    return rows;
}

void write_csv(std::ostream& out, const std::vector<Row>& rows) {
    out << "sweep_value,original,tight,original_normalized,tight_normalized\n";
    for (const Row& row : rows) {
        out << format_value(row.sweep_value) << ',' << format_value(row.original) << ','
            << format_value(row.tight) << ',' << format_value(row.original_normalized)
            << ',' << format_value(row.tight_normalized) << '\n';
    }
}

std::vector<Row> read_csv(std::istream& in) {
    std::vector<Row> rows;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("sweep CSV: missing header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        Row row{};
        char comma = ',';
        fields >> row.sweep_value >> comma >> row.original >> comma >> row.tight >>
            comma >> row.original_normalized >> comma >> row.tight_normalized;
        if (!fields) throw std::runtime_error("sweep CSV: malformed row '" + line + "'");
        rows.push_back(row);
    }
    return rows;
}

}  // namespace simbound::sweep
