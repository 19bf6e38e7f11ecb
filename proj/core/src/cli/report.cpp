#include "zenoqst/cli/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>

namespace zenoqst::cli {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v, const char* spec = "%.10g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// JSON has no NaN or infinity.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void write_report_text(std::ostream& os, const RunReport& r) {
    os << "command: " << r.command << '\n';
    if (r.fidelity) os << "fidelity: " << fmt(*r.fidelity) << '\n';
    for (std::size_t i = 0; i < r.segment_fidelities.size(); ++i)
        os << "segment " << i << " fidelity: " << fmt(r.segment_fidelities[i]) << '\n';
    for (const auto& [name, value] : r.values) os << name << ": " << fmt(value) << '\n';

    const auto& d = r.diagnostics;
    os << "integrator: steps=" << d.steps << " rejected=" << d.rejected_steps << " rhs=" << d.rhs_evaluations
       << " max_trace_dev=" << fmt(d.max_trace_deviation, "%.3g")
       << " max_herm_dev=" << fmt(d.max_hermiticity_deviation, "%.3g")
       << " min_eig=" << (std::isfinite(d.min_eigenvalue) ? fmt(d.min_eigenvalue, "%.3g") : std::string("n/a"))
       << '\n';
    os << "wall time: " << fmt(r.wall_seconds, "%.3f") << " s\n";
    for (const auto& w : r.warnings) os << "warning: " << w << '\n';
    for (const auto& w : d.warnings) os << "warning: " << w << '\n';
}

void write_report_json(std::ostream& os, const RunReport& r) {
    json j;
    j["command"] = r.command;
    json config = json::object();
    for (const auto& [k, v] : r.config) config[k] = v;
    j["config"] = config;
    j["fidelity"] = r.fidelity ? number(*r.fidelity) : json(nullptr);
    j["segment_fidelities"] = json::array();
    for (double f : r.segment_fidelities) j["segment_fidelities"].push_back(number(f));
    json values = json::object();
    for (const auto& [k, v] : r.values) values[k] = number(v);
    j["values"] = values;
    j["wall_seconds"] = r.wall_seconds;
    const auto& d = r.diagnostics;
    j["diagnostics"] = {{"steps", d.steps},
                        {"rejected_steps", d.rejected_steps},
                        {"rhs_evaluations", d.rhs_evaluations},
                        {"max_trace_deviation", number(d.max_trace_deviation)},
                        {"max_hermiticity_deviation", number(d.max_hermiticity_deviation)},
                        {"max_norm_deviation", number(d.max_norm_deviation)},
                        {"min_eigenvalue", number(d.min_eigenvalue)}};
    std::vector<std::string> warnings = r.warnings;
    warnings.insert(warnings.end(), d.warnings.begin(), d.warnings.end());
    j["warnings"] = warnings;
    os << j.dump(2) << '\n';
}

}  // namespace zenoqst::cli
