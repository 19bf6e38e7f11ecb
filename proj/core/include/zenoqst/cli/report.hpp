#pragma once

#include "zenoqst/integrator.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace zenoqst::cli {

struct RunReport {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::optional<double> fidelity;
    std::vector<double> segment_fidelities;
    // Further named results, e.g. "atom_fidelity.3".
    std::vector<std::pair<std::string, double>> values;
    double wall_seconds = 0.0;
    EvolutionDiagnostics diagnostics;
    std::vector<std::string> warnings;  // validity gates; integrator warnings live in diagnostics
};

void write_report_text(std::ostream& os, const RunReport& report);
void write_report_json(std::ostream& os, const RunReport& report);

}  // namespace zenoqst::cli
