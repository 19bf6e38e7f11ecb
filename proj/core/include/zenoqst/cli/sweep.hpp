#pragma once

// Two-axis QST fidelity sweeps, evaluated in parallel and written as CSV:
//
//   # zenoqst sweep v1
//   # <section>.<key> = <value>     one line per configuration entry
//   <axis1>,<axis2>,fidelity,error
//   <x1>,<x2>,<F>,                 12 significant digits, axis1-major rows
//
// A failed point leaves `fidelity` empty and names the failure in `error`
// (zeno_ratio, numerical, invalid).

#include "zenoqst/protocol.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zenoqst::cli {

enum class SweepParameter { lambda_over_g, omega_over_g, kappa_over_g, gamma_over_g, kappa_f_over_lambda };

std::string_view parameter_name(SweepParameter p);
std::optional<SweepParameter> parse_parameter(std::string_view name);

struct SweepAxis {
    SweepParameter parameter = SweepParameter::lambda_over_g;
    double min = 0.0;
    double max = 1.0;
    int points = 21;

    double value(int i) const;
};

struct SweepGrid {
    SweepAxis axis1;
    SweepAxis axis2;

    // points >= 2, 0 <= min <= max, distinct parameters.
    void validate() const;
};

struct SweepPoint {
    double x1 = 0.0;
    double x2 = 0.0;
    std::optional<double> fidelity;
    std::string error;
    EvolutionDiagnostics diagnostics;
};

struct SweepResult {
    SweepGrid grid;
    std::vector<SweepPoint> points;  // axis1-major

    const SweepPoint& at(int i, int j) const {
        return points.at(static_cast<std::size_t>(i * grid.axis2.points + j));
    }
};

struct SweepOptions {
    RunOptions run;
    int workers = 0;  // 0 selects std::thread::hardware_concurrency()
    double zeno_threshold = kDefaultZenoWarnThreshold;
    bool strict = false;  // Zeno-ratio violations become point errors
};

// Resolves a grid point on top of `base`. Ratios to lambda use the point's
// lambda, so kappa_f/lambda composes with a lambda/g axis.
QstParameters apply_point(const QstParameters& base, const SweepGrid& grid, double x1, double x2);

SweepResult run_sweep(const SweepGrid& grid, const QstParameters& base, const SweepOptions& options);

void write_sweep_csv(std::ostream& os, const SweepResult& result,
                     const std::vector<std::pair<std::string, std::string>>& config_echo);

}  // namespace zenoqst::cli
