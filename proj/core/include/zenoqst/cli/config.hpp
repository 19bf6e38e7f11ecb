#pragma once

// Experiment configuration. Sections and keys (all rates in units of g):
//
//   [system]      nodes, photon_cutoff, restrict_to_sector,
//                 fiber_length_m, fiber_bandwidth (rad/s), light_speed (m/s)
//   [couplings]   omega, g, lambda, zeno_threshold
//   [physical]    g, lambda, kappa, kappa_f, gamma as rates in MHz (a "2pi*"
//                 prefix is accepted); converted to ratios of g. Excludes
//                 [couplings] lambda/g and [noise].
//   [noise]       kappa, kappa_f, gamma
//   [protocol]    sender, receiver, atom_a, atom_b, helper,
//                 qubit.<node> = a_re, a_im, b_re, b_im
//   [integrator]  method (adaptive|rk4), abs_tol, rel_tol, max_step,
//                 trace_policy (off|warn|renormalize), unitary (spectral|ode)
//   [sweep]       axis1, axis1_range = min, max, axis1_points, same for axis2,
//                 workers
//
// Node indices are 0-based.

#include "zenoqst/cli/ini.hpp"
#include "zenoqst/cli/sweep.hpp"
#include "zenoqst/hilbert.hpp"
#include "zenoqst/protocol.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zenoqst::cli {

struct ExperimentConfig {
    std::string source;

    int nodes = 2;
    int photon_cutoff = 1;
    bool restrict_to_sector = true;
    std::optional<FiberSpec> fiber;

    double omega = 0.1;
    double g = 1.0;
    double lambda = 1.0;
    double zeno_threshold = kDefaultZenoWarnThreshold;
    NoiseConfig noise;

    int sender = 1;
    int receiver = 0;
    int atom_a = 1;
    int atom_b = 2;
    int helper = 0;
    AtomStateSpec qubits;

    IntegratorSettings integrator;

    std::optional<SweepGrid> sweep;
    int workers = 0;

    // Every entry as read, "section.key" -> value, in file order.
    std::vector<std::pair<std::string, std::string>> echo;

    QstParameters qst_parameters() const { return {omega, g, lambda, noise}; }
    RunOptions run_options() const {
        RunOptions o;
        o.integrator = integrator;
        o.photon_cutoff = photon_cutoff;
        o.restrict_to_sector = restrict_to_sector;
        return o;
    }
};

// Throws ConfigError with line/field diagnostics.
ExperimentConfig parse_config(std::string_view text, const std::string& source);
ExperimentConfig load_config_file(const std::filesystem::path& path);
ExperimentConfig load_preset(std::string_view name);

// Preset texts compiled from configs/*.ini.
std::optional<std::string_view> preset_text(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace zenoqst::cli
