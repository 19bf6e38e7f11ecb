#pragma once

// The subcommands behind the zenoqst executable, callable from code.
//
// Validity gates (Zeno ratio Omega/min(g, lambda) above the configured
// threshold, fiber mode count above 1) become report warnings, or a thrown
// ValidityError when `strict` is set.

#include "zenoqst/cli/config.hpp"
#include "zenoqst/cli/report.hpp"
#include "zenoqst/cli/sweep.hpp"
#include "zenoqst/dynamics.hpp"
#include "zenoqst/zeno.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

namespace zenoqst::cli {

struct CommandOptions {
    bool strict = false;
    int workers = -1;  // -1 keeps the configured value
};

std::vector<std::string> validity_warnings(const ExperimentConfig& cfg, const CommandOptions& opts);

// Transfers qubit.<sender> (default |1>) from sender to receiver. With
// `series` set, also records populations of the seven chain states and the
// fidelity against the segment target.
RunReport cmd_qst(const ExperimentConfig& cfg, const CommandOptions& opts = {}, TimeSeries* series = nullptr);

// Swap of atom_a and atom_b through helper on nodes max(a, b, helper) + 1.
RunReport cmd_qss(const ExperimentConfig& cfg, const CommandOptions& opts = {});
// The same swap on a `nodes`-node bus.
RunReport cmd_network(const ExperimentConfig& cfg, const CommandOptions& opts = {});

// Requires a [sweep] section.
SweepResult cmd_sweep(const ExperimentConfig& cfg, const CommandOptions& opts = {});

// Qubits used by cmd_qss/cmd_network when the config names none.
Qubit default_swap_qubit_a();
Qubit default_swap_qubit_b();

struct ZenoSummary {
    double g = 1.0;
    double lambda = 1.0;
    double omega = 0.1;
    ZenoDecomposition decomposition;
    std::array<double, 5> analytic{};
    double max_eigenvalue_error = 0.0;
    double dark_subspace_angle = 0.0;     // sine of the largest principal angle
    double completeness_error = 0.0;
    double orthogonality_error = 0.0;
    double reconstruction_error = 0.0;
    cplx coupling_sender{};               // <phi1|H_eff|dark>
    cplx coupling_receiver{};             // <phi7|H_eff|dark>
    double analytic_coupling = 0.0;       // lambda * Omega / sqrt(2 lambda^2 + g^2)
    std::optional<Operator> effective;    // H_eff on the exact one-excitation sector
};

// Two-node pair (receiver, sender) = (0, 1) on the exact one-excitation sector.
ZenoSummary cmd_zeno(const ExperimentConfig& cfg);
void write_zeno_text(std::ostream& os, const ZenoSummary& z);
// Basis listing, then each projector and H_eff in sparse-triplet form,
// separated by "# projector <n> eta=<value> rank=<r>" and "# effective" lines.
void write_decomposition(std::ostream& os, const ZenoSummary& z);

}  // namespace zenoqst::cli
