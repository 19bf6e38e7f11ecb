#include "zenoqst/cli/commands.hpp"

#include "zenoqst/errors.hpp"
#include "zenoqst/triplets.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace zenoqst::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

RunReport start_report(const char* command, const ExperimentConfig& cfg, const CommandOptions& opts) {
    RunReport r;
    r.command = command;
    r.config = cfg.echo;
    r.warnings = validity_warnings(cfg, opts);
    return r;
}

RunReport swap_report(const char* command, const ExperimentConfig& cfg, const CommandOptions& opts,
                      const PulseSchedule& schedule) {
    const auto start = Clock::now();
    RunReport report = start_report(command, cfg, opts);
    const Qubit qa = cfg.qubits.atoms.count(cfg.atom_a) ? cfg.qubits.at(cfg.atom_a) : default_swap_qubit_a();
    const Qubit qb = cfg.qubits.atoms.count(cfg.atom_b) ? cfg.qubits.at(cfg.atom_b) : default_swap_qubit_b();
    if (cfg.qubits.atoms.count(cfg.helper) && std::abs(cfg.qubits.at(cfg.helper).b) > 0.0)
        throw ConfigError(cfg.source, 0, "protocol.qubit." + std::to_string(cfg.helper), "the helper must start in |0>");
    AtomStateSpec initial;
    initial.set(cfg.atom_a, qa).set(cfg.atom_b, qb);

    const RunResult result = run_schedule(schedule, initial, cfg.noise, cfg.run_options());
    report.fidelity = result.fidelity();
    report.segment_fidelities = result.segment_fidelities;
    report.values = {
        {"atom_fidelity." + std::to_string(cfg.atom_a), result.atom_fidelity(cfg.atom_a, qb)},
        {"atom_fidelity." + std::to_string(cfg.atom_b), result.atom_fidelity(cfg.atom_b, qa)},
        {"helper_fidelity." + std::to_string(cfg.helper), result.atom_fidelity(cfg.helper, Qubit::ground())},
        {"relative_phase." + std::to_string(cfg.atom_a), result.relative_phase(cfg.atom_a, qb)},
        {"relative_phase." + std::to_string(cfg.atom_b), result.relative_phase(cfg.atom_b, qa)},
    };
    report.diagnostics = result.diagnostics;
    report.wall_seconds = seconds_since(start);
    return report;
}

}  // namespace

std::vector<std::string> validity_warnings(const ExperimentConfig& cfg, const CommandOptions& opts) {
    std::vector<std::string> out;
    const double ratio = cfg.omega / std::min(cfg.g, cfg.lambda);
    if (ratio > cfg.zeno_threshold)
        out.push_back("Zeno ratio Omega/min(g, lambda) = " + fmt(ratio) + " exceeds " + fmt(cfg.zeno_threshold));
    if (cfg.fiber && !cfg.fiber->single_mode())
        out.push_back("fiber supports n = " + fmt(cfg.fiber->mode_count()) +
                      " interacting modes; the single-mode model needs n <= 1");
    if (opts.strict && !out.empty()) throw ValidityError(out.front());
    return out;
}

Qubit default_swap_qubit_a() { return {0.6, 0.8}; }
Qubit default_swap_qubit_b() { return {cplx{0.8, 0.0}, cplx{0.0, 0.6}}; }

RunReport cmd_qst(const ExperimentConfig& cfg, const CommandOptions& opts, TimeSeries* series) {
    const auto start = Clock::now();
    RunReport report = start_report("qst", cfg, opts);
    const Qubit input = cfg.qubits.atoms.count(cfg.sender) ? cfg.qubits.at(cfg.sender) : Qubit::excited();
    if (cfg.qubits.atoms.count(cfg.receiver) && std::abs(cfg.qubits.at(cfg.receiver).b) > 0.0)
        throw ConfigError(cfg.source, 0, "protocol.qubit." + std::to_string(cfg.receiver),
                          "the receiver must start in |0>");

    const PulseSchedule schedule = qst_schedule(cfg.sender, cfg.receiver, cfg.omega, cfg.g, cfg.lambda, cfg.nodes);
    AtomStateSpec initial;
    initial.set(cfg.sender, input);
    RunOptions options = cfg.run_options();

    std::array<BasisState, 7> chain{};
    if (series) {
        const int r_local = cfg.receiver < cfg.sender ? 0 : 1;
        chain = transfer_chain(SystemSpec::network(2, cfg.photon_cutoff), r_local, 1 - r_local).phi;
        *series = TimeSeries{};
        for (int k = 0; k < 7; ++k) series->labels.push_back("phi" + std::to_string(k + 1));
        for (const auto& st : chain) series->comments.push_back("phi = " + st.label());
        for (const auto& [k, v] : cfg.echo) series->comments.push_back(k + " = " + v);
        options.observer = [&](const RunSample& s) {
            std::vector<double> pops;
            for (const auto& st : chain) {
                const auto idx = s.state.basis()->find(st);
                pops.push_back(idx ? s.state.matrix()(static_cast<Eigen::Index>(*idx), static_cast<Eigen::Index>(*idx)).real()
                                   : 0.0);
            }
            series->times.push_back(s.t);
            series->populations.push_back(std::move(pops));
            series->fidelity.push_back(fidelity(s.state, s.target));
        };
    }

    const RunResult result = run_schedule(schedule, initial, cfg.noise, options);
    report.fidelity = result.fidelity();
    report.segment_fidelities = result.segment_fidelities;
    report.values = {
        {"duration", schedule.total_duration()},
        {"zeno_ratio", schedule.max_zeno_ratio()},
        {"receiver_fidelity", result.atom_fidelity(cfg.receiver, input)},
        {"relative_phase", result.relative_phase(cfg.receiver, input)},
    };
    report.diagnostics = result.diagnostics;
    report.wall_seconds = seconds_since(start);
    return report;
}

RunReport cmd_qss(const ExperimentConfig& cfg, const CommandOptions& opts) {
    const PulseSchedule schedule = qss_schedule(cfg.atom_a, cfg.atom_b, cfg.helper, cfg.omega, cfg.g, cfg.lambda);
    return swap_report("qss", cfg, opts, schedule);
}

RunReport cmd_network(const ExperimentConfig& cfg, const CommandOptions& opts) {
    const PulseSchedule schedule =
        network_swap_schedule(cfg.atom_a, cfg.atom_b, cfg.helper, cfg.nodes, cfg.omega, cfg.g, cfg.lambda);
    return swap_report("network", cfg, opts, schedule);
}

SweepResult cmd_sweep(const ExperimentConfig& cfg, const CommandOptions& opts) {
    if (!cfg.sweep) throw ConfigError(cfg.source, 0, "sweep", "the sweep command needs a [sweep] section");
    // Only the fiber gate applies globally; the Zeno gate is evaluated per point.
    if (cfg.fiber && !cfg.fiber->single_mode() && opts.strict)
        throw ValidityError("fiber supports n = " + fmt(cfg.fiber->mode_count()) + " interacting modes");
    SweepOptions so;
    so.run = cfg.run_options();
    so.workers = opts.workers >= 0 ? opts.workers : cfg.workers;
    so.zeno_threshold = cfg.zeno_threshold;
    so.strict = opts.strict;
    return run_sweep(*cfg.sweep, cfg.qst_parameters(), so);
}

ZenoSummary cmd_zeno(const ExperimentConfig& cfg) {
    ZenoSummary z;
    z.g = cfg.g;
    z.lambda = cfg.lambda;
    z.omega = cfg.omega;

    const BasisPtr basis = excitation_sector(build_basis(SystemSpec::network(2, cfg.photon_cutoff)), 1);
    CouplingConfig couplings = CouplingConfig::uniform(2, cfg.g, cfg.lambda);
    couplings.active_nodes = {0, 1};
    const Operator strong = strong_hamiltonian(basis, couplings);
    couplings.rabi = {cfg.omega, -cfg.omega};
    const Operator weak = laser_hamiltonian(basis, couplings);

    z.decomposition = zeno_decompose(strong);
    z.analytic = analytic_strong_eigenvalues(cfg.g, cfg.lambda);
    if (z.decomposition.size() == z.analytic.size()) {
        for (std::size_t n = 0; n < z.analytic.size(); ++n)
            z.max_eigenvalue_error =
                std::max(z.max_eigenvalue_error, std::abs(z.decomposition.eigenvalues[n] - z.analytic[n]));
    } else {
        z.max_eigenvalue_error = std::numeric_limits<double>::infinity();
    }
    z.completeness_error = z.decomposition.completeness_error();
    z.orthogonality_error = z.decomposition.orthogonality_error();
    z.reconstruction_error = z.decomposition.reconstruction_error(strong);
    z.effective = effective_hamiltonian(z.decomposition, weak);

    const TransferChain chain = transfer_chain(basis->spec(), 0, 1);
    const StateVector dark = analytic_dark_state(cfg.g, cfg.lambda, basis, 0, 1);
    const auto i1 = static_cast<Eigen::Index>(basis->index_of(chain.phi[0]));
    const auto i7 = static_cast<Eigen::Index>(basis->index_of(chain.phi[6]));
    const Vector& d = dark.amplitudes();
    const DenseMatrix heff = z.effective->dense();
    z.coupling_sender = (heff.row(i1) * d)(0);
    z.coupling_receiver = (heff.row(i7) * d)(0);
    z.analytic_coupling = effective_coupling(cfg.g, cfg.lambda, cfg.omega);

    std::size_t zero = 0;
    for (std::size_t n = 1; n < z.decomposition.size(); ++n)
        if (std::abs(z.decomposition.eigenvalues[n]) < std::abs(z.decomposition.eigenvalues[zero])) zero = n;
    DenseMatrix cols = DenseMatrix::Zero(static_cast<Eigen::Index>(basis->dim()), 3);
    cols(i1, 0) = 1.0;
    cols(i7, 1) = 1.0;
    cols.col(2) = d;
    if (z.decomposition.ranks[zero] == 3)
        z.dark_subspace_angle = max_principal_angle_sine(z.decomposition.projectors[zero], cols);
    else
        z.dark_subspace_angle = 1.0;
    return z;
}

void write_zeno_text(std::ostream& os, const ZenoSummary& z) {
    os << "strong coupling g = " << fmt(z.g) << ", lambda = " << fmt(z.lambda) << ", Omega = " << fmt(z.omega)
       << '\n';
    os << "clusters (eta, rank, analytic):\n";
    for (std::size_t n = 0; n < z.decomposition.size(); ++n) {
        os << "  " << fmt(z.decomposition.eigenvalues[n], "% .12f") << "  " << z.decomposition.ranks[n];
        if (z.decomposition.size() == z.analytic.size()) os << "  " << fmt(z.analytic[n], "% .12f");
        os << '\n';
    }
    os << "max |numeric - analytic| eigenvalue: " << fmt(z.max_eigenvalue_error, "%.3g") << '\n';
    os << "completeness / orthogonality / reconstruction error: " << fmt(z.completeness_error, "%.3g") << " / "
       << fmt(z.orthogonality_error, "%.3g") << " / " << fmt(z.reconstruction_error, "%.3g") << '\n';
    os << "dark-state subspace angle (sine): " << fmt(z.dark_subspace_angle, "%.3g") << '\n';
    os << "effective couplings in the eta = 0 block:\n";
    os << "  <phi1|H_eff|dark> = " << fmt(z.coupling_sender.real(), "%.5f") << " (sender, Omega = "
       << fmt(-z.omega) << ")\n";
    os << "  <phi7|H_eff|dark> = " << fmt(z.coupling_receiver.real(), "%.5f") << " (receiver, Omega = "
       << fmt(z.omega) << ")\n";
    os << "  lambda*Omega/sqrt(2 lambda^2 + g^2) = " << fmt(z.analytic_coupling, "%.5f") << '\n';
}

void write_decomposition(std::ostream& os, const ZenoSummary& z) {
    write_basis(os, *z.decomposition.basis());
    for (std::size_t n = 0; n < z.decomposition.size(); ++n) {
        os << "# projector " << n << " eta=" << fmt(z.decomposition.eigenvalues[n], "%.17g")
           << " rank=" << z.decomposition.ranks[n] << '\n';
        write_triplets(os, z.decomposition.projectors[n]);
    }
    if (z.effective) {
        os << "# effective\n";
        write_triplets(os, *z.effective);
    }
}

}  // namespace zenoqst::cli
