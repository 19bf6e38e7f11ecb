#include "zenoqst/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zenoqst {

CouplingConfig CouplingConfig::uniform(int nodes, double g, double lambda) {
    CouplingConfig c;
    c.rabi.assign(static_cast<std::size_t>(nodes), 0.0);
    c.cavity_coupling.assign(static_cast<std::size_t>(nodes), g);
    c.fiber_coupling = lambda;
    return c;
}

double CouplingConfig::zeno_ratio() const {
    double drive = 0.0;
    for (double w : rabi) drive = std::max(drive, std::abs(w));
    double strong = std::abs(fiber_coupling);
    for (double g : cavity_coupling) strong = std::min(strong, std::abs(g));
    if (drive == 0.0) return 0.0;
    if (strong == 0.0) return std::numeric_limits<double>::infinity();
    return drive / strong;
}

void CouplingConfig::validate(int nodes) const {
    const auto n = static_cast<std::size_t>(nodes);
    if (rabi.size() != n) throw std::invalid_argument("CouplingConfig: rabi has wrong length");
    if (cavity_coupling.size() != n) throw std::invalid_argument("CouplingConfig: cavity_coupling has wrong length");
    if (active_nodes.size() != 0 && active_nodes.size() != 2)
        throw std::invalid_argument("CouplingConfig: exactly 0 or 2 switches may be ON, got " +
                                    std::to_string(active_nodes.size()));
    for (int k : active_nodes)
        if (k < 0 || k >= nodes) throw std::invalid_argument("CouplingConfig: active node out of range");
    if (active_nodes.size() == 2 && active_nodes[0] == active_nodes[1])
        throw std::invalid_argument("CouplingConfig: active nodes must be distinct");
}

void NoiseConfig::validate() const {
    if (cavity_decay < 0.0 || fiber_decay < 0.0 || spontaneous_emission < 0.0)
        throw std::invalid_argument("NoiseConfig: rates must be >= 0");
}

namespace {

bool is_active(const CouplingConfig& c, int node) {
    return std::find(c.active_nodes.begin(), c.active_nodes.end(), node) != c.active_nodes.end();
}

}  // namespace

Operator laser_hamiltonian(const BasisPtr& basis, const CouplingConfig& config) {
    const int nodes = basis->spec().atom_count;
    config.validate(nodes);
    return build_operator(basis, [&](const BasisState& s, const StateEmitter& emit) {
        for (int k = 0; k < nodes; ++k) {
            const double omega = config.rabi[static_cast<std::size_t>(k)];
            if (omega == 0.0 || !is_active(config, k)) continue;
            const auto kk = static_cast<std::size_t>(k);
            if (s.atoms[kk] == Level::g1) {
                BasisState t = s;
                t.atoms[kk] = Level::e;
                emit(t, omega);
            } else if (s.atoms[kk] == Level::e) {
                BasisState t = s;
                t.atoms[kk] = Level::g1;
                emit(t, omega);
            }
        }
    });
}

Operator cavity_hamiltonian(const BasisPtr& basis, const CouplingConfig& config) {
    const int nodes = basis->spec().atom_count;
    const int cutoff = basis->spec().photon_cutoff;
    config.validate(nodes);
    return build_operator(basis, [&](const BasisState& s, const StateEmitter& emit) {
        for (std::size_t k = 0; k < static_cast<std::size_t>(nodes); ++k) {
            const double g = config.cavity_coupling[k];
            if (g == 0.0) continue;
            const int n = s.photons[k];
            if (s.atoms[k] == Level::g0 && n > 0) {
                // a_k |e><0|
                BasisState t = s;
                t.atoms[k] = Level::e;
                t.photons[k] = n - 1;
                emit(t, g * std::sqrt(static_cast<double>(n)));
            } else if (s.atoms[k] == Level::e && n < cutoff) {
                // a_k^dag |0><e|
                BasisState t = s;
                t.atoms[k] = Level::g0;
                t.photons[k] = n + 1;
                emit(t, g * std::sqrt(static_cast<double>(n + 1)));
            }
        }
    });
}

Operator fiber_hamiltonian(const BasisPtr& basis, const CouplingConfig& config) {
    const SystemSpec& spec = basis->spec();
    config.validate(spec.atom_count);
    if (config.active_nodes.empty() || config.fiber_coupling == 0.0) return Operator::zero(basis);
    if (spec.fiber_count != 1) throw std::invalid_argument("fiber_hamiltonian: system has no fiber mode");

    const auto f = static_cast<std::size_t>(spec.fiber_mode());
    const int cutoff = spec.photon_cutoff;
    const double lambda = config.fiber_coupling;
    return build_operator(basis, [&](const BasisState& s, const StateEmitter& emit) {
        for (int node : config.active_nodes) {
            const auto k = static_cast<std::size_t>(node);
            const int nf = s.photons[f];
            const int nk = s.photons[k];
            if (nf > 0 && nk < cutoff) {  // b a_k^dag
                BasisState t = s;
                t.photons[f] = nf - 1;
                t.photons[k] = nk + 1;
                emit(t, lambda * std::sqrt(static_cast<double>(nf) * (nk + 1)));
            }
            if (nk > 0 && nf < cutoff) {  // a_k b^dag
                BasisState t = s;
                t.photons[k] = nk - 1;
                t.photons[f] = nf + 1;
                emit(t, lambda * std::sqrt(static_cast<double>(nk) * (nf + 1)));
            }
        }
    });
}

Operator strong_hamiltonian(const BasisPtr& basis, const CouplingConfig& config) {
    return cavity_hamiltonian(basis, config) + fiber_hamiltonian(basis, config);
}

Operator total_hamiltonian(const BasisPtr& basis, const CouplingConfig& config) {
    return laser_hamiltonian(basis, config) + strong_hamiltonian(basis, config);
}

std::vector<Collapse> collapse_operators(const BasisPtr& basis, const NoiseConfig& noise) {
    noise.validate();
    const SystemSpec& spec = basis->spec();
    std::vector<Collapse> out;
    for (int k = 0; k < spec.cavity_count; ++k)
        out.push_back({noise.cavity_decay, mode_annihilation_operator(basis, k), "cavity" + std::to_string(k)});
    if (spec.fiber_count == 1)
        out.push_back({noise.fiber_decay, mode_annihilation_operator(basis, spec.fiber_mode()), "fiber"});
    const double branch = 0.5 * noise.spontaneous_emission;
    for (int k = 0; k < spec.atom_count; ++k) {
        out.push_back({branch, atomic_transition_operator(basis, k, Level::e, Level::g0), "atom" + std::to_string(k) + ":e->0"});
        out.push_back({branch, atomic_transition_operator(basis, k, Level::e, Level::g1), "atom" + std::to_string(k) + ":e->1"});
    }
    return out;
}

}  // namespace zenoqst
