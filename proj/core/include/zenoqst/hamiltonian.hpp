#pragma once

// Interaction-picture Hamiltonian of the switched fiber network and the
// collapse operators of its master equation.
//
// All couplings and rates are in units of the atom-cavity coupling g, time in
// units of 1/g. The fiber is one bus mode; an optical switch that is ON
// couples that node's cavity to the bus with strength lambda.
//
//   H_l  = sum_k Omega_k (|e><1|_k + |1><e|_k)      k switched ON, Omega_k != 0
//   H_c  = sum_k g_k (a_k |e><0|_k + a_k^dag |0><e|_k)
//   H_cf = lambda * b * sum_{k ON} a_k^dag + h.c.

#include "zenoqst/operator.hpp"

#include <string>
#include <vector>

namespace zenoqst {

inline constexpr double kDefaultZenoWarnThreshold = 0.2;

struct CouplingConfig {
    std::vector<double> rabi;             // Omega_k
    std::vector<double> cavity_coupling;  // g_k
    double fiber_coupling = 1.0;          // lambda
    std::vector<int> active_nodes;        // switches ON, |active| in {0, 2}

    static CouplingConfig uniform(int nodes, double g = 1.0, double lambda = 1.0);

    // max|Omega_k| / min(min g_k, lambda). Small means deep in the Zeno regime.
    double zeno_ratio() const;
    bool zeno_regime(double threshold = kDefaultZenoWarnThreshold) const { return zeno_ratio() <= threshold; }

    // Throws std::invalid_argument on size mismatch, bad node indices or
    // |active_nodes| not in {0, 2}.
    void validate(int nodes) const;
};

struct NoiseConfig {
    double cavity_decay = 0.0;          // kappa, same for every cavity
    double fiber_decay = 0.0;           // kappa_f
    double spontaneous_emission = 0.0;  // Gamma; each of e->0, e->1 gets Gamma/2

    bool is_zero() const { return cavity_decay == 0.0 && fiber_decay == 0.0 && spontaneous_emission == 0.0; }
    void validate() const;
};

// A Lindblad channel gamma * (L rho L^dag - {L^dag L, rho}/2).
struct Collapse {
    double rate = 0.0;
    Operator op;
    std::string label;
};

Operator laser_hamiltonian(const BasisPtr& basis, const CouplingConfig& config);
Operator cavity_hamiltonian(const BasisPtr& basis, const CouplingConfig& config);
Operator fiber_hamiltonian(const BasisPtr& basis, const CouplingConfig& config);
Operator total_hamiltonian(const BasisPtr& basis, const CouplingConfig& config);
// H_c + H_cf: the strong part that defines the Zeno subspaces.
Operator strong_hamiltonian(const BasisPtr& basis, const CouplingConfig& config);

// One channel per cavity (kappa, a_k), one for the fiber (kappa_f, b) when
// present, and two per atom (Gamma/2, |0><e|) and (Gamma/2, |1><e|).
// Zero-rate channels are kept so the list shape depends on the system only.
std::vector<Collapse> collapse_operators(const BasisPtr& basis, const NoiseConfig& noise);

}  // namespace zenoqst
