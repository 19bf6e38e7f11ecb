#pragma once

// Pulse schedules for state transfer (QST) and swapping (QSS) over the
// switched fiber bus, and their execution.
//
// Nodes are 0-based. A segment switches ON the cavities of (receiver, sender),
// drives receiver with +Omega and sender with -Omega for
//
//   T = sqrt(2 lambda^2 + g^2) * pi / (sqrt(2) * lambda * Omega),
//
// and switches both OFF again. Segment boundaries are instantaneous.

#include "zenoqst/dynamics.hpp"
#include "zenoqst/hamiltonian.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace zenoqst {

struct Qubit {
    cplx a{1.0, 0.0};  // amplitude on |0>
    cplx b{0.0, 0.0};  // amplitude on |1>

    static Qubit ground() { return {}; }
    static Qubit excited() { return {0.0, 1.0}; }
    void validate(double tol = 1e-10) const;
};

// Per-atom qubit states keyed by node; nodes not listed are in |0>.
struct AtomStateSpec {
    std::map<int, Qubit> atoms;

    AtomStateSpec& set(int node, Qubit q);
    Qubit at(int node) const;
    void validate() const;
};

struct PulseSegment {
    int receiver = 0;
    int sender = 1;
    double omega = 0.1;  // receiver gets +omega, sender -omega
    double g = 1.0;
    double lambda = 1.0;
    double duration = 0.0;

    double zeno_ratio() const;
};

struct PulseSchedule {
    int node_count = 2;
    std::vector<PulseSegment> segments;

    // Distinct nodes touched by any segment, ascending.
    std::vector<int> participants() const;
    double total_duration() const;
    double max_zeno_ratio() const;
    // Throws std::invalid_argument when a segment is malformed or
    // consecutive segments share more than one node.
    void validate() const;
};

PulseSegment transfer_segment(int sender, int receiver, double omega, double g, double lambda);

// One segment, sender -> receiver. node_count defaults to max(sender, receiver) + 1.
PulseSchedule qst_schedule(int sender, int receiver, double omega, double g, double lambda, int node_count = 0);
// (a -> helper), (b -> a), (helper -> b). helper must start in |0>.
PulseSchedule qss_schedule(int atom_a, int atom_b, int helper, double omega, double g, double lambda);
// Same three transfers for an arbitrary pair among node_count nodes.
PulseSchedule network_swap_schedule(int i, int j, int helper, int node_count, double omega, double g, double lambda);

// Switch toggles realizing a schedule, starting and ending with every switch
// OFF; a node shared by consecutive segments stays ON. E.g. for nodes
// (i=3, j=4, helper=0): "on {0,3}", "transfer 3->0", "off {0}", "on {4}", ...
std::vector<std::string> switch_sequence(const PulseSchedule& schedule);

// Human-readable listing that read_schedule() parses back exactly.
//
//   # zenoqst schedule v1
//   # switches: <switch_sequence joined by " | ">
//   nodes,<N>
//   index,receiver,sender,omega_receiver,omega_sender,g,lambda,duration
//   0,0,1,0.1,-0.1,1,1,38.4764...
void write_schedule(std::ostream& os, const PulseSchedule& schedule);
PulseSchedule read_schedule(std::istream& is);

struct RunSample {
    std::size_t segment;
    double t;  // since the start of the schedule
    const DensityMatrix& state;
    const StateVector& target;  // ideal state at the end of this segment
};

struct RunOptions {
    IntegratorSettings integrator;
    int photon_cutoff = 1;
    // Simulate only the excitation sector reachable from the initial state.
    bool restrict_to_sector = true;
    // When set, called at samples_per_segment + 1 evenly spaced times per
    // segment, both ends included.
    std::function<void(const RunSample&)> observer;
    int samples_per_segment = 20;
};

struct RunResult {
    BasisPtr basis;
    std::vector<int> nodes;  // local atom k is global node nodes[k]
    DensityMatrix final_state;
    std::optional<StateVector> final_pure;  // set for noise-free runs
    StateVector ideal_final;
    std::vector<double> segment_fidelities;  // vs. the ideal state after each segment
    EvolutionDiagnostics diagnostics;

    int local_index(int node) const;
    double fidelity() const { return segment_fidelities.empty() ? 1.0 : segment_fidelities.back(); }
    // 3x3 reduced state of one atom over (|0>, |1>, |e>).
    Eigen::Matrix3cd reduced_atom_state(int node) const;
    double atom_fidelity(int node, const Qubit& target) const;
    // arg(<1|rho|0>) - arg(b a*) for the atom; NaN when either side vanishes.
    double relative_phase(int node, const Qubit& target) const;
};

Eigen::Matrix3cd reduced_atom_state(const DensityMatrix& rho, int atom);

// The ideal transfer map on atomic configurations:
// |0>_receiver |m>_sender -> |m>_receiver |0>_sender, modes in vacuum.
// Throws std::logic_error when the state has weight outside that domain.
StateVector ideal_transfer(const StateVector& psi, int receiver, int sender);

RunResult run_schedule(const PulseSchedule& schedule, const AtomStateSpec& initial, const NoiseConfig& noise,
                       const RunOptions& options = {});

struct QstParameters {
    double omega = 0.1;
    double g = 1.0;
    double lambda = 1.0;
    NoiseConfig noise;
};

// Node 1 -> node 0 transfer of `input`; the default input (0, 1) is the
// worst case, the |0> component being frozen.
RunResult run_qst(const QstParameters& params, const Qubit& input = Qubit::excited(), const RunOptions& options = {});

}  // namespace zenoqst
