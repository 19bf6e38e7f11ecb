#pragma once

// Zeno subspaces of the strong atom-cavity-fiber coupling and the effective
// Hamiltonian they induce on the weak laser drive,
//
//   H_eff = sum_n (K eta_n P_n + P_n H_weak P_n),
//
// computed numerically for any operator, plus the closed forms for a single
// fiber-mediated pair. The closed forms do not touch the numeric path; tests
// use each to check the other.

#include "zenoqst/operator.hpp"

#include <array>
#include <vector>

namespace zenoqst {

struct ZenoDecomposition {
    std::vector<double> eigenvalues;    // eta_n, one per cluster, ascending
    std::vector<Operator> projectors;   // P_n
    std::vector<std::size_t> ranks;     // rank of P_n
    double coupling_scale = 1.0;        // K
    double degeneracy_tolerance = 0.0;

    const BasisPtr& basis() const { return projectors.front().basis(); }
    std::size_t size() const { return eigenvalues.size(); }

    // sum_n K eta_n P_n
    Operator strong_part() const;

    // max |sum_n P_n - 1|
    double completeness_error() const;
    // max over n, m of |P_n P_m - delta_nm P_n|
    double orthogonality_error() const;
    // max |sum_n eta_n P_n - H|
    double reconstruction_error(const Operator& h_strong) const;
    // max over n != m of |P_n A P_m|
    double off_cluster_magnitude(const Operator& a) const;
};

// 1e-9 * ||H||_2, floored at 1e-14 so the zero operator still clusters.
double default_degeneracy_tolerance(const Operator& h_strong);

// Hermitian eigendecomposition with eigenvalues grouped into clusters whose
// internal spread is <= tolerance. Throws NumericalError when two clusters lie
// closer than 10 * tolerance; projectors are ill-defined there.
ZenoDecomposition zeno_decompose(const Operator& h_strong, double tolerance, double coupling_scale = 1.0);
ZenoDecomposition zeno_decompose(const Operator& h_strong);

Operator effective_hamiltonian(const ZenoDecomposition& decomp, const Operator& h_weak);

// sin of the largest principal angle between range(P) and span(columns),
// columns orthonormal and equal in number to rank(P).
double max_principal_angle_sine(const Operator& projector, const DenseMatrix& orthonormal_columns);

// ---------------------------------------------------------------------------
// Closed forms for one fiber-mediated pair (receiver, sender), all other atoms
// in |0> and all other modes in vacuum.
//
//   phi1 = sender in |1>         phi5 = photon in receiver cavity
//   phi2 = sender in |e>         phi6 = receiver in |e>
//   phi3 = photon in sender cav  phi7 = receiver in |1>
//   phi4 = photon in fiber
// ---------------------------------------------------------------------------

struct TransferChain {
    BasisState ground;
    std::array<BasisState, 7> phi;  // phi[0] is phi1
};

TransferChain transfer_chain(const SystemSpec& spec, int receiver, int sender);

// sqrt(2 lambda^2 + g^2)
double bright_frequency(double g, double lambda);
// {-sqrt(2l^2+g^2), -g, 0, g, sqrt(2l^2+g^2)}
std::array<double, 5> analytic_strong_eigenvalues(double g, double lambda);
// Drive-induced coupling between a ground configuration and the dark state,
// lambda * Omega / sqrt(2 lambda^2 + g^2).
double effective_coupling(double g, double lambda, double omega);
// theta = sqrt(2) lambda Omega t / sqrt(2 lambda^2 + g^2)
double transfer_angle(double t, double omega, double g, double lambda);
// Time at which theta = pi for |Omega|.
double transfer_time(double omega, double g, double lambda);

// (lambda phi2 - g phi4 + lambda phi6) / sqrt(2 lambda^2 + g^2)
StateVector analytic_dark_state(double g, double lambda, const BasisPtr& basis, int receiver = 0, int sender = 1);

// a |ground> + b [ (1+cos th)/2 phi1 + (1-cos th)/2 phi7 - i sin(th)/sqrt(2) dark ]
// with th = transfer_angle(t, sender_rabi, g, lambda).
//
// `sender_rabi` is the Rabi frequency on the atom that starts in |1>. The
// protocol drives receiver +Omega, sender -Omega, so the full dynamics of a
// transfer with drive Omega match this closed form at sender_rabi = -Omega;
// populations depend on |Omega| only.
StateVector analytic_qst_evolution(double t, double sender_rabi, double g, double lambda, cplx a, cplx b,
                                   const BasisPtr& basis, int receiver = 0, int sender = 1);

}  // namespace zenoqst
