#pragma once

// Schroedinger and Lindblad propagation, fidelities and populations.
//
// Master equation convention:
//   d rho/dt = -i[H, rho] + sum_j gamma_j (L_j rho L_j^dag - {L_j^dag L_j, rho}/2)

#include "zenoqst/hamiltonian.hpp"
#include "zenoqst/integrator.hpp"
#include "zenoqst/operator.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace zenoqst {

// Generators below this dimension are applied as dense matrices.
inline constexpr std::size_t kDenseGeneratorThreshold = 64;

using StateObserver = std::function<void(double t, const StateVector&)>;
using DensityObserver = std::function<void(double t, const DensityMatrix&)>;

// exp(-iHt) psi0. Spectral exponentiation by default, ODE integration when
// settings.unitary == ode or the dimension exceeds the dense cap. Throws
// NumericalError if the result's norm drifts from 1 by more than 1e-8.
StateVector evolve_unitary(const Operator& h, const StateVector& psi0, double t, const IntegratorSettings& settings = {},
                           EvolutionDiagnostics* diagnostics = nullptr);

// Same, reporting the state at each of the ascending `sample_times`.
StateVector evolve_unitary(const Operator& h, const StateVector& psi0, std::span<const double> sample_times,
                           const StateObserver& observer, const IntegratorSettings& settings = {},
                           EvolutionDiagnostics* diagnostics = nullptr);

// Lindblad evolution to time t. rho is symmetrized after every step and the
// pre-symmetrization deviation recorded. Positivity is checked at every
// output point: below -1e-6 throws NumericalError, below -1e-8 warns.
DensityMatrix evolve_lindblad(const Operator& h, const std::vector<Collapse>& collapse, const DensityMatrix& rho0,
                              double t, const IntegratorSettings& settings = {},
                              EvolutionDiagnostics* diagnostics = nullptr);

DensityMatrix evolve_lindblad(const Operator& h, const std::vector<Collapse>& collapse, const DensityMatrix& rho0,
                              std::span<const double> sample_times, const DensityObserver& observer,
                              const IntegratorSettings& settings = {}, EvolutionDiagnostics* diagnostics = nullptr);

// Right-hand side of the master equation, dense or sparse by dimension.
class LindbladGenerator {
public:
    LindbladGenerator(const Operator& h, const std::vector<Collapse>& collapse);
    void apply(const DenseMatrix& rho, DenseMatrix& out) const;
    bool dense() const { return dense_; }
    std::size_t channel_count() const { return jumps_.size(); }

private:
    bool dense_ = true;
    DenseMatrix heff_dense_;  // H - (i/2) sum gamma L^dag L
    SparseMatrix heff_sparse_;
    std::vector<SparseMatrix> jumps_;  // sqrt(gamma) L
    std::vector<SparseMatrix> jumps_adjoint_;
    mutable DenseMatrix scratch_;
};

// <target|rho|target>
double fidelity(const DensityMatrix& rho, const StateVector& target);
double fidelity(const StateVector& psi, const StateVector& target);

std::vector<double> populations(const StateVector& psi, std::span<const BasisState> labels);
std::vector<double> populations(const DensityMatrix& rho, std::span<const BasisState> labels);

// Rows of (t, populations..., fidelity) with a documented header:
//
//   # zenoqst time-series v1
//   # <comment lines>
//   t,<label_1>,...,<label_n>,fidelity
struct TimeSeries {
    std::vector<std::string> labels;
    std::vector<std::string> comments;
    std::vector<double> times;
    std::vector<std::vector<double>> populations;
    std::vector<double> fidelity;
};

void write_time_series_csv(std::ostream& os, const TimeSeries& series);

}  // namespace zenoqst
