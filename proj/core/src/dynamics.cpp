#include "zenoqst/dynamics.hpp"

#include "zenoqst/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace zenoqst {

void IntegratorSettings::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw std::invalid_argument("IntegratorSettings: tolerances must be > 0");
    if (!(max_step > 0.0)) throw std::invalid_argument("IntegratorSettings: max_step must be > 0");
    if (max_steps == 0) throw std::invalid_argument("IntegratorSettings: max_steps must be > 0");
}

IntegratorSettings IntegratorSettings::refined() const {
    IntegratorSettings s = *this;
    if (method == StepMethod::rk4) {
        s.max_step *= 0.5;
    } else {
        s.abs_tol *= 0.5;
        s.rel_tol *= 0.5;
    }
    return s;
}

void EvolutionDiagnostics::merge(const EvolutionDiagnostics& other) {
    steps += other.steps;
    rejected_steps += other.rejected_steps;
    rhs_evaluations += other.rhs_evaluations;
    max_trace_deviation = std::max(max_trace_deviation, other.max_trace_deviation);
    max_hermiticity_deviation = std::max(max_hermiticity_deviation, other.max_hermiticity_deviation);
    max_norm_deviation = std::max(max_norm_deviation, other.max_norm_deviation);
    min_eigenvalue = std::min(min_eigenvalue, other.min_eigenvalue);
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

namespace {

constexpr double kNormTol = 1e-8;
constexpr double kTraceTol = 1e-8;
constexpr double kPositivityWarn = -1e-8;
constexpr double kPositivityFail = -1e-6;

void check_times(std::span<const double> times) {
    double prev = 0.0;
    for (double t : times) {
        if (!(t >= prev)) throw std::invalid_argument("sample times must be ascending and >= 0");
        prev = t;
    }
}

void require_same_basis(const Basis& a, const Basis& b, const char* what) {
    if (!a.same_as(b)) throw std::invalid_argument(std::string(what) + ": basis mismatch");
}

// Propagator via the spectral decomposition of a dense hermitian H.
class SpectralPropagator {
public:
    explicit SpectralPropagator(const Operator& h) {
        Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h.dense());
        if (solver.info() != Eigen::Success) throw NumericalError("evolve_unitary: eigendecomposition failed");
        evals_ = solver.eigenvalues();
        evecs_ = solver.eigenvectors();
    }

    Vector apply(const Vector& psi0, double t) const {
        Vector coeffs = evecs_.adjoint() * psi0;
        for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) *= std::exp(-kI * (evals_(i) * t));
        return evecs_ * coeffs;
    }

private:
    Eigen::VectorXd evals_;
    DenseMatrix evecs_;
};

void check_norm(const Vector& v, EvolutionDiagnostics& diag) {
    const double dev = std::abs(v.norm() - 1.0);
    diag.max_norm_deviation = std::max(diag.max_norm_deviation, dev);
    if (dev > kNormTol)
        throw NumericalError("evolve_unitary: norm drifted by " + std::to_string(dev) +
                             "; tighten tolerances or reduce the step");
}

void check_positivity(const DensityMatrix& rho, double t, EvolutionDiagnostics& diag) {
    const Physicality p = rho.physicality();
    diag.min_eigenvalue = std::min(diag.min_eigenvalue, p.min_eigenvalue);
    diag.max_trace_deviation = std::max(diag.max_trace_deviation, p.trace_deviation);
    if (p.min_eigenvalue < kPositivityFail) {
        throw NumericalError("evolve_lindblad: density matrix eigenvalue " + std::to_string(p.min_eigenvalue) +
                             " at t = " + std::to_string(t) + "; integration step too coarse");
    }
    if (p.min_eigenvalue < kPositivityWarn)
        diag.warnings.push_back("negative eigenvalue " + std::to_string(p.min_eigenvalue) + " at t = " + std::to_string(t));
}

}  // namespace

StateVector evolve_unitary(const Operator& h, const StateVector& psi0, std::span<const double> sample_times,
                           const StateObserver& observer, const IntegratorSettings& settings,
                           EvolutionDiagnostics* diagnostics) {
    settings.validate();
    require_same_basis(*h.basis(), *psi0.basis(), "evolve_unitary");
    if (!h.is_hermitian(1e-12)) throw std::invalid_argument("evolve_unitary: H is not hermitian");
    check_times(sample_times);

    EvolutionDiagnostics local;
    Vector psi = psi0.amplitudes();
    const bool spectral = settings.unitary == UnitaryMethod::spectral && h.dim() <= kMaxDenseDimension;

    if (spectral) {
        const SpectralPropagator prop(h);
        for (double t : sample_times) {
            Vector v = prop.apply(psi0.amplitudes(), t);
            check_norm(v, local);
            psi = std::move(v);
            if (observer) observer(t, StateVector(h.basis(), psi, kNormTol));
        }
    } else {
        const bool dense = h.dim() < kDenseGeneratorThreshold;
        const DenseMatrix hd = dense ? DenseMatrix(-kI * h.dense()) : DenseMatrix();
        const SparseMatrix hs = dense ? SparseMatrix() : SparseMatrix(-kI * h.matrix());
        auto rhs = [&](double, const Vector& y, Vector& dy) {
            if (dense)
                dy.noalias() = hd * y;
            else
                dy.noalias() = hs * y;
        };
        double t = 0.0;
        double hint = 0.0;
        for (double target : sample_times) {
            integrate(rhs, psi, t, target, settings, [](Vector&) {}, local, hint);
            t = target;
            check_norm(psi, local);
            if (observer) observer(t, StateVector(h.basis(), psi, kNormTol));
        }
    }
    if (diagnostics) diagnostics->merge(local);
    return StateVector(h.basis(), std::move(psi), kNormTol);
}

StateVector evolve_unitary(const Operator& h, const StateVector& psi0, double t, const IntegratorSettings& settings,
                           EvolutionDiagnostics* diagnostics) {
    if (t < 0.0) throw std::invalid_argument("evolve_unitary: t must be >= 0");
    const double times[] = {t};
    return evolve_unitary(h, psi0, times, {}, settings, diagnostics);
}

LindbladGenerator::LindbladGenerator(const Operator& h, const std::vector<Collapse>& collapse) {
    const BasisPtr& basis = h.basis();
    dense_ = basis->dim() < kDenseGeneratorThreshold;
    SparseMatrix heff = h.matrix();
    std::vector<SparseMatrix> jumps;
    for (const Collapse& c : collapse) {
        if (c.rate < 0.0) throw std::invalid_argument("collapse rate must be >= 0");
        if (c.rate == 0.0) continue;
        require_same_basis(*basis, *c.op.basis(), "LindbladGenerator");
        const SparseMatrix l = std::sqrt(c.rate) * c.op.matrix();
        heff -= (0.5 * kI) * SparseMatrix(SparseMatrix(l.adjoint()) * l);
        jumps.push_back(l);
    }
    if (dense_)
        heff_dense_ = DenseMatrix(heff);
    else
        heff_sparse_ = std::move(heff);
    // Jump operators have at most one entry per column; sparse products win at any size.
    jumps_ = std::move(jumps);
    for (const auto& l : jumps_) jumps_adjoint_.emplace_back(l.adjoint());
}

void LindbladGenerator::apply(const DenseMatrix& rho, DenseMatrix& out) const {
    if (dense_) {
        out.noalias() = -kI * (heff_dense_ * rho);
        out.noalias() += kI * (rho * heff_dense_.adjoint());
    } else {
        out.noalias() = -kI * (heff_sparse_ * rho);
        out.noalias() += kI * (rho * heff_sparse_.adjoint());
    }
    for (std::size_t j = 0; j < jumps_.size(); ++j) {
        scratch_.noalias() = jumps_[j] * rho;
        out.noalias() += scratch_ * jumps_adjoint_[j];
    }
}

DensityMatrix evolve_lindblad(const Operator& h, const std::vector<Collapse>& collapse, const DensityMatrix& rho0,
                              std::span<const double> sample_times, const DensityObserver& observer,
                              const IntegratorSettings& settings, EvolutionDiagnostics* diagnostics) {
    settings.validate();
    require_same_basis(*h.basis(), *rho0.basis(), "evolve_lindblad");
    if (!h.is_hermitian(1e-12)) throw std::invalid_argument("evolve_lindblad: H is not hermitian");
    check_times(sample_times);

    EvolutionDiagnostics local;
    const LindbladGenerator gen(h, collapse);
    DenseMatrix rho = rho0.matrix();
    const cplx trace0 = rho.trace();

    auto rhs = [&](double, const DenseMatrix& y, DenseMatrix& dy) { gen.apply(y, dy); };
    auto post_step = [&](DenseMatrix& y) {
        const double herm = (y - y.adjoint()).cwiseAbs().maxCoeff();
        local.max_hermiticity_deviation = std::max(local.max_hermiticity_deviation, herm);
        y = (0.5 * (y + y.adjoint())).eval();
        const double tdev = std::abs(y.trace() - trace0);
        local.max_trace_deviation = std::max(local.max_trace_deviation, tdev);
        if (settings.trace_policy == TracePolicy::renormalize && tdev > 0.0) y *= trace0 / y.trace();
    };

    double t = 0.0;
    double hint = 0.0;
    for (double target : sample_times) {
        integrate(rhs, rho, t, target, settings, post_step, local, hint);
        t = target;
        DensityMatrix current(h.basis(), rho, false);
        check_positivity(current, t, local);
        if (observer) observer(t, current);
    }

    if (settings.trace_policy != TracePolicy::off && local.max_trace_deviation > kTraceTol) {
        local.warnings.push_back("trace drifted by " + std::to_string(local.max_trace_deviation) +
                                 (settings.trace_policy == TracePolicy::renormalize ? " (renormalized)" : ""));
    }
    if (diagnostics) diagnostics->merge(local);
    return DensityMatrix(h.basis(), std::move(rho), false);
}

DensityMatrix evolve_lindblad(const Operator& h, const std::vector<Collapse>& collapse, const DensityMatrix& rho0,
                              double t, const IntegratorSettings& settings, EvolutionDiagnostics* diagnostics) {
    if (t < 0.0) throw std::invalid_argument("evolve_lindblad: t must be >= 0");
    const double times[] = {t};
    return evolve_lindblad(h, collapse, rho0, times, {}, settings, diagnostics);
}

double fidelity(const DensityMatrix& rho, const StateVector& target) {
    require_same_basis(*rho.basis(), *target.basis(), "fidelity");
    const Vector& v = target.amplitudes();
    return v.dot(rho.matrix() * v).real();
}

double fidelity(const StateVector& psi, const StateVector& target) {
    return std::norm(target.inner(psi));
}

std::vector<double> populations(const StateVector& psi, std::span<const BasisState> labels) {
    std::vector<double> out;
    out.reserve(labels.size());
    for (const auto& s : labels) out.push_back(std::norm(psi.amplitude(s)));
    return out;
}

std::vector<double> populations(const DensityMatrix& rho, std::span<const BasisState> labels) {
    std::vector<double> out;
    out.reserve(labels.size());
    for (const auto& s : labels) out.push_back(rho.population(s));
    return out;
}

void write_time_series_csv(std::ostream& os, const TimeSeries& series) {
    os << "# zenoqst time-series v1\n";
    for (const auto& c : series.comments) os << "# " << c << '\n';
    os << 't';
    for (const auto& l : series.labels) os << ',' << l;
    os << ",fidelity\n";
    char buf[64];
    for (std::size_t r = 0; r < series.times.size(); ++r) {
        std::snprintf(buf, sizeof buf, "%.12g", series.times[r]);
        os << buf;
        for (double p : series.populations[r]) {
            std::snprintf(buf, sizeof buf, ",%.12g", p);
            os << buf;
        }
        std::snprintf(buf, sizeof buf, ",%.12g\n", series.fidelity[r]);
        os << buf;
    }
}

}  // namespace zenoqst
