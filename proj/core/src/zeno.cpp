#include "zenoqst/zeno.hpp"

#include "zenoqst/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace zenoqst {

namespace {

double max_abs(const DenseMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

Operator ZenoDecomposition::strong_part() const {
    Operator sum = Operator::zero(basis());
    for (std::size_t n = 0; n < size(); ++n) sum += (coupling_scale * eigenvalues[n]) * projectors[n];
    return sum;
}

double ZenoDecomposition::completeness_error() const {
    DenseMatrix sum = DenseMatrix::Zero(static_cast<Eigen::Index>(basis()->dim()), static_cast<Eigen::Index>(basis()->dim()));
    for (const auto& p : projectors) sum += p.dense();
    return max_abs(sum - DenseMatrix::Identity(sum.rows(), sum.cols()));
}

double ZenoDecomposition::orthogonality_error() const {
    double worst = 0.0;
    for (std::size_t n = 0; n < size(); ++n) {
        const DenseMatrix pn = projectors[n].dense();
        for (std::size_t m = 0; m < size(); ++m) {
            const DenseMatrix prod = pn * projectors[m].dense();
            worst = std::max(worst, n == m ? max_abs(prod - pn) : max_abs(prod));
        }
    }
    return worst;
}

double ZenoDecomposition::reconstruction_error(const Operator& h_strong) const {
    DenseMatrix sum = DenseMatrix::Zero(static_cast<Eigen::Index>(basis()->dim()), static_cast<Eigen::Index>(basis()->dim()));
    for (std::size_t n = 0; n < size(); ++n) sum += eigenvalues[n] * projectors[n].dense();
    return max_abs(sum - h_strong.dense());
}

double ZenoDecomposition::off_cluster_magnitude(const Operator& a) const {
    const DenseMatrix ad = a.dense();
    double worst = 0.0;
    for (std::size_t n = 0; n < size(); ++n)
        for (std::size_t m = 0; m < size(); ++m)
            if (n != m) worst = std::max(worst, max_abs(projectors[n].dense() * ad * projectors[m].dense()));
    return worst;
}

double default_degeneracy_tolerance(const Operator& h_strong) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h_strong.dense(), Eigen::EigenvaluesOnly);
    const double norm = solver.eigenvalues().size() ? solver.eigenvalues().cwiseAbs().maxCoeff() : 0.0;
    return std::max(1e-9 * norm, 1e-14);
}

ZenoDecomposition zeno_decompose(const Operator& h_strong, double tolerance, double coupling_scale) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("zeno_decompose: tolerance must be > 0");
    if (!(coupling_scale > 0.0)) throw std::invalid_argument("zeno_decompose: coupling scale must be > 0");
    if (!h_strong.is_hermitian(1e-12)) throw std::invalid_argument("zeno_decompose: operator is not hermitian");

    const DenseMatrix h = h_strong.dense();
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h);
    if (solver.info() != Eigen::Success) throw NumericalError("zeno_decompose: eigendecomposition failed");
    const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
    const DenseMatrix& evecs = solver.eigenvectors();

    // Clusters are runs [begin, end) with evals[end-1] - evals[begin] <= tol.
    std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;
    for (Eigen::Index i = 0; i < evals.size();) {
        Eigen::Index j = i + 1;
        while (j < evals.size() && evals(j) - evals(i) <= tolerance) ++j;
        clusters.emplace_back(i, j);
        i = j;
    }
    for (std::size_t c = 1; c < clusters.size(); ++c) {
        const double gap = evals(clusters[c].first) - evals(clusters[c - 1].second - 1);
        if (gap < 10.0 * tolerance) {
            std::ostringstream msg;
            msg << "zeno_decompose: eigenvalue clusters separated by " << gap << " < 10 x tolerance (" << tolerance
                << "); projectors are ill-conditioned";
            throw NumericalError(msg.str());
        }
    }

    ZenoDecomposition out;
    out.coupling_scale = coupling_scale;
    out.degeneracy_tolerance = tolerance;
    for (const auto& [begin, end] : clusters) {
        const Eigen::Index rank = end - begin;
        const DenseMatrix v = evecs.middleCols(begin, rank);
        out.eigenvalues.push_back(evals.segment(begin, rank).mean());
        out.projectors.push_back(Operator::from_dense(h_strong.basis(), v * v.adjoint(), 1e-15));
        out.ranks.push_back(static_cast<std::size_t>(rank));
    }
    return out;
}

ZenoDecomposition zeno_decompose(const Operator& h_strong) {
    return zeno_decompose(h_strong, default_degeneracy_tolerance(h_strong));
}

Operator effective_hamiltonian(const ZenoDecomposition& decomp, const Operator& h_weak) {
    if (decomp.size() == 0) throw std::invalid_argument("effective_hamiltonian: empty decomposition");
    if (!decomp.basis()->same_as(*h_weak.basis())) throw std::invalid_argument("effective_hamiltonian: basis mismatch");
    const DenseMatrix weak = h_weak.dense();
    DenseMatrix sum = DenseMatrix::Zero(weak.rows(), weak.cols());
    for (std::size_t n = 0; n < decomp.size(); ++n) {
        const DenseMatrix p = decomp.projectors[n].dense();
        sum += decomp.coupling_scale * decomp.eigenvalues[n] * p + p * weak * p;
    }
    return Operator::from_dense(h_weak.basis(), sum, 1e-15);
}

double max_principal_angle_sine(const Operator& projector, const DenseMatrix& columns) {
    const DenseMatrix p = projector.dense();
    if (columns.rows() != p.rows()) throw std::invalid_argument("max_principal_angle_sine: dimension mismatch");
    const DenseMatrix residual = columns - p * columns;  // (1 - P) Q
    Eigen::JacobiSVD<DenseMatrix> svd(residual);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

TransferChain transfer_chain(const SystemSpec& spec, int receiver, int sender) {
    spec.validate();
    if (receiver == sender) throw std::invalid_argument("transfer_chain: receiver and sender must differ");
    if (receiver < 0 || sender < 0 || receiver >= spec.atom_count || sender >= spec.atom_count)
        throw std::out_of_range("transfer_chain: node out of range");
    if (spec.fiber_count != 1) throw std::invalid_argument("transfer_chain: system has no fiber mode");

    TransferChain chain;
    chain.ground.atoms.assign(static_cast<std::size_t>(spec.atom_count), Level::g0);
    chain.ground.photons.assign(static_cast<std::size_t>(spec.mode_count()), 0);
    const auto r = static_cast<std::size_t>(receiver);
    const auto s = static_cast<std::size_t>(sender);
    const auto f = static_cast<std::size_t>(spec.fiber_mode());
    chain.phi.fill(chain.ground);
    chain.phi[0].atoms[s] = Level::g1;
    chain.phi[1].atoms[s] = Level::e;
    chain.phi[2].photons[s] = 1;
    chain.phi[3].photons[f] = 1;
    chain.phi[4].photons[r] = 1;
    chain.phi[5].atoms[r] = Level::e;
    chain.phi[6].atoms[r] = Level::g1;
    return chain;
}

double bright_frequency(double g, double lambda) { return std::sqrt(2.0 * lambda * lambda + g * g); }

std::array<double, 5> analytic_strong_eigenvalues(double g, double lambda) {
    const double w = bright_frequency(g, lambda);
    const double ag = std::abs(g);
    return {-w, -ag, 0.0, ag, w};
}

double effective_coupling(double g, double lambda, double omega) {
    return lambda * omega / bright_frequency(g, lambda);
}

double transfer_angle(double t, double omega, double g, double lambda) {
    return std::numbers::sqrt2 * lambda * omega * t / bright_frequency(g, lambda);
}

double transfer_time(double omega, double g, double lambda) {
    if (omega == 0.0 || lambda == 0.0) throw std::invalid_argument("transfer_time: Omega and lambda must be nonzero");
    return bright_frequency(g, lambda) * std::numbers::pi / (std::numbers::sqrt2 * std::abs(lambda * omega));
}

StateVector analytic_dark_state(double g, double lambda, const BasisPtr& basis, int receiver, int sender) {
    if (!(g > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("analytic_dark_state: g and lambda must be > 0");
    const TransferChain chain = transfer_chain(basis->spec(), receiver, sender);
    const double norm = bright_frequency(g, lambda);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(basis->dim()));
    v(static_cast<Eigen::Index>(basis->index_of(chain.phi[1]))) = lambda / norm;
    v(static_cast<Eigen::Index>(basis->index_of(chain.phi[3]))) = -g / norm;
    v(static_cast<Eigen::Index>(basis->index_of(chain.phi[5]))) = lambda / norm;
    return StateVector(basis, std::move(v));
}

StateVector analytic_qst_evolution(double t, double sender_rabi, double g, double lambda, cplx a, cplx b,
                                   const BasisPtr& basis, int receiver, int sender) {
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-10)
        throw std::invalid_argument("analytic_qst_evolution: |a|^2 + |b|^2 must equal 1");
    const TransferChain chain = transfer_chain(basis->spec(), receiver, sender);
    const double theta = transfer_angle(t, sender_rabi, g, lambda);
    const double c = std::cos(theta);
    const double s = std::sin(theta);

    Vector v = Vector::Zero(static_cast<Eigen::Index>(basis->dim()));
    auto at = [&](const BasisState& st) -> cplx& { return v(static_cast<Eigen::Index>(basis->index_of(st))); };
    at(chain.ground) += a;
    at(chain.phi[0]) += b * 0.5 * (1.0 + c);
    at(chain.phi[6]) += b * 0.5 * (1.0 - c);
    const Vector dark = analytic_dark_state(g, lambda, basis, receiver, sender).amplitudes();
    v += b * (-kI * s / std::numbers::sqrt2) * dark;
    return StateVector(basis, std::move(v));
}

}  // namespace zenoqst
