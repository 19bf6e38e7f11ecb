#include "zenoqst/operator.hpp"

#include "zenoqst/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace zenoqst {

namespace {

std::string dim_message(const char* what, std::size_t a, std::size_t b) {
    return std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")";
}

}  // namespace

Operator::Operator(BasisPtr basis, SparseMatrix matrix) : basis_(std::move(basis)), matrix_(std::move(matrix)) {
    if (!basis_) throw std::invalid_argument("Operator: null basis");
    const auto n = static_cast<Eigen::Index>(basis_->dim());
    if (matrix_.rows() != n || matrix_.cols() != n)
        throw std::invalid_argument(dim_message("Operator", static_cast<std::size_t>(matrix_.rows()), basis_->dim()));
    matrix_.makeCompressed();
}

Operator Operator::zero(BasisPtr basis) {
    const auto n = static_cast<Eigen::Index>(basis->dim());
    return Operator(std::move(basis), SparseMatrix(n, n));
}

Operator Operator::identity(BasisPtr basis) {
    const auto n = static_cast<Eigen::Index>(basis->dim());
    SparseMatrix id(n, n);
    id.setIdentity();
    return Operator(std::move(basis), std::move(id));
}

Operator Operator::from_dense(BasisPtr basis, const DenseMatrix& m, double prune) {
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (std::abs(m(i, j)) > prune) triplets.emplace_back(i, j, m(i, j));
    SparseMatrix s(m.rows(), m.cols());
    s.setFromTriplets(triplets.begin(), triplets.end());
    return Operator(std::move(basis), std::move(s));
}

cplx Operator::element(std::size_t row, std::size_t col) const {
    return matrix_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

Operator Operator::adjoint() const {
    return Operator(basis_, SparseMatrix(matrix_.adjoint()));
}

double Operator::hermiticity_deviation() const {
    const SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
    double worst = 0.0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

double Operator::max_abs() const {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

void Operator::require_same_basis(const Operator& other, const char* what) const {
    if (!basis_->same_as(*other.basis_)) throw std::invalid_argument(std::string(what) + ": basis mismatch");
}

Operator& Operator::operator+=(const Operator& rhs) {
    require_same_basis(rhs, "Operator +");
    matrix_ += rhs.matrix_;
    return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
    require_same_basis(rhs, "Operator -");
    matrix_ -= rhs.matrix_;
    return *this;
}

Operator& Operator::operator*=(cplx s) {
    matrix_ *= s;
    return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
    a.require_same_basis(b, "Operator *");
    return Operator(a.basis_, SparseMatrix(a.matrix_ * b.matrix_));
}

Operator build_operator(const BasisPtr& basis, const LocalAction& action) {
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (std::size_t col = 0; col < basis->dim(); ++col) {
        action(basis->state(col), [&](const BasisState& target, cplx amplitude) {
            if (amplitude == cplx{}) return;
            if (auto row = basis->find(target))
                triplets.emplace_back(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col), amplitude);
        });
    }
    const auto n = static_cast<Eigen::Index>(basis->dim());
    SparseMatrix m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return Operator(basis, std::move(m));
}

Operator atomic_transition_operator(const BasisPtr& basis, int node, Level from, Level to) {
    if (node < 0 || node >= basis->spec().atom_count)
        throw std::out_of_range("atomic_transition_operator: node " + std::to_string(node) + " out of range");
    const auto k = static_cast<std::size_t>(node);
    return build_operator(basis, [&](const BasisState& s, const StateEmitter& emit) {
        if (s.atoms[k] != from) return;
        BasisState t = s;
        t.atoms[k] = to;
        emit(t, 1.0);
    });
}

Operator mode_annihilation_operator(const BasisPtr& basis, int mode) {
    if (mode < 0 || mode >= basis->spec().mode_count())
        throw std::out_of_range("mode_annihilation_operator: mode " + std::to_string(mode) + " out of range");
    const auto m = static_cast<std::size_t>(mode);
    return build_operator(basis, [&](const BasisState& s, const StateEmitter& emit) {
        const int n = s.photons[m];
        if (n == 0) return;
        BasisState t = s;
        t.photons[m] = n - 1;
        emit(t, std::sqrt(static_cast<double>(n)));
    });
}

Operator mode_creation_operator(const BasisPtr& basis, int mode) {
    return mode_annihilation_operator(basis, mode).adjoint();
}

Operator mode_number_operator(const BasisPtr& basis, int mode) {
    if (mode < 0 || mode >= basis->spec().mode_count())
        throw std::out_of_range("mode_number_operator: mode " + std::to_string(mode) + " out of range");
    const auto m = static_cast<std::size_t>(mode);
    return build_operator(basis, [&](const BasisState& s, const StateEmitter& emit) {
        emit(s, static_cast<double>(s.photons[m]));
    });
}

Operator excitation_number_operator(const BasisPtr& basis) {
    return build_operator(basis, [](const BasisState& s, const StateEmitter& emit) {
        emit(s, static_cast<double>(s.excitation()));
    });
}

Operator restrict_operator(const Operator& op, const BasisPtr& sub) {
    if (sub->is_full() || !sub->parent()->same_as(*op.basis()))
        throw std::invalid_argument("restrict_operator: sub-basis does not descend from the operator's basis");
    const auto idx = sub->parent_indices();
    const auto n = static_cast<Eigen::Index>(sub->dim());
    // Column-major parent; map parent rows back into the sub-basis.
    std::vector<Eigen::Index> to_sub(op.dim(), -1);
    for (std::size_t i = 0; i < idx.size(); ++i) to_sub[idx[i]] = static_cast<Eigen::Index>(i);
    std::vector<Eigen::Triplet<cplx>> triplets;
    const SparseMatrix& m = op.matrix();
    for (std::size_t j = 0; j < idx.size(); ++j) {
        for (SparseMatrix::InnerIterator it(m, static_cast<Eigen::Index>(idx[j])); it; ++it) {
            const Eigen::Index r = to_sub[static_cast<std::size_t>(it.row())];
            if (r >= 0) triplets.emplace_back(r, static_cast<Eigen::Index>(j), it.value());
        }
    }
    SparseMatrix s(n, n);
    s.setFromTriplets(triplets.begin(), triplets.end());
    return Operator(sub, std::move(s));
}

StateVector::StateVector(BasisPtr basis, Vector amplitudes, double norm_tol)
    : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
    if (!basis_) throw std::invalid_argument("StateVector: null basis");
    if (static_cast<std::size_t>(amps_.size()) != basis_->dim())
        throw std::invalid_argument(dim_message("StateVector", static_cast<std::size_t>(amps_.size()), basis_->dim()));
    if (std::abs(amps_.norm() - 1.0) > norm_tol)
        throw std::invalid_argument("StateVector: norm " + std::to_string(amps_.norm()) + " differs from 1");
}

StateVector StateVector::basis_state(BasisPtr basis, const BasisState& s) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(basis->dim()));
    v(static_cast<Eigen::Index>(basis->index_of(s))) = 1.0;
    return StateVector(std::move(basis), std::move(v));
}

cplx StateVector::amplitude(const BasisState& s) const {
    return amps_(static_cast<Eigen::Index>(basis_->index_of(s)));
}

cplx StateVector::inner(const StateVector& other) const {
    if (!basis_->same_as(*other.basis_)) throw std::invalid_argument("StateVector::inner: basis mismatch");
    return amps_.dot(other.amps_);
}

DensityMatrix::DensityMatrix(BasisPtr basis, DenseMatrix rho, bool validate_now)
    : basis_(std::move(basis)), rho_(std::move(rho)) {
    if (!basis_) throw std::invalid_argument("DensityMatrix: null basis");
    if (basis_->dim() > kMaxDenseDimension)
        throw std::length_error("DensityMatrix: dimension " + std::to_string(basis_->dim()) +
                                " exceeds the dense cap " + std::to_string(kMaxDenseDimension));
    const auto n = static_cast<Eigen::Index>(basis_->dim());
    if (rho_.rows() != n || rho_.cols() != n)
        throw std::invalid_argument(dim_message("DensityMatrix", static_cast<std::size_t>(rho_.rows()), basis_->dim()));
    if (validate_now) validate();
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    return DensityMatrix(psi.basis(), psi.amplitudes() * psi.amplitudes().adjoint(), false);
}

double DensityMatrix::population(const BasisState& s) const {
    const auto i = static_cast<Eigen::Index>(basis_->index_of(s));
    return rho_(i, i).real();
}

Physicality DensityMatrix::physicality() const {
    Physicality p;
    p.trace_deviation = std::abs(rho_.trace() - cplx(1.0));
    p.hermiticity_deviation = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    const DenseMatrix herm = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(herm, Eigen::EigenvaluesOnly);
    p.min_eigenvalue = solver.eigenvalues().minCoeff();
    return p;
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double pos_tol) const {
    const Physicality p = physicality();
    if (p.hermiticity_deviation > herm_tol)
        throw NumericalError("density matrix not hermitian: deviation " + std::to_string(p.hermiticity_deviation));
    if (p.trace_deviation > trace_tol)
        throw NumericalError("density matrix trace deviates from 1 by " + std::to_string(p.trace_deviation));
    if (p.min_eigenvalue < -pos_tol)
        throw NumericalError("density matrix has negative eigenvalue " + std::to_string(p.min_eigenvalue));
}

Vector embed(const BasisPtr& sub, const Vector& v) {
    if (sub->is_full()) return v;
    if (static_cast<std::size_t>(v.size()) != sub->dim())
        throw std::invalid_argument(dim_message("embed", static_cast<std::size_t>(v.size()), sub->dim()));
    Vector out = Vector::Zero(static_cast<Eigen::Index>(sub->parent()->dim()));
    const auto idx = sub->parent_indices();
    for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(idx[i])) = v(static_cast<Eigen::Index>(i));
    return out;
}

Vector project(const BasisPtr& sub, const Vector& parent_vector) {
    if (sub->is_full()) return parent_vector;
    if (static_cast<std::size_t>(parent_vector.size()) != sub->parent()->dim())
        throw std::invalid_argument(dim_message("project", static_cast<std::size_t>(parent_vector.size()), sub->parent()->dim()));
    Vector out(static_cast<Eigen::Index>(sub->dim()));
    const auto idx = sub->parent_indices();
    for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = parent_vector(static_cast<Eigen::Index>(idx[i]));
    return out;
}

}  // namespace zenoqst
