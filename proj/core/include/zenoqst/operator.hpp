#pragma once

#include "zenoqst/hilbert.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <functional>

namespace zenoqst {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

// Sparse complex matrix acting on a Basis.
class Operator {
public:
    Operator(BasisPtr basis, SparseMatrix matrix);

    static Operator zero(BasisPtr basis);
    static Operator identity(BasisPtr basis);
    // Entries with |x| <= prune are dropped.
    static Operator from_dense(BasisPtr basis, const DenseMatrix& m, double prune = 0.0);

    const BasisPtr& basis() const { return basis_; }
    const SparseMatrix& matrix() const { return matrix_; }
    DenseMatrix dense() const { return DenseMatrix(matrix_); }
    std::size_t dim() const { return basis_->dim(); }

    cplx element(std::size_t row, std::size_t col) const;
    Operator adjoint() const;
    // max |A - A^dagger| entrywise.
    double hermiticity_deviation() const;
    bool is_hermitian(double tol = 1e-12) const { return hermiticity_deviation() <= tol; }
    double max_abs() const;

    Vector apply(const Vector& v) const { return matrix_ * v; }

    Operator& operator+=(const Operator& rhs);
    Operator& operator-=(const Operator& rhs);
    Operator& operator*=(cplx s);

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator*(cplx s, Operator a) { return a *= s; }
    friend Operator operator*(Operator a, cplx s) { return a *= s; }
    // Composition on the same basis. Intermediate states outside a filtered
    // basis are lost; build composite terms with build_operator instead.
    friend Operator operator*(const Operator& a, const Operator& b);

private:
    void require_same_basis(const Operator& other, const char* what) const;

    BasisPtr basis_;
    SparseMatrix matrix_;
};

// Emits (target state, amplitude) pairs for a source basis state.
using StateEmitter = std::function<void(const BasisState& target, cplx amplitude)>;
using LocalAction = std::function<void(const BasisState& source, const StateEmitter& emit)>;

// Builds <target|A|source> by applying `action` to every basis state and
// keeping targets that lie in the basis. Building on a filtered basis is
// therefore identical to building on the full basis and restricting.
Operator build_operator(const BasisPtr& basis, const LocalAction& action);

// |to><from| on one atom, identity elsewhere.
Operator atomic_transition_operator(const BasisPtr& basis, int node, Level from, Level to);
// Truncated a: a|n> = sqrt(n)|n-1>.
Operator mode_annihilation_operator(const BasisPtr& basis, int mode);
Operator mode_creation_operator(const BasisPtr& basis, int mode);
Operator mode_number_operator(const BasisPtr& basis, int mode);
// Diagonal operator holding BasisState::excitation().
Operator excitation_number_operator(const BasisPtr& basis);

// Restricts an operator on a full basis to one of its filtered sub-bases.
Operator restrict_operator(const Operator& op, const BasisPtr& sub);

class StateVector {
public:
    // Throws std::invalid_argument unless | ||amps|| - 1 | <= norm_tol.
    StateVector(BasisPtr basis, Vector amplitudes, double norm_tol = 1e-10);
    static StateVector basis_state(BasisPtr basis, const BasisState& s);

    const BasisPtr& basis() const { return basis_; }
    const Vector& amplitudes() const { return amps_; }
    std::size_t dim() const { return basis_->dim(); }
    cplx amplitude(const BasisState& s) const;
    double norm() const { return amps_.norm(); }
    cplx inner(const StateVector& other) const;

private:
    BasisPtr basis_;
    Vector amps_;
};

struct Physicality {
    double trace_deviation = 0.0;       // |tr rho - 1|
    double hermiticity_deviation = 0.0; // max |rho - rho^dagger|
    double min_eigenvalue = 0.0;
};

class DensityMatrix {
public:
    // Validates hermiticity (1e-10), trace (1e-8) and positivity (-1e-8)
    // unless `validate` is false.
    DensityMatrix(BasisPtr basis, DenseMatrix rho, bool validate = true);
    static DensityMatrix pure(const StateVector& psi);

    const BasisPtr& basis() const { return basis_; }
    const DenseMatrix& matrix() const { return rho_; }
    std::size_t dim() const { return basis_->dim(); }
    cplx trace() const { return rho_.trace(); }
    double population(const BasisState& s) const;

    Physicality physicality() const;
    // Throws NumericalError on violation of the stated bounds.
    void validate(double herm_tol = 1e-10, double trace_tol = 1e-8, double pos_tol = 1e-8) const;

private:
    BasisPtr basis_;
    DenseMatrix rho_;
};

// Embedding of a filtered sub-basis vector into its parent and back.
Vector embed(const BasisPtr& sub, const Vector& v);
Vector project(const BasisPtr& sub, const Vector& parent_vector);

}  // namespace zenoqst
