// tensor.hpp — States and operators on labelled multipartite spaces.

#pragma once

#include "medwit/layout.hpp"
#include "medwit/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace medwit {

// Density matrix: Hermitian, unit trace, positive semidefinite within `tol`.
class QState {
public:
    QState(Matrix matrix, SystemLayout layout, double tol = kDefaultTol);

    static QState pure(const Vector& psi, SystemLayout layout, double tol = kDefaultTol);
    static QState maximally_mixed(SystemLayout layout);
    // |index><index| in the computational basis.
    static QState basis(Index index, SystemLayout layout);

    const Matrix& matrix() const noexcept { return matrix_; }
    const SystemLayout& layout() const noexcept { return layout_; }
    double tol() const noexcept { return tol_; }
    Index dim() const noexcept { return matrix_.rows(); }

private:
    Matrix matrix_;
    SystemLayout layout_;
    double tol_;
};

enum class OpKind { hermitian, unitary, general };

class QOp {
public:
    QOp(Matrix matrix, SystemLayout layout, OpKind kind = OpKind::general, double tol = kDefaultTol);

    const Matrix& matrix() const noexcept { return matrix_; }
    const SystemLayout& layout() const noexcept { return layout_; }
    OpKind kind() const noexcept { return kind_; }

private:
    Matrix matrix_;
    SystemLayout layout_;
    OpKind kind_;
};

struct Norms {
    double spectral = 0.0;
    double trace = 0.0;
    double frobenius = 0.0;
};

// --- embeddings and reductions ------------------------------------------------

// Operator on `target` acting as `op` on the parts named by op.layout() and as the
// identity elsewhere. `acting_on` must list op.layout()'s labels in its order.
QOp embed(const QOp& op, std::span<const std::string> acting_on, const SystemLayout& target);
QOp embed(const QOp& op, const SystemLayout& target);
Matrix embed_matrix(const Matrix& op, const SystemLayout& op_layout, const SystemLayout& target);

// Reduced state on `keep` (kept parts stay in layout order).
QState partial_trace(const QState& state, std::span<const std::string> keep);
// Partial trace of an arbitrary operator onto `keep`, returned in exactly the
// order given. Adjoint of embed_matrix.
Matrix reduce_to(const Matrix& x, const SystemLayout& layout, std::span<const std::string> keep);

Matrix partial_transpose(const QState& state, std::span<const std::string> on);
Matrix partial_transpose(const Matrix& x, const SystemLayout& layout, std::span<const std::string> on);

// Reorder parts; `order` lists every label of the layout.
QState permute(const QState& state, std::span<const std::string> order);
Matrix permute_matrix(const Matrix& x, const SystemLayout& layout, std::span<const std::string> order);

Matrix kron(const Matrix& a, const Matrix& b);
// Layouts are concatenated (labels must stay unique).
QState tensor(const QState& a, const QState& b);
SystemLayout concat(const SystemLayout& a, const SystemLayout& b);

// --- spectral functions ---------------------------------------------------------

// e^{-itH}. Requires a Hermitian generator.
QOp expm_hamiltonian(const QOp& h, double t);
Matrix expm_hermitian(const Matrix& h, double t);

Norms norms(const Matrix& x);
double spectral_norm(const Matrix& x);
double trace_norm(const Matrix& x);
// Half the trace norm of the difference.
double trace_distance(const QState& rho, const QState& sigma);
double trace_distance(const Matrix& rho, const Matrix& sigma);
// Spectral norm of the difference of two density matrices.
double spectral_distance(const Matrix& rho, const Matrix& sigma);

// Von Neumann entropy in bits; eigenvalues in [-tol, 0) are clamped to 0.
double vn_entropy(const QState& state);
double entropy_bits(const Matrix& rho, double tol = kDefaultTol);
double entropy_of_spectrum(const RealVector& eigenvalues, double tol = kDefaultTol);
// Quantum relative entropy S(rho||sigma) in bits (+inf if the support condition fails).
double relative_entropy_bits(const Matrix& rho, const Matrix& sigma, double tol = kDefaultTol);

RealVector hermitian_eigenvalues(const Matrix& x);
bool is_hermitian(const Matrix& x, double tol);
bool is_unitary(const Matrix& x, double tol);
double max_abs(const Matrix& x);

}  // namespace medwit
