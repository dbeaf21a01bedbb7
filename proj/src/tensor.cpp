#include "medwit/tensor.hpp"

#include "medwit/kernels.hpp"
#include "medwit/ops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace medwit {

namespace {

std::vector<std::size_t> positions_of(const SystemLayout& layout, std::span<const std::string> labels) {
    std::vector<std::size_t> pos;
    pos.reserve(labels.size());
    for (const auto& l : labels) pos.push_back(layout.position(l));
    return pos;
}

std::vector<std::size_t> sorted_positions(const SystemLayout& layout, std::span<const std::string> labels) {
    auto pos = positions_of(layout, labels);
    std::sort(pos.begin(), pos.end());
    if (std::adjacent_find(pos.begin(), pos.end()) != pos.end()) {
        throw std::invalid_argument("repeated label in subsystem list");
    }
    return pos;
}

void require_size(const Matrix& m, const SystemLayout& layout, const char* who) {
    if (m.rows() != layout.total_dim() || m.cols() != layout.total_dim()) {
        throw std::invalid_argument(std::string(who) + ": matrix is " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + " but layout " + layout.to_string() +
                                    " needs " + std::to_string(layout.total_dim()));
    }
}

}  // namespace

// --- QState / QOp ------------------------------------------------------------------

QState::QState(Matrix matrix, SystemLayout layout, double tol)
    : matrix_(std::move(matrix)), layout_(std::move(layout)), tol_(tol) {
    if (tol_ < 0.0) throw std::invalid_argument("QState: negative tolerance");
    require_size(matrix_, layout_, "QState");
    if (!is_hermitian(matrix_, tol_)) throw std::invalid_argument("QState: matrix is not Hermitian");
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > tol_) {
        throw std::invalid_argument("QState: trace " + std::to_string(tr) + " differs from 1");
    }
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
    const double min_eig = hermitian_eigenvalues(matrix_).minCoeff();
    if (min_eig < -tol_) {
        throw std::invalid_argument("QState: negative eigenvalue " + std::to_string(min_eig));
    }
}

QState QState::pure(const Vector& psi, SystemLayout layout, double tol) {
    const double n = psi.norm();
    if (n == 0.0) throw std::invalid_argument("QState::pure: zero vector");
    const Vector v = psi / n;
    return QState(v * v.adjoint(), std::move(layout), tol);
}

QState QState::maximally_mixed(SystemLayout layout) {
    const Index d = layout.total_dim();
    return QState(Matrix::Identity(d, d) / static_cast<double>(d), std::move(layout));
}

QState QState::basis(Index index, SystemLayout layout) {
    const Index d = layout.total_dim();
    if (index < 0 || index >= d) throw std::invalid_argument("QState::basis: index out of range");
    return QState(ops::unit(d, index, index), std::move(layout));
}

QOp::QOp(Matrix matrix, SystemLayout layout, OpKind kind, double tol)
    : matrix_(std::move(matrix)), layout_(std::move(layout)), kind_(kind) {
    require_size(matrix_, layout_, "QOp");
    if (kind_ == OpKind::hermitian && !is_hermitian(matrix_, tol)) {
        throw std::invalid_argument("QOp: operator tagged hermitian is not self-adjoint");
    }
    if (kind_ == OpKind::unitary && !is_unitary(matrix_, tol)) {
        throw std::invalid_argument("QOp: operator tagged unitary is not unitary");
    }
}

// --- embeddings and reductions -------------------------------------------------------

Matrix embed_matrix(const Matrix& op, const SystemLayout& op_layout, const SystemLayout& target) {
    require_size(op, op_layout, "embed");
    for (const auto& p : op_layout.parts()) {
        if (!target.contains(p.label)) {
            throw std::invalid_argument("embed: label '" + p.label + "' not in target " + target.to_string());
        }
        if (target.dim(p.label) != p.dim) {
            throw std::invalid_argument("embed: dimension mismatch for '" + p.label + "'");
        }
    }
    const auto labels = op_layout.labels();
    const auto pos = positions_of(target, labels);
    const auto dims = target.dims();
    return kernels::embed(op, dims, pos);
}

QOp embed(const QOp& op, std::span<const std::string> acting_on, const SystemLayout& target) {
    const auto own = op.layout().labels();
    if (!std::equal(own.begin(), own.end(), acting_on.begin(), acting_on.end())) {
        throw std::invalid_argument("embed: acting_on labels do not match operator layout " +
                                    op.layout().to_string());
    }
    return embed(op, target);
}

QOp embed(const QOp& op, const SystemLayout& target) {
    return QOp(embed_matrix(op.matrix(), op.layout(), target), target, op.kind(), 1e-6);
}

Matrix reduce_to(const Matrix& x, const SystemLayout& layout, std::span<const std::string> keep) {
    require_size(x, layout, "reduce_to");
    if (keep.empty()) throw std::invalid_argument("reduce_to: keep must be nonempty");
    const auto pos = sorted_positions(layout, keep);
    const auto dims = layout.dims();
    Matrix reduced = kernels::partial_trace(x, dims, pos);
    // Reorder kept parts (currently in layout order) to the requested order.
    std::vector<int> kdims;
    for (auto p : pos) kdims.push_back(dims[p]);
    std::vector<std::size_t> order;
    for (const auto& l : keep) {
        const auto p = layout.position(l);
        order.push_back(static_cast<std::size_t>(std::find(pos.begin(), pos.end(), p) - pos.begin()));
    }
    bool identity_order = true;
    for (std::size_t k = 0; k < order.size(); ++k) identity_order = identity_order && order[k] == k;
    if (identity_order) return reduced;
    return kernels::permute(reduced, kdims, order);
}

QState partial_trace(const QState& state, std::span<const std::string> keep) {
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep must be nonempty");
    const auto pos = sorted_positions(state.layout(), keep);
    const auto dims = state.layout().dims();
    Matrix reduced = kernels::partial_trace(state.matrix(), dims, pos);
    return QState(std::move(reduced), state.layout().restricted(keep), state.tol());
}

Matrix partial_transpose(const Matrix& x, const SystemLayout& layout, std::span<const std::string> on) {
    require_size(x, layout, "partial_transpose");
    const auto pos = sorted_positions(layout, on);
    const auto dims = layout.dims();
    return kernels::partial_transpose(x, dims, pos);
}

Matrix partial_transpose(const QState& state, std::span<const std::string> on) {
    return partial_transpose(state.matrix(), state.layout(), on);
}

Matrix permute_matrix(const Matrix& x, const SystemLayout& layout, std::span<const std::string> order) {
    require_size(x, layout, "permute");
    if (order.size() != layout.size()) throw std::invalid_argument("permute: order must list every label");
    const auto pos = positions_of(layout, order);
    const auto dims = layout.dims();
    return kernels::permute(x, dims, pos);
}

QState permute(const QState& state, std::span<const std::string> order) {
    return QState(permute_matrix(state.matrix(), state.layout(), order), state.layout().reordered(order),
                  state.tol());
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

SystemLayout concat(const SystemLayout& a, const SystemLayout& b) {
    auto parts = a.parts();
    parts.insert(parts.end(), b.parts().begin(), b.parts().end());
    return SystemLayout(std::move(parts));
}

QState tensor(const QState& a, const QState& b) {
    return QState(kron(a.matrix(), b.matrix()), concat(a.layout(), b.layout()), std::max(a.tol(), b.tol()));
}

// --- spectral functions --------------------------------------------------------------

Matrix expm_hermitian(const Matrix& h, double t) {
    if (!is_hermitian(h, 1e-8)) throw std::invalid_argument("expm_hamiltonian: generator is not Hermitian");
    const Matrix hs = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(hs);
    if (es.info() != Eigen::Success) throw std::runtime_error("expm_hamiltonian: eigensolver failed");
    const auto& w = es.eigenvalues();
    Vector phases(w.size());
    for (Index k = 0; k < w.size(); ++k) phases(k) = std::exp(cplx(0.0, -t * w(k)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

QOp expm_hamiltonian(const QOp& h, double t) {
    return QOp(expm_hermitian(h.matrix(), t), h.layout(), OpKind::unitary, 1e-8);
}

RealVector hermitian_eigenvalues(const Matrix& x) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (x + x.adjoint()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    return es.eigenvalues();
}

Norms norms(const Matrix& x) {
    Norms n;
    n.frobenius = x.norm();
    if (x.size() == 0) return n;
    Eigen::JacobiSVD<Matrix> svd(x);
    const auto& s = svd.singularValues();
    n.spectral = s.size() ? s(0) : 0.0;
    n.trace = s.sum();
    return n;
}

double spectral_norm(const Matrix& x) {
    if (x.size() == 0) return 0.0;
    if (x.rows() == x.cols() && is_hermitian(x, 1e-13 * std::max(1.0, max_abs(x)))) {
        return hermitian_eigenvalues(x).cwiseAbs().maxCoeff();
    }
    Eigen::JacobiSVD<Matrix> svd(x);
    return svd.singularValues()(0);
}

double trace_norm(const Matrix& x) {
    if (x.size() == 0) return 0.0;
    if (x.rows() == x.cols() && is_hermitian(x, 1e-13 * std::max(1.0, max_abs(x)))) {
        return hermitian_eigenvalues(x).cwiseAbs().sum();
    }
    Eigen::JacobiSVD<Matrix> svd(x);
    return svd.singularValues().sum();
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw std::invalid_argument("trace_distance: dimension mismatch");
    }
    return 0.5 * hermitian_eigenvalues(rho - sigma).cwiseAbs().sum();
}

double trace_distance(const QState& rho, const QState& sigma) {
    return trace_distance(rho.matrix(), sigma.matrix());
}

double spectral_distance(const Matrix& rho, const Matrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw std::invalid_argument("spectral_distance: dimension mismatch");
    }
    return hermitian_eigenvalues(rho - sigma).cwiseAbs().maxCoeff();
}

double entropy_of_spectrum(const RealVector& eigenvalues, double tol) {
    double s = 0.0;
    for (Index k = 0; k < eigenvalues.size(); ++k) {
        double l = eigenvalues(k);
        if (l < 0.0 && l >= -tol) l = 0.0;
        if (l < 0.0) throw std::invalid_argument("entropy: eigenvalue below -tol");
        if (l > 0.0) s -= l * std::log2(l);
    }
    return s;
}

double entropy_bits(const Matrix& rho, double tol) { return entropy_of_spectrum(hermitian_eigenvalues(rho), tol); }

double vn_entropy(const QState& state) { return entropy_bits(state.matrix(), state.tol()); }

double relative_entropy_bits(const Matrix& rho, const Matrix& sigma, double tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sigma + sigma.adjoint()));
    const auto& mu = es.eigenvalues();
    const Matrix& v = es.eigenvectors();
    const Matrix rot = v.adjoint() * rho * v;
    double cross = 0.0;
    for (Index k = 0; k < mu.size(); ++k) {
        const double w = rot(k, k).real();
        if (w <= tol) continue;
        if (mu(k) <= 0.0) return std::numeric_limits<double>::infinity();
        cross -= w * std::log2(mu(k));
    }
    return std::max(0.0, cross - entropy_bits(rho, tol));
}

double max_abs(const Matrix& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

bool is_hermitian(const Matrix& x, double tol) {
    return x.rows() == x.cols() && max_abs(x - x.adjoint()) <= tol;
}

bool is_unitary(const Matrix& x, double tol) {
    if (x.rows() != x.cols()) return false;
    return max_abs(x.adjoint() * x - Matrix::Identity(x.rows(), x.cols())) <= tol;
}

// --- ops ---------------------------------------------------------------------------

namespace ops {

Matrix identity(Index d) { return Matrix::Identity(d, d); }

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

Matrix unit(Index d, Index i, Index j) {
    Matrix m = Matrix::Zero(d, d);
    m(i, j) = 1.0;
    return m;
}

Vector ket(Index d, Index i) {
    Vector v = Vector::Zero(d);
    v(i) = 1.0;
    return v;
}

Matrix swap(Index d) { return partial_swap(d, d, d); }

Matrix partial_swap(Index d1, Index d2, Index k) {
    if (k > std::min(d1, d2)) throw std::invalid_argument("partial_swap: k exceeds a dimension");
    const Index d = d1 * d2;
    Matrix m = Matrix::Zero(d, d);
    for (Index a = 0; a < d1; ++a) {
        for (Index b = 0; b < d2; ++b) {
            const Index from = a * d2 + b;
            const Index to = (a < k && b < k) ? b * d2 + a : from;
            m(to, from) = 1.0;
        }
    }
    return m;
}

Vector maximally_entangled(Index d1, Index d2, Index k) {
    if (k > std::min(d1, d2) || k < 1) throw std::invalid_argument("maximally_entangled: bad rank");
    Vector v = Vector::Zero(d1 * d2);
    for (Index i = 0; i < k; ++i) v(i * d2 + i) = 1.0 / std::sqrt(static_cast<double>(k));
    return v;
}

}  // namespace ops

}  // namespace medwit
