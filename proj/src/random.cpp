#include "medwit/random.hpp"

#include "medwit/ops.hpp"

#include <Eigen/QR>

#include <cmath>

namespace medwit {

std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Matrix ginibre(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix g(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            const double re = n(rng);
            const double im = n(rng);
            g(i, j) = cplx(re, im);
        }
    }
    return g;
}

Vector random_vector(Index d, Rng& rng) { return ginibre(d, 1, rng).col(0); }

Matrix random_unitary(Index d, Rng& rng) {
    const Matrix g = ginibre(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index k = 0; k < d; ++k) {
        const cplx rk = r(k, k);
        const double a = std::abs(rk);
        if (a > 0.0) q.col(k) *= rk / a;
    }
    return q;
}

Vector random_pure_vector(Index d, Rng& rng) {
    Vector v = random_vector(d, rng);
    return v / v.norm();
}

Matrix random_density(Index d, Index rank, Rng& rng) {
    if (rank <= 0 || rank > d) rank = d;
    const Matrix g = ginibre(d, rank, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

Matrix random_hermitian(Index d, Rng& rng) {
    const Matrix g = ginibre(d, d, rng);
    return 0.5 * (g + g.adjoint());
}

QState random_state(const SystemLayout& layout, Rng& rng, Index rank) {
    return QState(random_density(layout.total_dim(), rank, rng), layout);
}

QState random_product_state(const SystemLayout& layout, Rng& rng, bool pure) {
    Matrix acc = Matrix::Identity(1, 1);
    for (const auto& p : layout.parts()) {
        const Matrix part = random_density(p.dim, pure ? 1 : p.dim, rng);
        acc = kron(acc, part);
    }
    return QState(acc, layout);
}

std::vector<Matrix> random_kraus(Index d, Index count, Rng& rng) {
    if (count < 1) count = 1;
    // Columns 0..d-1 of a Haar unitary on C^{count*d} form an isometry V; Kraus ops are its blocks.
    const Matrix u = random_unitary(d * count, rng);
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(count));
    for (Index k = 0; k < count; ++k) out.push_back(u.block(k * d, 0, d, d));
    return out;
}

HamiltonianPair random_commuting_pair(int dA, int dM, int dB, Rng& rng) {
    Matrix ham = Matrix::Zero(dA * dM, dA * dM);
    Matrix hbm = Matrix::Zero(dM * dB, dM * dB);
    for (int m = 0; m < dM; ++m) {
        const Matrix proj = ops::unit(dM, m, m);
        ham += kron(random_hermitian(dA, rng), proj);
        hbm += kron(proj, random_hermitian(dB, rng));
    }
    return {QOp(ham, SystemLayout({{"A", dA}, {"M", dM}}), OpKind::hermitian),
            QOp(hbm, SystemLayout({{"M", dM}, {"B", dB}}), OpKind::hermitian)};
}

HamiltonianPair random_pair(int dA, int dM, int dB, Rng& rng) {
    Matrix ham = random_hermitian(dA * dM, rng);
    Matrix hbm = random_hermitian(dM * dB, rng);
    ham /= spectral_norm(ham);
    hbm /= spectral_norm(hbm);
    return {QOp(ham, SystemLayout({{"A", dA}, {"M", dM}}), OpKind::hermitian),
            QOp(hbm, SystemLayout({{"M", dM}, {"B", dB}}), OpKind::hermitian)};
}

}  // namespace medwit
