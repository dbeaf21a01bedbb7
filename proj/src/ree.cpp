#include "medwit/correlations.hpp"
#include "medwit/minimize.hpp"
#include "medwit/random.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace medwit {

namespace {

constexpr double kLn2 = 0.693147180559945309417;
constexpr double kEigFloor = 1e-14;

// sigma = sum_k (x_k x_k^+) (x) (y_k y_k^+) / N over unnormalised atoms packed as
// [re x, im x, re y, im y] per atom.
class ReeObjective {
public:
    ReeObjective(const Matrix& rho, Index dx, Index dy) : rho_(rho), dx_(dx), dy_(dy) {
        s_rho_ = entropy_bits(rho) * kLn2;
    }

    Index stride() const { return 2 * (dx_ + dy_); }

    void unpack(std::span<const double> p, Index k, Vector& x, Vector& y) const {
        const double* q = p.data() + k * stride();
        x.resize(dx_);
        y.resize(dy_);
        for (Index a = 0; a < dx_; ++a) x(a) = cplx(q[a], q[dx_ + a]);
        q += 2 * dx_;
        for (Index j = 0; j < dy_; ++j) y(j) = cplx(q[j], q[dy_ + j]);
    }

    static void pack(std::vector<double>& p, const Vector& x, const Vector& y) {
        for (Index a = 0; a < x.size(); ++a) p.push_back(x(a).real());
        for (Index a = 0; a < x.size(); ++a) p.push_back(x(a).imag());
        for (Index j = 0; j < y.size(); ++j) p.push_back(y(j).real());
        for (Index j = 0; j < y.size(); ++j) p.push_back(y(j).imag());
    }

    Matrix sigma(std::span<const double> p, double* norm_out = nullptr) const {
        const Index K = static_cast<Index>(p.size()) / stride();
        Matrix st = Matrix::Zero(dx_ * dy_, dx_ * dy_);
        double n = 0.0;
        Vector x, y;
        for (Index k = 0; k < K; ++k) {
            unpack(p, k, x, y);
            const Matrix X = x * x.adjoint();
            const Matrix Y = y * y.adjoint();
            for (Index a = 0; a < dx_; ++a) {
                for (Index b = 0; b < dx_; ++b) st.block(a * dy_, b * dy_, dy_, dy_) += X(a, b) * Y;
            }
            n += x.squaredNorm() * y.squaredNorm();
        }
        if (norm_out) *norm_out = n;
        return n > 0.0 ? Matrix(st / n) : st;
    }

    // Objective in nats. When `r_out` is given, also returns Dlog_sigma(rho).
    double value(const Matrix& sig, Matrix* r_out) const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(sig);
        const RealVector mu = es.eigenvalues().cwiseMax(kEigFloor);
        const Matrix& v = es.eigenvectors();
        const Matrix rot = v.adjoint() * rho_ * v;
        double f = -s_rho_;
        for (Index i = 0; i < mu.size(); ++i) f -= rot(i, i).real() * std::log(mu(i));
        if (r_out) {
            const Index d = mu.size();
            Matrix lr(d, d);
            for (Index i = 0; i < d; ++i) {
                for (Index j = 0; j < d; ++j) {
                    const double gap = mu(i) - mu(j);
                    const double l = std::abs(gap) > 1e-10 * std::max(mu(i), mu(j))
                                         ? (std::log(mu(i)) - std::log(mu(j))) / gap
                                         : 2.0 / (mu(i) + mu(j));
                    lr(i, j) = l * rot(i, j);
                }
            }
            *r_out = v * lr * v.adjoint();
        }
        return f;
    }

    double operator()(std::span<const double> p, std::span<double> grad) const {
        double n = 0.0;
        const Matrix sig = sigma(p, &n);
        if (!(n > 1e-300)) {
            std::fill(grad.begin(), grad.end(), 0.0);
            return std::numeric_limits<double>::max();
        }
        Matrix r;
        const double f = value(sig, grad.empty() ? nullptr : &r);
        if (grad.empty()) return f;

        // G = -R is the gradient of f with respect to sigma.
        const double c = -(r * sig).trace().real();
        const Index K = static_cast<Index>(p.size()) / stride();
        Vector x, y;
        for (Index k = 0; k < K; ++k) {
            unpack(p, k, x, y);
            Matrix gx(dx_, dx_);
            for (Index a = 0; a < dx_; ++a) {
                for (Index b = 0; b < dx_; ++b) {
                    gx(a, b) = -(y.adjoint() * r.block(a * dy_, b * dy_, dy_, dy_) * y)(0, 0);
                }
            }
            Matrix gy = Matrix::Zero(dy_, dy_);
            for (Index a = 0; a < dx_; ++a) {
                for (Index b = 0; b < dx_; ++b) {
                    gy -= (std::conj(x(a)) * x(b)) * r.block(a * dy_, b * dy_, dy_, dy_);
                }
            }
            const Vector wx = gx * x - (c * y.squaredNorm()) * x;
            const Vector wy = gy * y - (c * x.squaredNorm()) * y;
            double* g = grad.data() + k * stride();
            for (Index a = 0; a < dx_; ++a) {
                g[a] = 2.0 * wx(a).real() / n;
                g[dx_ + a] = 2.0 * wx(a).imag() / n;
            }
            g += 2 * dx_;
            for (Index j = 0; j < dy_; ++j) {
                g[j] = 2.0 * wy(j).real() / n;
                g[dy_ + j] = 2.0 * wy(j).imag() / n;
            }
        }
        return f;
    }

    Index dx() const { return dx_; }
    Index dy() const { return dy_; }

private:
    Matrix rho_;
    Index dx_, dy_;
    double s_rho_ = 0.0;
};

Vector top_eigenvector(const Matrix& h, double* value) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
    const Index last = h.rows() - 1;
    if (value) *value = es.eigenvalues()(last);
    return es.eigenvectors().col(last);
}

struct ProductMax {
    double value = -std::numeric_limits<double>::infinity();
    Vector x, y;
};

// max over unit product vectors <xy| R |xy> by alternating eigenvector updates.
ProductMax product_maximum(const Matrix& r, Index dx, Index dy, const std::vector<Vector>& y_starts) {
    ProductMax best;
    for (const Vector& y0 : y_starts) {
        Vector y = y0.normalized();
        Vector x;
        double prev = -std::numeric_limits<double>::infinity();
        double val = prev;
        for (int it = 0; it < 200; ++it) {
            Matrix rx(dx, dx);
            for (Index a = 0; a < dx; ++a) {
                for (Index b = 0; b < dx; ++b) rx(a, b) = (y.adjoint() * r.block(a * dy, b * dy, dy, dy) * y)(0, 0);
            }
            x = top_eigenvector(rx, nullptr);
            Matrix ry = Matrix::Zero(dy, dy);
            for (Index a = 0; a < dx; ++a) {
                for (Index b = 0; b < dx; ++b) ry += (std::conj(x(a)) * x(b)) * r.block(a * dy, b * dy, dy, dy);
            }
            y = top_eigenvector(ry, &val);
            if (val - prev < 1e-14) break;
            prev = val;
        }
        if (val > best.value) best = {val, x, y};
    }
    return best;
}

struct RestartResult {
    double value = std::numeric_limits<double>::infinity();  // nats
    double gap = std::numeric_limits<double>::infinity();    // nats
};

RestartResult run_restart(const ReeObjective& obj, const Matrix& rho_x, const Matrix& rho_y, int restart,
                          const ReeOptions& opts) {
    const Index dx = obj.dx(), dy = obj.dy();
    Rng rng(split_seed(opts.seed, static_cast<std::uint64_t>(restart)));
    const Index max_terms = opts.max_terms > 0 ? opts.max_terms : (dx * dy) * (dx * dy);

    Eigen::SelfAdjointEigenSolver<Matrix> ex(rho_x), ey(rho_y);
    std::vector<double> p;
    const double reg = 1e-3;
    const double noise = restart == 0 ? 0.0 : (restart % 2 == 1 ? 0.2 : 1.0);
    for (Index i = 0; i < dx; ++i) {
        for (Index j = 0; j < dy; ++j) {
            Vector x = std::sqrt(std::max(ex.eigenvalues()(i), 0.0) + reg / dx) * ex.eigenvectors().col(i);
            Vector y = std::sqrt(std::max(ey.eigenvalues()(j), 0.0) + reg / dy) * ey.eigenvectors().col(j);
            if (noise > 0.0) {
                x += noise * random_vector(dx, rng) / std::sqrt(2.0 * dx);
                y += noise * random_vector(dy, rng) / std::sqrt(2.0 * dy);
            }
            ReeObjective::pack(p, x, y);
        }
    }

    auto fdf = [&obj](std::span<const double> q, std::span<double> g) { return obj(q, g); };
    const double stop_nats = opts.stop_below >= 0.0 ? opts.stop_below * kLn2 : -std::numeric_limits<double>::infinity();
    RestartResult out;
    for (int round = 0; round < std::max(1, opts.rounds); ++round) {
        auto res = minimize::bfgs(fdf, p, opts.max_iter, 1e-11, 0.05, stop_nats);
        p = std::move(res.x);

        const Matrix sig = obj.sigma(p);
        Matrix r;
        const double f = obj.value(sig, &r);
        const double base = (r * sig).trace().real();

        std::vector<Vector> starts;
        const Index K = static_cast<Index>(p.size()) / obj.stride();
        Vector x, y;
        for (Index k = 0; k < K; ++k) {
            obj.unpack(p, k, x, y);
            if (y.norm() > 1e-8) starts.push_back(y);
        }
        double top = 0.0;
        const Vector psi = top_eigenvector(r, &top);
        Matrix m(dx, dy);
        for (Index a = 0; a < dx; ++a) {
            for (Index j = 0; j < dy; ++j) m(a, j) = psi(a * dy + j);
        }
        Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        starts.push_back(svd.matrixV().col(0).conjugate());
        for (int s = 0; s < 4; ++s) starts.push_back(random_vector(dy, rng));
        const ProductMax lmo = product_maximum(r, dx, dy, starts);

        const double gap = std::max(0.0, lmo.value - base);
        if (f < out.value) out = {f, gap};
        if (gap / kLn2 <= opts.tol || K >= max_terms || f / kLn2 <= opts.stop_below) break;

        // Add the most violated product direction as a new atom with small weight.
        double n = 0.0;
        (void)obj.sigma(p, &n);
        ReeObjective::pack(p, std::sqrt(0.05 * n) * lmo.x, lmo.y);
    }
    return out;
}

}  // namespace

Estimate rel_ent_entanglement(const QState& state, const Bipartition& cut, const ReeOptions& opts) {
    const SystemLayout& layout = state.layout();
    cut.validate(layout);
    std::vector<std::string> order = cut.x;
    order.insert(order.end(), cut.y.begin(), cut.y.end());
    const Matrix rho = permute_matrix(state.matrix(), layout, order);
    const SystemLayout xl = layout.reordered(cut.x);
    const SystemLayout yl = layout.reordered(cut.y);
    const Index dx = xl.total_dim(), dy = yl.total_dim();
    const SystemLayout perm_layout = layout.reordered(order);
    const Matrix rho_x = reduce_to(rho, perm_layout, cut.x);
    const Matrix rho_y = reduce_to(rho, perm_layout, cut.y);

    if (opts.exact_shortcuts) {
        const RealVector ev = hermitian_eigenvalues(rho);
        if (ev(ev.size() - 1) > 1.0 - 1e-12) return {std::max(0.0, entropy_bits(rho_x)), 0.0, OptStatus::exact};
    }
    if (std::min(dx, dy) > opts.local_dim_cap) {
        throw std::invalid_argument("rel_ent_entanglement: smaller side of " + cut.to_string() + " has dimension " +
                                    std::to_string(std::min(dx, dy)) + " above the cap " +
                                    std::to_string(opts.local_dim_cap));
    }

    if (opts.exact_shortcuts) {
        if (dx * dy <= 6) {
            const std::vector<std::string> xs = cut.x;
            const double min_pt = hermitian_eigenvalues(partial_transpose(rho, perm_layout, xs)).minCoeff();
            if (min_pt >= -1e-12) return {0.0, 0.0, OptStatus::exact};
        }
    }

    const ReeObjective obj(rho, dx, dy);
    const int restarts = std::max(1, opts.restarts);
    std::vector<RestartResult> results(static_cast<std::size_t>(restarts));
    results[0] = run_restart(obj, rho_x, rho_y, 0, opts);
    const bool settled = results[0].gap / kLn2 <= opts.tol || results[0].value / kLn2 <= opts.stop_below;
    if (!settled) {
#pragma omp parallel for schedule(dynamic)
        for (int r = 1; r < restarts; ++r) results[static_cast<std::size_t>(r)] = run_restart(obj, rho_x, rho_y, r, opts);
    }

    RestartResult best;
    for (const auto& r : results) {
        if (r.value < best.value) best = r;
    }
    Estimate e;
    e.value = std::max(0.0, best.value / kLn2);
    e.gap = std::min(best.gap / kLn2, e.value);
    e.status = e.gap <= opts.tol ? OptStatus::converged : OptStatus::best_effort;
    return e;
}

}  // namespace medwit
