#include "medwit/correlations.hpp"
#include "medwit/minimize.hpp"
#include "medwit/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace medwit {

namespace {

std::vector<std::string> cut_order(const Bipartition& cut) {
    std::vector<std::string> order = cut.x;
    order.insert(order.end(), cut.y.begin(), cut.y.end());
    return order;
}

double pt_trace_norm(const QState& state, const Bipartition& cut) {
    cut.validate(state.layout());
    return trace_norm(partial_transpose(state, cut.x));
}

// T T^+ / Tr, from 2 d^2 real parameters.
Matrix density_from_params(const double* p, Index d) {
    Matrix t(d, d);
    for (Index i = 0; i < d * d; ++i) t(i / d, i % d) = cplx(p[i], p[d * d + i]);
    Matrix s = t * t.adjoint();
    const double tr = s.trace().real();
    return tr > 0.0 ? Matrix(s / tr) : Matrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

void push_sqrt(std::vector<double>& p, const Matrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    const Matrix s = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                     es.eigenvectors().adjoint();
    const Index d = rho.rows();
    for (Index i = 0; i < d * d; ++i) p.push_back(s(i / d, i % d).real());
    for (Index i = 0; i < d * d; ++i) p.push_back(s(i / d, i % d).imag());
}

}  // namespace

std::string to_string(Quantifier q) {
    switch (q) {
        case Quantifier::negativity: return "negativity";
        case Quantifier::log_negativity: return "log_negativity";
        case Quantifier::mutual_information: return "mutual_information";
        case Quantifier::rel_ent_entanglement: return "rel_ent_entanglement";
    }
    return "?";
}

std::string to_string(Distance d) {
    switch (d) {
        case Distance::trace: return "trace";
        case Distance::spectral: return "spectral";
        case Distance::relative_entropy: return "relative_entropy";
    }
    return "?";
}

std::string to_string(OptStatus s) {
    switch (s) {
        case OptStatus::exact: return "exact";
        case OptStatus::converged: return "converged";
        case OptStatus::best_effort: return "best-effort";
    }
    return "?";
}

Quantifier parse_quantifier(std::string_view name) {
    for (Quantifier q : {Quantifier::negativity, Quantifier::log_negativity, Quantifier::mutual_information,
                         Quantifier::rel_ent_entanglement}) {
        if (to_string(q) == name) return q;
    }
    if (name == "ree") return Quantifier::rel_ent_entanglement;
    throw std::invalid_argument("unknown quantifier '" + std::string(name) + "'");
}

Distance parse_distance(std::string_view name) {
    for (Distance d : {Distance::trace, Distance::spectral, Distance::relative_entropy}) {
        if (to_string(d) == name) return d;
    }
    throw std::invalid_argument("unknown distance '" + std::string(name) + "'");
}

OptStatus combine(OptStatus a, OptStatus b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

std::string MeasureSpec::id() const { return to_string(quantifier) + "/" + to_string(distance) + "/" + g.describe(); }

MeasureSpec default_measure(Quantifier q, int local_dim) {
    const double d = static_cast<double>(std::max(local_dim, 1));
    switch (q) {
        case Quantifier::negativity:
            return {q, Distance::trace, ContinuityFn::linear(d, 1.0)};
        case Quantifier::log_negativity:
            return {q, Distance::trace, ContinuityFn::linear(2.0 * d / std::log(2.0), 1.0)};
        case Quantifier::mutual_information:
            return {q, Distance::relative_entropy, ContinuityFn::identity()};
        case Quantifier::rel_ent_entanglement:
            return {q, Distance::trace, ContinuityFn::entropic(std::max(local_dim, 1))};
    }
    throw std::invalid_argument("default_measure: unknown quantifier");
}

double negativity(const QState& state, const Bipartition& cut) {
    return std::max(0.0, 0.5 * (pt_trace_norm(state, cut) - 1.0));
}

double log_negativity(const QState& state, const Bipartition& cut) {
    return std::max(0.0, std::log2(pt_trace_norm(state, cut)));
}

double mutual_information(const QState& state, const Bipartition& cut) {
    cut.validate(state.layout());
    const double sx = entropy_bits(reduce_to(state.matrix(), state.layout(), cut.x), state.tol());
    const double sy = entropy_bits(reduce_to(state.matrix(), state.layout(), cut.y), state.tol());
    return std::max(0.0, sx + sy - vn_entropy(state));
}

Estimate quantify(const QState& state, const Bipartition& cut, Quantifier q, const ReeOptions& opts) {
    switch (q) {
        case Quantifier::negativity: return {negativity(state, cut), 0.0, OptStatus::exact};
        case Quantifier::log_negativity: return {log_negativity(state, cut), 0.0, OptStatus::exact};
        case Quantifier::mutual_information: return {mutual_information(state, cut), 0.0, OptStatus::exact};
        case Quantifier::rel_ent_entanglement: return rel_ent_entanglement(state, cut, opts);
    }
    throw std::invalid_argument("quantify: unknown quantifier");
}

double distance(const Matrix& rho, const Matrix& sigma, Distance d) {
    switch (d) {
        case Distance::trace: return trace_distance(rho, sigma);
        case Distance::spectral: return spectral_distance(rho, sigma);
        case Distance::relative_entropy: return relative_entropy_bits(rho, sigma);
    }
    throw std::invalid_argument("distance: unknown distance");
}

Estimate total_correlations(const QState& state, const Bipartition& cut, const MeasureSpec& spec,
                            const TotalCorrOptions& opts) {
    const SystemLayout& layout = state.layout();
    cut.validate(layout);
    if (spec.distance == Distance::relative_entropy) {
        // The infimum of S(rho || sigma_X (x) sigma_Y) is attained at the marginals.
        return {spec.g.eval(std::min(mutual_information(state, cut), spec.g.domain_max())), 0.0, OptStatus::exact};
    }

    const auto order = cut_order(cut);
    const SystemLayout pl = layout.reordered(order);
    const Matrix rho = permute_matrix(state.matrix(), layout, order);
    const Matrix rx = reduce_to(rho, pl, cut.x);
    const Matrix ry = reduce_to(rho, pl, cut.y);
    const Index dx = rx.rows(), dy = ry.rows();

    const double at_marginals = distance(rho, kron(rx, ry), spec.distance);
    if (at_marginals <= opts.tol) return {0.0, 0.0, OptStatus::exact};

    auto objective = [&](std::span<const double> p) {
        const Matrix sx = density_from_params(p.data(), dx);
        const Matrix sy = density_from_params(p.data() + 2 * dx * dx, dy);
        return distance(rho, kron(sx, sy), spec.distance);
    };

    std::vector<double> p0;
    push_sqrt(p0, rx);
    push_sqrt(p0, ry);
    const int restarts = std::max(1, opts.restarts);
    std::vector<minimize::Result> results(static_cast<std::size_t>(restarts));
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < restarts; ++r) {
        Rng rng(split_seed(opts.seed, static_cast<std::uint64_t>(r)));
        std::vector<double> start = p0;
        if (r > 0) {
            std::normal_distribution<double> n01(0.0, 0.3);
            for (double& v : start) v += n01(rng);
        }
        results[static_cast<std::size_t>(r)] = minimize::nelder_mead(objective, start, 0.1, opts.max_iter, 1e-7);
    }

    double best = at_marginals;
    bool converged = false;
    for (const auto& res : results) {
        if (res.value < best) {
            best = res.value;
            converged = res.converged;
        }
    }
    if (best == at_marginals) converged = std::any_of(results.begin(), results.end(), [](const auto& r) { return r.converged; });
    const double s = std::min(best, spec.g.domain_max());
    return {spec.g.eval(s), 0.0, converged ? OptStatus::converged : OptStatus::best_effort};
}

Capacity capacity(Quantifier q, int dA, int dM) {
    if (dA < 1 || dM < 1) throw std::invalid_argument("capacity: dimensions must be >= 1");
    const double m = static_cast<double>(std::min(dA, dM));
    switch (q) {
        case Quantifier::negativity: return {(m - 1.0) / 2.0, false};
        case Quantifier::log_negativity:
        case Quantifier::rel_ent_entanglement: return {std::log2(m), false};
        case Quantifier::mutual_information: return {2.0 * std::log2(m), false};
    }
    throw std::invalid_argument("capacity: unknown quantifier");
}

Capacity capacity(const MeasureSpec& spec, int dA, int dM) { return capacity(spec.quantifier, dA, dM); }

Capacity capacity_search(Quantifier q, int dA, int dM, int samples, std::uint64_t seed, const ReeOptions& opts) {
    const SystemLayout layout = SystemLayout::bipartite(dA, dM);
    const Bipartition cut{{"A"}, {"B"}};
    std::vector<double> values(static_cast<std::size_t>(std::max(samples, 0)), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < samples; ++s) {
        Rng rng(split_seed(seed, static_cast<std::uint64_t>(s)));
        const QState st = QState::pure(random_pure_vector(layout.total_dim(), rng), layout);
        values[static_cast<std::size_t>(s)] = quantify(st, cut, q, opts).value;
    }
    Capacity c{0.0, true};
    for (double v : values) c.value = std::max(c.value, v);
    return c;
}

AuditResult audit_continuity(const MeasureSpec& spec, int dX, int dY, int pairs, std::uint64_t seed,
                             const ReeOptions& opts) {
    const SystemLayout layout = SystemLayout::bipartite(dX, dY);
    const Bipartition cut{{"A"}, {"B"}};
    const Index D = layout.total_dim();
    std::vector<double> ratio(static_cast<std::size_t>(std::max(pairs, 0)), 0.0);
    std::vector<char> failed(ratio.size(), 0);

#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < pairs; ++i) {
        Rng rng(split_seed(seed, static_cast<std::uint64_t>(i)));
        std::uniform_int_distribution<Index> rank_dist(1, D);
        const Matrix rho = random_density(D, rank_dist(rng), rng);
        Matrix sigma;
        if (i % 2 == 0) {
            sigma = random_density(D, rank_dist(rng), rng);
        } else {
            std::uniform_real_distribution<double> u(-4.0, std::log10(0.5));
            const double eps = std::pow(10.0, u(rng));
            sigma = (1.0 - eps) * rho + eps * random_density(D, D, rng);
        }
        const QState a(rho, layout, 1e-7), b(sigma, layout, 1e-7);
        const double s = distance(rho, sigma, spec.distance);
        if (!std::isfinite(s) || s > spec.g.domain_max()) continue;
        const Estimate qa = quantify(a, cut, spec.quantifier, opts);
        const Estimate qb = quantify(b, cut, spec.quantifier, opts);
        const double dq = std::abs(qa.value - qb.value);
        const double bound = spec.g.eval(s);
        const double slack = 1e-9 + qa.gap + qb.gap;
        if (bound > 0.0) ratio[static_cast<std::size_t>(i)] = dq / bound;
        if (dq > bound + slack) failed[static_cast<std::size_t>(i)] = 1;
    }

    AuditResult out;
    out.pairs = pairs;
    for (std::size_t i = 0; i < ratio.size(); ++i) {
        out.worst_ratio = std::max(out.worst_ratio, ratio[i]);
        out.failures += failed[i];
    }
    out.passed = out.failures == 0;
    return out;
}

}  // namespace medwit
