#include "medwit/witness.hpp"

#include "medwit/minimize.hpp"
#include "medwit/ops.hpp"
#include "medwit/random.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace medwit {

namespace {

// Violations below this are rounding noise in lhs - bound.
constexpr double kViolationFloor = 1e-9;

void require_tripartite(const SystemLayout& l, const char* who) {
    for (const char* label : {"A", "M", "B"}) {
        if (!l.contains(label)) throw std::invalid_argument(std::string(who) + ": layout lacks part " + label);
    }
    if (l.size() != 3) throw std::invalid_argument(std::string(who) + ": layout must have exactly A, M, B");
}

Matrix unitary_factor(const Matrix& z) {
    Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixV() * svd.matrixU().adjoint();
}

Matrix hermitian_from_params(const double* p, Index d) {
    Matrix h = Matrix::Zero(d, d);
    Index k = 0;
    for (Index i = 0; i < d; ++i) h(i, i) = p[k++];
    for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < d; ++j) {
            h(i, j) = cplx(p[k], p[k + 1]);
            h(j, i) = std::conj(h(i, j));
            k += 2;
        }
    }
    return h;
}

}  // namespace

void finalize(WitnessReport& r, const ContinuityFn& g) {
    r.bound = r.capacity + r.total_corr;
    const double raw = r.lhs - r.bound;
    const double net = raw - r.lhs_gap;
    r.raw_violation = raw > kViolationFloor ? raw : 0.0;
    r.violation = net > kViolationFloor ? net : 0.0;
    r.nd_lower_bound = r.violation > 0.0 ? g.inverse(std::min(r.violation, g.range_max())) : 0.0;
    const bool gap_blocks = r.lhs_status == OptStatus::best_effort && r.lhs_gap >= r.raw_violation;
    r.certified = r.violation > 0.0 && !gap_blocks;
}

WitnessReport witness_accessible(const QState& rho0, const QState& rho_t, const MeasureSpec& spec, Order order,
                                 const WitnessOptions& opts) {
    if (!(rho0.layout() == rho_t.layout())) throw std::invalid_argument("witness_accessible: layouts differ");
    const SystemLayout& l = rho0.layout();
    require_tripartite(l, "witness_accessible");

    const bool am_first = order == Order::AM_then_BM;
    const std::string s = am_first ? "A" : "B";
    const std::string o = am_first ? "B" : "A";
    const Bipartition lhs_cut{{s}, {"M", o}};
    const Bipartition tc_cut{{s, "M"}, {o}};

    WitnessReport r;
    r.cut = s + ":M" + o;
    r.measure = spec.id();
    r.mediator_dim_assumed = l.dim("M");
    const Capacity cap = capacity(spec, l.dim(s), l.dim("M"));
    r.capacity = cap.value;
    r.capacity_numerical = cap.numerical;
    const Estimate tc = total_correlations(rho0, tc_cut, spec, opts.total_corr);
    r.total_corr = tc.value;
    r.total_corr_status = tc.status;

    ReeOptions ree = opts.ree;
    if (opts.early_stop) ree.stop_below = r.capacity + r.total_corr;
    const Estimate q = quantify(rho_t, lhs_cut, spec.quantifier, ree);
    r.lhs = q.value;
    r.lhs_gap = q.gap;
    r.lhs_status = q.status;
    finalize(r, spec.g);
    return r;
}

WitnessReport witness_inaccessible(const QState& rho0_ab, const QState& rho_t_ab, const MeasureSpec& spec, int m,
                                   const WitnessOptions& opts) {
    if (m < 1) throw std::invalid_argument("witness_inaccessible: m must be >= 1");
    if (!(rho0_ab.layout() == rho_t_ab.layout())) throw std::invalid_argument("witness_inaccessible: layouts differ");
    const SystemLayout& l = rho0_ab.layout();
    if (l.size() != 2 || !l.contains("A") || !l.contains("B")) {
        throw std::invalid_argument("witness_inaccessible: states must live on (A, B)");
    }
    const Bipartition cut{{"A"}, {"B"}};

    WitnessReport r;
    r.cut = "A:B";
    r.measure = spec.id();
    r.mediator_dim_assumed = m;
    const Capacity cap = capacity(spec, l.dim("A"), m);
    r.capacity = cap.value;
    r.capacity_numerical = cap.numerical;
    const Estimate tc = total_correlations(rho0_ab, cut, spec, opts.total_corr);
    r.total_corr = tc.value;
    r.total_corr_status = tc.status;

    ReeOptions ree = opts.ree;
    if (opts.early_stop) ree.stop_below = r.capacity + r.total_corr;
    const Estimate q = quantify(rho_t_ab, cut, spec.quantifier, ree);
    r.lhs = q.value;
    r.lhs_gap = q.gap;
    r.lhs_status = q.status;
    finalize(r, spec.g);
    return r;
}

int excluded_mediator_dim(double e_obs, double resolution) {
    if (!(e_obs >= 0.0)) throw std::invalid_argument("excluded_mediator_dim: E must be >= 0");
    if (e_obs > 30.0) throw std::invalid_argument("excluded_mediator_dim: E above 30 bits");
    int m = std::max(1, static_cast<int>(std::ceil(std::exp2(e_obs))));
    while (m > 1 && std::log2(static_cast<double>(m - 1)) >= e_obs - resolution) --m;
    return m;
}

FalsifyResult falsify_decomposition(const QOp& u_target, Order order, const FalsifyOptions& opts) {
    const SystemLayout& l = u_target.layout();
    require_tripartite(l, "falsify_decomposition");
    const Matrix& u = u_target.matrix();
    const std::vector<std::string> am{"A", "M"}, bm{"M", "B"};
    const auto& l1 = order == Order::AM_then_BM ? am : bm;
    const auto& l2 = order == Order::AM_then_BM ? bm : am;
    const SystemLayout s1 = l.reordered(l1), s2 = l.reordered(l2);

    const int restarts = std::max(1, opts.restarts);
    std::vector<double> dist(static_cast<std::size_t>(restarts));
    std::vector<Matrix> w1s(dist.size()), w2s(dist.size());
    std::vector<char> conv(dist.size(), 0);

#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < restarts; ++r) {
        Rng rng(split_seed(opts.seed, static_cast<std::uint64_t>(r)));
        Matrix w1 = random_unitary(s1.total_dim(), rng);
        Matrix w2 = random_unitary(s2.total_dim(), rng);
        double prev = -std::numeric_limits<double>::infinity();
        const double scale = static_cast<double>(u.rows());
        for (int it = 0; it < opts.max_iter; ++it) {
            const Matrix v1 = embed_matrix(w1, s1, l);
            w2 = unitary_factor(reduce_to(v1 * u.adjoint(), l, l2));
            const Matrix v2 = embed_matrix(w2, s2, l);
            w1 = unitary_factor(reduce_to(u.adjoint() * v2, l, l1));
            const double obj = (u.adjoint() * v2 * embed_matrix(w1, s1, l)).trace().real();
            if (obj - prev < 1e-15 * scale) {
                conv[static_cast<std::size_t>(r)] = 1;
                break;
            }
            prev = obj;
        }
        const Matrix v = embed_matrix(w2, s2, l) * embed_matrix(w1, s1, l);
        dist[static_cast<std::size_t>(r)] = spectral_norm(u - v);
        w1s[static_cast<std::size_t>(r)] = w1;
        w2s[static_cast<std::size_t>(r)] = w2;
    }

    FalsifyResult out;
    out.restarts = restarts;
    out.restart_distances = dist;
    const auto best = static_cast<std::size_t>(std::min_element(dist.begin(), dist.end()) - dist.begin());
    out.best_distance = dist[best];
    const bool am_first = order == Order::AM_then_BM;
    out.v_am = am_first ? w1s[best] : w2s[best];
    out.v_bm = am_first ? w2s[best] : w1s[best];
    out.status = std::all_of(conv.begin(), conv.end(), [](char c) { return c == 0; }) ? OptStatus::best_effort
                                                                                       : OptStatus::converged;
    return out;
}

double dilation_deviation(const DilationSpec& dil, const Matrix& target_ab, const std::vector<Matrix>& probes,
                          const std::string& keep) {
    const SystemLayout ab = SystemLayout::bipartite(dil.body.am.layout().dim("A"), dil.body.bm.layout().dim("B"));
    if (target_ab.rows() != ab.total_dim()) throw std::invalid_argument("dilation_deviation: target size mismatch");
    const std::vector<std::string> k{keep};
    double worst = 0.0;
    for (const auto& p : probes) {
        const QState in(p, ab);
        const QState out = marginal_of_dilation(dil, in);
        const Matrix want = target_ab * p * target_ab.adjoint();
        worst = std::max(worst, trace_distance(reduce_to(out.matrix(), ab, k), reduce_to(want, ab, k)));
    }
    return worst;
}

double swap_dilation_test(const DilationSpec& dil) {
    if (dil.body.am.layout().dim("A") != 2 || dil.body.bm.layout().dim("B") != 2) {
        throw std::invalid_argument("swap_dilation_test: needs d_A = d_B = 2");
    }
    const bool am_first = dil.body.order == Order::AM_then_BM;
    // |00> and |01> (A-marginal probes) or |00> and |10> (B-marginal probes).
    const std::vector<Matrix> probes{ops::unit(4, 0, 0), am_first ? ops::unit(4, 1, 1) : ops::unit(4, 2, 2)};
    return dilation_deviation(dil, ops::swap(2), probes, am_first ? "A" : "B");
}

AdversarialResult adversarial_swap_dilation(int m, Order order, std::uint64_t seed, int max_iter) {
    if (m < 1) throw std::invalid_argument("adversarial_swap_dilation: m must be >= 1");
    const Index d = 2 * m;
    const Index nh = d * d;
    const SystemLayout am({{"A", 2}, {"M", m}});
    const SystemLayout bm({{"M", m}, {"B", 2}});
    const SystemLayout ml = SystemLayout::single("M", m);

    auto build = [&](std::span<const double> p) {
        const Matrix ua = expm_hermitian(hermitian_from_params(p.data(), d), 1.0);
        const Matrix ub = expm_hermitian(hermitian_from_params(p.data() + nh, d), 1.0);
        Vector psi(m);
        for (int i = 0; i < m; ++i) psi(i) = cplx(p[2 * nh + i], p[2 * nh + m + i]);
        if (psi.norm() < 1e-9) psi = ops::ket(m, 0);
        return DilationSpec{m, QState::pure(psi, ml, 1e-6),
                            DecomposableSpec{KrausMap::unitary(ua, am, 1e-6), KrausMap::unitary(ub, bm, 1e-6), order}};
    };

    AdversarialResult out;
    auto f = [&](std::span<const double> p) {
        ++out.evaluations;
        return swap_dilation_test(build(p));
    };
    Rng rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<double> x0(static_cast<std::size_t>(2 * nh + 2 * m));
    for (double& v : x0) v = n01(rng);
    const auto res = minimize::nelder_mead(f, x0, 0.5, max_iter, 1e-8);
    out.deviation = res.value;
    return out;
}

DilationSpec strict_inclusion_dilation(int m, int d) {
    if (m < 1 || d < m) throw std::invalid_argument("strict_inclusion_dilation: need 1 <= m <= d");
    const Index dm = m;
    Matrix f(dm, dm);
    for (Index j = 0; j < dm; ++j) {
        for (Index k = 0; k < dm; ++k) {
            f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(m)),
                                 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(m));
        }
    }
    const Index D = static_cast<Index>(d) * dm;
    Matrix shift = Matrix::Zero(D, D);
    for (Index a = 0; a < d; ++a) {
        for (Index k = 0; k < dm; ++k) shift(((a + k) % d) * dm + k, a * dm + k) = 1.0;
    }
    const Matrix uam = shift * kron(ops::identity(d), f);
    const SystemLayout am({{"A", d}, {"M", m}});
    const SystemLayout bm({{"M", m}, {"B", d}});
    return DilationSpec{m, QState::basis(0, SystemLayout::single("M", m)),
                        DecomposableSpec{KrausMap::unitary(uam, am, 1e-9),
                                         KrausMap::unitary(ops::partial_swap(m, d, m), bm, 1e-9),
                                         Order::AM_then_BM}};
}

StrictInclusion strict_inclusion_demo(int m, int d, const WitnessOptions& opts) {
    if (m < 2) throw std::invalid_argument("strict_inclusion_demo: m must be >= 2");
    const DilationSpec dil = strict_inclusion_dilation(m, d);
    const SystemLayout ab = SystemLayout::bipartite(d, d);
    const QState rho0 = QState::basis(0, ab);
    const QState rho_t = marginal_of_dilation(dil, rho0);
    const MeasureSpec spec = default_measure(Quantifier::rel_ent_entanglement, d);

    StrictInclusion out;
    out.entanglement = rel_ent_entanglement(rho_t, Bipartition{{"A"}, {"B"}}, opts.ree).value;
    out.below = witness_inaccessible(rho0, rho_t, spec, m - 1, opts);
    out.at = witness_inaccessible(rho0, rho_t, spec, m, opts);
    return out;
}

Sandwich sandwich_check(const QOp& h_am, const QOp& h_bm, double t, const QState& rho0, const MeasureSpec& spec,
                        const WitnessOptions& opts) {
    if (spec.distance != Distance::trace) throw std::invalid_argument("sandwich_check: measure must use trace distance");
    const QOp h = joint_hamiltonian(h_am, h_bm);
    const SystemLayout& l = h.layout();
    if (!(rho0.layout() == l)) throw std::invalid_argument("sandwich_check: rho0 layout must be " + l.to_string());

    const Matrix u = expm_hermitian(h.matrix(), t);
    const Matrix uam = embed_matrix(expm_hermitian(h_am.matrix(), t), h_am.layout(), l);
    const Matrix ubm = embed_matrix(expm_hermitian(h_bm.matrix(), t), h_bm.layout(), l);
    const QState rho_t(u * rho0.matrix() * u.adjoint(), l, 1e-7);

    Sandwich out;
    out.report = witness_accessible(rho0, rho_t, spec, Order::BM_then_AM, opts);
    // ||x||_1 <= D ||x||_inf turns a trace-distance g into a spectral-distance one.
    const ContinuityFn g_inf = spec.g.rescaled(static_cast<double>(l.total_dim()) / 2.0);
    out.lower = out.report.violation > 0.0 ? g_inf.inverse(std::min(out.report.violation, g_inf.range_max())) : 0.0;
    out.upper = 2.0 * spectral_norm(u - uam * ubm);
    out.consistent = out.lower <= out.upper + 1e-9;
    return out;
}

}  // namespace medwit
