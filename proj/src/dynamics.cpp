#include "medwit/dynamics.hpp"

#include "medwit/kernels.hpp"
#include "medwit/minimize.hpp"
#include "medwit/ops.hpp"
#include "medwit/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace medwit {

namespace {

std::vector<std::size_t> positions_in(const SystemLayout& target, const SystemLayout& part) {
    std::vector<std::size_t> pos;
    for (const auto& s : part.parts()) {
        const std::size_t p = target.position(s.label);
        if (target.parts()[p].dim != s.dim) {
            throw std::invalid_argument("dimension mismatch for part " + s.label + " between " + part.to_string() +
                                        " and " + target.to_string());
        }
        pos.push_back(p);
    }
    return pos;
}

std::set<std::string> label_set(const SystemLayout& l) {
    const auto v = l.labels();
    return {v.begin(), v.end()};
}

Matrix power(Matrix base, long r) {
    Matrix out = Matrix::Identity(base.rows(), base.cols());
    while (r > 0) {
        if (r & 1) out = out * base;
        r >>= 1;
        if (r) base = base * base;
    }
    return out;
}

void require_pair(const QOp& h_am, const QOp& h_bm) {
    if (label_set(h_am.layout()) != std::set<std::string>{"A", "M"}) {
        throw std::invalid_argument("H_AM must act on exactly {A, M}, got " + h_am.layout().to_string());
    }
    if (label_set(h_bm.layout()) != std::set<std::string>{"B", "M"}) {
        throw std::invalid_argument("H_BM must act on exactly {B, M}, got " + h_bm.layout().to_string());
    }
}

}  // namespace

KrausMap::KrausMap(std::vector<Matrix> kraus, SystemLayout layout, double tol)
    : kraus_(std::move(kraus)), layout_(std::move(layout)) {
    if (kraus_.empty()) throw std::invalid_argument("KrausMap: no Kraus operators");
    const Index d = layout_.total_dim();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& k : kraus_) {
        if (k.rows() != d || k.cols() != d) throw std::invalid_argument("KrausMap: operator size does not match layout");
        sum += k.adjoint() * k;
    }
    if (max_abs(sum - Matrix::Identity(d, d)) > tol) {
        throw std::invalid_argument("KrausMap: completeness sum K^+K = I violated");
    }
}

KrausMap KrausMap::unitary(const Matrix& u, SystemLayout layout, double tol) {
    return KrausMap({u}, std::move(layout), tol);
}

KrausMap KrausMap::identity(SystemLayout layout) {
    const Index d = layout.total_dim();
    return KrausMap({Matrix::Identity(d, d)}, std::move(layout));
}

std::string to_string(Order o) { return o == Order::AM_then_BM ? "AM_then_BM" : "BM_then_AM"; }

void DecomposableSpec::validate() const {
    if (label_set(am.layout()) != std::set<std::string>{"A", "M"}) {
        throw std::invalid_argument("DecomposableSpec: first map must act on {A, M}");
    }
    if (label_set(bm.layout()) != std::set<std::string>{"B", "M"}) {
        throw std::invalid_argument("DecomposableSpec: second map must act on {B, M}");
    }
    if (am.layout().dim("M") != bm.layout().dim("M")) {
        throw std::invalid_argument("DecomposableSpec: mediator dimensions differ");
    }
}

void DilationSpec::validate(Index dim_cap) const {
    body.validate();
    if (m < 1) throw std::invalid_argument("DilationSpec: mediator dimension must be >= 1");
    if (m > dim_cap) throw std::invalid_argument("DilationSpec: mediator dimension above cap");
    if (sigma_m.dim() != m || body.am.layout().dim("M") != m) {
        throw std::invalid_argument("DilationSpec: sigma_M and body must have mediator dimension m");
    }
}

SystemLayout joint_layout(const SystemLayout& am, const SystemLayout& bm) {
    if (am.dim("M") != bm.dim("M")) throw std::invalid_argument("joint_layout: mediator dimensions differ");
    return SystemLayout::tripartite(am.dim("A"), am.dim("M"), bm.dim("B"));
}

QState evolve(const QState& state, const QOp& h, double t) {
    if (!(h.layout() == state.layout())) throw std::invalid_argument("evolve: Hamiltonian layout differs from state");
    const Matrix u = expm_hermitian(h.matrix(), t);
    return QState(u * state.matrix() * u.adjoint(), state.layout(), state.tol());
}

Matrix apply_map_matrix(const Matrix& x, const SystemLayout& layout, const KrausMap& map) {
    const auto pos = positions_in(layout, map.layout());
    const auto dims = layout.dims();
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const auto& k : map.kraus()) out += kernels::conjugate(k, x, dims, pos);
    return out;
}

QState apply_map(const QState& state, const KrausMap& map) {
    return QState(apply_map_matrix(state.matrix(), state.layout(), map), state.layout(), state.tol());
}

QState apply_map(const QState& state, const DecomposableSpec& spec) {
    spec.validate();
    const auto& first = spec.order == Order::AM_then_BM ? spec.am : spec.bm;
    const auto& second = spec.order == Order::AM_then_BM ? spec.bm : spec.am;
    Matrix x = apply_map_matrix(state.matrix(), state.layout(), first);
    x = apply_map_matrix(x, state.layout(), second);
    return QState(std::move(x), state.layout(), state.tol());
}

QState marginal_of_dilation(const DilationSpec& dil, const QState& rho_ab) {
    dil.validate();
    const auto labels = rho_ab.layout().labels();
    if (label_set(rho_ab.layout()) != std::set<std::string>{"A", "B"}) {
        throw std::invalid_argument("marginal_of_dilation: input must live on {A, B}");
    }
    const SystemLayout ml = SystemLayout::single("M", dil.m);
    const QState sigma(dil.sigma_m.matrix(), ml, dil.sigma_m.tol());
    const QState joint = tensor(rho_ab, sigma);
    const std::vector<std::string> canon{"A", "M", "B"};
    const QState full = permute(joint, canon);
    const QState out = apply_map(full, dil.body);
    const Matrix red = reduce_to(out.matrix(), out.layout(), labels);
    return QState(red, rho_ab.layout(), std::max(rho_ab.tol(), 1e-8));
}

Matrix decomposable_unitary(const DecomposableSpec& spec, const SystemLayout& target) {
    spec.validate();
    if (!spec.am.is_unitary() || !spec.bm.is_unitary()) {
        throw std::invalid_argument("decomposable_unitary: both maps must be unitary");
    }
    const Matrix uam = embed_matrix(spec.am.kraus()[0], spec.am.layout(), target);
    const Matrix ubm = embed_matrix(spec.bm.kraus()[0], spec.bm.layout(), target);
    return spec.order == Order::AM_then_BM ? Matrix(ubm * uam) : Matrix(uam * ubm);
}

HamiltonianPair appendix_b_hamiltonians() {
    const double q = std::numbers::pi / 4.0;
    const SystemLayout am({{"A", 2}, {"M", 2}});
    const SystemLayout bm({{"M", 2}, {"B", 2}});
    return {QOp(-q * kron(ops::pauli_z(), ops::pauli_x()), am, OpKind::hermitian),
            QOp(-q * kron(ops::pauli_z(), ops::pauli_z()), bm, OpKind::hermitian)};
}

QOp joint_hamiltonian(const QOp& h_am, const QOp& h_bm) {
    require_pair(h_am, h_bm);
    const SystemLayout l = joint_layout(h_am.layout(), h_bm.layout());
    return QOp(embed_matrix(h_am.matrix(), h_am.layout(), l) + embed_matrix(h_bm.matrix(), h_bm.layout(), l), l,
               OpKind::hermitian, 1e-6);
}

QOp trotter_unitary(const QOp& h_am, const QOp& h_bm, double t, long r) {
    require_pair(h_am, h_bm);
    if (r < 1) throw std::invalid_argument("trotter_unitary: r must be >= 1");
    const SystemLayout l = joint_layout(h_am.layout(), h_bm.layout());
    const double dt = t / static_cast<double>(r);
    const Matrix ua = embed_matrix(expm_hermitian(h_am.matrix(), dt), h_am.layout(), l);
    const Matrix ub = embed_matrix(expm_hermitian(h_bm.matrix(), dt), h_bm.layout(), l);
    return QOp(power(ua * ub, r), l, OpKind::unitary, 1e-6);
}

double commutator_norm(const QOp& h_am, const QOp& h_bm) {
    require_pair(h_am, h_bm);
    const SystemLayout l = joint_layout(h_am.layout(), h_bm.layout());
    const Matrix a = embed_matrix(h_am.matrix(), h_am.layout(), l);
    const Matrix b = embed_matrix(h_bm.matrix(), h_bm.layout(), l);
    return spectral_norm(a * b - b * a);
}

double trotter_error(const QOp& h_am, const QOp& h_bm, double t, long r) {
    const QOp h = joint_hamiltonian(h_am, h_bm);
    return spectral_norm(expm_hermitian(h.matrix(), t) - trotter_unitary(h_am, h_bm, t, r).matrix());
}

StepCount min_steps(const QOp& h_am, const QOp& h_bm, double t, double eps, long r_cap) {
    if (!(eps > 0.0)) throw std::invalid_argument("min_steps: eps must be positive");
    const QOp h = joint_hamiltonian(h_am, h_bm);
    const Matrix exact = expm_hermitian(h.matrix(), t);
    auto err = [&](long r) { return spectral_norm(exact - trotter_unitary(h_am, h_bm, t, r).matrix()); };

    StepCount out;
    out.r_bound = std::max(1L, static_cast<long>(std::ceil(t * t * commutator_norm(h_am, h_bm) / (2.0 * eps))));

    long hi = 1;
    double e_hi = err(hi);
    while (e_hi > eps) {
        if (hi >= r_cap) {
            throw std::runtime_error("min_steps: error " + std::to_string(e_hi) + " still above eps at r cap " +
                                     std::to_string(r_cap));
        }
        hi = std::min(2 * hi, r_cap);
        e_hi = err(hi);
    }
    long lo = hi / 2;  // error(lo) > eps, or lo == 0
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        const double e = err(mid);
        if (e <= eps) {
            hi = mid;
            e_hi = e;
        } else {
            lo = mid;
        }
    }
    out.r = hi;
    out.error = e_hi;
    return out;
}

Classicality classicality_check(const QOp& h_am, const QOp& h_bm, double tol) {
    const double n = commutator_norm(h_am, h_bm);
    return {n <= tol, n};
}

std::vector<Matrix> computational_projectors(Index d) {
    std::vector<Matrix> p;
    for (Index i = 0; i < d; ++i) p.push_back(ops::unit(d, i, i));
    return p;
}

bool dephasing_invariance(const QOp& h, const std::vector<Matrix>& projectors, const std::string& label, double tol) {
    const Index d = h.layout().dim(label);
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& p : projectors) {
        if (p.rows() != d || p.cols() != d) throw std::invalid_argument("dephasing_invariance: projector size mismatch");
        if (max_abs(p * p - p) > 1e-8 || !is_hermitian(p, 1e-8)) {
            throw std::invalid_argument("dephasing_invariance: operator is not an orthogonal projector");
        }
        sum += p;
    }
    if (max_abs(sum - Matrix::Identity(d, d)) > 1e-8) {
        throw std::invalid_argument("dephasing_invariance: projector family is not complete");
    }
    const auto dims = h.layout().dims();
    const std::vector<std::size_t> pos{h.layout().position(label)};
    Matrix dephased = Matrix::Zero(h.matrix().rows(), h.matrix().cols());
    for (const auto& p : projectors) dephased += kernels::conjugate(p, h.matrix(), dims, pos);
    return spectral_norm(h.matrix() - dephased) <= tol;
}

MapDistance map_distance_estimate(const StateMap& f, const StateMap& g, const SystemLayout& layout, Distance d,
                                  int samples, std::uint64_t seed, std::span<const Matrix> extra_inputs) {
    const Index D = layout.total_dim();
    auto dist_of = [&](const Matrix& rho) { return distance(f(rho), g(rho), d); };

    std::vector<double> vals(static_cast<std::size_t>(std::max(samples, 0)), 0.0);
    std::vector<Vector> pure(vals.size());
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < samples; ++s) {
        Rng rng(split_seed(seed, static_cast<std::uint64_t>(s)));
        const auto i = static_cast<std::size_t>(s);
        if (s % 2 == 0) {
            pure[i] = random_pure_vector(D, rng);
            vals[i] = dist_of(pure[i] * pure[i].adjoint());
        } else {
            vals[i] = dist_of(random_density(D, D, rng));
        }
    }

    MapDistance out;
    out.samples = samples + static_cast<int>(extra_inputs.size());
    Vector best_pure;
    double best_pure_val = -1.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        out.value = std::max(out.value, vals[i]);
        if (pure[i].size() && vals[i] > best_pure_val) {
            best_pure_val = vals[i];
            best_pure = pure[i];
        }
    }
    for (const auto& x : extra_inputs) out.value = std::max(out.value, dist_of(x));

    if (best_pure.size()) {
        auto neg = [&](std::span<const double> p) {
            Vector v(D);
            for (Index k = 0; k < D; ++k) v(k) = cplx(p[k], p[D + k]);
            const double n = v.norm();
            if (n < 1e-12) return 0.0;
            v /= n;
            return -dist_of(v * v.adjoint());
        };
        std::vector<double> x0;
        for (Index k = 0; k < D; ++k) x0.push_back(best_pure(k).real());
        for (Index k = 0; k < D; ++k) x0.push_back(best_pure(k).imag());
        const auto res = minimize::nelder_mead(neg, x0, 0.05, 400, 1e-6);
        out.value = std::max(out.value, -res.value);
    }
    return out;
}

}  // namespace medwit
