#include "helpers.hpp"
#include "medwit/ops.hpp"
#include "medwit/witness.hpp"

#include <doctest.h>

#include <cmath>

using namespace medwit;
using medwit::testing::projector;

namespace {

const std::vector<std::string> kABLabels{"A", "B"};

SystemLayout am_layout(int dA, int dM) { return SystemLayout({{"A", dA}, {"M", dM}}); }
SystemLayout bm_layout(int dM, int dB) { return SystemLayout({{"M", dM}, {"B", dB}}); }

DecomposableSpec random_decomposable(int dA, int dM, int dB, Rng& rng, bool unitary) {
    const auto am = am_layout(dA, dM);
    const auto bm = bm_layout(dM, dB);
    const Index ka = unitary ? 1 : 1 + static_cast<Index>(rng() % 3);
    const Index kb = unitary ? 1 : 1 + static_cast<Index>(rng() % 3);
    return {KrausMap(random_kraus(am.total_dim(), ka, rng), am), KrausMap(random_kraus(bm.total_dim(), kb, rng), bm),
            Order::AM_then_BM};
}

// Maximally entangled A:B output of a 4x2x4 unitary acting on |000>.
QState max_entangled_output() {
    const auto l = SystemLayout::tripartite(4, 2, 4);
    Vector psi = Vector::Zero(32);
    for (int k = 0; k < 4; ++k) psi(k * 8 + k) = 0.5;
    return QState::pure(psi, l);
}

}  // namespace

TEST_CASE("decomposable unitary dynamics from a product state is silent") {
    Rng rng(51);
    const auto l = SystemLayout::tripartite(2, 2, 2);
    for (int k = 0; k < 5; ++k) {
        const DecomposableSpec spec = random_decomposable(2, 2, 2, rng, true);
        const QState rho0 = random_product_state(l, rng, true);
        const QState rt = apply_map(rho0, spec);
        const WitnessReport r = witness_accessible(rho0, rt, default_measure(Quantifier::rel_ent_entanglement, 2));
        CHECK(r.violation == 0.0);
        CHECK(r.nd_lower_bound == 0.0);
        CHECK_FALSE(r.certified);
        CHECK(r.cut == "A:MB");
        CHECK(r.capacity == doctest::Approx(1.0));
    }
}

TEST_CASE("maximally entangling dynamics violates the accessible bound") {
    const auto l = SystemLayout::tripartite(4, 2, 4);
    const QState rho0 = QState::basis(0, l);
    const QState rt = max_entangled_output();
    const MeasureSpec spec = default_measure(Quantifier::rel_ent_entanglement, 4);
    const WitnessReport r = witness_accessible(rho0, rt, spec);
    CHECK(r.lhs == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.bound == doctest::Approx(1.0));
    CHECK(r.violation == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.nd_lower_bound == doctest::Approx(spec.g.inverse(1.0)));
    CHECK(r.nd_lower_bound > 0.0);
    CHECK(r.certified);
    CHECK(r.status() == OptStatus::exact);

    const WitnessReport mirrored = witness_accessible(rho0, rt, spec, Order::BM_then_AM);
    CHECK(mirrored.cut == "B:MA");
    CHECK(mirrored.violation == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(witness_accessible(rho0, QState::basis(0, SystemLayout::tripartite(2, 2, 2)), spec),
                    std::invalid_argument);
}

TEST_CASE("initial correlations raise the bound by the mutual information") {
    const auto l = SystemLayout::tripartite(2, 2, 2);
    // Correlated AM:B initial state.
    Vector v = Vector::Zero(8);
    v(0) = v(7) = 1.0;
    const QState ghz = QState::pure(v, l);
    const MeasureSpec spec = default_measure(Quantifier::mutual_information, 2);
    const WitnessReport r = witness_accessible(ghz, ghz, spec);
    const Bipartition cut{{"A", "M"}, {"B"}};
    CHECK(r.total_corr == doctest::Approx(mutual_information(ghz, cut)));
    CHECK(r.bound == doctest::Approx(r.capacity + r.total_corr));
    CHECK(r.total_corr == doctest::Approx(2.0));

    // In trace distance the term is g of the distance to the nearest product state.
    const MeasureSpec ree = default_measure(Quantifier::rel_ent_entanglement, 2);
    const WitnessReport t = witness_accessible(ghz, ghz, ree);
    const Matrix r_am = reduce_to(ghz.matrix(), l, std::vector<std::string>{"A", "M"});
    const Matrix r_b = reduce_to(ghz.matrix(), l, std::vector<std::string>{"B"});
    CHECK(t.total_corr <= ree.g.eval(trace_distance(ghz.matrix(), kron(r_am, r_b))) + 1e-9);
    CHECK(t.total_corr >= ree.g.eval(0.5) - 1e-9);
}

TEST_CASE("inaccessible witness examples") {
    Rng rng(53);
    const auto ab = SystemLayout::bipartite(2, 2);
    const MeasureSpec spec = default_measure(Quantifier::rel_ent_entanglement, 2);
    // SWAP on a product input stays product.
    const QState prod(kron(random_density(2, 1, rng), random_density(2, 1, rng)), ab, 1e-10);
    const QState swapped(ops::swap(2) * prod.matrix() * ops::swap(2), ab, 1e-10);
    const WitnessReport s = witness_inaccessible(prod, swapped, spec, 1);
    CHECK(s.lhs <= 1e-9);
    CHECK(s.violation == 0.0);

    const auto l44 = SystemLayout::bipartite(4, 4);
    const QState phi = QState::pure(ops::maximally_entangled(4, 4, 4), l44);
    const QState zero = QState::basis(0, l44);
    const MeasureSpec spec4 = default_measure(Quantifier::rel_ent_entanglement, 4);
    const WitnessReport two = witness_inaccessible(zero, phi, spec4, 2);
    CHECK(two.violation == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(two.cut == "A:B");
    CHECK(two.mediator_dim_assumed == 2);
    CHECK(witness_inaccessible(zero, phi, spec4, 4).violation == 0.0);
    CHECK_THROWS_AS(witness_inaccessible(zero, phi, spec4, 0), std::invalid_argument);

    // The bound never decreases with the assumed cap.
    double last = -1.0;
    for (int m = 1; m <= 8; ++m) {
        const WitnessReport r = witness_inaccessible(zero, phi, spec4, m);
        CHECK(r.bound >= last);
        last = r.bound;
    }
}

TEST_CASE("finalize respects the certification rules") {
    const ContinuityFn g = ContinuityFn::linear(2.0);
    WitnessReport r;
    r.lhs = 1.0;
    r.capacity = 1.0;
    finalize(r, g);
    CHECK(r.violation == 0.0);
    CHECK(r.nd_lower_bound == 0.0);
    CHECK_FALSE(r.certified);

    r.lhs = 1.5;
    r.lhs_gap = 0.1;
    r.lhs_status = OptStatus::converged;
    finalize(r, g);
    CHECK(r.raw_violation == doctest::Approx(0.5));
    CHECK(r.violation == doctest::Approx(0.4));
    CHECK(r.nd_lower_bound == doctest::Approx(0.2));
    CHECK(r.certified);

    // Best-effort with a gap at least the raw violation cannot certify.
    r.lhs_status = OptStatus::best_effort;
    r.lhs_gap = 0.6;
    finalize(r, g);
    CHECK(r.violation == 0.0);
    CHECK_FALSE(r.certified);

    // Tiny numerical excess is not evidence.
    r.lhs = 1.0 + 1e-12;
    r.lhs_gap = 0.0;
    r.lhs_status = OptStatus::exact;
    finalize(r, g);
    CHECK(r.violation == 0.0);
}

TEST_CASE("mediator dimension exclusion") {
    CHECK(excluded_mediator_dim(5.0) == 32);
    CHECK(excluded_mediator_dim(0.0) == 1);
    CHECK(excluded_mediator_dim(1.585) == 3);
    CHECK(excluded_mediator_dim(1.0) == 2);
    CHECK(excluded_mediator_dim(4.9) == 30);
    CHECK(excluded_mediator_dim(0.1) == 2);
    CHECK_THROWS_AS(excluded_mediator_dim(-0.5), std::invalid_argument);
    // Agreement with the definition away from exact powers.
    for (double e = 0.05; e < 8.0; e += 0.173) {
        const int m = excluded_mediator_dim(e);
        CHECK(std::log2(static_cast<double>(m)) >= e - 1e-3);
        if (m > 1) CHECK(std::log2(static_cast<double>(m - 1)) < e - 1e-3);
    }
}

TEST_CASE("falsifying decompositions") {
    const HamiltonianPair p = appendix_b_hamiltonians();
    const auto l = SystemLayout::tripartite(2, 2, 2);
    const Matrix uam = embed_matrix(expm_hermitian(p.am.matrix(), 1.0), p.am.layout(), l);
    const Matrix ubm = embed_matrix(expm_hermitian(p.bm.matrix(), 1.0), p.bm.layout(), l);
    const QOp target(uam * ubm, l, OpKind::unitary);
    FalsifyOptions o;
    o.restarts = 8;
    const FalsifyResult allowed = falsify_decomposition(target, Order::BM_then_AM, o);
    CHECK(allowed.best_distance <= 1e-6);
    CHECK(allowed.restarts == 8);
    CHECK(allowed.restart_distances.size() == 8);
    const FalsifyResult forbidden = falsify_decomposition(target, Order::AM_then_BM, o);
    CHECK(forbidden.best_distance > 0.1);

    Rng rng(54);
    const HamiltonianPair c = random_commuting_pair(2, 2, 2, rng);
    const QOp cu(expm_hermitian(joint_hamiltonian(c.am, c.bm).matrix(), 1.0), l, OpKind::unitary);
    for (Order ord : {Order::AM_then_BM, Order::BM_then_AM}) {
        CHECK(falsify_decomposition(cu, ord, o).best_distance <= 1e-6);
    }
}

TEST_CASE("SWAP has no decomposable dilation") {
    const QState sig = QState::basis(0, SystemLayout::single("M", 2));
    const DilationSpec relay{2, sig, {KrausMap::unitary(ops::swap(2), am_layout(2, 2)),
                                      KrausMap::unitary(ops::swap(2), bm_layout(2, 2)), Order::AM_then_BM}};
    CHECK(swap_dilation_test(relay) >= 0.5);

    // Negative control: identity target with an identity body.
    const DilationSpec id{2, sig, {KrausMap::identity(am_layout(2, 2)), KrausMap::identity(bm_layout(2, 2)),
                                   Order::AM_then_BM}};
    std::vector<Matrix> probes{ops::unit(4, 0, 0), ops::unit(4, 1, 1)};
    CHECK(dilation_deviation(id, ops::identity(4), probes, "A") <= 1e-14);

    Rng rng(55);
    for (int k = 0; k < 30; ++k) {
        const int m = 2 + k % 3;
        DecomposableSpec body = random_decomposable(2, m, 2, rng, k % 2 == 0);
        body.order = k % 4 < 2 ? Order::AM_then_BM : Order::BM_then_AM;
        const DilationSpec dil{m, QState(random_density(m, 1 + k % m, rng), SystemLayout::single("M", m), 1e-10),
                               body};
        CHECK(swap_dilation_test(dil) >= 0.5 - 1e-9);
    }
    for (Order o : {Order::AM_then_BM, Order::BM_then_AM}) {
        const AdversarialResult a = adversarial_swap_dilation(2, o, 56, 400);
        CHECK(a.deviation >= 0.5 - 1e-6);
        CHECK(a.evaluations > 0);
    }
}

TEST_CASE("strict inclusion") {
    const StrictInclusion two = strict_inclusion_demo(2, 4);
    CHECK(two.entanglement == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(two.below.violation == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(two.at.violation == 0.0);
    const StrictInclusion three = strict_inclusion_demo(3, 4);
    CHECK(three.entanglement == doctest::Approx(std::log2(3.0)).epsilon(1e-9));
    CHECK(three.below.violation == doctest::Approx(std::log2(3.0) - 1.0).epsilon(1e-6));
    CHECK(three.at.violation == 0.0);
    CHECK_THROWS_AS(strict_inclusion_demo(1, 4), std::invalid_argument);
    CHECK_THROWS_AS(strict_inclusion_dilation(5, 4), std::invalid_argument);
}

TEST_CASE("sandwich check") {
    const auto l = SystemLayout::tripartite(2, 2, 2);
    const MeasureSpec spec = default_measure(Quantifier::rel_ent_entanglement, 2);
    const HamiltonianPair p = appendix_b_hamiltonians();
    const Sandwich s = sandwich_check(p.am, p.bm, 1.0, QState::basis(0, l), spec);
    CHECK(s.consistent);
    CHECK(s.upper > 0.1);

    Rng rng(57);
    const HamiltonianPair c = random_commuting_pair(2, 2, 2, rng);
    const Sandwich z = sandwich_check(c.am, c.bm, 1.0, random_product_state(l, rng, true), spec);
    CHECK(z.lower == 0.0);
    CHECK(z.upper <= 1e-12);
    CHECK(z.consistent);

    const MeasureSpec mi = default_measure(Quantifier::mutual_information, 2);
    CHECK_THROWS_AS(sandwich_check(p.am, p.bm, 1.0, QState::basis(0, l), mi), std::invalid_argument);
}

TEST_CASE("nd lower bound never exceeds the distance to a decomposable reference") {
    Rng rng(58);
    const auto l = SystemLayout::tripartite(4, 2, 4);
    int nontrivial = 0;
    for (int k = 0; k < 50; ++k) {
        const Quantifier q = k % 2 == 0 ? Quantifier::log_negativity : Quantifier::rel_ent_entanglement;
        const MeasureSpec spec = default_measure(q, 4);
        const QState rho0 = random_product_state(l, rng, true);
        const Matrix u = random_unitary(32, rng);
        const QState rt(u * rho0.matrix() * u.adjoint(), l, 1e-9);
        const Matrix v = decomposable_unitary(random_decomposable(4, 2, 4, rng, true), l);
        const Matrix ref = v * rho0.matrix() * v.adjoint();
        const WitnessReport r = witness_accessible(rho0, rt, spec);
        CHECK(r.nd_lower_bound <= trace_distance(rt.matrix(), ref) + 1e-9);
        if (r.violation > 0.0) ++nontrivial;
    }
    CHECK(nontrivial > 10);
}

TEST_CASE("soundness on random decomposable channels") {
    Rng rng(59);
    const auto l = SystemLayout::tripartite(2, 2, 2);
    for (int k = 0; k < 200; ++k) {
        const DecomposableSpec spec = random_decomposable(2, 2, 2, rng, k % 3 == 0);
        const QState rho0 = random_product_state(l, rng, k % 2 == 0);
        const QState rt = apply_map(rho0, spec);
        const QState r0ab = partial_trace(rho0, kABLabels), rtab = partial_trace(rt, kABLabels);
        for (Quantifier q : {Quantifier::negativity, Quantifier::log_negativity}) {
            const MeasureSpec m = default_measure(q, 2);
            CHECK(witness_accessible(rho0, rt, m).violation == 0.0);
            CHECK(witness_inaccessible(r0ab, rtab, m, 2).violation == 0.0);
        }
        if (k % 5 == 0) {
            const MeasureSpec m = default_measure(Quantifier::rel_ent_entanglement, 2);
            CHECK(witness_accessible(rho0, rt, m).violation == 0.0);
            CHECK(witness_inaccessible(r0ab, rtab, m, 2).violation == 0.0);
        }
    }
}
