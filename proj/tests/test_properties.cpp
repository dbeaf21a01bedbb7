// Cross-cutting properties over randomly generated states, channels and functions.

#include "helpers.hpp"
#include "medwit/correlations.hpp"
#include "medwit/dynamics.hpp"
#include "medwit/ops.hpp"

#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>

using namespace medwit;

namespace {

const Bipartition kAB{{"A"}, {"B"}};

struct Case {
    QState rho;
    KrausMap on_a;
    KrausMap on_b;
};

// Random bipartite state with random local channels on each side.
Case make_case(Rng& rng, int dA, int dB) {
    const auto l = SystemLayout::bipartite(dA, dB);
    const Index rank = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(l.total_dim()));
    QState rho = random_state(l, rng, rank);
    const Index ka = 1 + static_cast<Index>(rng() % 3), kb = 1 + static_cast<Index>(rng() % 3);
    return {std::move(rho), KrausMap(random_kraus(dA, ka, rng), SystemLayout::single("A", dA)),
            KrausMap(random_kraus(dB, kb, rng), SystemLayout::single("B", dB))};
}

QState local_process(const Case& c) {
    const QState x = apply_map(c.rho, c.on_a);
    return QState(apply_map(x, c.on_b).matrix(), c.rho.layout(), 1e-7);
}

}  // namespace

TEST_CASE("quantifiers never increase under local channels") {
    Rng rng(61);
    for (int k = 0; k < 200; ++k) {
        const Case c = make_case(rng, 2, 2 + k % 2);
        const QState out = local_process(c);
        CHECK(negativity(out, kAB) <= negativity(c.rho, kAB) + 1e-7);
        CHECK(log_negativity(out, kAB) <= log_negativity(c.rho, kAB) + 1e-7);
        CHECK(mutual_information(out, kAB) <= mutual_information(c.rho, kAB) + 1e-7);
    }
    ReeOptions o;
    o.tol = 1e-6;
    for (int k = 0; k < 40; ++k) {
        const Case c = make_case(rng, 2, 2);
        const Estimate before = rel_ent_entanglement(c.rho, kAB, o);
        const Estimate after = rel_ent_entanglement(local_process(c), kAB, o);
        // `after` is an upper estimate and `before` overshoots by at most its gap.
        CHECK(after.value - after.gap <= before.value + 1e-7);
    }
}

TEST_CASE("quantifiers are invariant under local unitaries and relabelling") {
    Rng rng(62);
    for (int k = 0; k < 60; ++k) {
        const int dA = 2, dB = 2 + k % 2;
        const auto l = SystemLayout::bipartite(dA, dB);
        const QState rho = random_state(l, rng, 1 + k % 4);
        const Matrix u = kron(random_unitary(dA, rng), random_unitary(dB, rng));
        const QState rot(u * rho.matrix() * u.adjoint(), l, 1e-9);
        const std::vector<std::string> ba{"B", "A"};
        const QState flipped = permute(rho, ba);
        const Bipartition ba_cut{{"B"}, {"A"}};
        for (Quantifier q : {Quantifier::negativity, Quantifier::log_negativity, Quantifier::mutual_information}) {
            const double v = quantify(rho, kAB, q).value;
            CHECK(quantify(rot, kAB, q).value == doctest::Approx(v).epsilon(1e-9).scale(1.0));
            CHECK(quantify(flipped, ba_cut, q).value == doctest::Approx(v).epsilon(1e-9).scale(1.0));
            CHECK(quantify(flipped, kAB, q).value == doctest::Approx(v).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("relative entropy of entanglement sits between the hashing bound and log2 of the smaller side") {
    Rng rng(63);
    ReeOptions o;
    for (int k = 0; k < 40; ++k) {
        const auto l = SystemLayout::bipartite(2, 2 + k % 2);
        const QState rho = random_state(l, rng, 1 + k % 3);
        const Estimate e = rel_ent_entanglement(rho, kAB, o);
        const double s_ab = vn_entropy(rho);
        const double s_a = vn_entropy(partial_trace(rho, std::vector<std::string>{"A"}));
        const double s_b = vn_entropy(partial_trace(rho, std::vector<std::string>{"B"}));
        CHECK(e.value >= std::max({0.0, s_a - s_ab, s_b - s_ab}) - 1e-9);
        CHECK(e.value <= 1.0 + 1e-9);
    }
}

TEST_CASE("separable mixtures carry no entanglement") {
    Rng rng(64);
    for (int k = 0; k < 100; ++k) {
        const Index dA = 2 + k % 2, dB = 2 + (k / 2) % 3;
        const QState s(medwit::testing::random_separable(dA, dB, 1 + k % 6, rng), SystemLayout::bipartite(dA, dB),
                       1e-10);
        CHECK(negativity(s, kAB) <= 1e-10);
        CHECK(log_negativity(s, kAB) <= 1e-10);
        if (dA * dB <= 6) CHECK(rel_ent_entanglement(s, kAB).value <= 1e-12);
    }
}

TEST_CASE("total correlations dominate and vanish where they should") {
    Rng rng(65);
    const MeasureSpec tr{Quantifier::negativity, Distance::trace, ContinuityFn::identity()};
    TotalCorrOptions o;
    o.restarts = 2;
    for (int k = 0; k < 20; ++k) {
        const auto l = SystemLayout::bipartite(2, 2);
        const QState prod(kron(random_density(2, 1 + k % 2, rng), random_density(2, 2, rng)), l, 1e-10);
        CHECK(total_correlations(prod, kAB, tr, o).value <= 1e-9);
        const QState rho = random_state(l, rng);
        const Estimate t = total_correlations(rho, kAB, tr, o);
        // Never above the distance to the product of marginals.
        const Matrix ra = reduce_to(rho.matrix(), l, std::vector<std::string>{"A"});
        const Matrix rb = reduce_to(rho.matrix(), l, std::vector<std::string>{"B"});
        CHECK(t.value <= trace_distance(rho.matrix(), kron(ra, rb)) + 1e-12);
        CHECK(t.value >= 0.0);
    }
}

TEST_CASE("continuity functions are increasing and invertible on a grid") {
    std::vector<ContinuityFn> fns{ContinuityFn::linear(0.5), ContinuityFn::linear(11.5, 1.0),
                                  ContinuityFn::entropic(2), ContinuityFn::entropic(16),
                                  ContinuityFn::table({0, 0.1, 0.4, 1.0}, {0, 0.5, 0.7, 3.0}),
                                  ContinuityFn::entropic(4).rescaled(4.0)};
    for (const auto& g : fns) {
        CHECK(g.eval(0.0) == 0.0);
        const double top = std::isfinite(g.domain_max()) ? g.domain_max() : 10.0;
        double last = 0.0;
        for (int i = 1; i <= 1000; ++i) {
            const double s = top * i / 1000.0;
            const double v = g.eval(s);
            CHECK(v > last);
            last = v;
            CHECK(g.inverse(v) == doctest::Approx(s).epsilon(1e-8).scale(1.0));
        }
        CHECK(g.inverse(0.0) == 0.0);
    }
}

TEST_CASE("results do not depend on the thread count") {
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const Capacity c1 = capacity_search(Quantifier::rel_ent_entanglement, 2, 2, 16, 66);
    const AuditResult a1 = audit_continuity(default_measure(Quantifier::negativity, 2), 2, 2, 200, 67);
    const MapDistance m1 = map_distance_estimate([](const Matrix& x) { return x; },
                                                 [](const Matrix& x) { return Matrix(x.diagonal().asDiagonal()); },
                                                 SystemLayout::single("A", 3), Distance::trace, 12, 68);
    omp_set_num_threads(4);
    const Capacity c4 = capacity_search(Quantifier::rel_ent_entanglement, 2, 2, 16, 66);
    const AuditResult a4 = audit_continuity(default_measure(Quantifier::negativity, 2), 2, 2, 200, 67);
    const MapDistance m4 = map_distance_estimate([](const Matrix& x) { return x; },
                                                 [](const Matrix& x) { return Matrix(x.diagonal().asDiagonal()); },
                                                 SystemLayout::single("A", 3), Distance::trace, 12, 68);
    omp_set_num_threads(saved);
    CHECK(c1.value == c4.value);
    CHECK(a1.worst_ratio == a4.worst_ratio);
    CHECK(a1.failures == a4.failures);
    CHECK(m1.value == m4.value);
#endif
}
