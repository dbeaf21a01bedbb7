// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "medwit/correlations.hpp"
#include "medwit/dynamics.hpp"
#include "medwit/ops.hpp"
#include "medwit/random.hpp"
#include "medwit/scenarios.hpp"
#include "medwit/witness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace medwit;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;
    std::function<Outcome()> body;
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

SystemLayout am_layout(int dA, int dM) { return SystemLayout({{"A", dA}, {"M", dM}}); }
SystemLayout bm_layout(int dM, int dB) { return SystemLayout({{"M", dM}, {"B", dB}}); }

// 1. Capacity saturation.
constexpr double kReeTol = 1e-4;
constexpr double kCapacitySlack = 1e-6;

Outcome capacity_saturation() {
    const QState phi = QState::pure(ops::maximally_entangled(2, 2, 2), SystemLayout::bipartite(2, 2));
    ReeOptions o;
    o.exact_shortcuts = false;
    const Estimate e = rel_ent_entanglement(phi, Bipartition{{"A"}, {"B"}}, o);
    const Capacity found = capacity_search(Quantifier::rel_ent_entanglement, 4, 2, 200, 0xc1);
    const bool ok = std::abs(e.value - 1.0) <= kReeTol && found.value <= 1.0 + kCapacitySlack;
    return {ok, "REE(Phi_2) = " + num(e.value) + " (optimizer), max over 200 random A:M states = " + num(found.value)};
}

// 2. Decomposable soundness.
Outcome decomposable_soundness() {
    const std::vector<std::array<int, 3>> shapes{{2, 2, 2}, {2, 3, 2}, {3, 2, 2}, {2, 2, 3}, {4, 2, 2}, {2, 4, 2}};
    int certified = 0, nonzero = 0, cases = 0;
    for (int k = 0; k < 200; ++k) {
        Rng rng(split_seed(0xc2, static_cast<std::uint64_t>(k)));
        const auto [dA, dM, dB] = shapes[static_cast<std::size_t>(k) % shapes.size()];
        const auto l = SystemLayout::tripartite(dA, dM, dB);
        const auto am = am_layout(dA, dM);
        const auto bm = bm_layout(dM, dB);
        const DecomposableSpec spec{KrausMap(random_kraus(am.total_dim(), 1 + k % 3, rng), am),
                                    KrausMap(random_kraus(bm.total_dim(), 1 + (k / 3) % 3, rng), bm),
                                    Order::AM_then_BM};
        const QState rho0 = random_product_state(l, rng, k % 2 == 0);
        const QState rt = apply_map(rho0, spec);
        const std::vector<std::string> ab{"A", "B"};
        const QState r0(reduce_to(rho0.matrix(), l, ab), SystemLayout::bipartite(dA, dB), 1e-7);
        const QState r1(reduce_to(rt.matrix(), l, ab), SystemLayout::bipartite(dA, dB), 1e-7);
        for (Quantifier q : {Quantifier::rel_ent_entanglement, Quantifier::log_negativity}) {
            const WitnessReport acc = witness_accessible(rho0, rt, default_measure(q, std::min(dA, dM * dB)));
            const WitnessReport inacc = witness_inaccessible(r0, r1, default_measure(q, std::min(dA, dB)), dM);
            for (const auto* r : {&acc, &inacc}) {
                ++cases;
                certified += r->certified ? 1 : 0;
                nonzero += r->violation > 0.0 ? 1 : 0;
            }
        }
    }
    return {certified == 0 && nonzero == 0, std::to_string(cases) + " witness evaluations over 200 dynamics, " +
                                                std::to_string(nonzero) + " nonzero, " + std::to_string(certified) +
                                                " certified violations"};
}

// 3. Max-entangler witness.
constexpr double kMaxEntTol = 1e-3;

Outcome max_entangler() {
    const RunReport rep = run(parse_config(R"({"scenario": "max-entangler", "dims": [4, 2, 4]})"));
    const auto it = std::find_if(rep.rows.begin(), rep.rows.end(),
                                 [](const ResultRow& r) { return r.paper_eq == "accessible-witness"; });
    if (it == rep.rows.end()) return {false, "no accessible-witness row"};
    const bool ok = std::abs(it->lhs - 2.0) <= kMaxEntTol && std::abs(it->bound - 1.0) <= 1e-12 &&
                    it->nd_lower_bound > 0.0 && rep.invariants_hold();
    return {ok,
            "lhs = " + num(it->lhs) + ", bound = " + num(it->bound) + ", nd_lower_bound = " + num(it->nd_lower_bound)};
}

// 4. Single-step Trotter bound.
constexpr double kTrotterSlack = 1e-9;
constexpr double kCommutatorTol = 1e-9;

Outcome single_step() {
    Rng rng(0xc4);
    double worst = -1e300;
    int checks = 0;
    for (int k = 0; k < 20; ++k) {
        const HamiltonianPair p = random_pair(2, 2 + k % 2, 2, rng);
        const double c = commutator_norm(p.am, p.bm);
        for (int i = 1; i <= 20; ++i) {
            const double t = 0.1 * i;
            const double margin = trotter_error(p.am, p.bm, t, 1) - 0.5 * t * t * c;
            worst = std::max(worst, margin);
            ++checks;
        }
    }
    const HamiltonianPair b = appendix_b_hamiltonians();
    const double cn = commutator_norm(b.am, b.bm);
    const double want = std::numbers::pi * std::numbers::pi / 8.0;
    const bool ok = worst <= kTrotterSlack && std::abs(cn - want) <= kCommutatorTol;
    return {ok, std::to_string(checks) + " (pair, t) points, max(error - t^2/2 ||C||) = " + num(worst) +
                    ", ||[H_AM, H_BM]|| = " + num(cn) + " vs pi^2/8 = " + num(want)};
}

// 5. Empirical step scaling.
constexpr double kSlopeTol = 0.15;

Outcome step_scaling() {
    const HamiltonianPair b = appendix_b_hamiltonians();
    std::vector<double> x, y;
    for (int k = 0; k <= 12; ++k) {
        const double eps = std::pow(10.0, -2.0 - 0.25 * k);
        const StepCount s = min_steps(b.am, b.bm, 1.0, eps);
        x.push_back(std::log(1.0 / eps));
        y.push_back(std::log(static_cast<double>(s.r)));
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {std::abs(slope - 1.0) <= kSlopeTol,
            "log r vs log 1/eps over eps in [1e-5, 1e-2]: slope = " + num(slope)};
}

// 6. One-way decomposability.
constexpr double kForbiddenFloor = 0.1;
constexpr double kAllowedTol = 1e-6;

Outcome one_way() {
    const HamiltonianPair b = appendix_b_hamiltonians();
    const auto l = SystemLayout::tripartite(2, 2, 2);
    const Matrix uam = embed_matrix(expm_hermitian(b.am.matrix(), 1.0), b.am.layout(), l);
    const Matrix ubm = embed_matrix(expm_hermitian(b.bm.matrix(), 1.0), b.bm.layout(), l);
    const QOp target(uam * ubm, l, OpKind::unitary);
    FalsifyOptions o;
    o.restarts = 50;
    o.seed = 0xc6;
    const FalsifyResult allowed = falsify_decomposition(target, Order::BM_then_AM, o);
    const FalsifyResult forbidden = falsify_decomposition(target, Order::AM_then_BM, o);
    const double worst_forbidden =
        *std::min_element(forbidden.restart_distances.begin(), forbidden.restart_distances.end());
    const bool ok = forbidden.restarts >= 50 && forbidden.best_distance > kForbiddenFloor &&
                    allowed.best_distance <= kAllowedTol;
    return {ok, "forbidden order best over " + std::to_string(forbidden.restarts) + " restarts = " +
                    num(worst_forbidden) + ", allowed order = " + num(allowed.best_distance)};
}

// 7. SWAP no-dilation.
constexpr double kSwapSlack = 1e-6;

Outcome swap_no_dilation() {
    double worst_random = 1.0, worst_adv = 1.0;
    for (int k = 0; k < 100; ++k) {
        Rng rng(split_seed(0xc7, static_cast<std::uint64_t>(k)));
        const int m = 2 + k % 3;
        const auto am = am_layout(2, m);
        const auto bm = bm_layout(m, 2);
        const DecomposableSpec body{KrausMap(random_kraus(am.total_dim(), 1 + k % 3, rng), am),
                                    KrausMap(random_kraus(bm.total_dim(), 1 + (k / 3) % 3, rng), bm),
                                    k % 2 == 0 ? Order::AM_then_BM : Order::BM_then_AM};
        const QState sigma(random_density(m, 1 + k % m, rng), SystemLayout::single("M", m), 1e-9);
        worst_random = std::min(worst_random, swap_dilation_test(DilationSpec{m, sigma, body}));
    }
    for (int j = 0; j < 10; ++j) {
        const AdversarialResult a = adversarial_swap_dilation(2 + j % 3, j % 2 == 0 ? Order::AM_then_BM : Order::BM_then_AM,
                                                              split_seed(0xc7a, static_cast<std::uint64_t>(j)), 3000);
        worst_adv = std::min(worst_adv, a.deviation);
    }
    const bool ok = worst_random >= 0.5 - kSwapSlack && worst_adv >= 0.5 - kSwapSlack;
    return {ok, "min deviation: 100 random = " + num(worst_random) + ", 10 adversarial = " + num(worst_adv)};
}

// 8. Strict inclusion.
constexpr double kStrict2Tol = 1e-4;
constexpr double kStrict3Tol = 1e-3;

Outcome strict_inclusion() {
    const StrictInclusion two = strict_inclusion_demo(2, 4);
    const StrictInclusion three = strict_inclusion_demo(3, 4);
    const bool ok = std::abs(two.below.violation - 1.0) <= kStrict2Tol && two.below.capacity == 0.0 &&
                    std::abs(three.below.violation - 0.585) <= kStrict3Tol &&
                    std::abs(three.below.capacity - 1.0) <= 1e-12 && two.at.violation == 0.0 &&
                    three.at.violation == 0.0;
    return {ok, "m = 2: violation " + num(two.below.violation) + " over cap " + num(two.below.capacity) +
                    "; m = 3: violation " + num(three.below.violation) + " over cap " + num(three.below.capacity)};
}

// 9. Mediator-dimension exclusion.
Outcome dimension_exclusion() {
    const int m = excluded_mediator_dim(5.0);
    return {m == 32, "excluded_mediator_dim(5) = " + std::to_string(m)};
}

// 10. Sandwich consistency.
Outcome sandwich() {
    Rng rng(0xca);
    int consistent = 0, nontrivial = 0;
    double worst_gap = -1e300;
    const auto l = SystemLayout::tripartite(4, 2, 4);
    const MeasureSpec spec = default_measure(Quantifier::rel_ent_entanglement, 2);
    for (int k = 0; k < 20; ++k) {
        const HamiltonianPair p = random_pair(4, 2, 4, rng);
        const double scale = 1.0 + 0.25 * (k % 9);
        const QOp am(scale * p.am.matrix(), p.am.layout(), OpKind::hermitian);
        const QOp bm(scale * p.bm.matrix(), p.bm.layout(), OpKind::hermitian);
        const QState rho0 = random_product_state(l, rng, true);
        const Sandwich s = sandwich_check(am, bm, 1.0, rho0, spec);
        consistent += s.consistent ? 1 : 0;
        nontrivial += s.lower > 0.0 ? 1 : 0;
        worst_gap = std::max(worst_gap, s.lower - s.upper);
    }
    const HamiltonianPair b = appendix_b_hamiltonians();
    const Sandwich sb = sandwich_check(b.am, b.bm, 1.0, QState::basis(0, SystemLayout::tripartite(2, 2, 2)), spec);
    const bool ok = consistent == 20 && sb.consistent;
    return {ok, std::to_string(consistent) + "/20 random pairs consistent (" + std::to_string(nontrivial) +
                    " with a nonzero lower bound, max lower - upper = " + num(worst_gap) + "); appendix-b pair: " +
                    num(sb.lower) + " <= " + num(sb.upper)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "capacity saturation", 60, capacity_saturation},
        {2, "decomposable soundness", 300, decomposable_soundness},
        {3, "max-entangler witness", 120, max_entangler},
        {4, "single-step Trotter bound", 60, single_step},
        {5, "empirical step scaling", 120, step_scaling},
        {6, "one-way decomposability", 300, one_way},
        {7, "SWAP no-dilation", 300, swap_no_dilation},
        {8, "strict inclusion", 120, strict_inclusion},
        {9, "mediator-dimension exclusion", 60, dimension_exclusion},
        {10, "sandwich consistency", 180, sandwich},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.time_limit_s;
        const bool pass = o.passed && in_time;
        failed += pass ? 0 : 1;
        std::ostringstream line;
        line << (pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << o.detail << " ("
             << num(secs) << " s, limit " << c.time_limit_s << " s" << (in_time ? "" : ", over time") << ")";
        std::cout << line.str() << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
