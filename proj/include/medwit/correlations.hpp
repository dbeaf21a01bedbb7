// correlations.hpp — Correlation quantifiers, total correlations and capacities.

#pragma once

#include "medwit/continuity.hpp"
#include "medwit/layout.hpp"
#include "medwit/tensor.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace medwit {

enum class Quantifier { negativity, log_negativity, mutual_information, rel_ent_entanglement };
enum class Distance { trace, spectral, relative_entropy };
enum class OptStatus { exact, converged, best_effort };

std::string to_string(Quantifier q);
std::string to_string(Distance d);
std::string to_string(OptStatus s);
Quantifier parse_quantifier(std::string_view name);
Distance parse_distance(std::string_view name);

// Worse of two statuses (exact < converged < best_effort).
OptStatus combine(OptStatus a, OptStatus b);

struct MeasureSpec {
    Quantifier quantifier = Quantifier::rel_ent_entanglement;
    Distance distance = Distance::trace;
    ContinuityFn g = ContinuityFn::identity();

    // e.g. "rel_ent_entanglement/trace/entropic(d=2)".
    std::string id() const;
};

// Shipped pairings of quantifier, distance and g for a cut whose smaller side has
// dimension `local_dim`.
MeasureSpec default_measure(Quantifier q, int local_dim);

// Value of an optimisation-backed quantity. `gap` bounds value - true optimum.
struct Estimate {
    double value = 0.0;
    double gap = 0.0;
    OptStatus status = OptStatus::exact;
};

double negativity(const QState& state, const Bipartition& cut);
double log_negativity(const QState& state, const Bipartition& cut);
double mutual_information(const QState& state, const Bipartition& cut);

struct ReeOptions {
    int max_iter = 3000;
    double tol = 1e-6;          // target Frank-Wolfe gap, bits
    int restarts = 8;           // further restarts run only if restart 0 misses tol
    int rounds = 12;            // column-generation rounds per restart
    int max_terms = 0;          // 0 selects (d_X d_Y)^2
    int local_dim_cap = 4;
    // Closed forms: pure states (entropy of a marginal) and small PPT states (zero).
    bool exact_shortcuts = true;
    // Stop as soon as an explicit separable sigma gives a value at or below this.
    double stop_below = -1.0;
    std::uint64_t seed = 0x5eedULL;
};

// min over separable sigma of S(rho || sigma), in bits. The value is attained by an
// explicit separable sigma, so it never underestimates; `gap` is a Frank-Wolfe
// bound on the remaining excess.
Estimate rel_ent_entanglement(const QState& state, const Bipartition& cut, const ReeOptions& opts = {});

// Any quantifier through one entry point.
Estimate quantify(const QState& state, const Bipartition& cut, Quantifier q, const ReeOptions& opts = {});

struct TotalCorrOptions {
    int restarts = 4;
    int max_iter = 4000;
    double tol = 1e-9;
    std::uint64_t seed = 0x7c0ULL;
};

// inf over product sigma_X (x) sigma_Y of g(d(rho, sigma_X (x) sigma_Y)). The
// numerical branch reports the best value found, an upper bound on the infimum.
Estimate total_correlations(const QState& state, const Bipartition& cut, const MeasureSpec& spec,
                            const TotalCorrOptions& opts = {});

double distance(const Matrix& rho, const Matrix& sigma, Distance d);

struct Capacity {
    double value = 0.0;
    bool numerical = false;
};

// sup over sigma_AM of Q_{A:M}.
Capacity capacity(Quantifier q, int dA, int dM);
Capacity capacity(const MeasureSpec& spec, int dA, int dM);
// Largest Q_{A:M} seen over random pure states (a lower estimate of the capacity).
Capacity capacity_search(Quantifier q, int dA, int dM, int samples, std::uint64_t seed,
                         const ReeOptions& opts = {});

// Empirical check of |Q(rho) - Q(sigma)| <= g(d(rho, sigma)) on random pairs.
struct AuditResult {
    int pairs = 0;
    int failures = 0;
    double worst_ratio = 0.0;  // max |dQ| / g(d)
    bool passed = true;
};
AuditResult audit_continuity(const MeasureSpec& spec, int dX, int dY, int pairs, std::uint64_t seed,
                             const ReeOptions& opts = {});

inline double g_eval(const ContinuityFn& g, double s) { return g.eval(s); }
inline double g_inv(const ContinuityFn& g, double v) { return g.inverse(v); }

}  // namespace medwit
