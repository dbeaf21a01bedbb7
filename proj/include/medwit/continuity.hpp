// continuity.hpp — Monotone continuity functions g with g(0) = 0 and their inverses.

#pragma once

#include <limits>
#include <string>
#include <vector>

namespace medwit {

enum class ContinuityKind { linear, table, entropic };

class ContinuityFn {
public:
    // g(s) = c s.
    static ContinuityFn linear(double c, double domain_max = std::numeric_limits<double>::infinity());
    // Piecewise-linear through (s_i, g_i); s_0 = g_0 = 0, both strictly increasing.
    static ContinuityFn table(std::vector<double> s, std::vector<double> g);
    // g(s) = s log2(d) + (1 + s) h2(s / (1 + s)) on [0, 1]; uniform continuity
    // bound shape for entropic entanglement quantities in local dimension d.
    static ContinuityFn entropic(int dim);
    static ContinuityFn identity() { return linear(1.0); }

    // s -> g(factor * s); used to move a bound between equivalent distances.
    ContinuityFn rescaled(double factor) const;

    double eval(double s) const;
    // g^{-1}(v); non-positive v maps to 0. Throws std::domain_error above the range.
    double inverse(double v) const;

    double domain_max() const noexcept { return domain_max_raw_ / factor_; }
    double range_max() const;

    ContinuityKind kind() const noexcept { return kind_; }
    double coefficient() const noexcept { return coeff_; }
    int dimension() const noexcept { return dim_; }
    double factor() const noexcept { return factor_; }
    const std::vector<double>& table_s() const noexcept { return ts_; }
    const std::vector<double>& table_g() const noexcept { return tg_; }

    std::string describe() const;

private:
    double raw(double s) const;
    double raw_inverse(double v) const;

    ContinuityKind kind_ = ContinuityKind::linear;
    double coeff_ = 1.0;
    int dim_ = 2;
    double factor_ = 1.0;
    double domain_max_raw_ = std::numeric_limits<double>::infinity();
    std::vector<double> ts_, tg_;
};

// Binary entropy in bits.
double binary_entropy(double p);

}  // namespace medwit
