#include "medwit/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace medwit {

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

ContinuityFn ContinuityFn::linear(double c, double domain_max) {
    if (!(c > 0.0)) throw std::invalid_argument("ContinuityFn::linear: coefficient must be positive");
    ContinuityFn g;
    g.kind_ = ContinuityKind::linear;
    g.coeff_ = c;
    g.domain_max_raw_ = domain_max;
    return g;
}

ContinuityFn ContinuityFn::table(std::vector<double> s, std::vector<double> gv) {
    if (s.size() != gv.size() || s.size() < 2) {
        throw std::invalid_argument("ContinuityFn::table: need at least two matching points");
    }
    if (s.front() != 0.0 || gv.front() != 0.0) {
        throw std::invalid_argument("ContinuityFn::table: table must start at (0, 0)");
    }
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (!(s[i] > s[i - 1]) || !(gv[i] > gv[i - 1])) {
            throw std::invalid_argument("ContinuityFn::table: points must be strictly increasing");
        }
    }
    ContinuityFn g;
    g.kind_ = ContinuityKind::table;
    g.domain_max_raw_ = s.back();
    g.ts_ = std::move(s);
    g.tg_ = std::move(gv);
    return g;
}

ContinuityFn ContinuityFn::entropic(int dim) {
    if (dim < 1) throw std::invalid_argument("ContinuityFn::entropic: dimension must be >= 1");
    ContinuityFn g;
    g.kind_ = ContinuityKind::entropic;
    g.dim_ = dim;
    g.domain_max_raw_ = 1.0;
    return g;
}

ContinuityFn ContinuityFn::rescaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("ContinuityFn::rescaled: factor must be positive");
    ContinuityFn g = *this;
    g.factor_ *= factor;
    return g;
}

double ContinuityFn::raw(double s) const {
    switch (kind_) {
        case ContinuityKind::linear:
            return coeff_ * s;
        case ContinuityKind::table: {
            const auto it = std::upper_bound(ts_.begin(), ts_.end(), s);
            if (it == ts_.end()) return tg_.back();
            const auto i = static_cast<std::size_t>(it - ts_.begin());
            const double w = (s - ts_[i - 1]) / (ts_[i] - ts_[i - 1]);
            return tg_[i - 1] + w * (tg_[i] - tg_[i - 1]);
        }
        case ContinuityKind::entropic:
            return s * std::log2(static_cast<double>(dim_)) + (1.0 + s) * binary_entropy(s / (1.0 + s));
    }
    return 0.0;
}

double ContinuityFn::raw_inverse(double v) const {
    switch (kind_) {
        case ContinuityKind::linear:
            return v / coeff_;
        case ContinuityKind::table: {
            const auto it = std::upper_bound(tg_.begin(), tg_.end(), v);
            if (it == tg_.end()) return ts_.back();
            const auto i = static_cast<std::size_t>(it - tg_.begin());
            const double w = (v - tg_[i - 1]) / (tg_[i] - tg_[i - 1]);
            return ts_[i - 1] + w * (ts_[i] - ts_[i - 1]);
        }
        case ContinuityKind::entropic: {
            double lo = 0.0;
            double hi = domain_max_raw_;
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi);
                (raw(mid) < v ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
    return 0.0;
}

double ContinuityFn::eval(double s) const {
    if (!(s >= 0.0) || s > domain_max() * (1.0 + 1e-12)) {
        throw std::domain_error("ContinuityFn::eval: argument outside [0, domain_max]");
    }
    return raw(std::min(s * factor_, domain_max_raw_));
}

double ContinuityFn::range_max() const {
    return std::isfinite(domain_max_raw_) ? raw(domain_max_raw_) : std::numeric_limits<double>::infinity();
}

double ContinuityFn::inverse(double v) const {
    if (!(v > 0.0)) return 0.0;
    const double top = range_max();
    if (v > top * (1.0 + 1e-12)) throw std::domain_error("ContinuityFn::inverse: value above range of g");
    return raw_inverse(std::min(v, top)) / factor_;
}

std::string ContinuityFn::describe() const {
    std::ostringstream os;
    os.precision(12);
    switch (kind_) {
        case ContinuityKind::linear:
            os << "linear(c=" << coeff_ << ")";
            break;
        case ContinuityKind::table:
            os << "table(" << ts_.size() << " points)";
            break;
        case ContinuityKind::entropic:
            os << "entropic(d=" << dim_ << ")";
            break;
    }
    if (factor_ != 1.0) os << "*scale(" << factor_ << ")";
    return os.str();
}

}  // namespace medwit
