#include "medwit/layout.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace medwit {

SystemLayout::SystemLayout(std::vector<Subsystem> parts, Index dim_cap) : parts_(std::move(parts)) {
    if (parts_.empty()) {
        throw std::invalid_argument("SystemLayout: at least one subsystem required");
    }
    std::set<std::string> seen;
    total_dim_ = 1;
    for (const auto& p : parts_) {
        if (p.label.empty()) {
            throw std::invalid_argument("SystemLayout: empty label");
        }
        if (!seen.insert(p.label).second) {
            throw std::invalid_argument("SystemLayout: duplicate label '" + p.label + "'");
        }
        if (p.dim < 1) {
            throw std::invalid_argument("SystemLayout: dimension of '" + p.label + "' must be >= 1");
        }
        total_dim_ *= p.dim;
        if (total_dim_ > dim_cap) {
            throw std::invalid_argument("SystemLayout: total dimension exceeds cap " +
                                        std::to_string(dim_cap));
        }
    }
}

SystemLayout SystemLayout::tripartite(int dA, int dM, int dB) {
    return SystemLayout({{"A", dA}, {"M", dM}, {"B", dB}});
}

SystemLayout SystemLayout::bipartite(int dA, int dB) {
    return SystemLayout({{"A", dA}, {"B", dB}});
}

SystemLayout SystemLayout::single(std::string label, int dim) {
    return SystemLayout({{std::move(label), dim}});
}

std::vector<int> SystemLayout::dims() const {
    std::vector<int> out;
    out.reserve(parts_.size());
    for (const auto& p : parts_) out.push_back(p.dim);
    return out;
}

std::vector<std::string> SystemLayout::labels() const {
    std::vector<std::string> out;
    out.reserve(parts_.size());
    for (const auto& p : parts_) out.push_back(p.label);
    return out;
}

bool SystemLayout::contains(std::string_view label) const noexcept {
    return std::any_of(parts_.begin(), parts_.end(), [&](const Subsystem& p) { return p.label == label; });
}

std::size_t SystemLayout::position(std::string_view label) const {
    for (std::size_t k = 0; k < parts_.size(); ++k) {
        if (parts_[k].label == label) return k;
    }
    throw std::invalid_argument("SystemLayout: unknown label '" + std::string(label) + "' in " + to_string());
}

SystemLayout SystemLayout::restricted(std::span<const std::string> labels) const {
    for (const auto& l : labels) (void)position(l);
    std::vector<Subsystem> kept;
    for (const auto& p : parts_) {
        if (std::find(labels.begin(), labels.end(), p.label) != labels.end()) kept.push_back(p);
    }
    return SystemLayout(std::move(kept));
}

SystemLayout SystemLayout::reordered(std::span<const std::string> labels) const {
    std::vector<Subsystem> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(parts_[position(l)]);
    return SystemLayout(std::move(out));
}

std::vector<std::string> SystemLayout::complement(std::span<const std::string> labels) const {
    for (const auto& l : labels) (void)position(l);
    std::vector<std::string> out;
    for (const auto& p : parts_) {
        if (std::find(labels.begin(), labels.end(), p.label) == labels.end()) out.push_back(p.label);
    }
    return out;
}

std::vector<std::size_t> SystemLayout::canonical_permutation() const {
    auto rank = [](const std::string& l) {
        if (l == "A") return 0;
        if (l == "M") return 1;
        if (l == "B") return 2;
        return 3;
    };
    std::vector<std::size_t> order(parts_.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rank(parts_[a].label) < rank(parts_[b].label); });
    return order;
}

bool SystemLayout::is_canonical() const {
    const auto perm = canonical_permutation();
    for (std::size_t k = 0; k < perm.size(); ++k) {
        if (perm[k] != k) return false;
    }
    return true;
}

std::string SystemLayout::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t k = 0; k < parts_.size(); ++k) {
        if (k) os << ',';
        os << parts_[k].label << ':' << parts_[k].dim;
    }
    os << ')';
    return os.str();
}

void Bipartition::validate(const SystemLayout& layout) const {
    if (x.empty() || y.empty()) {
        throw std::invalid_argument("Bipartition: both sides must be nonempty");
    }
    std::set<std::string> all;
    for (const auto& l : x) {
        (void)layout.position(l);
        if (!all.insert(l).second) throw std::invalid_argument("Bipartition: repeated label '" + l + "'");
    }
    for (const auto& l : y) {
        (void)layout.position(l);
        if (!all.insert(l).second) throw std::invalid_argument("Bipartition: repeated label '" + l + "'");
    }
    if (all.size() != layout.size()) {
        throw std::invalid_argument("Bipartition: must cover every label of " + layout.to_string());
    }
}

std::string Bipartition::to_string() const {
    std::string s;
    for (const auto& l : x) s += l;
    s += ':';
    for (const auto& l : y) s += l;
    return s;
}

}  // namespace medwit
