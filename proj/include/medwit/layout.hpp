// layout.hpp — Ordered labelled subsystems and composite index conventions.
//
// Composite indices are row-major: the first part is the most significant digit.
// The canonical tripartite order is (A, M, B).

#pragma once

#include "medwit/types.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace medwit {

struct Subsystem {
    std::string label;
    int dim = 1;

    bool operator==(const Subsystem&) const = default;
};

class SystemLayout {
public:
    SystemLayout() = default;
    explicit SystemLayout(std::vector<Subsystem> parts, Index dim_cap = kDefaultDimCap);

    // (A:dA, M:dM, B:dB) in canonical order.
    static SystemLayout tripartite(int dA, int dM, int dB);
    // (A:dA, B:dB).
    static SystemLayout bipartite(int dA, int dB);
    static SystemLayout single(std::string label, int dim);

    const std::vector<Subsystem>& parts() const noexcept { return parts_; }
    std::size_t size() const noexcept { return parts_.size(); }
    Index total_dim() const noexcept { return total_dim_; }
    std::vector<int> dims() const;
    std::vector<std::string> labels() const;

    bool contains(std::string_view label) const noexcept;
    // Position of label in this layout; throws std::invalid_argument if absent.
    std::size_t position(std::string_view label) const;
    int dim(std::string_view label) const { return parts_[position(label)].dim; }

    // Subset of parts, kept in this layout's order.
    SystemLayout restricted(std::span<const std::string> labels) const;
    // Parts listed in exactly the given order (must be a subset).
    SystemLayout reordered(std::span<const std::string> labels) const;
    // Complement of `labels`, in this layout's order.
    std::vector<std::string> complement(std::span<const std::string> labels) const;

    // Positions of parts listed in canonical (A, M, B, then others as given) order.
    std::vector<std::size_t> canonical_permutation() const;
    bool is_canonical() const;

    std::string to_string() const;

    bool operator==(const SystemLayout& other) const { return parts_ == other.parts_; }

private:
    std::vector<Subsystem> parts_;
    Index total_dim_ = 1;
};

// Two disjoint nonempty groups of labels that together cover a layout.
struct Bipartition {
    std::vector<std::string> x;
    std::vector<std::string> y;

    void validate(const SystemLayout& layout) const;
    std::string to_string() const;
};

}  // namespace medwit
