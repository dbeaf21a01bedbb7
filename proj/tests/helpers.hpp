// helpers.hpp — Generators and oracles shared by the unit and property tests.

#pragma once

#include "medwit/random.hpp"
#include "medwit/tensor.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace medwit::testing {

// Digits of a composite index, most significant first.
inline std::vector<int> digits(Index i, const std::vector<int>& dims) {
    std::vector<int> d(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        d[k] = static_cast<int>(i % dims[k]);
        i /= dims[k];
    }
    return d;
}

inline Index compose(const std::vector<int>& d, const std::vector<int>& dims) {
    Index i = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) i = i * dims[k] + d[k];
    return i;
}

inline Index total(const std::vector<int>& dims) {
    return std::accumulate(dims.begin(), dims.end(), Index{1}, [](Index a, int b) { return a * b; });
}

// Random dimension list with `parts` entries in [1, max_dim].
inline std::vector<int> random_dims(Rng& rng, int parts, int max_dim) {
    std::uniform_int_distribution<int> u(1, max_dim);
    std::vector<int> d(static_cast<std::size_t>(parts));
    for (auto& x : d) x = u(rng);
    return d;
}

// Convex mixture of `terms` random product states on a bipartite layout.
inline Matrix random_separable(Index dx, Index dy, int terms, Rng& rng) {
    std::uniform_real_distribution<double> w(0.0, 1.0);
    Matrix out = Matrix::Zero(dx * dy, dx * dy);
    double sum = 0.0;
    for (int k = 0; k < terms; ++k) {
        const double p = w(rng) + 1e-3;
        out += p * kron(random_density(dx, 1 + static_cast<Index>(w(rng) * dx) % dx, rng),
                        random_density(dy, 1 + static_cast<Index>(w(rng) * dy) % dy, rng));
        sum += p;
    }
    return out / sum;
}

inline Matrix projector(const Vector& v) { return v * v.adjoint() / v.squaredNorm(); }

}  // namespace medwit::testing
