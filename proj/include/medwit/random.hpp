// random.hpp — Deterministic seed splitting and random quantum objects.
//
// Every stochastic routine takes a seed; parallel workers derive their own
// stream with split_seed(master, index) so serial and parallel runs agree.

#pragma once

#include "medwit/layout.hpp"
#include "medwit/tensor.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace medwit {

using Rng = std::mt19937_64;

// Counter-based stream derivation (SplitMix64 finaliser).
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream);

Matrix ginibre(Index rows, Index cols, Rng& rng);
Vector random_vector(Index d, Rng& rng);

// Haar-distributed unitary.
Matrix random_unitary(Index d, Rng& rng);
// Haar-random pure state.
Vector random_pure_vector(Index d, Rng& rng);
// Induced-measure mixed state of the given rank (rank = d gives Hilbert–Schmidt).
Matrix random_density(Index d, Index rank, Rng& rng);
// Hermitian with standard-normal entries (GUE up to scaling).
Matrix random_hermitian(Index d, Rng& rng);

QState random_state(const SystemLayout& layout, Rng& rng, Index rank = 0);
// Tensor product of independent random states on each part.
QState random_product_state(const SystemLayout& layout, Rng& rng, bool pure = false);

// Kraus operators of a random CPTP map with `count` operators (slices of a Haar isometry).
std::vector<Matrix> random_kraus(Index d, Index count, Rng& rng);

// Commuting pair on (A,M) and (M,B) layouts: both block diagonal in the M computational basis.
struct HamiltonianPair {
    QOp am;
    QOp bm;
};
HamiltonianPair random_commuting_pair(int dA, int dM, int dB, Rng& rng);
// Unstructured Hermitian pair with unit spectral norm each.
HamiltonianPair random_pair(int dA, int dM, int dB, Rng& rng);

}  // namespace medwit
