// kernels.hpp — Index-arithmetic kernels on composite operators.
//
// Every kernel has an OpenMP-parallel version (used by the library) and a
// plain serial version in `reference` kept for testing and benchmarking.
// Subsystems are addressed by position in a row-major dimension list.

#pragma once

#include "medwit/types.hpp"

#include <cstddef>
#include <span>

namespace medwit::kernels {

// Trace out every part not listed in `keep` (positions, ascending).
Matrix partial_trace(const Matrix& x, std::span<const int> dims, std::span<const std::size_t> keep);

// Transpose the parts listed in `on`.
Matrix partial_transpose(const Matrix& x, std::span<const int> dims, std::span<const std::size_t> on);

// New part k is old part order[k].
Matrix permute(const Matrix& x, std::span<const int> dims, std::span<const std::size_t> order);

// op acts on the parts at `positions`, listed in op's own index order; identity elsewhere.
Matrix embed(const Matrix& op, std::span<const int> dims, std::span<const std::size_t> positions);

// (op ⊗ 1) x without materialising the embedded operator.
Matrix apply_left(const Matrix& op, const Matrix& x, std::span<const int> dims,
                  std::span<const std::size_t> positions);

// (op ⊗ 1) x (op ⊗ 1)†.
Matrix conjugate(const Matrix& op, const Matrix& x, std::span<const int> dims,
                 std::span<const std::size_t> positions);

namespace reference {

Matrix partial_trace(const Matrix& x, std::span<const int> dims, std::span<const std::size_t> keep);
Matrix partial_transpose(const Matrix& x, std::span<const int> dims, std::span<const std::size_t> on);
Matrix permute(const Matrix& x, std::span<const int> dims, std::span<const std::size_t> order);
Matrix embed(const Matrix& op, std::span<const int> dims, std::span<const std::size_t> positions);
Matrix apply_left(const Matrix& op, const Matrix& x, std::span<const int> dims,
                  std::span<const std::size_t> positions);
Matrix conjugate(const Matrix& op, const Matrix& x, std::span<const int> dims,
                 std::span<const std::size_t> positions);

}  // namespace reference

}  // namespace medwit::kernels
