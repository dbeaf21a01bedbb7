// ops.hpp — Small fixed operators and basis helpers.

#pragma once

#include "medwit/types.hpp"

namespace medwit::ops {

Matrix identity(Index d);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
// |i><j| in dimension d.
Matrix unit(Index d, Index i, Index j);
Vector ket(Index d, Index i);
// Exchange of two parts of equal dimension d (d^2 x d^2).
Matrix swap(Index d);
// Exchange of the subspace span{|0..k-1>} between a part of dimension d1 and one of d2,
// identity on the remaining basis states. k <= min(d1, d2).
Matrix partial_swap(Index d1, Index d2, Index k);
// sum_{i<k} |ii> / sqrt(k) in d1 x d2.
Vector maximally_entangled(Index d1, Index d2, Index k);

}  // namespace medwit::ops
