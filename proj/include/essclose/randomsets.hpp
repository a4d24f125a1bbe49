#pragma once

#include "essclose/setmodel.hpp"

namespace essclose {

/// Seeded piece-set generator over the 1/24 coordinate lattice (so collinear
/// and abutting configurations occur with useful frequency). Mixed tags,
/// pieces of every intrinsic dimension the ambient allows.
TaggedPieceSet random_piece_set(uint64_t seed, int k, int max_pieces);

}  // namespace essclose
