#pragma once

#include "treecap/rational.hpp"
#include "treecap/target.hpp"

namespace treecap {

/// Dyadic discretization of a box union: over the alphabet {0..2^j-1}, the
/// word (y_1..y_N) is accepted iff the fraction of its dyadic cell covered by
/// the union is strictly greater than 1/2, decided in exact rational
/// arithmetic (ties at exactly 1/2 are rejected). Prefixes with identical
/// coverage state share trie nodes, so the result stays small even for fine
/// grids.
TargetTrie discretize_target(const RatBoxUnion& boxes, int j,
                             std::size_t node_cap = 2'000'000);

}  // namespace treecap
