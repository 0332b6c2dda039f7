#pragma once

#include <cstdint>
#include <span>

#include "treecap/target.hpp"
#include "treecap/tree.hpp"

namespace treecap {

/// Exact probability that the root connects to the bottom level when each
/// edge into level n is kept independently with probability p[n-1].
/// Complements are accumulated in log space (compensated) whenever the direct
/// product would lose relative precision.
double survival_exact(const Tree& tree, std::span<const double> p);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long long trials = 0;
  long long successes = 0;
};

/// Bernoulli estimate of the survival probability, one independent RNG
/// substream per trial so the result does not depend on evaluation order.
McEstimate survival_mc(const Tree& tree, std::span<const double> p,
                       long long trials, std::uint64_t seed);

/// Exact probability that some root-to-bottom path spells an accepted word
/// when every vertex below the root gets an IID uniform letter from the
/// trie's alphabet. Joint recursion over (vertex, trie node) pairs,
/// level-synchronized.
double target_exact(const Tree& tree, const TargetTrie& target,
                    std::size_t work_cap = 100'000'000);

/// Monte Carlo estimate of the same event for real-valued labels and a named
/// target predicate; prefix-unviable subtrees are pruned exactly.
McEstimate target_mc(const Tree& tree, const LabelLaw& law,
                     const TargetPredicate& target, long long trials,
                     std::uint64_t seed);

}  // namespace treecap
