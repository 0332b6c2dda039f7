#pragma once

#include "treecap/flow.hpp"
#include "treecap/gauge.hpp"
#include "treecap/target.hpp"
#include "treecap/tree.hpp"

namespace treecap {

/// Exact capacity result from the effective-conductance reduction. Each
/// vertex at depth k carries series weight h(k) (the root included); the
/// capacity is the reciprocal of the minimal energy over unit flows, and
/// `minimizer` attains it: energy(minimizer) * capacity == 1.
struct CapacityResult {
  double capacity = 0.0;
  double min_energy = 0.0;  // 1 / capacity; 0 when capacity is infinite
  bool infinite = false;    // all-zero gauge sentinel
  Flow minimizer;
};

/// Effective-conductance recursion: R = 0 at leaves, and at an internal
/// vertex R = [sum_children 1/(h(depth_child) + R_child)]^{-1}, combining the
/// series increment before inverting so zero increments stay exact.
CapacityResult capacity(const Tree& tree, const Gauge& gauge);

/// Frank-Wolfe minimization of the gauge energy over the unit-flow polytope
/// (simplex of leaf measures). Pairwise steps with exact line search; the
/// duality gap certifies |energy - min energy| <= gap at return. Entirely
/// independent of the conductance recursion, which it cross-checks.
struct FrankWolfeResult {
  double capacity = 0.0;
  double energy = 0.0;
  double gap = 0.0;
  long iterations = 0;
  Flow flow;
};

FrankWolfeResult capacity_frank_wolfe(const Tree& tree, const Gauge& gauge,
                                      double rel_tol = 1e-8,
                                      long max_iterations = 100000);

/// Gauge capacity of a target set, i.e. of the subtree of the full b-ary
/// tree spanned by the accepted words. Same conductance recursion; edges
/// carrying several letters contribute their multiplicity in parallel.
/// Empty sets have capacity 0.
struct TrieCapacityResult {
  double capacity = 0.0;
  double min_energy = 0.0;
  bool infinite = false;
};

TrieCapacityResult trie_capacity(const TargetTrie& target, const Gauge& gauge);

}  // namespace treecap
