#include "treecap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "treecap/common.hpp"

namespace treecap {

CapacityResult capacity(const Tree& tree, const Gauge& gauge) {
  require(gauge.height() >= tree.height(), "gauge shorter than tree height");
  const int n = tree.vertex_count();

  // Subtree resistance R(v), children before parents in reverse preorder.
  std::vector<double> resistance(n, 0.0);
  for (int v = n - 1; v >= 0; --v) {
    if (tree.is_leaf(v)) continue;
    double conductance = 0.0;
    bool shorted = false;
    for (int c : tree.children(v)) {
      double series = gauge.increment(tree.depth(c)) + resistance[c];
      if (series == 0.0) {
        shorted = true;
        break;
      }
      conductance += 1.0 / series;
    }
    resistance[v] = shorted ? 0.0 : 1.0 / conductance;
  }

  CapacityResult result;
  double total = gauge.increment(0) + resistance[0];
  if (total == 0.0) {
    result.infinite = true;
    result.capacity = std::numeric_limits<double>::infinity();
    result.min_energy = 0.0;
  } else {
    result.capacity = 1.0 / total;
    result.min_energy = total;
  }

  // Optimal flow splits proportionally to branch conductance; branches with
  // zero series resistance share the mass equally among themselves.
  result.minimizer.value.assign(n, 0.0);
  result.minimizer.value[0] = 1.0;
  for (int v = 0; v < n; ++v) {
    if (tree.is_leaf(v) || result.minimizer.value[v] == 0.0) continue;
    auto kids = tree.children(v);
    int shorted = 0;
    double conductance = 0.0;
    for (int c : kids) {
      double series = gauge.increment(tree.depth(c)) + resistance[c];
      if (series == 0.0) {
        ++shorted;
      } else if (shorted == 0) {
        conductance += 1.0 / series;
      }
    }
    for (int c : kids) {
      double series = gauge.increment(tree.depth(c)) + resistance[c];
      double share;
      if (shorted > 0) {
        share = series == 0.0 ? 1.0 / shorted : 0.0;
      } else {
        share = (1.0 / series) / conductance;
      }
      result.minimizer.value[c] = result.minimizer.value[v] * share;
    }
  }
  return result;
}

namespace {

// Deepest common ancestor depth of two vertices.
int meet_depth(const Tree& tree, int u, int v) {
  while (u != v) {
    if (tree.depth(u) >= tree.depth(v)) {
      u = tree.parent(u);
    } else {
      v = tree.parent(v);
    }
  }
  return tree.depth(u);
}

}  // namespace

FrankWolfeResult capacity_frank_wolfe(const Tree& tree, const Gauge& gauge,
                                      double rel_tol, long max_iterations) {
  require(gauge.height() >= tree.height(), "gauge shorter than tree height");
  const int height = tree.height();
  auto leaves = tree.level(height);
  const int nleaves = static_cast<int>(leaves.size());

  // Root paths per leaf, deepest last.
  std::vector<std::vector<int>> path(nleaves);
  for (int i = 0; i < nleaves; ++i) {
    path[i].resize(height + 1);
    int v = leaves[i];
    for (int d = height; d >= 0; --d) {
      path[i][d] = v;
      v = tree.parent(v);
    }
  }

  std::vector<double> weight(nleaves, 1.0 / nleaves);
  std::vector<double> theta(tree.vertex_count(), 0.0);
  std::vector<double> grad(nleaves, 0.0);

  auto refresh = [&]() {
    std::fill(theta.begin(), theta.end(), 0.0);
    for (int i = 0; i < nleaves; ++i) theta[leaves[i]] = weight[i];
    for (int v = tree.vertex_count() - 1; v >= 1; --v) {
      theta[tree.parent(v)] += theta[v];
    }
    NeumaierSum e;
    for (int v = 0; v < tree.vertex_count(); ++v) {
      e.add(gauge.increment(tree.depth(v)) * theta[v] * theta[v]);
    }
    for (int i = 0; i < nleaves; ++i) {
      double g = 0.0;
      for (int v : path[i]) g += gauge.increment(tree.depth(v)) * theta[v];
      grad[i] = 2.0 * g;
    }
    return e.value();
  };

  FrankWolfeResult result;
  double e = refresh();
  long iter = 0;
  for (; iter < max_iterations; ++iter) {
    int best = 0, away = -1;
    for (int i = 1; i < nleaves; ++i) {
      if (grad[i] < grad[best]) best = i;
    }
    for (int i = 0; i < nleaves; ++i) {
      if (weight[i] > 0.0 && (away < 0 || grad[i] > grad[away])) away = i;
    }
    double gap = 2.0 * e - grad[best];
    if (gap <= rel_tol * std::max(e, 1e-300) || away < 0 || away == best) {
      result.gap = std::max(gap, 0.0);
      break;
    }
    // Move mass from the worst supported leaf to the best one; the energy is
    // quadratic along the segment, so the step is exact.
    double quad = 2.0 * (gauge.value(height) -
                         gauge.value(meet_depth(tree, leaves[best], leaves[away])));
    double step;
    if (quad <= 0.0) {
      step = weight[away];
    } else {
      step = (grad[away] - grad[best]) / (2.0 * quad);
      step = std::min(step, weight[away]);
    }
    if (step <= 0.0) {
      result.gap = std::max(gap, 0.0);
      break;
    }
    weight[best] += step;
    weight[away] -= step;
    if (weight[away] < 1e-18) {
      weight[best] += weight[away];
      weight[away] = 0.0;
    }
    e = refresh();
  }
  if (iter == max_iterations) {
    int best = 0;
    for (int i = 1; i < nleaves; ++i) {
      if (grad[i] < grad[best]) best = i;
    }
    result.gap = std::max(2.0 * e - grad[best], 0.0);
  }

  result.energy = e;
  result.capacity = e == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / e;
  result.iterations = iter;
  result.flow.value = theta;
  return result;
}

TrieCapacityResult trie_capacity(const TargetTrie& target, const Gauge& gauge) {
  require(gauge.height() >= target.depth(), "gauge shorter than target depth");
  TrieCapacityResult result;
  if (target.node_count() == 0 || (target.depth() > 0 && target.empty())) {
    result.capacity = 0.0;
    result.min_energy = std::numeric_limits<double>::infinity();
    return result;
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> resistance(target.node_count(), 0.0);
  for (int n = target.depth() - 1; n >= 0; --n) {
    double h = gauge.increment(n + 1);
    for (int node = target.level_begin(n); node < target.level_end(n); ++node) {
      double conductance = 0.0;
      bool shorted = false;
      for (const auto& e : target.edges(node)) {
        double series = h + resistance[e.child];
        if (series == 0.0) {
          shorted = true;
          break;
        }
        conductance += e.width() / series;
      }
      resistance[node] = shorted ? 0.0 : 1.0 / conductance;
    }
  }

  double total = gauge.increment(0) + resistance[0];
  if (total == 0.0) {
    result.infinite = true;
    result.capacity = inf;
    result.min_energy = 0.0;
  } else {
    result.capacity = 1.0 / total;
    result.min_energy = total;
  }
  return result;
}

}  // namespace treecap
