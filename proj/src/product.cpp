#include "treecap/product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "treecap/common.hpp"
#include "treecap/percolation.hpp"

namespace treecap {

ProductTree::ProductTree(const Tree& tree, const TargetTrie& expanded_target,
                         std::size_t size_cap)
    : tree_(&tree), target_(&expanded_target) {
  require(expanded_target.depth() == tree.height(),
          "target depth must equal tree height");
  require(expanded_target.is_expanded(),
          "product tree needs the letter-tree form of the target");
  require(!expanded_target.empty(), "product tree over an empty target");
  const int height = tree.height();

  double size = 0.0;
  for (int n = 0; n <= height; ++n) {
    size += static_cast<double>(tree.level_size(n)) *
            expanded_target.level_size(n);
  }
  if (size > static_cast<double>(size_cap)) {
    throw ResourceLimitError("product tree exceeds the size cap");
  }

  trie_level_size_.resize(height + 1);
  level_offset_.resize(height + 2);
  level_offset_[0] = 0;
  for (int n = 0; n <= height; ++n) {
    trie_level_size_[n] = expanded_target.level_size(n);
    level_offset_[n + 1] = level_offset_[n] +
                           tree.level_size(n) * trie_level_size_[n];
  }

  const int total = level_offset_[height + 1];
  node_tree_.resize(total);
  node_trie_.resize(total);
  parent_.assign(total, -1);

  // Positions of tree vertices and trie nodes inside their levels.
  std::vector<int> vertex_pos(tree.vertex_count());
  for (int n = 0; n <= height; ++n) {
    auto verts = tree.level(n);
    for (int i = 0; i < static_cast<int>(verts.size()); ++i) {
      vertex_pos[verts[i]] = i;
    }
  }
  std::vector<int> trie_parent(expanded_target.node_count(), -1);
  for (int node = 0; node < expanded_target.node_count(); ++node) {
    for (const auto& e : expanded_target.edges(node)) {
      trie_parent[e.child] = node;
    }
  }

  for (int n = 0; n <= height; ++n) {
    auto verts = tree.level(n);
    const int tb = expanded_target.level_begin(n);
    const int tn = trie_level_size_[n];
    for (int vi = 0; vi < static_cast<int>(verts.size()); ++vi) {
      for (int ui = 0; ui < tn; ++ui) {
        int id = node_at(n, vi, ui);
        node_tree_[id] = verts[vi];
        node_trie_[id] = tb + ui;
        if (n > 0) {
          int pv = tree.parent(verts[vi]);
          int pu = trie_parent[tb + ui];
          parent_[id] = node_at(n - 1, vertex_pos[pv],
                                pu - expanded_target.level_begin(n - 1));
        }
      }
    }
  }

  const int pairs = boundary_count();
  ancestor_.resize(static_cast<std::size_t>(pairs) * (height + 1));
  for (int p = 0; p < pairs; ++p) {
    int node = level_begin(height) + p;
    for (int n = height; n >= 0; --n) {
      ancestor_[static_cast<std::size_t>(p) * (height + 1) + n] = node;
      node = parent_[node];
    }
  }
}

int ProductTree::node_level(int node) const {
  for (int n = 0; n <= height(); ++n) {
    if (node < level_offset_[n + 1]) return n;
  }
  return height();
}

ProductFlow ProductFlow::from_boundary(const ProductTree& pt,
                                       std::span<const double> boundary_weights) {
  require(static_cast<int>(boundary_weights.size()) == pt.boundary_count(),
          "one weight per boundary pair required");
  ProductFlow flow;
  flow.value.assign(pt.node_count(), 0.0);
  const int base = pt.level_begin(pt.height());
  for (int p = 0; p < pt.boundary_count(); ++p) {
    flow.value[base + p] = boundary_weights[p];
  }
  for (int node = pt.node_count() - 1; node >= 1; --node) {
    flow.value[pt.node_parent(node)] += flow.value[node];
  }
  return flow;
}

ProductFlow ProductFlow::rank_one(const ProductTree& pt, const Flow& tree_flow,
                                  std::span<const double> word_weights) {
  const auto& target = pt.target();
  const int height = pt.height();
  require(static_cast<int>(word_weights.size()) == target.level_size(height),
          "one weight per accepted word required");
  // Trie flow: bottom nodes carry the word weights, parents their sums.
  std::vector<double> trie_value(target.node_count(), 0.0);
  for (int i = 0; i < target.level_size(height); ++i) {
    trie_value[target.level_begin(height) + i] = word_weights[i];
  }
  for (int n = height - 1; n >= 0; --n) {
    for (int node = target.level_begin(n); node < target.level_end(n); ++node) {
      for (const auto& e : target.edges(node)) {
        trie_value[node] += e.width() * trie_value[e.child];
      }
    }
  }
  ProductFlow flow;
  flow.value.resize(pt.node_count());
  for (int id = 0; id < pt.node_count(); ++id) {
    flow.value[id] = tree_flow.at(pt.node_tree_vertex(id)) *
                     trie_value[pt.node_trie_node(id)];
  }
  return flow;
}

double pair_kernel(const ProductTree& pt, int boundary_i, int boundary_j) {
  auto anc_i = pt.boundary_pair_ancestors(boundary_i);
  auto anc_j = pt.boundary_pair_ancestors(boundary_j);
  int tree_meet = 0, word_meet = 0;
  for (int n = 1; n <= pt.height(); ++n) {
    if (pt.node_tree_vertex(anc_i[n]) != pt.node_tree_vertex(anc_j[n])) break;
    tree_meet = n;
  }
  for (int n = 1; n <= pt.height(); ++n) {
    if (pt.node_trie_node(anc_i[n]) != pt.node_trie_node(anc_j[n])) break;
    word_meet = n;
  }
  if (word_meet < tree_meet) return 0.0;
  return std::pow(static_cast<double>(pt.alphabet()), tree_meet);
}

double kernel_energy(const ProductTree& pt, const ProductFlow& flow) {
  require(static_cast<int>(flow.value.size()) == pt.node_count(),
          "flow does not match product tree");
  const Tree& tree = pt.tree();
  const TargetTrie& target = pt.target();
  const int height = pt.height();

  NeumaierSum energy;
  double scale = 1.0;  // b^i
  for (int i = 0; i <= height; ++i) {
    NeumaierSum same_level;  // pairs sharing the level-i product vertex
    for (int id = pt.level_begin(i); id < pt.level_end(i); ++id) {
      same_level.add(flow.value[id] * flow.value[id]);
    }
    NeumaierSum mixed;  // tree meet deeper than i, word meet at least i
    if (i < height) {
      const int tn = target.level_size(i);
      const int tb = target.level_begin(i);
      const int below_begin = target.level_begin(i + 1);
      const int tree_below = tree.level_size(i + 1);
      for (int vpos = 0; vpos < tree_below; ++vpos) {
        for (int upos = 0; upos < tn; ++upos) {
          double sum = 0.0;
          for (const auto& e : target.edges(tb + upos)) {
            sum += flow.value[pt.node_at(i + 1, vpos, e.child - below_begin)];
          }
          mixed.add(sum * sum);
        }
      }
    }
    energy.add(scale * (same_level.value() - mixed.value()));
    scale *= pt.alphabet();
  }
  return energy.value();
}

double kernel_energy_direct(const ProductTree& pt,
                            std::span<const double> boundary_weights) {
  require(static_cast<int>(boundary_weights.size()) == pt.boundary_count(),
          "one weight per boundary pair required");
  NeumaierSum energy;
  for (int i = 0; i < pt.boundary_count(); ++i) {
    for (int j = 0; j < pt.boundary_count(); ++j) {
      double k = pair_kernel(pt, i, j);
      if (k != 0.0) energy.add(k * boundary_weights[i] * boundary_weights[j]);
    }
  }
  return energy.value();
}

double kernel_energy_rank1(const Tree& tree, const TargetTrie& expanded_target,
                           const Flow& tree_flow,
                           std::span<const double> word_weights) {
  require(expanded_target.depth() == tree.height(),
          "target depth must equal tree height");
  const int height = tree.height();
  require(static_cast<int>(word_weights.size()) ==
              expanded_target.level_size(height),
          "one weight per accepted word required");

  auto s_tree = level_square_sums(tree, tree_flow);

  // Trie level square sums for the word measure.
  std::vector<double> trie_value(expanded_target.node_count(), 0.0);
  for (int i = 0; i < expanded_target.level_size(height); ++i) {
    trie_value[expanded_target.level_begin(height) + i] = word_weights[i];
  }
  for (int n = height - 1; n >= 0; --n) {
    for (int node = expanded_target.level_begin(n);
         node < expanded_target.level_end(n); ++node) {
      for (const auto& e : expanded_target.edges(node)) {
        trie_value[node] += trie_value[e.child];
      }
    }
  }
  std::vector<double> s_trie(height + 1, 0.0);
  for (int n = 0; n <= height; ++n) {
    NeumaierSum sum;
    for (int node = expanded_target.level_begin(n);
         node < expanded_target.level_end(n); ++node) {
      sum.add(trie_value[node] * trie_value[node]);
    }
    s_trie[n] = sum.value();
  }

  NeumaierSum energy;
  double scale = 1.0;
  for (int k = 0; k <= height; ++k) {
    double s_next = k + 1 <= height ? s_tree[k + 1] : 0.0;
    energy.add(scale * (s_tree[k] - s_next) * s_trie[k]);
    scale *= expanded_target.alphabet();
  }
  return energy.value();
}

CapKResult cap_k(const Tree& tree, const TargetTrie& target, double rel_tol,
                 long max_iterations, std::size_t size_cap) {
  CapKResult result;
  if (target.node_count() == 0 || (target.depth() > 0 && target.empty())) {
    return result;  // empty boundary set: capacity 0
  }
  TargetTrie expanded = target.expanded(size_cap);
  ProductTree pt(tree, expanded, size_cap);
  const int height = pt.height();
  const int pairs = pt.boundary_count();
  const double diag = std::pow(static_cast<double>(pt.alphabet()), height);

  std::vector<double> powers(height + 1);
  powers[0] = 1.0;
  for (int i = 1; i <= height; ++i) powers[i] = powers[i - 1] * pt.alphabet();

  // Flattened per-pair index tables: ancestors and, per level i < N, the
  // product nodes (tree ancestor at i+1, trie sibling of the word ancestor).
  std::vector<int> mix_offset(static_cast<std::size_t>(pairs) * height + 1, 0);
  std::vector<int> mix_ids;
  {
    const TargetTrie& tt = pt.target();
    std::size_t cursor = 0;
    for (int p = 0; p < pairs; ++p) {
      auto anc = pt.boundary_pair_ancestors(p);
      for (int i = 0; i < height; ++i) {
        mix_offset[static_cast<std::size_t>(p) * height + i] =
            static_cast<int>(cursor);
        int trie_node = pt.node_trie_node(anc[i]);
        int below_begin = tt.level_begin(i + 1);
        int vpos = -1;
        {
          // level position of the tree ancestor at depth i+1
          int deeper = anc[i + 1];
          int tn = tt.level_size(i + 1);
          vpos = (deeper - pt.level_begin(i + 1)) / tn;
        }
        for (const auto& e : tt.edges(trie_node)) {
          mix_ids.push_back(pt.node_at(i + 1, vpos, e.child - below_begin));
          ++cursor;
        }
      }
    }
    mix_offset[static_cast<std::size_t>(pairs) * height] =
        static_cast<int>(cursor);
  }

  std::vector<double> weight(pairs, 1.0 / pairs);
  ProductFlow flow = ProductFlow::from_boundary(pt, weight);
  auto& theta = flow.value;

  auto gradient_at = [&](int p) {
    auto anc = pt.boundary_pair_ancestors(p);
    double g = 0.0;
    for (int i = 0; i < height; ++i) {
      double mix = 0.0;
      int lo = mix_offset[static_cast<std::size_t>(p) * height + i];
      int hi = mix_offset[static_cast<std::size_t>(p) * height + i + 1];
      for (int k = lo; k < hi; ++k) mix += theta[mix_ids[k]];
      g += powers[i] * (theta[anc[i]] - mix);
    }
    g += powers[height] * theta[anc[height]];
    return 2.0 * g;
  };

  double energy = kernel_energy(pt, flow);
  long iter = 0;
  double gap = 0.0;
  for (; iter < max_iterations; ++iter) {
    int best = 0, away = -1;
    double best_g = std::numeric_limits<double>::infinity();
    double away_g = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < pairs; ++p) {
      double g = gradient_at(p);
      if (g < best_g) {
        best_g = g;
        best = p;
      }
      if (weight[p] > 0.0 && g > away_g) {
        away_g = g;
        away = p;
      }
    }
    gap = 2.0 * energy - best_g;
    if (gap <= rel_tol * std::max(energy, 1e-300) || away < 0 || away == best) {
      break;
    }
    double quad = 2.0 * diag - 2.0 * pair_kernel(pt, best, away);
    double step;
    if (quad <= 0.0) {
      step = weight[away];
    } else {
      step = (away_g - best_g) / (2.0 * quad);
      step = std::min(step, weight[away]);
    }
    if (step <= 0.0) break;
    weight[best] += step;
    weight[away] -= step;
    if (weight[away] < 1e-18) {
      weight[best] += weight[away];
      weight[away] = 0.0;
    }
    auto anc_best = pt.boundary_pair_ancestors(best);
    auto anc_away = pt.boundary_pair_ancestors(away);
    for (int n = 0; n <= height; ++n) {
      theta[anc_best[n]] += step;
      theta[anc_away[n]] -= step;
    }
    energy += step * (best_g - away_g) + step * step * quad;
    if ((iter & 0xfff) == 0xfff) {
      // Kill incremental drift.
      flow = ProductFlow::from_boundary(pt, weight);
      energy = kernel_energy(pt, flow);
    }
  }

  flow = ProductFlow::from_boundary(pt, weight);
  energy = kernel_energy(pt, flow);
  {
    double best_g = std::numeric_limits<double>::infinity();
    for (int p = 0; p < pairs; ++p) best_g = std::min(best_g, gradient_at(p));
    gap = std::max(2.0 * energy - best_g, 0.0);
  }

  result.energy = energy;
  result.capacity = energy == 0.0 ? 0.0 : 1.0 / energy;
  result.gap = gap;
  result.iterations = iter;
  result.boundary_weights = std::move(weight);
  return result;
}

RegularityReport regularity_bounds(const Tree& tree, const TargetTrie& target,
                                   std::span<const double> cumulative_means,
                                   double slack) {
  const int height = tree.height();
  require(static_cast<int>(cumulative_means.size()) >= height + 1,
          "growth profile shorter than tree height");
  auto m = cumulative_means.subspan(0, height + 1);

  RegularityReport report;
  report.a_gamma = tree_stats(tree, m).a_gamma;
  Flow u = uniform_leaf_flow(tree);
  report.c_u = flow_bound_stats(tree, u, m).c;
  Gauge phi = Gauge::phi(m, target.alphabet());
  report.cap_phi = trie_capacity(target, phi).capacity;
  report.p_exact = target_exact(tree, target);
  report.lower = report.cap_phi / report.c_u;
  report.upper = 8.0 * report.a_gamma * report.cap_phi;
  double scale = std::max({1.0, report.p_exact, report.upper});
  report.lower_ok = report.p_exact >= report.lower - slack * scale;
  report.upper_ok = report.p_exact <= report.upper + slack * scale;
  return report;
}

SphericalCompareReport compare_spherical(const Tree& tree,
                                         const TargetTrie& target,
                                         double slack) {
  std::vector<double> profile;
  for (long long z : tree.level_sizes()) {
    profile.push_back(static_cast<double>(z));
  }
  Tree dominating = dominating_spherical(profile, 1.0);

  SphericalCompareReport report;
  report.dominating_levels = dominating.level_sizes();
  report.p_tree = target_exact(tree, target);
  report.p_dominating = target_exact(dominating, target);
  report.ok = report.p_tree <= report.p_dominating + slack;
  return report;
}

BpveDominationReport bpve_dominates(const Tree& gamma, const Tree& delta,
                                    const Environment& env,
                                    const TargetTrie& target, int initial_cutoff,
                                    double slack) {
  const int height = gamma.height();
  require(delta.height() == height, "both trees must share the target height");
  require(env.length() >= height, "environment shorter than tree height");
  const auto& means = env.cumulative_means();
  auto m = std::span(means.data(), height + 1);

  BpveDominationReport report;
  report.a_delta = tree_stats(delta, m).a_gamma;

  // The pruned flow exists for every sufficiently large cutoff; walk up.
  int cutoff = std::max(0, initial_cutoff);
  for (;;) {
    try {
      auto bounded = bounded_flow_bpve(gamma, env, cutoff);
      report.c = bounded.c_actual;
      report.cutoff_used = cutoff;
      break;
    } catch (const EmptySupportError&) {
      if (cutoff >= height - 1) throw;
      cutoff = std::min(height - 1, cutoff == 0 ? 1 : cutoff * 2);
    }
  }

  Gauge phi = Gauge::phi(m, target.alphabet());
  report.cap_phi = trie_capacity(target, phi).capacity;
  report.p_gamma = target_exact(gamma, target);
  report.p_delta = target_exact(delta, target);
  report.certified_constant = 1.0 / (8.0 * report.a_delta * report.c);
  report.ratio = report.p_delta == 0.0
                     ? std::numeric_limits<double>::infinity()
                     : report.p_gamma / report.p_delta;

  double scale = std::max({1.0, report.p_gamma, report.p_delta});
  report.certified_ok =
      report.p_gamma >=
      report.certified_constant * report.p_delta - slack * scale;
  report.chain_lower_ok =
      report.cap_phi <= report.c * report.p_gamma + slack * std::max(1.0, report.cap_phi);
  report.chain_upper_ok =
      report.p_delta <=
      8.0 * report.a_delta * report.cap_phi + slack * std::max(1.0, report.p_delta);
  return report;
}

}  // namespace treecap
