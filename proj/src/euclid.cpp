#include "treecap/euclid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "treecap/rng.hpp"

namespace treecap {

std::vector<double> map_point(std::span<const int> word, int base, int dimension) {
  require(base >= 2 && dimension >= 1, "need base >= 2 and dimension >= 1");
  int omega = 1;
  for (int i = 0; i < dimension; ++i) omega *= base;
  std::vector<double> point(dimension, 0.0);
  double scale = 1.0;
  for (int letter : word) {
    require(letter >= 0 && letter < omega, "letter outside the alphabet");
    scale /= base;
    int digits = letter;
    for (int i = 0; i < dimension; ++i) {
      point[i] += scale * (digits % base);
      digits /= base;
    }
  }
  return point;
}

namespace {

void check_embeddable(const Tree& tree, int omega) {
  for (int v = 0; v < tree.vertex_count(); ++v) {
    require(tree.child_count(v) <= omega,
            "tree has more children than cube positions");
  }
}

}  // namespace

CubeLabeling sequential_labeling(const Tree& tree, int base, int dimension) {
  CubeLabeling labeling{base, dimension, std::vector<int>(tree.vertex_count(), -1)};
  check_embeddable(tree, labeling.letters_available());
  for (int v = 0; v < tree.vertex_count(); ++v) {
    int next = 0;
    for (int c : tree.children(v)) labeling.letter[c] = next++;
  }
  return labeling;
}

CubeLabeling random_labeling(const Tree& tree, int base, int dimension,
                             std::uint64_t seed) {
  CubeLabeling labeling{base, dimension, std::vector<int>(tree.vertex_count(), -1)};
  const int omega = labeling.letters_available();
  check_embeddable(tree, omega);
  auto eng = make_engine(seed);
  std::vector<int> pool(omega);
  for (int v = 0; v < tree.vertex_count(); ++v) {
    if (tree.is_leaf(v)) continue;
    std::iota(pool.begin(), pool.end(), 0);
    // Partial Fisher-Yates: draw child_count distinct letters.
    int needed = tree.child_count(v);
    for (int i = 0; i < needed; ++i) {
      int j = i + static_cast<int>(uniform_below(eng, omega - i));
      std::swap(pool[i], pool[j]);
    }
    int i = 0;
    for (int c : tree.children(v)) labeling.letter[c] = pool[i++];
  }
  return labeling;
}

std::pair<Tree, CubeLabeling> cantor_sample(const OffspringLaw& law, int base,
                                            int dimension, int height,
                                            std::uint64_t seed,
                                            std::size_t vertex_cap) {
  int omega = 1;
  for (int i = 0; i < dimension; ++i) omega *= base;
  require(law.max_children() <= omega,
          "offspring law exceeds the number of subcubes");
  Tree tree = sample_gw(law, height, seed, vertex_cap);
  CubeLabeling labeling = random_labeling(tree, base, dimension,
                                          mix_seed(seed, 0x6375626573ULL));
  return {std::move(tree), std::move(labeling)};
}

std::vector<std::int64_t> leaf_anchors(const Tree& tree,
                                       const CubeLabeling& labeling) {
  require(static_cast<int>(labeling.letter.size()) == tree.vertex_count(),
          "labeling does not match tree");
  const int d = labeling.dimension;
  const int b = labeling.base;
  // anchor(child) = anchor(parent) * b + digit, accumulated per coordinate.
  std::vector<std::int64_t> anchor(
      static_cast<std::size_t>(tree.vertex_count()) * d, 0);
  for (int v = 1; v < tree.vertex_count(); ++v) {
    int digits = labeling.letter[v];
    int p = tree.parent(v);
    for (int i = 0; i < d; ++i) {
      anchor[static_cast<std::size_t>(v) * d + i] =
          anchor[static_cast<std::size_t>(p) * d + i] * b + digits % b;
      digits /= b;
    }
  }
  auto leaves = tree.level(tree.height());
  std::vector<std::int64_t> out(leaves.size() * d);
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (int k = 0; k < d; ++k) {
      out[i * d + k] = anchor[static_cast<std::size_t>(leaves[i]) * d + k];
    }
  }
  return out;
}

double euclid_energy(const Tree& tree, const CubeLabeling& labeling,
                     const Flow& flow, const std::function<double(double)>& g) {
  const int d = labeling.dimension;
  const int height = tree.height();
  const double side = std::pow(static_cast<double>(labeling.base), -height);
  auto anchors = leaf_anchors(tree, labeling);
  auto leaves = tree.level(height);
  const int n = static_cast<int>(leaves.size());

  NeumaierSum energy;
  double floor_value = g(side);
  for (int i = 0; i < n; ++i) {
    double wi = flow.at(leaves[i]);
    energy.add(wi * wi * floor_value);  // diagonal at the floor scale
    for (int j = i + 1; j < n; ++j) {
      double dist2 = 0.0;
      for (int k = 0; k < d; ++k) {
        double delta =
            static_cast<double>(anchors[static_cast<std::size_t>(i) * d + k] -
                                anchors[static_cast<std::size_t>(j) * d + k]);
        dist2 += delta * delta;
      }
      double dist = std::max(side * std::sqrt(dist2), side);
      energy.add(2.0 * wi * flow.at(leaves[j]) * g(dist));
    }
  }
  return energy.value();
}

EuclidComparisonReport euclid_comparison(const Tree& tree,
                                         const CubeLabeling& labeling,
                                         const Flow& flow,
                                         const std::function<double(double)>& g,
                                         double slack) {
  const int d = labeling.dimension;
  const int b = labeling.base;
  const int height = tree.height();
  EuclidComparisonReport report;

  // Cube anchors for every vertex, per level; closed cubes of side b^-k
  // intersect iff the integer anchors differ by at most 1 in every
  // coordinate.
  std::vector<std::int64_t> anchor(
      static_cast<std::size_t>(tree.vertex_count()) * d, 0);
  for (int v = 1; v < tree.vertex_count(); ++v) {
    int digits = labeling.letter[v];
    int p = tree.parent(v);
    for (int i = 0; i < d; ++i) {
      anchor[static_cast<std::size_t>(v) * d + i] =
          anchor[static_cast<std::size_t>(p) * d + i] * b + digits % b;
      digits /= b;
    }
  }
  int neighbor_cap = 1;
  for (int i = 0; i < d; ++i) neighbor_cap *= 3;
  report.max_neighbors = 0;
  for (int k = 0; k <= height; ++k) {
    auto level = tree.level(k);
    for (int vi : level) {
      int count = 0;
      for (int vj : level) {
        bool touch = true;
        for (int i = 0; i < d && touch; ++i) {
          auto delta = anchor[static_cast<std::size_t>(vi) * d + i] -
                       anchor[static_cast<std::size_t>(vj) * d + i];
          touch = delta >= -1 && delta <= 1;
        }
        if (touch) ++count;
      }
      report.max_neighbors = std::max(report.max_neighbors, count);
    }
  }
  report.neighbors_ok = report.max_neighbors <= neighbor_cap;

  double bd = std::pow(static_cast<double>(b), d);
  auto s = level_square_sums(tree, flow);
  report.level_ratio_ok = true;
  for (int k = 1; k <= height; ++k) {
    if (s[k - 1] > bd * s[k] * (1.0 + slack)) {
      report.level_ratio_ok = false;
      report.level_ratio_witness = k;
      break;
    }
  }

  Gauge gauge = Gauge::euclid(g, b, height);
  report.tree_energy = energy(tree, gauge, flow).energy;
  report.euclid = euclid_energy(tree, labeling, flow, g);
  report.ratio = report.euclid / report.tree_energy;

  int l = 0;
  while (std::pow(static_cast<double>(b), l) < std::sqrt(static_cast<double>(d))) {
    ++l;
  }
  report.ratio_lower = std::pow(static_cast<double>(b), -d * l);
  report.ratio_upper = std::pow(3.0 * b, d);
  report.ratio_ok = report.ratio >= report.ratio_lower * (1.0 - slack) &&
                    report.ratio <= report.ratio_upper * (1.0 + slack);
  return report;
}

std::vector<CapCriterionRow> cap_criterion(const OffspringLaw& law,
                                           const std::function<double(double)>& g,
                                           int base, int dimension, int height,
                                           int min_depth,
                                           std::span<const std::uint64_t> seeds,
                                           double slack) {
  require(law.mean() > 1.0, "supercritical law required");
  require(min_depth >= 1 && min_depth <= height, "bad depth range");
  const double mean = law.mean();

  Gauge gauge = Gauge::euclid(g, base, height);
  // partial_sum(depth) = sum_{n<=depth} h(n) m^-n
  std::vector<double> partial(height + 1);
  double acc = 0.0, mn = 1.0;
  for (int n = 0; n <= height; ++n) {
    acc += gauge.increment(n) * mn;
    mn /= mean;
    partial[n] = acc;
  }

  std::vector<CapCriterionRow> rows;
  for (std::uint64_t seed : seeds) {
    auto [tree, labeling] = cantor_sample(law, base, dimension, height, seed);
    std::vector<double> growth(height + 1);
    double m = 1.0;
    for (int n = 0; n <= height; ++n) {
      growth[n] = m;
      m *= mean;
    }
    for (int depth = min_depth; depth <= height; ++depth) {
      Tree cut = tree.truncate(depth);
      auto profile = std::span(growth.data(), depth + 1);
      double a_gamma = tree_stats(cut, profile).a_gamma;
      double c_u = flow_bound_stats(cut, uniform_leaf_flow(cut), profile).c;
      auto cap = capacity(cut, gauge);

      CapCriterionRow row;
      row.depth = depth;
      row.seed = seed;
      row.cap = cap.capacity;
      row.partial_sum = partial[depth];
      row.upper_bound = a_gamma / partial[depth];
      row.lower_certificate = 1.0 / (c_u * partial[depth]);
      row.bounds_ok = row.cap <= row.upper_bound * (1.0 + slack) &&
                      row.cap >= row.lower_certificate * (1.0 - slack);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace treecap
