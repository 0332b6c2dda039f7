#include "treecap/discretize.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace treecap {

namespace {

// Coverage state of a word prefix: for every nonempty subset S of boxes, the
// product over consumed coordinates of the cell-relative overlap length of
// the S-intersection. Words with equal states have identical futures.
struct State {
  std::vector<Rat> subset_fraction;  // indexed by subset-1

  std::uint64_t hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto& r : subset_fraction) {
      h = h * 0x100000001b3ULL + r.hash();
    }
    return h;
  }
  bool operator==(const State& o) const {
    return subset_fraction == o.subset_fraction;
  }
  bool all_zero() const {
    for (const auto& r : subset_fraction) {
      if (!r.is_zero()) return false;
    }
    return true;
  }
};

struct StateHash {
  std::uint64_t operator()(const State& s) const { return s.hash(); }
};

// Letters of one coordinate grouped by their per-subset overlap fractions;
// contiguous letters strictly between box edges share a class.
struct LetterClass {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ranges;
  std::vector<Rat> fraction;  // per subset-1, overlap length * 2^j
};

std::vector<LetterClass> classify_letters(const RatBoxUnion& boxes, int coord,
                                          int j) {
  const std::uint32_t grid = 1u << j;
  const Rat cell = Rat::of(1, static_cast<long long>(grid));
  const int m = static_cast<int>(boxes.boxes.size());
  const int subsets = (1 << m) - 1;

  // Intersection interval of each subset along this coordinate.
  std::vector<std::pair<Rat, Rat>> inter(subsets + 1,
                                         {Rat::of(0), Rat::of(1)});
  std::vector<bool> inter_empty(subsets + 1, false);
  for (int s = 1; s <= subsets; ++s) {
    Rat lo = Rat::of(0), hi = Rat::of(1);
    for (int i = 0; i < m; ++i) {
      if (s & (1 << i)) {
        lo = Rat::max(lo, boxes.boxes[i].sides[coord].first);
        hi = Rat::min(hi, boxes.boxes[i].sides[coord].second);
      }
    }
    inter[s] = {lo, hi};
    inter_empty[s] = hi < lo;
  }

  // A letter y covers [y/2^j, (y+1)/2^j]; the fraction vector changes only at
  // cells containing a box edge.
  auto cell_of = [&](const Rat& x) -> std::int64_t {
    // floor(x * grid), clamped into the letter range
    Rat scaled = x * Rat::of(static_cast<long long>(grid));
    double approx = scaled.to_double();
    auto guess = static_cast<std::int64_t>(std::floor(approx));
    // Fix up the float guess exactly.
    while (Rat::of(guess + 1) <= scaled) ++guess;
    while (Rat::of(guess) > scaled) --guess;
    return guess;
  };
  std::vector<std::uint32_t> critical{0};
  for (const auto& box : boxes.boxes) {
    for (const Rat& edge : {box.sides[coord].first, box.sides[coord].second}) {
      std::int64_t c = cell_of(edge);
      for (std::int64_t y : {c - 1, c, c + 1}) {
        if (y >= 0 && y < static_cast<std::int64_t>(grid)) {
          critical.push_back(static_cast<std::uint32_t>(y));
        }
      }
    }
  }
  critical.push_back(grid - 1);
  std::sort(critical.begin(), critical.end());
  critical.erase(std::unique(critical.begin(), critical.end()), critical.end());

  auto fractions_at = [&](std::uint32_t y) {
    Rat cell_lo = Rat::of(y, 1) * cell;
    Rat cell_hi = Rat::of(y + 1, 1) * cell;
    std::vector<Rat> f(subsets);
    for (int s = 1; s <= subsets; ++s) {
      if (inter_empty[s]) continue;  // stays zero
      Rat lo = Rat::max(inter[s].first, cell_lo);
      Rat hi = Rat::min(inter[s].second, cell_hi);
      if (lo < hi) {
        f[s - 1] = (hi - lo) * Rat::of(static_cast<long long>(grid));
      }
    }
    return f;
  };

  // Segments: each critical letter alone, plus the uniform runs between.
  std::vector<LetterClass> classes;
  std::unordered_map<std::uint64_t, int> index;
  auto add_segment = [&](std::uint32_t lo, std::uint32_t hi) {
    auto f = fractions_at(lo);
    State probe{f};
    std::uint64_t h = probe.hash();
    auto [it, inserted] = index.try_emplace(h, static_cast<int>(classes.size()));
    if (inserted) {
      classes.push_back({{{lo, hi}}, std::move(f)});
    } else {
      // Hash collisions across distinct fraction vectors would corrupt the
      // construction; verify equality.
      if (!(classes[it->second].fraction == f)) {
        throw std::logic_error("letter-class hash collision");
      }
      classes[it->second].ranges.emplace_back(lo, hi);
    }
  };
  std::uint32_t prev_end = 0;
  for (std::size_t i = 0; i < critical.size(); ++i) {
    std::uint32_t c = critical[i];
    if (c > prev_end) add_segment(prev_end, c - 1);
    add_segment(c, c);
    prev_end = c + 1;
  }
  if (prev_end <= grid - 1) add_segment(prev_end, grid - 1);
  return classes;
}

}  // namespace

TargetTrie discretize_target(const RatBoxUnion& boxes, int j,
                             std::size_t node_cap) {
  boxes.validate();
  require(j >= 1 && j <= 30, "grid exponent out of range");
  require(boxes.boxes.size() <= 10,
          "too many boxes for subset enumeration");
  const int depth = boxes.dimension();
  const int m = static_cast<int>(boxes.boxes.size());
  const int subsets = (1 << m) - 1;
  const std::uint32_t alphabet = 1u << j;

  // Level-by-level expansion of coverage states.
  struct Node {
    State state;
    std::vector<TargetTrie::Edge> edges;  // children as next-level local ids
    bool keep = false;
  };
  std::vector<std::vector<Node>> levels(depth + 1);
  State root;
  root.subset_fraction.assign(subsets, Rat::of(1));
  levels[0].push_back({root, {}, false});

  for (int pos = 0; pos < depth; ++pos) {
    auto classes = classify_letters(boxes, pos, j);
    std::unordered_map<std::uint64_t, int> index;
    auto& next = levels[pos + 1];
    for (auto& node : levels[pos]) {
      for (const auto& cls : classes) {
        State child;
        child.subset_fraction.resize(subsets);
        for (int s = 0; s < subsets; ++s) {
          child.subset_fraction[s] =
              node.state.subset_fraction[s] * cls.fraction[s];
        }
        if (child.all_zero()) continue;  // zero coverage forever
        std::uint64_t h = child.hash();
        auto [it, inserted] = index.try_emplace(h, static_cast<int>(next.size()));
        if (inserted) {
          next.push_back({std::move(child), {}, false});
          if (next.size() > node_cap) {
            throw ResourceLimitError("discretization state cap exceeded");
          }
        } else if (!(next[it->second].state == child)) {
          throw std::logic_error("coverage-state hash collision");
        }
        for (auto [lo, hi] : cls.ranges) {
          node.edges.push_back({lo, hi, it->second});
        }
      }
      std::sort(node.edges.begin(), node.edges.end(),
                [](const auto& a, const auto& b) { return a.lo < b.lo; });
    }
  }

  // Accept bottom states whose inclusion-exclusion coverage exceeds 1/2.
  const Rat half = Rat::of(1, 2);
  for (auto& node : levels[depth]) {
    Rat vol = Rat::of(0);
    for (int s = 1; s <= subsets; ++s) {
      int bits = __builtin_popcount(static_cast<unsigned>(s));
      if (bits % 2 == 1) {
        vol = vol + node.state.subset_fraction[s - 1];
      } else {
        vol = vol - node.state.subset_fraction[s - 1];
      }
    }
    node.keep = vol > half;
  }

  // Prune upward: a node survives iff some edge leads to a surviving child.
  for (int pos = depth - 1; pos >= 0; --pos) {
    for (auto& node : levels[pos]) {
      std::vector<TargetTrie::Edge> kept;
      for (const auto& e : node.edges) {
        if (levels[pos + 1][e.child].keep) kept.push_back(e);
      }
      node.edges = std::move(kept);
      node.keep = !node.edges.empty();
    }
  }
  if (!levels[0][0].keep && depth > 0) {
    return TargetTrie::empty_set(static_cast<int>(alphabet), depth);
  }

  // Reindex surviving nodes level-major.
  std::vector<std::vector<int>> new_id(depth + 1);
  std::vector<int> level_offset{0};
  int next_id = 0;
  for (int pos = 0; pos <= depth; ++pos) {
    new_id[pos].assign(levels[pos].size(), -1);
    for (std::size_t i = 0; i < levels[pos].size(); ++i) {
      if (levels[pos][i].keep || (pos == 0)) new_id[pos][i] = next_id++;
    }
    level_offset.push_back(next_id);
  }
  std::vector<TargetTrie::Edge> edges;
  std::vector<int> edge_offset{0};
  for (int pos = 0; pos <= depth; ++pos) {
    for (std::size_t i = 0; i < levels[pos].size(); ++i) {
      if (new_id[pos][i] < 0) continue;
      for (const auto& e : levels[pos][i].edges) {
        edges.push_back({e.lo, e.hi, new_id[pos + 1][e.child]});
      }
      edge_offset.push_back(static_cast<int>(edges.size()));
    }
  }
  return TargetTrie::from_parts(static_cast<int>(alphabet), depth,
                                std::move(edges), std::move(edge_offset),
                                std::move(level_offset));
}

}  // namespace treecap
