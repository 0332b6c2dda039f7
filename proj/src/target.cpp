#include "treecap/target.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "treecap/rng.hpp"

namespace treecap {

namespace {

void check_word(int alphabet, int depth, std::span<const int> word) {
  require(static_cast<int>(word.size()) == depth, "word length must equal depth");
  for (int a : word) {
    require(a >= 0 && a < alphabet, "letter outside the alphabet");
  }
}

}  // namespace

TargetTrie TargetTrie::from_parts(int alphabet, int depth,
                                  std::vector<Edge> edges,
                                  std::vector<int> edge_offset,
                                  std::vector<int> level_offset) {
  require(alphabet >= 1, "alphabet must be nonempty");
  require(depth >= 0, "depth must be nonnegative");
  TargetTrie t;
  t.alphabet_ = alphabet;
  t.depth_ = depth;
  t.edges_ = std::move(edges);
  t.edge_offset_ = std::move(edge_offset);
  t.level_offset_ = std::move(level_offset);
  return t;
}

int TargetTrie::node_depth(int node) const {
  for (int n = 0; n <= depth_; ++n) {
    if (node < level_offset_[n + 1]) return n;
  }
  return depth_;
}

bool TargetTrie::contains(std::span<const int> word) const {
  check_word(alphabet_, depth_, word);
  if (node_count() == 0) return false;
  int node = 0;
  for (int a : word) {
    int next = -1;
    for (const auto& e : edges(node)) {
      if (static_cast<std::uint32_t>(a) >= e.lo &&
          static_cast<std::uint32_t>(a) <= e.hi) {
        next = e.child;
        break;
      }
    }
    if (next < 0) return false;
    node = next;
  }
  return true;
}

double TargetTrie::word_count() const {
  if (node_count() == 0) return 0.0;
  std::vector<double> count(node_count(), 0.0);
  for (int node = level_begin(depth_); node < level_end(depth_); ++node) {
    count[node] = 1.0;
  }
  for (int n = depth_ - 1; n >= 0; --n) {
    for (int node = level_begin(n); node < level_end(n); ++node) {
      double c = 0.0;
      for (const auto& e : edges(node)) c += e.width() * count[e.child];
      count[node] = c;
    }
  }
  return count[0];
}

std::vector<std::vector<int>> TargetTrie::enumerate_words(std::size_t cap) const {
  std::vector<std::vector<int>> words;
  if (node_count() == 0) return words;
  std::vector<int> prefix;
  // Iterative DFS over (node, edge index, letter offset) would be noisier
  // than the recursion; depth is small by construction.
  std::function<void(int)> walk = [&](int node) {
    if (static_cast<int>(prefix.size()) == depth_) {
      if (words.size() >= cap) {
        throw ResourceLimitError("target set has too many words to enumerate");
      }
      words.push_back(prefix);
      return;
    }
    for (const auto& e : edges(node)) {
      for (std::uint32_t a = e.lo; a <= e.hi; ++a) {
        prefix.push_back(static_cast<int>(a));
        walk(e.child);
        prefix.pop_back();
      }
    }
  };
  walk(0);
  return words;
}

bool TargetTrie::is_expanded() const {
  std::vector<char> seen(node_count(), 0);
  for (int node = 0; node < node_count(); ++node) {
    for (const auto& e : edges(node)) {
      if (e.width() != 1) return false;
      if (seen[e.child]) return false;
      seen[e.child] = 1;
    }
  }
  return true;
}

TargetTrie TargetTrie::expanded(std::size_t cap) const {
  if (is_expanded()) return *this;
  return from_words(alphabet_, depth_, enumerate_words(cap));
}

TargetTrie TargetTrie::empty_set(int alphabet, int depth) {
  require(alphabet >= 1 && depth >= 0, "bad alphabet or depth");
  std::vector<int> level_offset(depth + 2, 0);
  if (depth == 0) {
    // No accepted words at all: not even the empty word.
    return from_parts(alphabet, depth, {}, {0}, std::move(level_offset));
  }
  level_offset[1] = 1;
  for (int n = 2; n <= depth + 1; ++n) level_offset[n] = 1;
  return from_parts(alphabet, depth, {}, {0, 0}, std::move(level_offset));
}

TargetTrie TargetTrie::all_words(int alphabet, int depth) {
  std::vector<int> counts(depth, alphabet);
  return product(alphabet, counts);
}

TargetTrie TargetTrie::product(int alphabet, std::span<const int> allowed_counts) {
  require(alphabet >= 1, "alphabet must be nonempty");
  const int depth = static_cast<int>(allowed_counts.size());
  std::vector<Edge> edges;
  std::vector<int> edge_offset{0};
  std::vector<int> level_offset{0};
  for (int n = 0; n <= depth; ++n) level_offset.push_back(n + 1);
  for (int n = 0; n < depth; ++n) {
    require(allowed_counts[n] >= 1 && allowed_counts[n] <= alphabet,
            "allowed letter count out of range");
    edges.push_back({0, static_cast<std::uint32_t>(allowed_counts[n] - 1), n + 1});
    edge_offset.push_back(static_cast<int>(edges.size()));
  }
  edge_offset.push_back(static_cast<int>(edges.size()));  // bottom node
  return from_parts(alphabet, depth, std::move(edges), std::move(edge_offset),
                    std::move(level_offset));
}

TargetTrie TargetTrie::from_words(int alphabet, int depth,
                                  std::span<const std::vector<int>> words) {
  for (const auto& w : words) check_word(alphabet, depth, w);
  std::vector<std::vector<int>> sorted(words.begin(), words.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.empty()) return empty_set(alphabet, depth);

  // Assign level-major ids breadth-first over word ranges.
  struct Range {
    int lo, hi;  // word indices [lo, hi)
  };
  std::vector<Range> current{{0, static_cast<int>(sorted.size())}};
  std::vector<Edge> edges;
  std::vector<std::vector<Edge>> per_node_edges;
  per_node_edges.emplace_back();
  std::vector<int> level_offset{0, 1};
  int next_id = 1;
  for (int pos = 0; pos < depth; ++pos) {
    std::vector<Range> next;
    int node_base = level_offset[pos];
    for (std::size_t idx = 0; idx < current.size(); ++idx) {
      auto [lo, hi] = current[idx];
      int i = lo;
      while (i < hi) {
        int letter = sorted[i][pos];
        int j = i;
        while (j < hi && sorted[j][pos] == letter) ++j;
        per_node_edges[node_base + idx].push_back(
            {static_cast<std::uint32_t>(letter),
             static_cast<std::uint32_t>(letter), next_id++});
        per_node_edges.emplace_back();
        next.push_back({i, j});
        i = j;
      }
    }
    level_offset.push_back(next_id);
    current = std::move(next);
  }

  std::vector<int> edge_offset{0};
  for (const auto& node : per_node_edges) {
    for (const auto& e : node) edges.push_back(e);
    edge_offset.push_back(static_cast<int>(edges.size()));
  }
  return from_parts(alphabet, depth, std::move(edges), std::move(edge_offset),
                    std::move(level_offset));
}

TargetTrie TargetTrie::random_subset(int alphabet, int depth,
                                     double keep_probability, std::uint64_t seed) {
  require(keep_probability >= 0.0 && keep_probability <= 1.0,
          "keep probability must lie in [0,1]");
  double total = std::pow(static_cast<double>(alphabet), depth);
  require(total <= 1e6, "alphabet^depth too large to enumerate");
  auto eng = make_engine(seed);
  std::vector<std::vector<int>> words;
  std::vector<int> word(depth, 0);
  long long n = static_cast<long long>(total);
  for (long long i = 0; i < n; ++i) {
    long long x = i;
    for (int pos = depth - 1; pos >= 0; --pos) {
      word[pos] = static_cast<int>(x % alphabet);
      x /= alphabet;
    }
    if (uniform01(eng) < keep_probability) words.push_back(word);
  }
  return from_words(alphabet, depth, words);
}

bool TargetTrie::subset_of(const TargetTrie& other) const {
  require(alphabet_ == other.alphabet_ && depth_ == other.depth_,
          "tries must share alphabet and depth");
  if (empty()) return true;
  if (other.node_count() == 0) return false;
  std::unordered_set<std::uint64_t> visited;
  std::function<bool(int, int, int)> covered = [&](int a, int b, int n) -> bool {
    if (n == depth_) return true;
    std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) |
                        static_cast<std::uint32_t>(b);
    if (visited.count(key)) return true;
    visited.insert(key);
    for (const auto& ea : edges(a)) {
      std::uint32_t pos = ea.lo;
      while (pos <= ea.hi) {
        bool found = false;
        for (const auto& eb : other.edges(b)) {
          if (pos >= eb.lo && pos <= eb.hi) {
            std::uint32_t end = std::min(ea.hi, eb.hi);
            if (!covered(ea.child, eb.child, n + 1)) return false;
            pos = end + 1;
            found = true;
            break;
          }
        }
        if (!found) return false;
        if (pos == 0) break;  // unsigned wrap guard
      }
    }
    return true;
  };
  return covered(0, 0, 0);
}

// --- predicates --------------------------------------------------------------

TargetPredicate TargetPredicate::product(
    std::vector<std::vector<Interval>> coordinate_sets) {
  require(!coordinate_sets.empty(), "product set needs at least one coordinate");
  TargetPredicate p;
  p.kind_ = Kind::Product;
  p.length_ = static_cast<int>(coordinate_sets.size());
  p.coordinate_sets_ = std::move(coordinate_sets);
  return p;
}

TargetPredicate TargetPredicate::fpp_explosion(double budget, int length) {
  require(length >= 1, "length must be positive");
  TargetPredicate p;
  p.kind_ = Kind::FppExplosion;
  p.length_ = length;
  p.budget_ = budget;
  return p;
}

TargetPredicate TargetPredicate::envelope(std::vector<double> floors) {
  require(!floors.empty(), "envelope needs at least one floor");
  TargetPredicate p;
  p.kind_ = Kind::Envelope;
  p.length_ = static_cast<int>(floors.size());
  p.floors_ = std::move(floors);
  return p;
}

TargetPredicate TargetPredicate::region_avoiding(std::vector<Interval> forbidden,
                                                 int length) {
  require(length >= 1, "length must be positive");
  TargetPredicate p;
  p.kind_ = Kind::RegionAvoiding;
  p.length_ = length;
  p.forbidden_ = std::move(forbidden);
  return p;
}

TargetPredicate TargetPredicate::box_union(RatBoxUnion geometry) {
  geometry.validate();
  TargetPredicate p;
  p.kind_ = Kind::BoxUnion;
  p.length_ = geometry.dimension();
  p.geometry_ = std::move(geometry);
  return p;
}

const char* TargetPredicate::kind_name() const {
  switch (kind_) {
    case Kind::Product: return "product";
    case Kind::FppExplosion: return "fpp-explosion";
    case Kind::Envelope: return "envelope";
    case Kind::RegionAvoiding: return "region-avoiding";
    case Kind::BoxUnion: return "box-union";
  }
  return "?";
}

namespace {

bool in_union(double x, std::span<const TargetPredicate::Interval> intervals) {
  for (const auto& [lo, hi] : intervals) {
    if (x >= lo && x <= hi) return true;
  }
  return false;
}

}  // namespace

bool TargetPredicate::accepts(std::span<const double> labels) const {
  require(static_cast<int>(labels.size()) == length_,
          "label sequence length mismatch");
  switch (kind_) {
    case Kind::Product: {
      for (int i = 0; i < length_; ++i) {
        if (!in_union(labels[i], coordinate_sets_[i])) return false;
      }
      return true;
    }
    case Kind::FppExplosion: {
      double sum = 0.0;
      for (double x : labels) sum += x;
      return sum <= budget_;
    }
    case Kind::Envelope: {
      double sum = 0.0;
      for (int i = 0; i < length_; ++i) {
        sum += labels[i];
        if (sum < floors_[i]) return false;
      }
      return true;
    }
    case Kind::RegionAvoiding: {
      double sum = 0.0;
      for (double x : labels) {
        sum += x;
        if (in_union(sum, forbidden_)) return false;
      }
      return true;
    }
    case Kind::BoxUnion:
      return geometry_.contains(labels);
  }
  return false;
}

bool TargetPredicate::prefix_prunable() const { return true; }

bool TargetPredicate::viable_prefix(std::span<const double> prefix,
                                    double label_min) const {
  const int n = static_cast<int>(prefix.size());
  require(n <= length_, "prefix longer than the target length");
  switch (kind_) {
    case Kind::Product: {
      for (int i = 0; i < n; ++i) {
        if (!in_union(prefix[i], coordinate_sets_[i])) return false;
      }
      return true;
    }
    case Kind::FppExplosion: {
      double sum = 0.0;
      for (double x : prefix) sum += x;
      return sum + (length_ - n) * label_min <= budget_;
    }
    case Kind::Envelope: {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        sum += prefix[i];
        if (sum < floors_[i]) return false;
      }
      return true;
    }
    case Kind::RegionAvoiding: {
      double sum = 0.0;
      for (double x : prefix) {
        sum += x;
        if (in_union(sum, forbidden_)) return false;
      }
      return true;
    }
    case Kind::BoxUnion: {
      for (const auto& box : geometry_.boxes) {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
          ok = prefix[i] >= box.sides[i].first.to_double() &&
               prefix[i] <= box.sides[i].second.to_double();
        }
        if (ok) return true;
      }
      return false;
    }
  }
  return true;
}

const RatBoxUnion& TargetPredicate::geometry() const {
  require(kind_ == Kind::BoxUnion, "geometry only defined for box unions");
  return geometry_;
}

// --- label laws ---------------------------------------------------------------

LabelLaw LabelLaw::uniform_finite(int alphabet) {
  require(alphabet >= 1, "alphabet must be nonempty");
  LabelLaw law;
  law.kind_ = Kind::UniformFinite;
  law.alphabet_ = alphabet;
  law.min_value_ = 0.0;
  return law;
}

LabelLaw LabelLaw::uniform01() {
  LabelLaw law;
  law.kind_ = Kind::Uniform01;
  law.min_value_ = 0.0;
  return law;
}

LabelLaw LabelLaw::quantile(std::function<double(double)> quantile_fn,
                            double min_value) {
  require(static_cast<bool>(quantile_fn), "quantile function required");
  LabelLaw law;
  law.kind_ = Kind::Quantile;
  law.quantile_ = std::move(quantile_fn);
  law.min_value_ = min_value;
  return law;
}

double LabelLaw::sample(std::mt19937_64& eng) const {
  switch (kind_) {
    case Kind::UniformFinite:
      return static_cast<double>(uniform_below(eng, alphabet_));
    case Kind::Uniform01:
      return treecap::uniform01(eng);
    case Kind::Quantile:
      return quantile_(treecap::uniform01(eng));
  }
  return 0.0;
}

}  // namespace treecap
