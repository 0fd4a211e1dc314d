/*!
  \file lattice.hpp
  \brief The redundancy lattice: antichains of sources ordered by information
  containment, with covers, down-sets, meet and join.
*/

#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "distribution.hpp"

namespace pid {

/*! \brief An antichain of sources: no source contains another.

  One node of the redundancy lattice.  Sources are kept in canonical order
  (cardinality, then lexicographic indices); equal collections compare equal.
*/
class source_collection {
public:
  explicit source_collection(std::vector<source> sources) : sources_(std::move(sources)) {
    if (sources_.empty())
      throw std::invalid_argument("source_collection: must contain at least one source");
    std::sort(sources_.begin(), sources_.end());
    sources_.erase(std::unique(sources_.begin(), sources_.end()), sources_.end());
    for (std::size_t i = 0; i < sources_.size(); ++i)
      for (std::size_t j = 0; j < sources_.size(); ++j)
        if (i != j && sources_[i].is_subset_of(sources_[j]))
          throw std::invalid_argument("source_collection: not an antichain (" + label_of(sources_[i]) +
                                      " is contained in " + label_of(sources_[j]) + ")");
  }

  source_collection(std::initializer_list<source> sources)
      : source_collection(std::vector<source>(sources)) {}

  const std::vector<source>& sources() const { return sources_; }
  std::size_t size() const { return sources_.size(); }

  std::size_t max_predictor_index() const {
    std::size_t m = 0;
    for (const source& s : sources_) m = std::max(m, s.max_index());
    return m;
  }

  /// Canonical text form, e.g. "{1}{23}".
  std::string label() const {
    std::string out;
    for (const source& s : sources_) out += label_of(s);
    return out;
  }

  /*! \brief Parse a canonical label such as "{12}{13}{23}".

    Accepts single-digit predictor indices; throws on malformed text or when
    the parsed sources do not form an antichain.
  */
  static source_collection parse(const std::string& text) {
    std::vector<source> sources;
    std::size_t i = 0;
    while (i < text.size()) {
      if (text[i] != '{')
        throw std::invalid_argument("source_collection: expected '{' in label '" + text + "'");
      ++i;
      std::uint32_t mask = 0;
      while (i < text.size() && text[i] != '}') {
        char c = text[i];
        if (c < '1' || c > '9')
          throw std::invalid_argument("source_collection: bad predictor index in label '" + text + "'");
        mask |= 1u << (c - '1');
        ++i;
      }
      if (i == text.size())
        throw std::invalid_argument("source_collection: unterminated source in label '" + text + "'");
      if (mask == 0)
        throw std::invalid_argument("source_collection: empty source in label '" + text + "'");
      sources.push_back(source(mask));
      ++i;
    }
    return source_collection(std::move(sources));
  }

  friend bool operator==(const source_collection& a, const source_collection& b) {
    return a.sources_ == b.sources_;
  }

  friend bool operator<(const source_collection& a, const source_collection& b) {
    return std::lexicographical_compare(a.sources_.begin(), a.sources_.end(), b.sources_.begin(),
                                        b.sources_.end());
  }

private:
  static std::string label_of(source s) {
    std::string out = "{";
    for (std::size_t i : s.indices()) out += std::to_string(i);
    out += "}";
    return out;
  }

  std::vector<source> sources_;
};

/*! \brief Ordering of the redundancy lattice: a precedes b when every source
    of b contains some source of a. */
inline bool precedes(const source_collection& a, const source_collection& b) {
  for (const source& upper : b.sources()) {
    bool dominated = false;
    for (const source& lower : a.sources())
      if (lower.is_subset_of(upper)) {
        dominated = true;
        break;
      }
    if (!dominated) return false;
  }
  return true;
}

namespace detail {

inline std::vector<source> minimal_sources(std::vector<source> pool) {
  std::vector<source> kept;
  for (const source& candidate : pool) {
    bool minimal = true;
    for (const source& other : pool)
      if (!(other == candidate) && other.is_subset_of(candidate)) {
        minimal = false;
        break;
      }
    if (minimal) kept.push_back(candidate);
  }
  return kept;
}

}  // namespace detail

/// Meet (infimum): the minimal sources of the union of both collections.
inline source_collection meet(const source_collection& a, const source_collection& b) {
  std::vector<source> pool = a.sources();
  pool.insert(pool.end(), b.sources().begin(), b.sources().end());
  return source_collection(detail::minimal_sources(std::move(pool)));
}

/// Join (supremum): the minimal pairwise unions of sources from each collection.
inline source_collection join(const source_collection& a, const source_collection& b) {
  std::vector<source> unions;
  unions.reserve(a.size() * b.size());
  for (const source& x : a.sources())
    for (const source& y : b.sources()) unions.push_back(source(x.mask() | y.mask()));
  return source_collection(detail::minimal_sources(std::move(unions)));
}

/*! \brief Every antichain of nonempty predictor subsets, in the order produced
    by backtracking over sources sorted canonically.

  Counts follow the Dedekind numbers less the two degenerate antichains:
  1, 4, 18, 166, 7579 for 1..5 predictors.  Capped at 5 predictors; the
  growth beyond that is super-exponential.
*/
inline std::vector<source_collection> enumerate_antichains(std::size_t num_predictors) {
  if (num_predictors < 1 || num_predictors > 5)
    throw std::invalid_argument("enumerate_antichains: predictor count must be between 1 and 5");
  std::vector<source> all;
  for (std::uint32_t mask = 1; mask < (1u << num_predictors); ++mask) all.push_back(source(mask));
  std::sort(all.begin(), all.end());

  std::vector<source_collection> out;
  std::vector<source> chosen;
  auto extend = [&](auto&& self, std::size_t start) -> void {
    for (std::size_t j = start; j < all.size(); ++j) {
      bool incomparable = true;
      for (const source& c : chosen)
        if (c.is_subset_of(all[j]) || all[j].is_subset_of(c)) {
          incomparable = false;
          break;
        }
      if (!incomparable) continue;
      chosen.push_back(all[j]);
      out.push_back(source_collection(chosen));
      self(self, j + 1);
      chosen.pop_back();
    }
  };
  extend(extend, 0);
  return out;
}

/*! \brief The redundancy lattice for a fixed predictor count.

  Nodes are all antichains of nonempty predictor subsets; the order relation is
  precedes().  Node ids run bottom-up: sorted by layer (longest chain from the
  bottom), then by canonical label, so ascending id order is a linear extension
  of the lattice order.  Immutable after construction.
*/
class redundancy_lattice {
public:
  static constexpr std::size_t max_predictors = 5;

  explicit redundancy_lattice(std::size_t num_predictors) : num_predictors_(num_predictors) {
    nodes_ = enumerate_antichains(num_predictors);
    const std::size_t n = nodes_.size();
    words_ = (n + 63) / 64;

    build_order_keys();
    build_down_bits();

    // Layer = longest chain from the bottom; any order by down-set size is a
    // linear extension, which makes the single DP pass below valid.
    std::vector<std::size_t> by_down_size(n);
    for (std::size_t i = 0; i < n; ++i) by_down_size[i] = i;
    std::vector<std::size_t> down_size(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t w = 0; w < words_; ++w)
        down_size[i] += static_cast<std::size_t>(std::popcount(down_bits_[i * words_ + w]));
    std::sort(by_down_size.begin(), by_down_size.end(),
              [&](std::size_t a, std::size_t b) { return down_size[a] < down_size[b]; });
    layers_.assign(n, 0);
    for (std::size_t id : by_down_size)
      for_each_down(id, [&](std::size_t below) {
        if (below != id) layers_[id] = std::max(layers_[id], layers_[below] + 1);
      });

    // Canonical node order: (layer, label).
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = nodes_[i].label();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      if (layers_[a] != layers_[b]) return layers_[a] < layers_[b];
      return labels[a] < labels[b];
    });
    apply_permutation(perm, labels);
    build_down_bits();
    build_up_bits();
    build_covers();

    for (std::size_t i = 0; i < n; ++i) index_.emplace(nodes_[i], i);
    bottom_ = 0;
    top_ = n - 1;
  }

  std::size_t num_predictors() const { return num_predictors_; }
  std::size_t size() const { return nodes_.size(); }
  const source_collection& node(std::size_t id) const { return nodes_.at(id); }
  const std::string& label(std::size_t id) const { return labels_.at(id); }
  std::size_t layer(std::size_t id) const { return layers_.at(id); }
  std::size_t top() const { return top_; }
  std::size_t bottom() const { return bottom_; }

  std::size_t index_of(const source_collection& c) const {
    auto it = index_.find(c);
    if (it == index_.end())
      throw std::invalid_argument("redundancy_lattice: " + c.label() + " is not a node of this lattice");
    return it->second;
  }

  /// Nodes immediately below the given node.
  const std::vector<std::size_t>& covered_by(std::size_t id) const { return lower_covers_.at(id); }

  /// a precedes b (inclusive: a node precedes itself).
  bool precedes(std::size_t a, std::size_t b) const {
    check_id(a);
    check_id(b);
    return (down_bits_[b * words_ + a / 64] >> (a % 64)) & 1u;
  }

  /// All nodes at or below the given node, in ascending id order.
  std::vector<std::size_t> down_set(std::size_t id) const {
    check_id(id);
    std::vector<std::size_t> out;
    for_each_down(id, [&](std::size_t below) { out.push_back(below); });
    return out;
  }

  std::size_t meet(std::size_t a, std::size_t b) const {
    check_id(a);
    check_id(b);
    return index_of(pid::meet(nodes_[a], nodes_[b]));
  }

  std::size_t join(std::size_t a, std::size_t b) const {
    check_id(a);
    check_id(b);
    return index_of(pid::join(nodes_[a], nodes_[b]));
  }

  /// Down-set bit row: bit i set when node i precedes the given node.
  std::span<const std::uint64_t> down_row(std::size_t id) const {
    check_id(id);
    return {down_bits_.data() + id * words_, words_};
  }

  template <typename Fn>
  void for_each_down(std::size_t id, Fn&& fn) const {
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t bits = down_bits_[id * words_ + w];
      while (bits != 0) {
        unsigned b = static_cast<unsigned>(std::countr_zero(bits));
        fn(w * 64 + b);
        bits &= bits - 1;
      }
    }
  }

private:
  void check_id(std::size_t id) const {
    if (id >= nodes_.size()) throw std::out_of_range("redundancy_lattice: node id out of range");
  }

  // For each node, the set of predictor subsets (as bit positions) that
  // contain one of its sources; precedes() reduces to one mask test.
  void build_order_keys() {
    const std::uint32_t full = (1u << num_predictors_) - 1;
    up_closure_.assign(nodes_.size(), 0);
    member_bits_.assign(nodes_.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      for (const source& s : nodes_[i].sources()) member_bits_[i] |= 1u << s.mask();
      for (std::uint32_t t = 1; t <= full; ++t)
        for (const source& s : nodes_[i].sources())
          if ((s.mask() & ~t) == 0) {
            up_closure_[i] |= 1u << t;
            break;
          }
    }
  }

  bool precedes_raw(std::size_t a, std::size_t b) const {
    return (member_bits_[b] & ~up_closure_[a]) == 0;
  }

  void build_down_bits() {
    const std::size_t n = nodes_.size();
    down_bits_.assign(n * words_, 0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        if (precedes_raw(i, j)) down_bits_[j * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
  }

  void build_up_bits() {
    const std::size_t n = nodes_.size();
    up_bits_.assign(n * words_, 0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t bits = down_bits_[j * words_ + w];
        while (bits != 0) {
          unsigned b = static_cast<unsigned>(std::countr_zero(bits));
          up_bits_[(w * 64 + b) * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
          bits &= bits - 1;
        }
      }
  }

  // Transitive reduction: i is covered by j when the interval [i, j] contains
  // exactly the two endpoints.
  void build_covers() {
    const std::size_t n = nodes_.size();
    lower_covers_.assign(n, {});
    for (std::size_t j = 0; j < n; ++j) {
      for_each_down(j, [&](std::size_t i) {
        if (i == j) return;
        std::size_t interval = 0;
        for (std::size_t w = 0; w < words_ && interval <= 2; ++w)
          interval += static_cast<std::size_t>(
              std::popcount(down_bits_[j * words_ + w] & up_bits_[i * words_ + w]));
        if (interval == 2) lower_covers_[j].push_back(i);
      });
    }
  }

  void apply_permutation(const std::vector<std::size_t>& perm, std::vector<std::string>& labels) {
    const std::size_t n = nodes_.size();
    std::vector<source_collection> nodes;
    nodes.reserve(n);
    std::vector<std::string> new_labels(n);
    std::vector<std::size_t> new_layers(n);
    std::vector<std::uint32_t> new_up_closure(n), new_member_bits(n);
    for (std::size_t i = 0; i < n; ++i) {
      nodes.push_back(nodes_[perm[i]]);
      new_labels[i] = labels[perm[i]];
      new_layers[i] = layers_[perm[i]];
      new_up_closure[i] = up_closure_[perm[i]];
      new_member_bits[i] = member_bits_[perm[i]];
    }
    nodes_ = std::move(nodes);
    labels_ = std::move(new_labels);
    layers_ = std::move(new_layers);
    up_closure_ = std::move(new_up_closure);
    member_bits_ = std::move(new_member_bits);
  }

  std::size_t num_predictors_;
  std::size_t words_ = 0;
  std::vector<source_collection> nodes_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> layers_;
  std::vector<std::vector<std::size_t>> lower_covers_;
  std::vector<std::uint64_t> down_bits_;
  std::vector<std::uint64_t> up_bits_;
  std::vector<std::uint32_t> up_closure_;
  std::vector<std::uint32_t> member_bits_;
  std::map<source_collection, std::size_t> index_;
  std::size_t top_ = 0, bottom_ = 0;
};

/*! \brief Hasse diagram in DOT format, one edge per cover relation.

  Optional annotations are appended to node labels on a second line.
*/
inline std::string to_dot(const redundancy_lattice& lattice,
                          const std::map<std::size_t, std::string>& annotations = {}) {
  auto escape = [](const std::string& text) {
    std::string out;
    for (char c : text) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out;
  };
  std::string dot = "digraph redundancy_lattice {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t id = 0; id < lattice.size(); ++id) {
    std::string label = escape(lattice.label(id));
    auto it = annotations.find(id);
    if (it != annotations.end()) label += "\\n" + escape(it->second);
    dot += "  n" + std::to_string(id) + " [label=\"" + label + "\"];\n";
  }
  for (std::size_t layer = 0;; ++layer) {
    std::string rank;
    for (std::size_t id = 0; id < lattice.size(); ++id)
      if (lattice.layer(id) == layer) rank += " n" + std::to_string(id) + ";";
    if (rank.empty()) break;
    dot += "  { rank=same;" + rank + " }\n";
  }
  for (std::size_t id = 0; id < lattice.size(); ++id)
    for (std::size_t child : lattice.covered_by(id))
      dot += "  n" + std::to_string(child) + " -> n" + std::to_string(id) + ";\n";
  dot += "}\n";
  return dot;
}

}  // namespace pid
