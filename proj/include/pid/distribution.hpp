/*!
  \file distribution.hpp
  \brief Exact finite discrete joint distributions and specific-information measures.

  A joint_distribution is an immutable probability mass function over tuples of
  symbolic outcomes.  Variable 0 is the target; variables 1..n-1 are the
  predictors.  All information quantities are reported in bits (log base 2),
  with 0 log 0 taken as 0.
*/

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pid {

/// Probabilities must sum to 1 within this tolerance.
inline constexpr double sum_tolerance = 1e-9;

/// Entries below this are treated as structural zeros and removed from the support.
inline constexpr double structural_zero_threshold = 1e-12;

/// Agreement tolerance for quantities that are equal by algebraic identity.
inline constexpr double numeric_tolerance = 1e-9;

/// A probability mass function violates one of its invariants (negative mass,
/// mass not summing to one).
class validation_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/*! \brief A nonempty subset of the predictor variables, treated as one joint
    information provider about the target.

  Stored as a bitmask: bit i set means predictor index i+1 (1-based, matching
  the variable positions 1..n-1 of a joint_distribution) belongs to the source.
  The ordering is canonical: by cardinality, then lexicographically on the
  ascending index sequence.
*/
class source {
public:
  explicit source(std::uint32_t mask) : mask_(mask) {
    if (mask == 0u)
      throw std::invalid_argument("source: predictor set must be nonempty");
  }

  source(std::initializer_list<std::size_t> indices) : mask_(0u) {
    for (std::size_t i : indices) {
      if (i < 1 || i > 32)
        throw std::invalid_argument("source: predictor index out of range");
      mask_ |= 1u << (i - 1);
    }
    if (mask_ == 0u)
      throw std::invalid_argument("source: predictor set must be nonempty");
  }

  template <typename Iterator>
  static source from_indices(Iterator first, Iterator last) {
    std::uint32_t mask = 0;
    for (; first != last; ++first) {
      std::size_t i = static_cast<std::size_t>(*first);
      if (i < 1 || i > 32)
        throw std::invalid_argument("source: predictor index out of range");
      mask |= 1u << (i - 1);
    }
    if (mask == 0u)
      throw std::invalid_argument("source: predictor set must be nonempty");
    return source(mask);
  }

  std::uint32_t mask() const { return mask_; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

  bool contains(std::size_t index) const {
    return index >= 1 && index <= 32 && (mask_ & (1u << (index - 1))) != 0;
  }

  bool is_subset_of(source other) const { return (mask_ & ~other.mask_) == 0; }

  /// Ascending 1-based predictor indices.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i <= 32; ++i)
      if (mask_ & (1u << (i - 1))) out.push_back(i);
    return out;
  }

  std::size_t max_index() const {
    return static_cast<std::size_t>(std::bit_width(mask_));
  }

  friend bool operator==(source a, source b) { return a.mask_ == b.mask_; }

  // Canonical order: cardinality first, then lexicographic on index sequences.
  friend bool operator<(source a, source b) {
    if (a.size() != b.size()) return a.size() < b.size();
    std::uint32_t x = a.mask_, y = b.mask_;
    while (x != 0 && y != 0) {
      std::uint32_t lx = x & (~x + 1u);
      std::uint32_t ly = y & (~y + 1u);
      if (lx != ly) return lx < ly;
      x ^= lx;
      y ^= ly;
    }
    return false;
  }

private:
  std::uint32_t mask_;
};

/// Assignment of symbols to variable positions; used for conditional queries.
using partial_assignment = std::map<std::size_t, std::string>;

/*! \brief Immutable pmf over tuples of symbolic outcomes.

  Variable 0 is the target.  Outcomes are stored as tuples of symbol indices
  into the per-variable state lists; only the support (entries above the
  structural-zero threshold) is kept.  All operations on a constructed
  distribution are pure and safe to call concurrently.
*/
class joint_distribution {
public:
  using outcome = std::vector<std::size_t>;

  joint_distribution(std::vector<std::string> variable_names,
                     std::vector<std::vector<std::string>> states,
                     const std::vector<std::pair<std::vector<std::string>, double>>& entries)
      : names_(std::move(variable_names)), states_(std::move(states)) {
    check_layout();
    std::vector<std::pair<outcome, double>> indexed;
    indexed.reserve(entries.size());
    for (const auto& [symbols, p] : entries) {
      if (symbols.size() != names_.size())
        throw std::invalid_argument("joint_distribution: outcome arity mismatch");
      outcome key(symbols.size());
      for (std::size_t v = 0; v < symbols.size(); ++v)
        key[v] = symbol_index_impl(v, symbols[v]);
      indexed.emplace_back(std::move(key), p);
    }
    init(std::move(indexed));
  }

  static joint_distribution from_indexed(std::vector<std::string> variable_names,
                                         std::vector<std::vector<std::string>> states,
                                         std::vector<std::pair<outcome, double>> entries) {
    joint_distribution d;
    d.names_ = std::move(variable_names);
    d.states_ = std::move(states);
    d.check_layout();
    for (const auto& [key, p] : entries) {
      (void)p;
      if (key.size() != d.names_.size())
        throw std::invalid_argument("joint_distribution: outcome arity mismatch");
      for (std::size_t v = 0; v < key.size(); ++v)
        if (key[v] >= d.states_[v].size())
          throw std::invalid_argument("joint_distribution: outcome symbol index out of range");
    }
    d.init(std::move(entries));
    return d;
  }

  std::size_t variable_count() const { return names_.size(); }
  std::size_t predictor_count() const { return names_.size() - 1; }
  const std::vector<std::string>& variable_names() const { return names_; }
  const std::vector<std::vector<std::string>>& states() const { return states_; }
  const std::string& target_name() const { return names_[0]; }

  std::size_t support_size() const { return outcomes_.size(); }
  const outcome& outcome_at(std::size_t i) const { return outcomes_[i]; }
  double probability_at(std::size_t i) const { return probs_[i]; }

  /// Probability of a full outcome tuple (0 when outside the support).
  double probability(const outcome& key) const {
    auto it = std::lower_bound(outcomes_.begin(), outcomes_.end(), key);
    if (it == outcomes_.end() || *it != key) return 0.0;
    return probs_[static_cast<std::size_t>(it - outcomes_.begin())];
  }

  std::size_t symbol_index(std::size_t variable, const std::string& symbol) const {
    if (variable >= names_.size())
      throw std::invalid_argument("joint_distribution: variable position out of range");
    return symbol_index_impl(variable, symbol);
  }

  std::size_t variable_position(const std::string& name) const {
    for (std::size_t v = 0; v < names_.size(); ++v)
      if (names_[v] == name) return v;
    throw std::invalid_argument("joint_distribution: unknown variable '" + name + "'");
  }

private:
  joint_distribution() = default;

  void check_layout() const {
    if (names_.empty())
      throw std::invalid_argument("joint_distribution: at least one variable required");
    if (states_.size() != names_.size())
      throw std::invalid_argument("joint_distribution: one state list required per variable");
    for (std::size_t v = 0; v < names_.size(); ++v) {
      if (names_[v].empty())
        throw std::invalid_argument("joint_distribution: empty variable name");
      for (std::size_t w = v + 1; w < names_.size(); ++w)
        if (names_[v] == names_[w])
          throw std::invalid_argument("joint_distribution: duplicate variable name '" + names_[v] + "'");
      if (states_[v].empty())
        throw std::invalid_argument("joint_distribution: variable '" + names_[v] + "' has no states");
      for (std::size_t a = 0; a < states_[v].size(); ++a)
        for (std::size_t b = a + 1; b < states_[v].size(); ++b)
          if (states_[v][a] == states_[v][b])
            throw std::invalid_argument("joint_distribution: duplicate state '" + states_[v][a] +
                                        "' for variable '" + names_[v] + "'");
    }
  }

  std::size_t symbol_index_impl(std::size_t variable, const std::string& symbol) const {
    const auto& alphabet = states_[variable];
    auto it = std::find(alphabet.begin(), alphabet.end(), symbol);
    if (it == alphabet.end())
      throw std::invalid_argument("joint_distribution: unknown symbol '" + symbol +
                                  "' for variable '" + names_[variable] + "'");
    return static_cast<std::size_t>(it - alphabet.begin());
  }

  void init(std::vector<std::pair<outcome, double>> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double total = 0.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& [key, p] = entries[i];
      if (i > 0 && entries[i - 1].first == key)
        throw std::invalid_argument("joint_distribution: duplicate outcome tuple");
      if (p < 0.0)
        throw validation_error("joint_distribution: negative probability");
      total += p;
      if (p <= structural_zero_threshold) continue;  // structural zero
      outcomes_.push_back(key);
      probs_.push_back(p);
    }
    if (std::abs(total - 1.0) > sum_tolerance)
      throw validation_error("joint_distribution: probabilities sum to " + std::to_string(total));
    if (outcomes_.empty())
      throw validation_error("joint_distribution: empty support");
  }

  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> states_;
  std::vector<outcome> outcomes_;  // sorted lexicographically
  std::vector<double> probs_;
};

namespace detail {

inline std::vector<std::size_t> checked_positions(const joint_distribution& d,
                                                  std::vector<std::size_t> positions,
                                                  const char* who) {
  if (positions.empty())
    throw std::invalid_argument(std::string(who) + ": no variables selected");
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  if (positions.back() >= d.variable_count())
    throw std::invalid_argument(std::string(who) + ": variable position out of range");
  return positions;
}

inline std::vector<std::size_t> source_positions(const joint_distribution& d, const source& src,
                                                 const char* who) {
  if (src.max_index() > d.predictor_count())
    throw std::invalid_argument(std::string(who) + ": source refers to a missing predictor");
  return src.indices();
}

/// Marginal pmf over the given (sorted, unique) positions.
inline std::map<joint_distribution::outcome, double>
marginal_table(const joint_distribution& d, const std::vector<std::size_t>& positions) {
  std::map<joint_distribution::outcome, double> table;
  joint_distribution::outcome key(positions.size());
  for (std::size_t i = 0; i < d.support_size(); ++i) {
    const auto& full = d.outcome_at(i);
    for (std::size_t k = 0; k < positions.size(); ++k) key[k] = full[positions[k]];
    table[key] += d.probability_at(i);
  }
  return table;
}

/// Positions of `sub` within the sorted position list `full`.
inline std::vector<std::size_t> positions_within(const std::vector<std::size_t>& full,
                                                 const std::vector<std::size_t>& sub) {
  std::vector<std::size_t> out;
  out.reserve(sub.size());
  for (std::size_t p : sub) {
    auto it = std::lower_bound(full.begin(), full.end(), p);
    out.push_back(static_cast<std::size_t>(it - full.begin()));
  }
  return out;
}

inline joint_distribution::outcome project(const joint_distribution::outcome& key,
                                           const std::vector<std::size_t>& picks) {
  joint_distribution::outcome out(picks.size());
  for (std::size_t k = 0; k < picks.size(); ++k) out[k] = key[picks[k]];
  return out;
}

/// p(s) for every target state, indexed by symbol index (0 when outside the support).
inline std::vector<double> target_probabilities(const joint_distribution& d) {
  std::vector<double> ps(d.states()[0].size(), 0.0);
  for (std::size_t i = 0; i < d.support_size(); ++i)
    ps[d.outcome_at(i)[0]] += d.probability_at(i);
  return ps;
}

}  // namespace detail

/*! \brief Marginal distribution over a set of variable positions.

  The retained variables keep their relative order; probabilities of excluded
  positions are summed out.
*/
inline joint_distribution marginal(const joint_distribution& d, std::vector<std::size_t> positions) {
  auto keep = detail::checked_positions(d, std::move(positions), "marginal");
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> states;
  for (std::size_t p : keep) {
    names.push_back(d.variable_names()[p]);
    states.push_back(d.states()[p]);
  }
  auto table = detail::marginal_table(d, keep);
  std::vector<std::pair<joint_distribution::outcome, double>> entries(table.begin(), table.end());
  return joint_distribution::from_indexed(std::move(names), std::move(states), std::move(entries));
}

/*! \brief Conditional probability p(query | event) for partial assignments.

  Both assignments map variable positions to symbols.  Conditioning on an
  event of zero probability is an error, never a silent NaN.
*/
inline double conditional_probability(const joint_distribution& d, const partial_assignment& event,
                                      const partial_assignment& query) {
  auto resolve = [&](const partial_assignment& a) {
    std::vector<std::pair<std::size_t, std::size_t>> fixed;
    for (const auto& [pos, symbol] : a)
      fixed.emplace_back(pos, d.symbol_index(pos, symbol));
    return fixed;
  };
  const auto event_fixed = resolve(event);
  const auto query_fixed = resolve(query);
  auto matches = [](const joint_distribution::outcome& key,
                    const std::vector<std::pair<std::size_t, std::size_t>>& fixed) {
    for (const auto& [pos, idx] : fixed)
      if (key[pos] != idx) return false;
    return true;
  };
  double p_event = 0.0, p_both = 0.0;
  for (std::size_t i = 0; i < d.support_size(); ++i) {
    const auto& key = d.outcome_at(i);
    if (!matches(key, event_fixed)) continue;
    p_event += d.probability_at(i);
    if (matches(key, query_fixed)) p_both += d.probability_at(i);
  }
  if (p_event <= 0.0)
    throw std::domain_error("conditional_probability: conditioning event has zero probability");
  return std::min(p_both / p_event, 1.0);
}

/// Joint entropy of the selected variables, in bits.
inline double entropy(const joint_distribution& d, std::vector<std::size_t> positions) {
  auto keep = detail::checked_positions(d, std::move(positions), "entropy");
  double h = 0.0;
  for (const auto& [key, p] : detail::marginal_table(d, keep))
    if (p > 0.0) h -= p * std::log2(p);
  return std::max(h, 0.0);
}

/*! \brief Mutual information between the target and a source, in bits. */
inline double mutual_information(const joint_distribution& d, const source& src) {
  auto apos = detail::source_positions(d, src, "mutual_information");
  std::vector<std::size_t> joint_pos;
  joint_pos.push_back(0);
  joint_pos.insert(joint_pos.end(), apos.begin(), apos.end());
  auto joint = detail::marginal_table(d, joint_pos);
  auto ps = detail::target_probabilities(d);
  std::map<joint_distribution::outcome, double> pa;
  for (const auto& [key, p] : joint)
    pa[joint_distribution::outcome(key.begin() + 1, key.end())] += p;
  double mi = 0.0;
  for (const auto& [key, p] : joint) {
    if (p <= 0.0) continue;
    joint_distribution::outcome a(key.begin() + 1, key.end());
    mi += p * std::log2(p / (ps[key[0]] * pa[a]));
  }
  return std::max(mi, 0.0);
}

/*! \brief Specific information the source provides about one target outcome.

  The average reduction in surprise of the outcome given knowledge of the
  source: sum over source outcomes of p(a|s) log2(p(s|a)/p(s)).  Equals the
  Kullback-Leibler divergence between p(a|s) and p(a), hence nonnegative.
  Returned per target state index; entries with p(s) = 0 are left at 0 and
  carry no meaning.
*/
inline std::vector<double> specific_information_profile(const joint_distribution& d, const source& src) {
  auto apos = detail::source_positions(d, src, "specific_information");
  std::vector<std::size_t> joint_pos;
  joint_pos.push_back(0);
  joint_pos.insert(joint_pos.end(), apos.begin(), apos.end());
  auto joint = detail::marginal_table(d, joint_pos);
  auto ps = detail::target_probabilities(d);
  std::map<joint_distribution::outcome, double> pa;
  for (const auto& [key, p] : joint)
    pa[joint_distribution::outcome(key.begin() + 1, key.end())] += p;
  std::vector<double> profile(ps.size(), 0.0);
  for (const auto& [key, p] : joint) {
    if (p <= 0.0) continue;
    joint_distribution::outcome a(key.begin() + 1, key.end());
    profile[key[0]] += (p / ps[key[0]]) * std::log2(p / (pa[a] * ps[key[0]]));
  }
  for (double& v : profile) v = std::max(v, 0.0);
  return profile;
}

inline double specific_information(const joint_distribution& d, const std::string& target_symbol,
                                   const source& src) {
  std::size_t s = d.symbol_index(0, target_symbol);
  auto ps = detail::target_probabilities(d);
  if (ps[s] <= 0.0)
    throw std::domain_error("specific_information: target outcome '" + target_symbol +
                            "' is not in the support");
  return specific_information_profile(d, src)[s];
}

/*! \brief Response-specific information H(S) - H(S|r) for one source outcome.

  Unlike specific information this can be negative: observing a response may
  increase uncertainty about the target.
*/
inline double response_specific_information(const joint_distribution& d,
                                            const std::vector<std::string>& response,
                                            const source& src) {
  auto apos = detail::source_positions(d, src, "response_specific_information");
  if (response.size() != apos.size())
    throw std::invalid_argument("response_specific_information: response arity mismatch");
  joint_distribution::outcome r(apos.size());
  for (std::size_t k = 0; k < apos.size(); ++k)
    r[k] = d.symbol_index(apos[k], response[k]);

  std::vector<std::size_t> joint_pos;
  joint_pos.push_back(0);
  joint_pos.insert(joint_pos.end(), apos.begin(), apos.end());
  auto joint = detail::marginal_table(d, joint_pos);
  double p_r = 0.0;
  for (const auto& [key, p] : joint)
    if (std::equal(key.begin() + 1, key.end(), r.begin())) p_r += p;
  if (p_r <= 0.0)
    throw std::domain_error("response_specific_information: response has zero probability");
  double h_cond = 0.0;
  for (const auto& [key, p] : joint) {
    if (p <= 0.0 || !std::equal(key.begin() + 1, key.end(), r.begin())) continue;
    double q = p / p_r;
    h_cond -= q * std::log2(q);
  }
  return entropy(d, {0}) - h_cond;
}

/*! \brief Stimulus-specific information: the response-specific information
    averaged over the responses evoked by one target outcome. */
inline double stimulus_specific_information(const joint_distribution& d,
                                            const std::string& target_symbol, const source& src) {
  auto apos = detail::source_positions(d, src, "stimulus_specific_information");
  std::size_t s = d.symbol_index(0, target_symbol);
  auto ps = detail::target_probabilities(d);
  if (ps[s] <= 0.0)
    throw std::domain_error("stimulus_specific_information: target outcome '" + target_symbol +
                            "' is not in the support");

  std::vector<std::size_t> joint_pos;
  joint_pos.push_back(0);
  joint_pos.insert(joint_pos.end(), apos.begin(), apos.end());
  auto joint = detail::marginal_table(d, joint_pos);
  std::map<joint_distribution::outcome, double> pa;
  for (const auto& [key, p] : joint)
    pa[joint_distribution::outcome(key.begin() + 1, key.end())] += p;
  // H(S | a) per source outcome.
  std::map<joint_distribution::outcome, double> h_cond;
  for (const auto& [key, p] : joint) {
    if (p <= 0.0) continue;
    joint_distribution::outcome a(key.begin() + 1, key.end());
    double q = p / pa[a];
    h_cond[a] -= q * std::log2(q);
  }
  const double h_target = entropy(d, {0});
  double value = 0.0;
  for (const auto& [key, p] : joint) {
    if (p <= 0.0 || key[0] != s) continue;
    joint_distribution::outcome a(key.begin() + 1, key.end());
    value += (p / ps[s]) * (h_target - h_cond[a]);
  }
  return value;
}

/// Reorder variables; position i of the result is variable order[i] of the input.
inline joint_distribution permute_variables(const joint_distribution& d,
                                            const std::vector<std::size_t>& order) {
  const std::size_t n = d.variable_count();
  if (order.size() != n)
    throw std::invalid_argument("permute_variables: order must list every variable once");
  std::vector<char> seen(n, 0);
  for (std::size_t p : order) {
    if (p >= n || seen[p])
      throw std::invalid_argument("permute_variables: order is not a permutation");
    seen[p] = 1;
  }
  std::vector<std::string> names(n);
  std::vector<std::vector<std::string>> states(n);
  for (std::size_t i = 0; i < n; ++i) {
    names[i] = d.variable_names()[order[i]];
    states[i] = d.states()[order[i]];
  }
  std::vector<std::pair<joint_distribution::outcome, double>> entries;
  entries.reserve(d.support_size());
  for (std::size_t i = 0; i < d.support_size(); ++i) {
    joint_distribution::outcome key(n);
    for (std::size_t v = 0; v < n; ++v) key[v] = d.outcome_at(i)[order[v]];
    entries.emplace_back(std::move(key), d.probability_at(i));
  }
  return joint_distribution::from_indexed(std::move(names), std::move(states), std::move(entries));
}

/// Move the given variable to position 0; the rest keep their relative order.
inline joint_distribution retarget(const joint_distribution& d, std::size_t new_target) {
  if (new_target >= d.variable_count())
    throw std::invalid_argument("retarget: variable position out of range");
  std::vector<std::size_t> order;
  order.push_back(new_target);
  for (std::size_t v = 0; v < d.variable_count(); ++v)
    if (v != new_target) order.push_back(v);
  return permute_variables(d, order);
}

/// Distribution of the remaining variables conditioned on one variable's value.
inline joint_distribution condition_on(const joint_distribution& d, std::size_t position,
                                       std::size_t symbol) {
  if (position >= d.variable_count())
    throw std::invalid_argument("condition_on: variable position out of range");
  if (d.variable_count() < 2)
    throw std::invalid_argument("condition_on: cannot condition away the only variable");
  if (symbol >= d.states()[position].size())
    throw std::invalid_argument("condition_on: symbol index out of range");
  double p_event = 0.0;
  for (std::size_t i = 0; i < d.support_size(); ++i)
    if (d.outcome_at(i)[position] == symbol) p_event += d.probability_at(i);
  if (p_event <= 0.0)
    throw std::domain_error("condition_on: conditioning event has zero probability");
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> states;
  for (std::size_t v = 0; v < d.variable_count(); ++v) {
    if (v == position) continue;
    names.push_back(d.variable_names()[v]);
    states.push_back(d.states()[v]);
  }
  std::vector<std::pair<joint_distribution::outcome, double>> entries;
  for (std::size_t i = 0; i < d.support_size(); ++i) {
    const auto& full = d.outcome_at(i);
    if (full[position] != symbol) continue;
    joint_distribution::outcome key;
    key.reserve(full.size() - 1);
    for (std::size_t v = 0; v < full.size(); ++v)
      if (v != position) key.push_back(full[v]);
    entries.emplace_back(std::move(key), d.probability_at(i) / p_event);
  }
  return joint_distribution::from_indexed(std::move(names), std::move(states), std::move(entries));
}

inline joint_distribution condition_on(const joint_distribution& d, std::size_t position,
                                       const std::string& symbol) {
  return condition_on(d, position, d.symbol_index(position, symbol));
}

}  // namespace pid
