/*!
  \file decomposition.hpp
  \brief Partial information decomposition over the redundancy lattice.

  Redundant information for a collection of sources is the expected value,
  over target outcomes, of the least specific information any source in the
  collection provides.  Inverting that measure over the lattice yields one
  nonnegative partial-information atom per node; the atoms sum to the mutual
  information between the target and the full predictor set.

  Three evaluation routes are provided and cross-checked: the bottom-up
  recursion (production path), a closed form over the covers of a node, and an
  inclusion-exclusion expansion over subsets of the covers.
*/

#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "distribution.hpp"
#include "lattice.hpp"

namespace pid {

/// Agreement tolerance between algebraically equivalent atom evaluations.
inline constexpr double accounting_tolerance = 1e-8;

/// Atoms in (-negative_atom_tolerance, 0) are floating error and clamp to 0;
/// anything more negative indicates a bug and raises consistency_error.
inline constexpr double negative_atom_tolerance = 1e-8;

/// Default threshold below which redundant information counts as zero when pruning.
inline constexpr double default_prune_tolerance = 1e-10;

/// An internal identity failed beyond tolerance (negative atom, disagreeing
/// evaluation routes).  Indicates a defect, not bad input.
class consistency_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/*! \brief Memoizes specific-information profiles per source.

  The same source appears in many antichains; the dominant cost of a
  decomposition is the repeated divergence computation, so profiles are
  computed once per source mask.  Local to one computation, not shared.
*/
class specific_information_cache {
public:
  explicit specific_information_cache(const joint_distribution& d)
      : dist_(&d), target_probs_(detail::target_probabilities(d)) {}

  const std::vector<double>& profile(const source& src) {
    auto [it, inserted] = profiles_.try_emplace(src.mask());
    if (inserted) it->second = specific_information_profile(*dist_, src);
    return it->second;
  }

  const joint_distribution& dist() const { return *dist_; }
  const std::vector<double>& target_probabilities() const { return target_probs_; }

private:
  const joint_distribution* dist_;
  std::vector<double> target_probs_;
  std::unordered_map<std::uint32_t, std::vector<double>> profiles_;
};

namespace detail {

inline double redundant_information(specific_information_cache& cache,
                                    const source_collection& alpha) {
  const auto& ps = cache.target_probabilities();
  std::vector<const std::vector<double>*> profiles;
  profiles.reserve(alpha.size());
  for (const source& s : alpha.sources()) profiles.push_back(&cache.profile(s));
  double total = 0.0;
  for (std::size_t s = 0; s < ps.size(); ++s) {
    if (ps[s] <= 0.0) continue;  // outcomes outside the support carry no weight
    double least = (*profiles[0])[s];
    for (std::size_t k = 1; k < profiles.size(); ++k)
      least = std::min(least, (*profiles[k])[s]);
    total += ps[s] * least;
  }
  return total;
}

}  // namespace detail

/*! \brief Redundant information a collection of sources provides about the
    target: the expected minimum specific information across the collection.

  For a single-source collection this is the self-redundancy, equal to the
  mutual information between target and source.
*/
inline double redundant_information(const joint_distribution& d, const source_collection& alpha) {
  if (alpha.max_predictor_index() > d.predictor_count())
    throw std::invalid_argument("redundant_information: collection refers to a missing predictor");
  specific_information_cache cache(d);
  return detail::redundant_information(cache, alpha);
}

/*! \brief A full decomposition: redundant information and partial-information
    atom per lattice node, indexed by node id. */
struct pi_decomposition {
  std::shared_ptr<const redundancy_lattice> lattice;
  std::string target;
  std::vector<double> redundancy;  ///< cumulative measure per node
  std::vector<double> atoms;       ///< partial information per node
  double total = 0.0;              ///< mutual information with the full predictor set
  std::size_t skipped_evaluations = 0;  ///< redundancy evaluations avoided by pruning

  double atom(const std::string& node_label) const {
    return atoms.at(lattice->index_of(source_collection::parse(node_label)));
  }
  double redundancy_of(const std::string& node_label) const {
    return redundancy.at(lattice->index_of(source_collection::parse(node_label)));
  }
};

namespace detail {

inline double atom_closed_form(specific_information_cache& cache, const redundancy_lattice& lattice,
                               std::size_t id, double redundancy_at_id) {
  const auto& covers = lattice.covered_by(id);
  if (covers.empty()) return redundancy_at_id;  // bottom: nothing to subtract
  const auto& ps = cache.target_probabilities();
  std::vector<std::vector<const std::vector<double>*>> cover_profiles;
  cover_profiles.reserve(covers.size());
  for (std::size_t c : covers) {
    std::vector<const std::vector<double>*> profiles;
    for (const source& s : lattice.node(c).sources()) profiles.push_back(&cache.profile(s));
    cover_profiles.push_back(std::move(profiles));
  }
  double below = 0.0;
  for (std::size_t s = 0; s < ps.size(); ++s) {
    if (ps[s] <= 0.0) continue;
    double best = 0.0;
    bool first = true;
    for (const auto& profiles : cover_profiles) {
      double least = (*profiles[0])[s];
      for (std::size_t k = 1; k < profiles.size(); ++k)
        least = std::min(least, (*profiles[k])[s]);
      best = first ? least : std::max(best, least);
      first = false;
    }
    below += ps[s] * best;
  }
  return redundancy_at_id - below;
}

inline void check_lattice_match(const joint_distribution& d, const redundancy_lattice& lattice,
                                const char* who) {
  if (lattice.num_predictors() != d.predictor_count())
    throw std::invalid_argument(std::string(who) + ": lattice predictor count does not match");
}

inline pi_decomposition decompose_impl(const joint_distribution& d,
                                       std::shared_ptr<const redundancy_lattice> lattice,
                                       std::optional<double> prune_tolerance, bool cross_validate) {
  if (!lattice) throw std::invalid_argument("decompose: null lattice");
  check_lattice_match(d, *lattice, "decompose");
  const std::size_t n = lattice->size();

  pi_decomposition out;
  out.lattice = lattice;
  out.target = d.target_name();
  out.redundancy.assign(n, 0.0);
  out.atoms.assign(n, 0.0);

  specific_information_cache cache(d);

  if (!prune_tolerance) {
    for (std::size_t id = 0; id < n; ++id)
      out.redundancy[id] = redundant_information(cache, lattice->node(id));
  } else {
    // Top-down: once a node's redundancy is at most the threshold, monotonicity
    // forces zero on its entire down-set, so those evaluations are skipped.
    std::vector<char> forced_zero(n, 0);
    for (std::size_t id = n; id-- > 0;) {
      if (forced_zero[id]) {
        ++out.skipped_evaluations;
        continue;
      }
      double value = redundant_information(cache, lattice->node(id));
      out.redundancy[id] = value;
      if (value <= *prune_tolerance)
        lattice->for_each_down(id, [&](std::size_t below) { forced_zero[below] = 1; });
    }
  }

  // Bottom-up accumulation: ascending id order is a linear extension.
  for (std::size_t id = 0; id < n; ++id) {
    double below = 0.0;
    lattice->for_each_down(id, [&](std::size_t i) {
      if (i != id) below += out.atoms[i];
    });
    double atom = out.redundancy[id] - below;
    if (atom < 0.0) {
      if (atom < -negative_atom_tolerance)
        throw consistency_error("decompose: atom at " + lattice->label(id) + " is " +
                                std::to_string(atom) + ", beyond the negative tolerance");
      atom = 0.0;
    }
    out.atoms[id] = atom;
  }

  out.total = mutual_information(d, source((1u << d.predictor_count()) - 1));

  if (cross_validate) {
    // Spot-check a deterministic random tenth of the nodes against the closed form.
    std::mt19937 rng(0x9e3779b9u);
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    std::shuffle(ids.begin(), ids.end(), rng);
    std::size_t checks = std::max<std::size_t>(1, n / 10);
    for (std::size_t k = 0; k < checks; ++k) {
      std::size_t id = ids[k];
      double reference = atom_closed_form(cache, *lattice, id, out.redundancy[id]);
      if (std::abs(reference - out.atoms[id]) > accounting_tolerance)
        throw consistency_error("decompose: closed-form value disagrees at " + lattice->label(id));
    }
  }
  return out;
}

}  // namespace detail

/*! \brief Atoms over a prebuilt lattice via the bottom-up recursion: each atom
    is the node's redundant information minus the atoms strictly below it. */
inline pi_decomposition atoms_recursive(const joint_distribution& d,
                                        std::shared_ptr<const redundancy_lattice> lattice) {
  return detail::decompose_impl(d, std::move(lattice), std::nullopt, false);
}

/*! \brief Single atom by the closed form: the node's redundant information
    minus the expected best cover minimum of specific information. */
inline double atom_closed_form(const joint_distribution& d, const redundancy_lattice& lattice,
                               std::size_t id) {
  detail::check_lattice_match(d, lattice, "atom_closed_form");
  specific_information_cache cache(d);
  double redundancy = detail::redundant_information(cache, lattice.node(id));
  return detail::atom_closed_form(cache, lattice, id, redundancy);
}

/*! \brief Single atom by inclusion-exclusion over subsets of the node's covers.

  Exponential in the number of covers; intended as a verification route on
  small lattices.
*/
inline double atom_inclusion_exclusion(const joint_distribution& d,
                                       const redundancy_lattice& lattice, std::size_t id) {
  detail::check_lattice_match(d, lattice, "atom_inclusion_exclusion");
  const auto& covers = lattice.covered_by(id);
  if (covers.size() > 24)
    throw std::invalid_argument("atom_inclusion_exclusion: too many covers to expand");
  specific_information_cache cache(d);
  std::unordered_map<std::size_t, double> redundancy_memo;
  auto redundancy_at = [&](std::size_t node) {
    auto [it, inserted] = redundancy_memo.try_emplace(node);
    if (inserted) it->second = detail::redundant_information(cache, lattice.node(node));
    return it->second;
  };
  double correction = 0.0;
  for (std::uint32_t subset = 1; subset < (1u << covers.size()); ++subset) {
    std::size_t meet_id = 0;
    bool first = true;
    for (std::size_t k = 0; k < covers.size(); ++k) {
      if (!(subset & (1u << k))) continue;
      meet_id = first ? covers[k] : lattice.meet(meet_id, covers[k]);
      first = false;
    }
    double sign = (std::popcount(subset) % 2 == 1) ? 1.0 : -1.0;
    correction += sign * redundancy_at(meet_id);
  }
  return redundancy_at(id) - correction;
}

/*! \brief Full decomposition of the information the predictors carry about the
    target.

  Builds the lattice, evaluates redundant information at every node, recovers
  the atoms by the bottom-up recursion, and cross-validates a random tenth of
  the nodes against the closed form.
*/
inline pi_decomposition decompose(const joint_distribution& d) {
  if (d.predictor_count() < 1 || d.predictor_count() > redundancy_lattice::max_predictors)
    throw std::invalid_argument("decompose: predictor count must be between 1 and 5");
  auto lattice = std::make_shared<const redundancy_lattice>(d.predictor_count());
  return detail::decompose_impl(d, std::move(lattice), std::nullopt, true);
}

/*! \brief Decomposition with monotonicity pruning.

  Walks the lattice top-down; whenever a node's redundant information is at
  most zero_tolerance, every node below it is assigned zero without further
  evaluation.  Atoms are identical to decompose() up to the tolerance; the
  number of skipped evaluations is reported on the result.
*/
inline pi_decomposition decompose_pruned(const joint_distribution& d,
                                         double zero_tolerance = default_prune_tolerance) {
  if (!(zero_tolerance >= 0.0))
    throw std::invalid_argument("decompose_pruned: tolerance must be nonnegative");
  if (d.predictor_count() < 1 || d.predictor_count() > redundancy_lattice::max_predictors)
    throw std::invalid_argument("decompose_pruned: predictor count must be between 1 and 5");
  auto lattice = std::make_shared<const redundancy_lattice>(d.predictor_count());
  return detail::decompose_impl(d, std::move(lattice), zero_tolerance, false);
}

/*! \brief Decompose once per choice of target variable.

  Partial information is not symmetric: the synergy about one variable need
  not equal the synergy about another.  Returns one decomposition per
  variable, in variable order, each labeled with its target's name.
*/
inline std::vector<pi_decomposition> asymmetry_report(const joint_distribution& d) {
  if (d.variable_count() < 2 || d.variable_count() > 6)
    throw std::invalid_argument("asymmetry_report: requires between 2 and 6 variables");
  auto lattice = std::make_shared<const redundancy_lattice>(d.predictor_count());
  std::vector<pi_decomposition> out;
  out.reserve(d.variable_count());
  for (std::size_t v = 0; v < d.variable_count(); ++v)
    out.push_back(detail::decompose_impl(retarget(d, v), lattice, std::nullopt, false));
  return out;
}

}  // namespace pid
