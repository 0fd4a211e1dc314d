/*!
  \file interaction.hpp
  \brief Interaction information and its exact expansion into signed
  partial-information atoms.

  Interaction information generalizes mutual information to three or more
  variables but mixes redundancy and synergy with opposite signs, which is why
  it can be negative.  The atom signature computed here makes the mixture
  explicit: interaction information equals the signed sum of the atoms, with
  integer coefficients derived from the alternating-sum form.

  Sign convention: positive for the purely synergistic parity systems.
*/

#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "decomposition.hpp"
#include "distribution.hpp"
#include "lattice.hpp"

namespace pid {

/*! \brief Conditional mutual information I(target; src | given), in bits.

  The source and conditioning sets must be disjoint predictor subsets.
*/
inline double conditional_mutual_information(const joint_distribution& d, const source& src,
                                             const source& given) {
  if ((src.mask() & given.mask()) != 0)
    throw std::invalid_argument("conditional_mutual_information: source and conditioning set overlap");
  auto apos = detail::source_positions(d, src, "conditional_mutual_information");
  auto cpos = detail::source_positions(d, given, "conditional_mutual_information");

  std::vector<std::size_t> all_pos;
  all_pos.push_back(0);
  all_pos.insert(all_pos.end(), apos.begin(), apos.end());
  all_pos.insert(all_pos.end(), cpos.begin(), cpos.end());
  std::sort(all_pos.begin(), all_pos.end());

  std::vector<std::size_t> sa_pos = apos;
  sa_pos.insert(sa_pos.begin(), 0);
  std::vector<std::size_t> sc_pos = cpos;
  sc_pos.insert(sc_pos.begin(), 0);
  std::vector<std::size_t> ac_pos;
  ac_pos.insert(ac_pos.end(), apos.begin(), apos.end());
  ac_pos.insert(ac_pos.end(), cpos.begin(), cpos.end());
  std::sort(ac_pos.begin(), ac_pos.end());

  auto joint = detail::marginal_table(d, all_pos);
  auto pick_sc = detail::positions_within(all_pos, sc_pos);
  auto pick_ac = detail::positions_within(all_pos, ac_pos);
  auto pick_c = detail::positions_within(all_pos, cpos);

  std::map<joint_distribution::outcome, double> p_sc, p_ac, p_c;
  for (const auto& [key, p] : joint) {
    p_sc[detail::project(key, pick_sc)] += p;
    p_ac[detail::project(key, pick_ac)] += p;
    p_c[detail::project(key, pick_c)] += p;
  }
  double value = 0.0;
  for (const auto& [key, p] : joint) {
    if (p <= 0.0) continue;
    double sc = p_sc[detail::project(key, pick_sc)];
    double ac = p_ac[detail::project(key, pick_ac)];
    double c = p_c[detail::project(key, pick_c)];
    value += p * std::log2(p * c / (sc * ac));
  }
  return std::max(value, 0.0);
}

namespace detail {

inline void check_interaction_arity(const joint_distribution& d, const char* who) {
  if (d.variable_count() < 3 || d.variable_count() > 6)
    throw std::invalid_argument(std::string(who) + ": requires between 3 and 6 variables");
}

inline double interaction_recursive(const joint_distribution& d) {
  const std::size_t n = d.variable_count();
  if (n == 2) return mutual_information(d, source{1});
  const std::size_t last = n - 1;
  auto p_last = marginal_table(d, {last});
  double conditional_part = 0.0;
  for (const auto& [key, p] : p_last) {
    if (p <= 0.0) continue;
    conditional_part += p * interaction_recursive(condition_on(d, last, key[0]));
  }
  std::vector<std::size_t> rest;
  for (std::size_t v = 0; v < last; ++v) rest.push_back(v);
  return conditional_part - interaction_recursive(marginal(d, rest));
}

}  // namespace detail

/*! \brief Interaction information over all variables of the distribution.

  Evaluated as the alternating sum of mutual informations between the target
  and every nonempty predictor subset, signed by subset co-cardinality.  The
  result is symmetric under every permutation of the variables.
*/
inline double interaction_information(const joint_distribution& d) {
  detail::check_interaction_arity(d, "interaction_information");
  const std::size_t m = d.predictor_count();
  double total = 0.0;
  for (std::uint32_t t = 1; t < (1u << m); ++t) {
    bool positive = ((m - static_cast<std::size_t>(std::popcount(t))) % 2) == 0;
    total += (positive ? 1.0 : -1.0) * mutual_information(d, source(t));
  }
  return total;
}

/*! \brief Interaction information by the chain-rule recursion: the conditional
    interaction information given the last variable minus the interaction
    information without it.  Agrees with interaction_information(). */
inline double interaction_information_recursive(const joint_distribution& d) {
  detail::check_interaction_arity(d, "interaction_information_recursive");
  return detail::interaction_recursive(d);
}

/*! \brief Integer coefficient per lattice node expressing interaction
    information as a signed combination of partial-information atoms.

  For two predictors: +1 on {12}, -1 on {1}{2}.  For three predictors the
  nine-term expansion with coefficient -2 on {12}{13}{23}.
*/
struct atom_signature {
  std::shared_ptr<const redundancy_lattice> lattice;
  std::vector<int> coefficients;  ///< per node id

  int coefficient(const std::string& node_label) const {
    return coefficients.at(lattice->index_of(source_collection::parse(node_label)));
  }
};

/*! \brief Build the signature generically from the alternating-sum form.

  Each mutual-information term expands into the atoms below the corresponding
  single-source node; the coefficient of an atom is the sum of the signs of
  every term whose node lies above it.
*/
inline atom_signature interaction_atom_signature(std::shared_ptr<const redundancy_lattice> lattice) {
  if (!lattice) throw std::invalid_argument("interaction_atom_signature: null lattice");
  const std::size_t m = lattice->num_predictors();
  if (m < 2 || m > redundancy_lattice::max_predictors)
    throw std::invalid_argument("interaction_atom_signature: predictor count must be between 2 and 5");
  atom_signature sig;
  sig.coefficients.assign(lattice->size(), 0);
  for (std::uint32_t t = 1; t < (1u << m); ++t) {
    int sign = (((m - static_cast<std::size_t>(std::popcount(t))) % 2) == 0) ? 1 : -1;
    std::size_t term_node = lattice->index_of(source_collection{source(t)});
    lattice->for_each_down(term_node, [&](std::size_t below) { sig.coefficients[below] += sign; });
  }
  sig.lattice = std::move(lattice);
  return sig;
}

inline atom_signature interaction_atom_signature(std::size_t num_predictors) {
  return interaction_atom_signature(std::make_shared<const redundancy_lattice>(num_predictors));
}

/*! \brief Interaction information together with the decomposition that explains it. */
struct interaction_report {
  double interaction_bits = 0.0;
  atom_signature signature;
  pi_decomposition decomposition;
  /// Present for two predictors: the single synergy and redundancy atoms whose
  /// difference is the interaction information.
  std::optional<double> synergy_bits;
  std::optional<double> redundancy_bits;

  double signed_atom(std::size_t id) const {
    return signature.coefficients.at(id) * decomposition.atoms.at(id);
  }
};

/*! \brief Decompose the interaction information of a distribution into signed
    atoms, verifying the signature identity as an internal consistency check. */
inline interaction_report interaction_decomposition_report(const joint_distribution& d) {
  detail::check_interaction_arity(d, "interaction_decomposition_report");
  interaction_report report;
  report.decomposition = decompose(d);
  report.signature = interaction_atom_signature(report.decomposition.lattice);
  report.interaction_bits = interaction_information(d);

  double signed_sum = 0.0;
  for (std::size_t id = 0; id < report.decomposition.lattice->size(); ++id)
    signed_sum += report.signed_atom(id);
  if (std::abs(signed_sum - report.interaction_bits) > accounting_tolerance)
    throw consistency_error("interaction_decomposition_report: signed atom sum " +
                            std::to_string(signed_sum) + " disagrees with interaction information " +
                            std::to_string(report.interaction_bits));

  if (d.predictor_count() == 2) {
    report.synergy_bits = report.decomposition.atom("{12}");
    report.redundancy_bits = report.decomposition.atom("{1}{2}");
  }
  return report;
}

}  // namespace pid
