/*!
  \file search.hpp
  \brief Search for small equiprobable-support distributions matching a
  redundancy/synergy profile.

  There is a family of systems over a ternary target and two binary predictors
  in which redundancy and synergy are exactly balanced at half a bit each, so
  the interaction information vanishes despite both interactions being
  present.  The exact support is not pinned down by that description, so
  instead of hardcoding a guess this utility enumerates every equiprobable
  support on the 3x2x2 outcome grid and returns those satisfying the full
  constraint list:

    - atom at {1}{2} equal to redundancy_bits and atom at {12} equal to
      synergy_bits (interaction information follows as their difference);
    - each predictor alone provides positive specific information about
      target outcomes 0 and 2;
    - the predictor pair resolves membership in outcomes 0 and 2 conclusively
      (conditional probabilities of 0 or 1 on every support pair);
    - neither predictor alone resolves both memberships conclusively.
*/

#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "decomposition.hpp"
#include "distribution.hpp"
#include "interaction.hpp"

namespace pid {

struct balance_profile {
  double redundancy_bits = 0.5;
  double synergy_bits = 0.5;
  double tolerance = 1e-9;
};

inline std::vector<joint_distribution> find_balanced_supports(const balance_profile& profile = {}) {
  auto lattice = std::make_shared<const redundancy_lattice>(2);
  const std::size_t bottom = lattice->index_of(source_collection::parse("{1}{2}"));
  const std::size_t top = lattice->index_of(source_collection::parse("{12}"));

  std::vector<joint_distribution> matches;
  // Cell index: s * 4 + r1 * 2 + r2 over S in {0,1,2}, R1, R2 in {0,1}.
  for (std::uint32_t support = 1; support < (1u << 12); ++support) {
    int count = std::popcount(support);
    if (count < 3) continue;
    std::uint32_t s_seen = 0, r1_seen = 0, r2_seen = 0;
    std::vector<std::pair<joint_distribution::outcome, double>> entries;
    for (int cell = 0; cell < 12; ++cell) {
      if (!(support & (1u << cell))) continue;
      std::size_t s = static_cast<std::size_t>(cell / 4);
      std::size_t r1 = static_cast<std::size_t>((cell / 2) % 2);
      std::size_t r2 = static_cast<std::size_t>(cell % 2);
      s_seen |= 1u << s;
      r1_seen |= 1u << r1;
      r2_seen |= 1u << r2;
      entries.push_back({{s, r1, r2}, 1.0 / count});
    }
    if (s_seen != 0b111u || r1_seen != 0b11u || r2_seen != 0b11u) continue;

    auto d = joint_distribution::from_indexed({"S", "R1", "R2"},
                                              {{"0", "1", "2"}, {"0", "1"}, {"0", "1"}},
                                              std::move(entries));
    auto decomposition = atoms_recursive(d, lattice);
    if (std::abs(decomposition.atoms[bottom] - profile.redundancy_bits) > profile.tolerance)
      continue;
    if (std::abs(decomposition.atoms[top] - profile.synergy_bits) > profile.tolerance) continue;

    bool informative = true;
    for (std::size_t predictor = 1; predictor <= 2 && informative; ++predictor) {
      auto spec = specific_information_profile(d, source{predictor});
      if (spec[0] <= profile.tolerance || spec[2] <= profile.tolerance) informative = false;
    }
    if (!informative) continue;

    auto conclusive = [&](const partial_assignment& event) {
      for (const char* symbol : {"0", "2"}) {
        double p = conditional_probability(d, event, {{0, symbol}});
        if (p > profile.tolerance && p < 1.0 - profile.tolerance) return false;
      }
      return true;
    };
    bool pair_resolves = true;
    for (int r1 = 0; r1 < 2 && pair_resolves; ++r1)
      for (int r2 = 0; r2 < 2 && pair_resolves; ++r2) {
        partial_assignment event{{1, std::to_string(r1)}, {2, std::to_string(r2)}};
        bool pair_in_support = false;
        for (std::size_t i = 0; i < d.support_size(); ++i)
          if (d.outcome_at(i)[1] == static_cast<std::size_t>(r1) &&
              d.outcome_at(i)[2] == static_cast<std::size_t>(r2))
            pair_in_support = true;
        if (pair_in_support && !conclusive(event)) pair_resolves = false;
      }
    if (!pair_resolves) continue;

    bool some_single_unresolved = true;
    for (std::size_t predictor = 1; predictor <= 2; ++predictor) {
      bool fully_resolves = true;
      for (int v = 0; v < 2; ++v) {
        partial_assignment event{{predictor, std::to_string(v)}};
        bool value_in_support = false;
        for (std::size_t i = 0; i < d.support_size(); ++i)
          if (d.outcome_at(i)[predictor] == static_cast<std::size_t>(v)) value_in_support = true;
        if (value_in_support && !conclusive(event)) fully_resolves = false;
      }
      if (fully_resolves) some_single_unresolved = false;
    }
    if (!some_single_unresolved) continue;

    matches.push_back(std::move(d));
  }
  return matches;
}

}  // namespace pid
