/*!
  \file examples.hpp
  \brief Canonical example distributions bundled with the CLI.
*/

#pragma once

#include <string>
#include <vector>

#include "distribution.hpp"

namespace pid::examples {

/// Ternary target, two binary predictors, three equiprobable outcomes.  Each
/// predictor resolves one target outcome conclusively, the pair resolves the
/// third: unique, redundant and synergistic information all nonzero.
inline joint_distribution fig4a() {
  return joint_distribution({"S", "R1", "R2"}, {{"0", "1", "2"}, {"0", "1"}, {"0", "1"}},
                            {{{"0", "0", "0"}, 1.0 / 3},
                             {{"1", "0", "1"}, 1.0 / 3},
                             {{"2", "1", "0"}, 1.0 / 3}});
}

/// S = R1 XOR R2 with uniform independent inputs: purely synergistic.
inline joint_distribution exclusive_or() {
  return joint_distribution({"S", "R1", "R2"}, {{"0", "1"}, {"0", "1"}, {"0", "1"}},
                            {{{"0", "0", "0"}, 0.25},
                             {{"1", "0", "1"}, 0.25},
                             {{"1", "1", "0"}, 0.25},
                             {{"0", "1", "1"}, 0.25}});
}

/// R1 and R2 are both copies of a uniform binary S: purely redundant.
inline joint_distribution copies2() {
  return joint_distribution({"S", "R1", "R2"}, {{"0", "1"}, {"0", "1"}, {"0", "1"}},
                            {{{"0", "0", "0"}, 0.5}, {{"1", "1", "1"}, 0.5}});
}

/// S = R1 XOR R2 XOR R3 with uniform inputs: third-order synergy only.
inline joint_distribution parity3() {
  std::vector<std::pair<std::vector<std::string>, double>> entries;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        entries.push_back({{std::to_string(a ^ b ^ c), std::to_string(a), std::to_string(b),
                            std::to_string(c)},
                           0.125});
  return joint_distribution({"S", "R1", "R2", "R3"},
                            {{"0", "1"}, {"0", "1"}, {"0", "1"}, {"0", "1"}}, entries);
}

/// R1, R2 and R3 are all copies of a uniform binary S: third-order redundancy only.
inline joint_distribution copy3() {
  return joint_distribution({"S", "R1", "R2", "R3"},
                            {{"0", "1"}, {"0", "1"}, {"0", "1"}, {"0", "1"}},
                            {{{"0", "0", "0", "0"}, 0.5}, {{"1", "1", "1", "1"}, 0.5}});
}

struct bundled_distribution {
  std::string file_name;
  std::string comment;
  joint_distribution dist;
};

/// The distributions written by the `examples` CLI command.
inline std::vector<bundled_distribution> bundled() {
  return {
      {"fig4a.json",
       "Ternary target, two binary predictors, three equiprobable outcomes; each predictor "
       "resolves one target outcome, the pair resolves the third.",
       fig4a()},
      {"xor.json", "S = R1 XOR R2 with uniform independent inputs; purely synergistic.",
       exclusive_or()},
      {"copies2.json", "R1 and R2 are both copies of a uniform binary S; purely redundant.",
       copies2()},
      {"parity3.json", "S = R1 XOR R2 XOR R3 with uniform inputs; third-order synergy.",
       parity3()},
      {"copy3.json", "R1, R2 and R3 are all copies of a uniform binary S; third-order redundancy.",
       copy3()},
  };
}

}  // namespace pid::examples
