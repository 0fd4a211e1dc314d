/*!
  \file io.hpp
  \brief Loading distributions from JSON and CSV, and serializing results.

  Distribution JSON schema:
    {"variables": [names...], "states": [[symbols...]...],
     "probs": [{"outcome": [v0,...], "p": number}, ...]}
  with variable 0 as the target.  State and outcome entries may be strings or
  integers.  A top-level "comment" field is allowed and ignored on load.

  CSV: a header row with the variable names plus a final "p" column, then one
  outcome per row.  Alphabets are taken in order of first appearance.

  Result values are rounded to six decimal places; JSON objects keep a stable
  key order (lattice layer, then canonical label).
*/

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "decomposition.hpp"
#include "distribution.hpp"
#include "interaction.hpp"
#include "lattice.hpp"

namespace pid {

/// Structurally malformed input (unparseable file, missing keys, unknown symbols).
class format_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Scale factor converting bits to nats at presentation time.
inline constexpr double nats_per_bit = 0.6931471805599453;

inline double output_round(double value, double unit_scale = 1.0) {
  double scaled = std::round(value * unit_scale * 1e6) / 1e6;
  return scaled == 0.0 ? 0.0 : scaled;
}

inline std::string format_value(double value, double unit_scale = 1.0) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6f", value * unit_scale + 0.0);
  return buffer;
}

namespace detail {

inline std::string json_symbol(const nlohmann::json& v, const char* context) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  throw format_error(std::string(context) + ": symbols must be strings or integers");
}

}  // namespace detail

inline joint_distribution distribution_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw format_error("distribution: expected a JSON object");
  for (const char* key : {"variables", "states", "probs"})
    if (!j.contains(key)) throw format_error(std::string("distribution: missing key '") + key + "'");
  if (!j["variables"].is_array() || !j["states"].is_array() || !j["probs"].is_array())
    throw format_error("distribution: 'variables', 'states' and 'probs' must be arrays");

  std::vector<std::string> names;
  for (const auto& v : j["variables"]) {
    if (!v.is_string()) throw format_error("distribution: variable names must be strings");
    names.push_back(v.get<std::string>());
  }
  std::vector<std::vector<std::string>> states;
  for (const auto& alphabet : j["states"]) {
    if (!alphabet.is_array()) throw format_error("distribution: each state list must be an array");
    std::vector<std::string> symbols;
    for (const auto& s : alphabet) symbols.push_back(detail::json_symbol(s, "states"));
    states.push_back(std::move(symbols));
  }
  std::vector<std::pair<std::vector<std::string>, double>> entries;
  for (const auto& row : j["probs"]) {
    if (!row.is_object() || !row.contains("outcome") || !row.contains("p"))
      throw format_error("distribution: each probs entry needs 'outcome' and 'p'");
    if (!row["outcome"].is_array()) throw format_error("distribution: 'outcome' must be an array");
    if (!row["p"].is_number()) throw format_error("distribution: 'p' must be a number");
    std::vector<std::string> symbols;
    for (const auto& s : row["outcome"]) symbols.push_back(detail::json_symbol(s, "outcome"));
    entries.emplace_back(std::move(symbols), row["p"].get<double>());
  }
  try {
    return joint_distribution(std::move(names), std::move(states), entries);
  } catch (const std::invalid_argument& e) {
    throw format_error(e.what());  // structural problem in the file
  }
}

inline nlohmann::ordered_json distribution_to_json(const joint_distribution& d,
                                                   const std::string& comment = {}) {
  nlohmann::ordered_json out;
  if (!comment.empty()) out["comment"] = comment;
  out["variables"] = d.variable_names();
  out["states"] = d.states();
  nlohmann::ordered_json probs = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < d.support_size(); ++i) {
    nlohmann::ordered_json row;
    nlohmann::ordered_json symbols = nlohmann::ordered_json::array();
    for (std::size_t v = 0; v < d.variable_count(); ++v)
      symbols.push_back(d.states()[v][d.outcome_at(i)[v]]);
    row["outcome"] = std::move(symbols);
    row["p"] = d.probability_at(i);
    probs.push_back(std::move(row));
  }
  out["probs"] = std::move(probs);
  return out;
}

inline joint_distribution distribution_from_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
      std::size_t b = field.find_first_not_of(" \t");
      std::size_t e = field.find_last_not_of(" \t");
      fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return fields;
  };
  std::string line;
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> states;
  std::vector<std::pair<std::vector<std::string>, double>> entries;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (!header_seen) {
      if (fields.size() < 2 || fields.back() != "p")
        throw format_error("csv: header must list the variables followed by a final 'p' column");
      names.assign(fields.begin(), fields.end() - 1);
      states.assign(names.size(), {});
      header_seen = true;
      continue;
    }
    if (fields.size() != names.size() + 1)
      throw format_error("csv: row has " + std::to_string(fields.size()) + " fields, expected " +
                         std::to_string(names.size() + 1));
    double p = 0.0;
    try {
      std::size_t used = 0;
      p = std::stod(fields.back(), &used);
      if (used != fields.back().size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw format_error("csv: bad probability '" + fields.back() + "'");
    }
    std::vector<std::string> symbols(fields.begin(), fields.end() - 1);
    for (std::size_t v = 0; v < symbols.size(); ++v)
      if (std::find(states[v].begin(), states[v].end(), symbols[v]) == states[v].end())
        states[v].push_back(symbols[v]);
    entries.emplace_back(std::move(symbols), p);
  }
  if (!header_seen) throw format_error("csv: empty input");
  try {
    return joint_distribution(std::move(names), std::move(states), entries);
  } catch (const std::invalid_argument& e) {
    throw format_error(e.what());
  }
}

/// Load a distribution, dispatching on the file extension (.json or .csv).
inline joint_distribution load_distribution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open '" + path.string() + "'");
  if (path.extension() == ".csv") return distribution_from_csv(in);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw format_error("'" + path.string() + "': " + e.what());
  }
  return distribution_from_json(j);
}

inline nlohmann::ordered_json decomposition_to_json(const pi_decomposition& decomposition,
                                                    double unit_scale = 1.0) {
  nlohmann::ordered_json out;
  out["target"] = decomposition.target;
  out["total_bits"] = output_round(decomposition.total, unit_scale);
  nlohmann::ordered_json atoms, redundancy;
  for (std::size_t id = 0; id < decomposition.lattice->size(); ++id) {
    const std::string& label = decomposition.lattice->label(id);
    atoms[label] = output_round(decomposition.atoms[id], unit_scale);
    redundancy[label] = output_round(decomposition.redundancy[id], unit_scale);
  }
  out["atoms"] = std::move(atoms);
  out["imin"] = std::move(redundancy);
  out["units"] = unit_scale == 1.0 ? "bits" : "nats";
  return out;
}

inline nlohmann::ordered_json lattice_to_json(const redundancy_lattice& lattice) {
  nlohmann::ordered_json out;
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (std::size_t id = 0; id < lattice.size(); ++id) nodes.push_back(lattice.label(id));
  nlohmann::ordered_json covers = nlohmann::ordered_json::array();
  for (std::size_t id = 0; id < lattice.size(); ++id)
    for (std::size_t child : lattice.covered_by(id))
      covers.push_back({lattice.label(child), lattice.label(id)});
  out["nodes"] = std::move(nodes);
  out["covers"] = std::move(covers);
  return out;
}

inline nlohmann::ordered_json interaction_report_to_json(const interaction_report& report,
                                                         double unit_scale = 1.0) {
  nlohmann::ordered_json out;
  out["interaction_bits"] = output_round(report.interaction_bits, unit_scale);
  nlohmann::ordered_json signature, signed_atoms;
  for (std::size_t id = 0; id < report.decomposition.lattice->size(); ++id) {
    if (report.signature.coefficients[id] == 0) continue;
    const std::string& label = report.decomposition.lattice->label(id);
    signature[label] = report.signature.coefficients[id];
    signed_atoms[label] = output_round(report.signed_atom(id), unit_scale);
  }
  out["signature"] = std::move(signature);
  out["signed_atoms"] = std::move(signed_atoms);
  if (report.synergy_bits) {
    out["synergy_bits"] = output_round(*report.synergy_bits, unit_scale);
    out["redundancy_bits"] = output_round(*report.redundancy_bits, unit_scale);
    out["difference_bits"] = output_round(*report.synergy_bits - *report.redundancy_bits, unit_scale);
  }
  out["units"] = unit_scale == 1.0 ? "bits" : "nats";
  return out;
}

}  // namespace pid
