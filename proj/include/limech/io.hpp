#pragma once

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "limech/certify.hpp"
#include "limech/construct.hpp"
#include "limech/error.hpp"
#include "limech/mechanism.hpp"
#include "limech/optimize.hpp"
#include "limech/oracle.hpp"

namespace limech::io {

using json = nlohmann::ordered_json;

/// All emitted numbers use fixed 12-significant-digit formatting so repeated
/// runs produce byte-identical files.
inline std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// The double that a formatted value parses back to.
inline double output_rounded(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

using Mechanism = std::variant<IndependentMechanism, JointMechanism>;

namespace detail {

inline void expect_keys(const json& j, std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) known = true;
    if (!known) fail(errc::parse_error, "unknown field '" + item.key() + "'");
  }
}

inline std::vector<std::string> parse_labels(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_array())
    fail(errc::parse_error, std::string("missing or non-array '") + field + "'");
  std::vector<std::string> labels;
  for (const auto& v : j[field]) {
    if (!v.is_string()) fail(errc::parse_error, std::string("'") + field + "' entries must be strings");
    labels.push_back(v.get<std::string>());
  }
  return labels;
}

inline std::vector<Edge> parse_edges(const json& j, int n_datasets) {
  if (!j.contains("edges") || !j["edges"].is_array())
    fail(errc::parse_error, "missing or non-array 'edges'");
  std::vector<Edge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      fail(errc::parse_error, "each edge must be a pair of integers");
    const int i = e[0].get<int>();
    const int k = e[1].get<int>();
    if (i < 1 || i > n_datasets || k < 1 || k > n_datasets)
      fail(errc::parse_error, "edge index out of range (indices are 1-based)");
    edges.push_back({i - 1, k - 1});
  }
  return edges;
}

inline double parse_probability(const json& v, const std::string& where) {
  if (!v.is_number()) fail(errc::parse_error, where + " must be a number");
  return v.get<double>();
}

}  // namespace detail

/// Parses the mechanism JSON format. Indices in files are 1-based; unknown
/// fields are rejected.
inline Mechanism parse_mechanism(const std::string& text, std::size_t cap = kDefaultJointCap) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(errc::parse_error, "mechanism file must be a JSON object");
  if (!j.contains("type") || !j["type"].is_string())
    fail(errc::parse_error, "missing or non-string 'type'");
  const std::string type = j["type"].get<std::string>();

  if (type == "independent") {
    detail::expect_keys(j, {"type", "datasets", "alphabet", "edges", "rows"});
    auto datasets = detail::parse_labels(j, "datasets");
    auto alphabet_labels = detail::parse_labels(j, "alphabet");
    NeighborhoodGraph graph(std::move(datasets), detail::parse_edges(j, static_cast<int>(j["datasets"].size())));
    OutputAlphabet alphabet(std::move(alphabet_labels));
    if (!j.contains("rows") || !j["rows"].is_array()) fail(errc::parse_error, "missing or non-array 'rows'");
    if (static_cast<int>(j["rows"].size()) != graph.size())
      fail(errc::parse_error, "'rows' must have one row per dataset");
    std::vector<double> rows;
    rows.reserve(static_cast<std::size_t>(graph.size()) * static_cast<std::size_t>(alphabet.size()));
    int row_index = 1;
    for (const auto& row : j["rows"]) {
      if (!row.is_array() || static_cast<int>(row.size()) != alphabet.size())
        fail(errc::parse_error, "row " + std::to_string(row_index) + " must list one probability per value");
      for (const auto& v : row)
        rows.push_back(detail::parse_probability(v, "row " + std::to_string(row_index)));
      ++row_index;
    }
    return IndependentMechanism(std::move(graph), std::move(alphabet), std::move(rows));
  }

  if (type == "joint") {
    detail::expect_keys(j, {"type", "datasets", "alphabet", "edges", "probs", "sparse"});
    auto datasets = detail::parse_labels(j, "datasets");
    auto alphabet_labels = detail::parse_labels(j, "alphabet");
    NeighborhoodGraph graph(std::move(datasets), detail::parse_edges(j, static_cast<int>(j["datasets"].size())));
    OutputAlphabet alphabet(std::move(alphabet_labels));
    OutcomeIndexer idx(graph.size(), alphabet.size(), cap);
    const bool has_dense = j.contains("probs");
    const bool has_sparse = j.contains("sparse");
    if (has_dense == has_sparse)
      fail(errc::parse_error, "joint mechanism needs exactly one of 'probs' or 'sparse'");
    std::vector<double> probs;
    if (has_dense) {
      if (!j["probs"].is_array()) fail(errc::parse_error, "'probs' must be an array");
      if (j["probs"].size() != idx.total())
        fail(errc::parse_error, "'probs' must have |V|^|D| = " + std::to_string(idx.total()) + " entries");
      probs.reserve(idx.total());
      for (const auto& v : j["probs"]) probs.push_back(detail::parse_probability(v, "'probs' entry"));
    } else {
      if (!j["sparse"].is_object()) fail(errc::parse_error, "'sparse' must be an object");
      probs.assign(idx.total(), 0.0);
      for (const auto& item : j["sparse"].items()) {
        std::vector<int> tuple;
        std::stringstream key(item.key());
        std::string part;
        while (std::getline(key, part, ',')) {
          char* end = nullptr;
          const long v = std::strtol(part.c_str(), &end, 10);
          if (end == part.c_str() || *end != '\0' || v < 1 || v > alphabet.size())
            fail(errc::parse_error, "bad sparse key '" + item.key() + "'");
          tuple.push_back(static_cast<int>(v - 1));
        }
        if (static_cast<int>(tuple.size()) != graph.size())
          fail(errc::parse_error, "sparse key '" + item.key() + "' has wrong tuple length");
        probs[idx.index(tuple)] = detail::parse_probability(item.value(), "sparse entry '" + item.key() + "'");
      }
    }
    return JointMechanism(std::move(graph), std::move(alphabet), std::move(probs), cap);
  }

  fail(errc::parse_error, "'type' must be \"independent\" or \"joint\"");
}

inline json mechanism_to_json(const IndependentMechanism& mech) {
  json j;
  j["type"] = "independent";
  j["datasets"] = mech.graph().labels();
  j["alphabet"] = mech.alphabet().labels();
  json edges = json::array();
  for (auto [i, k] : mech.graph().edges()) edges.push_back({i + 1, k + 1});
  j["edges"] = std::move(edges);
  json rows = json::array();
  for (int i = 0; i < mech.n_datasets(); ++i) {
    json row = json::array();
    for (double v : mech.row(i)) row.push_back(output_rounded(v));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline json mechanism_to_json(const JointMechanism& mech) {
  json j;
  j["type"] = "joint";
  j["datasets"] = mech.graph().labels();
  j["alphabet"] = mech.alphabet().labels();
  json edges = json::array();
  for (auto [i, k] : mech.graph().edges()) edges.push_back({i + 1, k + 1});
  j["edges"] = std::move(edges);
  json probs = json::array();
  for (double v : mech.probs()) probs.push_back(output_rounded(v));
  j["probs"] = std::move(probs);
  return j;
}

inline json mechanism_to_json(const Mechanism& mech) {
  return std::visit([](const auto& m) { return mechanism_to_json(m); }, mech);
}

inline json certificate_to_json(const certify::CertificateReport& report) {
  json j;
  json edges = json::array();
  for (const auto& e : report.edges) {
    json entry;
    entry["i"] = e.i + 1;
    entry["k"] = e.k + 1;
    entry["delta"] = output_rounded(e.delta);
    entry["influence"] = output_rounded(e.influence);
    edges.push_back(std::move(entry));
  }
  j["edges"] = std::move(edges);
  j["delta"] = output_rounded(report.delta);
  j["influence"] = output_rounded(report.influence);
  j["nontrivial"] = report.nontrivial;
  if (report.witness) {
    json w;
    w["i"] = report.witness->i + 1;
    w["k"] = report.witness->k + 1;
    w["value"] = report.witness->value + 1;
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  if (report.bounds) {
    json b;
    b["half"] = report.bounds->nontrivial_half ? json(*report.bounds->nontrivial_half) : json(nullptr);
    b["square"] =
        report.bounds->nontrivial_square ? json(output_rounded(*report.bounds->nontrivial_square)) : json(nullptr);
    b["maxprob"] = output_rounded(report.bounds->max_prob);
    j["bounds"] = std::move(b);
  }
  return j;
}

inline json audit_to_json(const oracle::AuditReport& report) {
  json j = json::array();
  for (const auto& suite : report) {
    json s;
    s["suite"] = suite.suite;
    s["trials"] = suite.trials;
    s["violations"] = suite.violations;
    s["pass"] = suite.pass;
    j.push_back(std::move(s));
  }
  return j;
}

inline std::string to_text(const json& j) { return j.dump(2) + "\n"; }

inline std::string tradeoff_csv(const std::vector<optimize::TradeoffRow>& rows) {
  std::string out = "U,epsilon,independent_influence,joint_influence\n";
  for (const auto& r : rows) {
    out += format_number(r.utility);
    out += ',';
    out += format_number(r.epsilon);
    out += ',';
    out += format_number(r.independent_influence);
    out += ',';
    out += format_number(r.joint_influence);
    out += '\n';
  }
  return out;
}

inline std::string region_csv(const std::vector<construct::RegionPoint>& points) {
  const bool has_z = !points.empty() && points.front().z.has_value();
  std::string out = has_z ? "x,y,z,simplex,dp,li,nontrivial\n" : "x,y,simplex,dp,li,nontrivial\n";
  for (const auto& p : points) {
    out += format_number(p.x);
    out += ',';
    out += format_number(p.y);
    if (has_z) {
      out += ',';
      out += format_number(*p.z);
    }
    out += ',';
    out += p.simplex ? '1' : '0';
    out += ',';
    out += p.dp ? '1' : '0';
    out += ',';
    out += p.li ? '1' : '0';
    out += ',';
    out += p.nontrivial ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline std::string region_filename(const std::string& kind, double epsilon, double delta,
                                   double iota) {
  return "region_" + kind + "_" + format_number(epsilon) + "_" + format_number(delta) + "_" +
         format_number(iota) + ".csv";
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Minimal reader for the CSVs this library emits (numeric cells only).
inline CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::stringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream fields(line);
    std::string cell;
    if (first) {
      while (std::getline(fields, cell, ',')) table.header.push_back(cell);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(fields, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) fail(errc::parse_error, "non-numeric CSV cell '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != table.header.size()) fail(errc::parse_error, "CSV row width mismatch");
    table.rows.push_back(std::move(row));
  }
  if (first) fail(errc::parse_error, "empty CSV");
  return table;
}

}  // namespace limech::io
