#pragma once

// Canonical JSON forms.  Characters serialize as a list of
// {z: [ints], q: int, coeff: "rational"} sorted by (q, z) lexicographically;
// matrices as arrays of rational strings; flag and resolution points as
// slot-keyed objects.  All emitters are deterministic.

#include <json.hpp>

#include <string>

#include "characters.hpp"
#include "combinatorics.hpp"
#include "geometry.hpp"
#include "pbw_oracle.hpp"

namespace degflag {

using Json = nlohmann::ordered_json;

inline Json to_json(const LaurentPolynomial& p) {
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms()) {
    Json term;
    term["z"] = m.z;
    term["q"] = m.q;
    term["coeff"] = to_string(c);
    terms.push_back(std::move(term));
  }
  return terms;
}

inline Json to_json(const QCharacter& ch) { return to_json(ch.polynomial); }

inline Json to_json(const GradedCharacter& ch) { return to_json(ch.to_qcharacter()); }

inline Json to_json(const QMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string slot_key(RootIndex r) {
  return std::to_string(r.i) + "," + std::to_string(r.j);
}

inline Json to_json(const FlagPoint& x) {
  Json out;
  for (int d = 1; d <= x.n - 1; ++d) out[std::to_string(d)] = to_json(x.V[d - 1]);
  return out;
}

inline Json to_json(const RPoint& p) {
  SlotTable t(p.n);
  Json out;
  for (int id = 0; id < t.size(); ++id) {
    if (!p.present[id]) continue;
    out[slot_key(t.slot(id))] = to_json(p.slots[id]);
  }
  return out;
}

inline Json to_json(const BaseCellLabel& label) {
  Json out = Json::array();
  for (const auto& s : label.sets) out.push_back(s.elements());
  return out;
}

inline Json to_json(const SmallnessReport& report) {
  Json out;
  out["n"] = report.n;
  out["M"] = report.M;
  out["verdict"] = to_string(report.verdict);
  out["admissible_count"] = report.admissible_count;
  out["base_cell_count"] = report.base_cell_count;
  out["dim_histogram"] = report.dim_histogram;
  Json witnesses = Json::array();
  for (const auto& w : report.witnesses) {
    Json jw;
    jw["diagonal"] = to_json(w.label);
    jw["base_dim"] = w.base_dim;
    jw["fiber_dim"] = w.fiber_dim;
    jw["defect"] = w.defect;
    witnesses.push_back(std::move(jw));
  }
  out["witnesses"] = std::move(witnesses);
  return out;
}

inline Json to_json(const QuiverDimensionReport& report) {
  Json out;
  out["n"] = report.n;
  out["samples"] = report.samples;
  out["ambient_dim"] = report.ambient_dim;
  out["equation_count"] = report.equation_count;
  out["expected_dim"] = report.expected_dim;
  out["all_full_rank"] = report.all_full_rank;
  out["ranks"] = report.ranks;
  return out;
}

}  // namespace degflag
