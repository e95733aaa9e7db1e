#pragma once

// JSON and CSV formats: table input, catalog/orbit/feasibility/frequency
// exports, and the witness archive.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "simpson/errors.hpp"
#include "simpson/experiments.hpp"
#include "simpson/feasibility.hpp"
#include "simpson/orbits.hpp"
#include "simpson/rational.hpp"
#include "simpson/tables.hpp"
#include "simpson/triangulation.hpp"

namespace simpson {

using nlohmann::json;

inline constexpr int kCatalogFormatVersion = 1;

// ---------------------------------------------------------------------------
// Table input

namespace detail {

inline Rational entry_from_json(const json& e) {
  if (e.is_string()) return parse_rational(e.get<std::string>());
  if (e.is_number_integer()) return Rational(e.get<long long>());
  throw DomainError("table entries must be rational strings like \"3/7\" or integers");
}

template <std::size_t N>
std::array<Rational, N> entries_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("entries")) throw DomainError("table JSON needs an \"entries\" array");
  const json& arr = doc.at("entries");
  if (!arr.is_array() || arr.size() != N) {
    throw DomainError("\"entries\" must hold exactly " + std::to_string(N) + " values");
  }
  std::array<Rational, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = entry_from_json(arr[i]);
  return out;
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("malformed JSON: ") + e.what());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

/// 2x2x2 table; zeros are allowed here and rejected only when classifying.
inline NonnegTable3 parse_table3(const std::string& text) {
  return NonnegTable3(detail::entries_from_json<8>(detail::parse_json_text(text)));
}
inline NonnegTable3 load_table3(const std::filesystem::path& path) { return parse_table3(detail::read_file(path)); }

inline Table2 parse_table2(const std::string& text) {
  return Table2(detail::entries_from_json<4>(detail::parse_json_text(text)));
}
inline Table2 load_table2(const std::filesystem::path& path) { return parse_table2(detail::read_file(path)); }

template <std::size_t N>
json entries_to_json(const std::array<Rational, N>& entries) {
  json arr = json::array();
  for (const auto& e : entries) arr.push_back(format_rational(e));
  return json{{"entries", arr}};
}

// ---------------------------------------------------------------------------
// Exports

inline json tetrahedron_to_json(const Tetrahedron& t) {
  json arr = json::array();
  for (const auto& v : t.vertices()) arr.push_back(v.code());
  return arr;
}

inline json features_to_json(const TriangulationFeatures& f) {
  json diagonals = json::array();
  for (const auto& d : f.face_diagonals) diagonals.push_back({d.a.code(), d.b.code()});
  json parallel = json::array();
  for (bool p : f.opposite_faces_parallel) parallel.push_back(p);
  auto names = [](const std::vector<Vertex>& vs) {
    json arr = json::array();
    for (const auto& v : vs) arr.push_back(v.name());
    return arr;
  };
  return json{{"faceDiagonals", diagonals},
              {"incidence", f.incidence},
              {"fullVertices", names(f.full_vertices)},
              {"emptyVertices", names(f.empty_vertices)},
              {"hasHyperdiagonal", f.has_hyperdiagonal},
              {"oppositeFacesParallel", parallel},
              {"tetrahedronCount", f.tetrahedron_count}};
}

inline json triangulation_to_json(const Triangulation& t, const Catalog& cat = catalog()) {
  json tets = json::array();
  for (const auto& tet : t.tetrahedra()) tets.push_back(tetrahedron_to_json(tet));
  json constraints = json::array();
  for (const auto& c : t.constraints()) constraints.push_back(c.to_string());
  return json{{"canonicalId", t.id()},
              {"tetrahedra", tets},
              {"constraints", constraints},
              {"features", features_to_json(t.features())},
              {"typeClass", t.type_class()},
              {"type", to_string(t.type())},
              {"orbitMembers", cat.orbit_members(t.type_class())}};
}

inline json catalog_to_json(const Catalog& cat = catalog()) {
  json entries = json::array();
  for (const auto& t : cat.entries()) entries.push_back(triangulation_to_json(t, cat));
  return json{{"formatVersion", kCatalogFormatVersion}, {"count", cat.size()}, {"entries", entries}};
}

inline json orbits_to_json(const OrbitPartition& part) {
  json classes = json::array();
  for (const auto& c : part.classes()) {
    classes.push_back(json{{"representative", c.representative}, {"size", c.size()}, {"members", c.members}});
  }
  return json{{"arity", part.arity()},
              {"classCount", part.size()},
              {"totalMembers", part.total_members()},
              {"classes", classes}};
}

inline std::string key_to_dashed(const ClassKey& key) {
  std::string s;
  for (std::size_t i = 0; i < key.size(); ++i) s += (i ? "-" : "") + std::to_string(key[i]);
  return s;
}

/// One row per class: classRep, arity, obstructed, obstructingVertex.
inline std::string feasibility_csv(const OrbitPartition& part, const Catalog& cat = catalog()) {
  std::string out = "classRep,arity,obstructed,obstructingVertex\n";
  for (const auto& c : part.classes()) {
    const auto v = obstruction_of_key(c.representative, cat);
    out += key_to_dashed(c.representative) + "," + std::to_string(part.arity()) + "," +
           (v.obstructed ? "true" : "false") + "," + (v.vertex ? v.vertex->name() : "") + "\n";
  }
  return out;
}

inline json verdict_to_json(const ObstructionVerdict& v) {
  json j{{"obstructed", v.obstructed}};
  j["obstructingVertex"] = v.vertex ? json(v.vertex->name()) : json(nullptr);
  return j;
}

inline json frequency_to_json(const FrequencyEstimate& e) {
  json j{{"dimension", e.dimension},
         {"seed", e.seed},
         {"workers", e.workers},
         {"tolerance", e.tolerance},
         {"sampleCount", e.sample_count},
         {"discards", e.degenerate_discards},
         {"counts",
          {{"sameTriangulation", e.same_triangulation},
           {"conversion", e.conversion},
           {"sameNoConversion", e.same_no_conversion}}},
         {"estimates",
          {{"sameTriangulation", e.same_rate()},
           {"conversion", e.conversion_rate()},
           {"sameNoConversion", e.same_no_conversion_rate()}}},
         {"standardErrors",
          {{"sameTriangulation", e.standard_error(e.same_triangulation)},
           {"conversion", e.standard_error(e.conversion)},
           {"sameNoConversion", e.standard_error(e.same_no_conversion)}}}};
  if (e.dimension == 2) {
    j["reversal"] = {{"estimate", e.conversion_rate()}, {"standardError", e.standard_error(e.conversion)}};
  }
  return j;
}

inline std::string correlation_string(const CorrelationProfile& p) {
  std::string s;
  for (Sign x : p.mutual) s += sign_char(x);
  s += " ";
  for (Sign x : p.marginal) s += sign_char(x);
  s += " ";
  for (Sign x : p.conditional) s += sign_char(x);
  return s;
}

inline json correlation_to_json(const CorrelationProfile& p) {
  auto signs = [](const auto& arr) {
    std::string s;
    for (Sign x : arr) s += sign_char(x);
    return s;
  };
  return json{{"mutual", signs(p.mutual)}, {"marginal", signs(p.marginal)}, {"conditional", signs(p.conditional)}};
}

/// Everything `classify` reports about one positive table.
inline json classification_to_json(const Table3& table, const Catalog& cat = catalog()) {
  const Triangulation& t = cat.classify(table);
  json j = triangulation_to_json(t, cat);
  j["input"] = entries_to_json(table.entries())["entries"];
  j["formSigns"] = eval_form_signs(table).to_string();
  j["correlation"] = correlation_to_json(correlation_profile(table));
  return j;
}

// ---------------------------------------------------------------------------
// Witness archive
//
// CSV columns: classA,classB,classC,F000..F111,G000..G111,verifiedAt.
// classC is empty for pair witnesses. Entries are "num/den" strings.

inline std::string witness_csv_header() {
  std::string h = "classA,classB,classC";
  for (const char* t : {"F", "G"})
    for (const auto& v : all_vertices()) h += std::string(",") + t + v.name();
  return h + ",verifiedAt";
}

inline std::string witness_to_csv_row(const Witness& w) {
  std::string row = std::to_string(w.key[0]) + "," + std::to_string(w.key[1]) + ",";
  if (w.key.size() == 3) row += std::to_string(w.key[2]);
  for (const Table3* t : {&w.f, &w.g})
    for (const auto& e : t->entries()) row += "," + format_rational_fraction(e);
  return row + "," + w.verified_at;
}

namespace detail {
inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline int parse_id(const std::string& s) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw DomainError("bad id");
    return v;
  } catch (const std::logic_error&) {
    throw DomainError("bad triangulation id \"" + s + "\" in witness archive");
  }
}
}  // namespace detail

/// Parses one archive row without verifying it.
inline Witness witness_from_csv_row(const std::string& line) {
  const auto cells = detail::split_csv(line);
  if (cells.size() != 3 + 16 + 1) throw DomainError("witness row needs 20 columns: " + line);
  ClassKey key{detail::parse_id(cells[0]), detail::parse_id(cells[1])};
  if (!cells[2].empty()) key.push_back(detail::parse_id(cells[2]));
  std::array<Rational, 8> f, g;
  for (int i = 0; i < 8; ++i) {
    f[i] = parse_rational(cells[3 + i]);
    g[i] = parse_rational(cells[11 + i]);
  }
  return Witness{key, Table3(f), Table3(g), cells[19]};
}

inline std::vector<std::string> read_archive_rows(const std::filesystem::path& path) {
  std::vector<std::string> rows;
  if (!std::filesystem::exists(path)) return rows;
  std::istringstream in(detail::read_file(path));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      header = false;
      if (line != witness_csv_header()) throw DomainError("unexpected witness archive header in " + path.string());
      continue;
    }
    if (!line.empty()) rows.push_back(line);
  }
  return rows;
}

/// Loads and exactly re-verifies every witness; a row that fails is an error.
inline std::vector<Witness> load_witness_archive(const std::filesystem::path& path, const Catalog& cat = catalog()) {
  std::vector<Witness> out;
  for (const auto& row : read_archive_rows(path)) {
    Witness w = witness_from_csv_row(row);
    if (!verify_witness(w, cat)) throw DomainError("witness " + key_to_string(w.key) + " fails exact verification");
    out.push_back(std::move(w));
  }
  return out;
}

/// Replaces the archive with existing rows plus `added`, via a temp file in
/// the same directory and a rename.
inline void append_witnesses(const std::filesystem::path& path, const std::vector<Witness>& added) {
  std::vector<std::string> rows = read_archive_rows(path);
  for (const auto& w : added) rows.push_back(witness_to_csv_row(w));
  const std::filesystem::path dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::filesystem::create_directories(dir);
  const std::filesystem::path tmp = dir / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write " + tmp.string());
    out << witness_csv_header() << "\n";
    for (const auto& r : rows) out << r << "\n";
    out.flush();
    if (!out) throw DomainError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline json witness_to_json(const Witness& w) {
  return json{{"key", w.key},
              {"conversion", w.is_conversion()},
              {"f", entries_to_json(w.f.entries())["entries"]},
              {"g", entries_to_json(w.g.entries())["entries"]},
              {"verifiedAt", w.verified_at}};
}

}  // namespace simpson
