#pragma once

// Command-line front end. Kept in a header so the tests can drive it
// in-process with their own streams.
//
// Exit codes: 0 success, 1 usage/parse/domain error, 2 degenerate table.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simpson/errors.hpp"
#include "simpson/experiments.hpp"
#include "simpson/feasibility.hpp"
#include "simpson/io.hpp"
#include "simpson/orbits.hpp"
#include "simpson/tables.hpp"
#include "simpson/triangulation.hpp"

namespace simpson::cli {

struct CliConfig {
  std::uint64_t seed = 0;
  std::uint64_t samples = 1'000'000;
  std::uint64_t budget = 10'000'000;
  int workers = default_worker_count();
  std::string format = "json";
  double tolerance = kDefaultTolerance;
  std::string out;

  SamplerConfig sampler() const { return SamplerConfig{seed, workers, tolerance}; }
};

namespace detail {

/// "3/7", "42" or a decimal literal; decimals are taken at their exact binary value.
inline Rational parse_amount(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const DomainError&) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(text, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != text.size() || !std::isfinite(v)) throw DomainError("not a number: \"" + text + "\"");
    return rational_from_double(v);
  }
}

/// Writes to --out when given, otherwise to the stream.
inline void emit(const CliConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << "\n";
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) throw DomainError("cannot write " + cfg.out);
  file << text;
  if (!text.empty() && text.back() != '\n') file << "\n";
}

inline std::string constraints_text(const Triangulation& t) {
  std::string s;
  for (const auto& c : t.constraints()) s += (s.empty() ? "" : " ") + c.to_string();
  return s;
}

inline std::string triangulation_line(const Triangulation& t) {
  return std::to_string(t.id()) + " type " + to_string(t.type()) + " | " + t.to_string() + " | " +
         constraints_text(t);
}

inline ClassKey key_from_flags(const std::vector<int>& pair, const std::vector<int>& triple) {
  if (!pair.empty() && !triple.empty()) throw DomainError("give either --pair or --triple, not both");
  return pair.empty() ? ClassKey(triple.begin(), triple.end()) : ClassKey(pair.begin(), pair.end());
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Simpson conversions in 2x2x2 tables: classification, symmetry classes, obstructions and sampling"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--samples", cfg.samples, "Monte Carlo sample count")->capture_default_str();
  app.add_option("--budget", cfg.budget, "Witness search attempts (per class, or per summand group in bulk mode)")
      ->capture_default_str();
  app.add_option("--workers", cfg.workers, "Worker threads (default: SIMPSON_WORKERS or hardware threads)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  app.add_option("--tolerance", cfg.tolerance, "Float classification tolerance")->capture_default_str();
  app.add_option("--out", cfg.out, "Output path (search: witness archive)");

  std::string table_path;
  std::string smoothing;
  auto* classify = app.add_subcommand("classify", "Exact triangulation of a 2x2x2 table");
  classify->add_option("table", table_path, "Table JSON file")->required();
  classify->add_option("--smoothing", smoothing, "Add EPS to every entry first (example data only)");

  auto* catalog_cmd = app.add_subcommand("catalog", "Export the 74 triangulations");

  int arity = 2;
  auto* orbits_cmd = app.add_subcommand("orbits", "Symmetry classes of tuples of triangulations");
  orbits_cmd->add_option("--arity", arity, "1, 2 or 3")->check(CLI::Range(1, 3))->capture_default_str();

  std::vector<int> pair, triple;
  auto* feas = app.add_subcommand("feasibility", "Parity obstruction for one class or a whole arity");
  feas->add_option("--pair", pair, "Ordered pair A B")->expected(2);
  feas->add_option("--triple", triple, "Summands A B and sum C")->expected(3);
  feas->add_option("--arity", arity, "Report every class of arity 2 or 3")->check(CLI::Range(2, 3));

  auto* search = app.add_subcommand("search", "Rejection-sample witnesses and append them to the archive");
  search->add_option("--pair", pair, "Both tables induce A, the sum induces B")->expected(2);
  search->add_option("--triple", triple, "Tables induce A and B, the sum induces C")->expected(3);
  search->add_option("--arity", arity, "Search every non-obstructed class of arity 2 or 3")->check(CLI::Range(2, 3));

  int dim = 3;
  auto* mc = app.add_subcommand("montecarlo", "Estimate reversal (dim 2) or conversion (dim 3) frequencies");
  mc->add_option("--dim", dim, "2 or 3")->check(CLI::Range(2, 3))->capture_default_str();

  std::string f_path, g_path;
  auto* reversal = app.add_subcommand("reversal", "Two-dimensional reversal test on two 2x2 tables");
  reversal->add_option("f", f_path, "First 2x2 table JSON")->required();
  reversal->add_option("g", g_path, "Second 2x2 table JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const bool text = cfg.format == "text";
    const bool csv = cfg.format == "csv";

    if (*classify) {
      const NonnegTable3 raw = load_table3(table_path);
      std::optional<Rational> eps;
      if (!smoothing.empty()) eps = detail::parse_amount(smoothing);
      if (!eps && !raw.strictly_positive()) {
        throw DomainError("table has zero entries; classification needs positive entries (see --smoothing)");
      }
      const Table3 table = eps ? raw.smoothed(*eps) : raw.positive();
      const Triangulation& t = catalog().classify(table);
      if (text) {
        std::ostringstream s;
        s << "triangulation " << t.id() << " (type " << to_string(t.type()) << ")\n";
        s << "tetrahedra: " << t.to_string() << "\n";
        s << "constraints: " << detail::constraints_text(t) << "\n";
        s << "form signs: " << eval_form_signs(table).to_string() << "\n";
        s << "correlation: " << correlation_string(correlation_profile(table)) << "\n";
        if (eps) s << "smoothing: " << format_rational(*eps) << " (smoothed input)\n";
        detail::emit(cfg, out, s.str());
      } else {
        json j = classification_to_json(table);
        if (eps) j["smoothing"] = format_rational(*eps);
        detail::emit(cfg, out, j.dump(2));
      }
      return 0;
    }

    if (*catalog_cmd) {
      if (text) {
        std::string s;
        for (const auto& t : catalog().entries()) s += detail::triangulation_line(t) + "\n";
        detail::emit(cfg, out, s);
      } else {
        detail::emit(cfg, out, catalog_to_json().dump(2));
      }
      err << catalog().size() << " triangulations\n";
      return 0;
    }

    if (*orbits_cmd) {
      const OrbitPartition& part = orbit_partition(arity);
      const std::string summary = std::to_string(part.size()) + " classes";
      if (text || csv) {
        std::string s = text ? summary + " (" + std::to_string(part.total_members()) + " members)\n"
                             : "representative,size\n";
        for (const auto& c : part.classes()) {
          s += text ? key_to_string(c.representative) + " " + std::to_string(c.size()) + "\n"
                    : key_to_dashed(c.representative) + "," + std::to_string(c.size()) + "\n";
        }
        detail::emit(cfg, out, s);
      } else {
        detail::emit(cfg, out, orbits_to_json(part).dump(2));
      }
      err << summary << "\n";
      return 0;
    }

    if (*feas) {
      const ClassKey key = detail::key_from_flags(pair, triple);
      if (!key.empty()) {
        simpson::detail::validate_key(key, catalog());
        const auto v = obstruction_of_key(key);
        if (text) {
          detail::emit(cfg, out,
                       key_to_string(key) + (v.obstructed ? " obstructed at vertex " + v.vertex->name() : " not obstructed"));
        } else {
          json j = verdict_to_json(v);
          j["key"] = key;
          j["class"] = canonical_class_of(key);
          detail::emit(cfg, out, j.dump(2));
        }
        return 0;
      }
      const OrbitPartition& part = orbit_partition(arity);
      if (csv) {
        detail::emit(cfg, out, feasibility_csv(part));
      } else {
        json rows = json::array();
        int obstructed = 0;
        for (const auto& c : part.classes()) {
          json j = verdict_to_json(obstruction_of_key(c.representative));
          obstructed += j["obstructed"].get<bool>();
          j["classRep"] = c.representative;
          rows.push_back(j);
        }
        if (text) {
          detail::emit(cfg, out, std::to_string(obstructed) + " of " + std::to_string(part.size()) +
                                     " classes obstructed");
        } else {
          detail::emit(cfg, out,
                       json{{"arity", arity}, {"obstructedCount", obstructed}, {"classes", rows}}.dump(2));
        }
      }
      return 0;
    }

    if (*search) {
      const std::string archive = cfg.out.empty() ? "witnesses.csv" : cfg.out;
      const ClassKey key = detail::key_from_flags(pair, triple);
      if (!key.empty()) {
        const SearchResult r = search_witness(key, cfg.sampler(), cfg.budget);
        json j{{"key", key}, {"attempts", r.attempts}, {"status", r.exhausted() ? "exhausted" : "witness"}};
        if (r.witness) {
          append_witnesses(archive, {*r.witness});
          j["witness"] = witness_to_json(*r.witness);
          j["archive"] = archive;
        }
        out << (text ? key_to_string(key) + " " + j["status"].get<std::string>() + " after " +
                           std::to_string(r.attempts) + " attempts"
                     : j.dump(2))
            << "\n";
        return 0;
      }
      if (search->count("--arity") == 0) throw DomainError("search needs --pair, --triple or --arity");
      const OrbitPartition& part = orbit_partition(arity);
      const BulkSearchReport rep = search_all(arity, cfg.sampler(), cfg.budget, catalog(),
                                              [&err](const SummandGroup& g, std::size_t open) {
                                                err << "summands (" << g.first << "," << g.second << "): "
                                                    << g.targets.size() - open << "/" << g.targets.size()
                                                    << " classes witnessed\n";
                                              });
      std::vector<Witness> found;
      for (const auto& [cls, w] : rep.found) found.push_back(w);
      append_witnesses(archive, found);
      json unresolved = json::array();
      for (int cls : rep.unresolved) unresolved.push_back(part.classes()[cls].representative);
      json j{{"arity", arity},
             {"witnessed", rep.found.size()},
             {"unresolved", unresolved},
             {"attempts", rep.attempts},
             {"soundnessViolations", rep.soundness_violations},
             {"archive", archive}};
      out << (text ? std::to_string(rep.found.size()) + " classes witnessed, " +
                         std::to_string(rep.unresolved.size()) + " unresolved"
                   : j.dump(2))
          << "\n";
      return rep.soundness_violations == 0 ? 0 : 1;
    }

    if (*mc) {
      const FrequencyEstimate e =
          dim == 2 ? estimate_2d_reversal(cfg.sampler(), cfg.samples) : estimate_3d_conversion(cfg.sampler(), cfg.samples);
      if (text) {
        std::ostringstream s;
        if (dim == 2) {
          s << "reversal " << e.conversion_rate() << " +- " << e.standard_error(e.conversion) << "\n";
        } else {
          s << "sameTriangulation " << e.same_rate() << " +- " << e.standard_error(e.same_triangulation) << "\n";
          s << "conversion " << e.conversion_rate() << " +- " << e.standard_error(e.conversion) << "\n";
          s << "sameNoConversion " << e.same_no_conversion_rate() << " +- "
            << e.standard_error(e.same_no_conversion) << "\n";
        }
        s << "samples " << e.sample_count << ", discarded " << e.degenerate_discards << "\n";
        detail::emit(cfg, out, s.str());
      } else {
        detail::emit(cfg, out, frequency_to_json(e).dump(2));
      }
      return 0;
    }

    if (*reversal) {
      const Table2 f = load_table2(f_path);
      const Table2 g = load_table2(g_path);
      const ReversalVerdict v = detect_reversal_2d(f, g);
      if (text) {
        detail::emit(cfg, out, to_string(v));
      } else {
        json j{{"verdict", to_string(v)},
               {"signF", std::string(1, sign_char(det_sign(f)))},
               {"signG", std::string(1, sign_char(det_sign(g)))},
               {"signSum", std::string(1, sign_char(det_sign(f + g)))}};
        detail::emit(cfg, out, j.dump(2));
      }
      return 0;
    }
  } catch (const DegenerateTable& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace simpson::cli
