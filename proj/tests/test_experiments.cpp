#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "simpson/experiments.hpp"
#include "simpson/io.hpp"
#include "test_support.hpp"

using namespace simpson;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "simpson_tests";
  std::filesystem::create_directories(dir);
  auto p = dir / name;
  std::filesystem::remove(p);
  return p;
}

/// A conversion pair class (A, S) with A != S that is not obstructed.
ClassKey some_conversion_key() {
  for (const auto& cv : feasible_pair_candidates())
    if (cv.representative[0] != cv.representative[1]) return cv.representative;
  return {};
}

}  // namespace

TEST(Sampler, DeterministicPerSeedAndStream) {
  Sampler a(5, 0), b(5, 0), c(5, 1), d(6, 0);
  const auto ta = a.exp_table<8>();
  EXPECT_EQ(ta, b.exp_table<8>());
  EXPECT_NE(ta, c.exp_table<8>());
  EXPECT_NE(ta, d.exp_table<8>());
  for (double x : ta) EXPECT_GT(x, 0.0);
}

TEST(Sampler, UniformsStayInsideTheOpenInterval) {
  Sampler s(1, 2);
  double lo = 1, hi = 0, sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform_open();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += s.exp1();
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / 100000, 1.0, 0.02);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(s.below(7), 7u);
}

TEST(Sampler, SampleTableShapes) {
  SamplerConfig cfg;
  cfg.seed = 9;
  EXPECT_EQ(sample_table(cfg, 2).size(), 4u);
  EXPECT_EQ(sample_table(cfg, 3).size(), 8u);
  EXPECT_EQ(sample_table(cfg, 3), sample_table(cfg, 3));
  EXPECT_THROW(sample_table(cfg, 4), DomainError);
}

TEST(MonteCarlo, RejectsEmptyRuns) {
  EXPECT_THROW(estimate_2d_reversal(SamplerConfig{}, 0), DomainError);
  EXPECT_THROW(estimate_3d_conversion(SamplerConfig{}, 0), DomainError);
}

TEST(MonteCarlo, ReproducibleForFixedSeedAndWorkers) {
  SamplerConfig cfg{3, 2, kDefaultTolerance};
  const auto a = estimate_3d_conversion(cfg, 20000);
  const auto b = estimate_3d_conversion(cfg, 20000);
  EXPECT_EQ(a.same_triangulation, b.same_triangulation);
  EXPECT_EQ(a.conversion, b.conversion);
  EXPECT_EQ(a.sample_count, 20000u);
  EXPECT_EQ(a.same_triangulation, a.conversion + a.same_no_conversion);
}

TEST(MonteCarlo, TwoDimensionalReversalNearOneSixtieth) {
  const auto e = estimate_2d_reversal(SamplerConfig{17, 1, kDefaultTolerance}, 200000);
  EXPECT_NEAR(e.conversion_rate(), 1.0 / 60, 4 * e.standard_error(e.conversion));
  EXPECT_NEAR(e.same_rate(), 0.5, 0.01);
}

TEST(MonteCarlo, ThreeDimensionalRatesRoughly) {
  const auto e = estimate_3d_conversion(SamplerConfig{18, 1, kDefaultTolerance}, 200000);
  EXPECT_NEAR(e.same_rate(), 17.0 / 900, 4 * e.standard_error(e.same_triangulation));
  EXPECT_NEAR(e.conversion_rate(), 2.0 / 900, 4 * e.standard_error(e.conversion));
}

TEST(MonteCarlo, StandardErrorFormula) {
  FrequencyEstimate e;
  e.sample_count = 110;
  e.degenerate_discards = 10;
  e.conversion = 25;
  EXPECT_DOUBLE_EQ(e.conversion_rate(), 0.25);
  EXPECT_DOUBLE_EQ(e.standard_error(e.conversion), std::sqrt(0.25 * 0.75 / 100));
}

TEST(Conversion, VerdictsForFixedTables) {
  const Table3 f({Rational(1, 4), 1, 1, 2, 4, 1, 2, 8});
  const auto same = detect_conversion(f, f);
  EXPECT_EQ(same.verdict, ConversionVerdict::SameNoConversion);
  EXPECT_EQ(same.triangulation_sum, 5);
  const Table3 g = Table3::from_integers({1, 2, 3, 4, 5, 6, 7, 9});
  if (classify_exact(g).id() != 5) {
    EXPECT_EQ(detect_conversion(f, g).verdict, ConversionVerdict::NotSameTriangulation);
  }
  EXPECT_THROW(detect_conversion(Table3::from_integers({1, 1, 1, 1, 1, 1, 1, 1}), f), DegenerateTable);
}

TEST(Witness, DiagonalClassFromTheSameTableTwice) {
  const Table3 f({Rational(1, 4), 1, 1, 2, 4, 1, 2, 8});
  const Witness w{{5, 5}, f, f, utc_timestamp()};
  EXPECT_TRUE(verify_witness(w));
  EXPECT_FALSE(w.is_conversion());
  EXPECT_FALSE(verify_witness(Witness{{5, 6}, f, f, ""}));
}

TEST(Witness, SearchFindsAndVerifiesAConversion) {
  const ClassKey key = some_conversion_key();
  ASSERT_EQ(key.size(), 2u);
  const SearchResult r = search_witness(key, SamplerConfig{1, 1, kDefaultTolerance}, 10'000'000);
  ASSERT_FALSE(r.exhausted());
  EXPECT_TRUE(verify_witness(*r.witness));
  EXPECT_TRUE(r.witness->is_conversion());
  const auto report = detect_conversion(r.witness->f, r.witness->g);
  EXPECT_EQ(report.verdict, ConversionVerdict::Conversion);
  EXPECT_EQ(report.triangulation_sum, key[1]);
  // same seed, same answer
  const SearchResult again = search_witness(key, SamplerConfig{1, 1, kDefaultTolerance}, 10'000'000);
  EXPECT_EQ(again.attempts, r.attempts);
  EXPECT_EQ(again.witness->f, r.witness->f);
}

TEST(Witness, WorkerCountDoesNotBreakDeterminism) {
  const ClassKey key = some_conversion_key();
  const SamplerConfig cfg{2, 3, kDefaultTolerance};
  const SearchResult a = search_witness(key, cfg, 5'000'000);
  const SearchResult b = search_witness(key, cfg, 5'000'000);
  ASSERT_FALSE(a.exhausted());
  EXPECT_EQ(a.attempts, b.attempts);
  EXPECT_EQ(a.witness->g, b.witness->g);
}

TEST(Witness, TripleSearch) {
  const ClassKey key = feasible_triple_candidates().front().representative;
  const SearchResult r = search_witness(key, SamplerConfig{4, 1, kDefaultTolerance}, 10'000'000);
  ASSERT_FALSE(r.exhausted());
  EXPECT_TRUE(verify_witness(*r.witness));
  EXPECT_FALSE(r.witness->is_conversion());
}

TEST(Witness, ObstructedAndInvalidKeysAreRejected) {
  const ClassKey obstructed = infeasible_pair_classes().front().representative;
  EXPECT_THROW(search_witness(obstructed, SamplerConfig{}, 1000), DomainError);
  EXPECT_THROW(search_witness({1, 99}, SamplerConfig{}, 1000), DomainError);
  EXPECT_THROW(search_witness({3}, SamplerConfig{}, 1000), DomainError);
}

TEST(Witness, ZeroBudgetIsExhausted) {
  const SearchResult r = search_witness(some_conversion_key(), SamplerConfig{}, 0);
  EXPECT_TRUE(r.exhausted());
  EXPECT_EQ(r.attempts, 0u);
}

TEST(Witness, SummandGroupsCoverEveryCandidate) {
  std::size_t pairs = 0, triples = 0;
  for (const auto& g : summand_groups(2)) {
    EXPECT_EQ(g.first, g.second);
    pairs += g.targets.size();
  }
  const auto tg = summand_groups(3);
  for (const auto& g : tg) {
    EXPECT_LT(g.first, g.second);
    triples += g.targets.size();
  }
  EXPECT_EQ(summand_groups(2).size(), 6u);
  EXPECT_EQ(pairs, 112u);
  EXPECT_EQ(triples, 4304u);
  EXPECT_THROW(summand_groups(1), DomainError);
}

TEST(Witness, BulkSearchOnSmallBudgetIsSound) {
  const auto rep = search_all(2, SamplerConfig{5, 1, kDefaultTolerance}, 20000);
  EXPECT_EQ(rep.soundness_violations, 0u);
  EXPECT_EQ(rep.found.size() + rep.unresolved.size(), 112u);
  for (const auto& [cls, w] : rep.found) {
    EXPECT_TRUE(verify_witness(w));
    EXPECT_EQ(orbit_partition(2).class_index(w.key), cls);
  }
}

TEST(Archive, RoundTripReverifies) {
  const auto path = temp_path("roundtrip.csv");
  const SearchResult r = search_witness(some_conversion_key(), SamplerConfig{7, 1, kDefaultTolerance}, 10'000'000);
  ASSERT_FALSE(r.exhausted());
  const Table3 f({Rational(1, 4), 1, 1, 2, 4, 1, 2, 8});
  append_witnesses(path, {*r.witness});
  append_witnesses(path, {Witness{{5, 5}, f, f, utc_timestamp()}});
  const auto loaded = load_witness_archive(path);
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded[0].key, r.witness->key);
  EXPECT_EQ(loaded[0].f, r.witness->f);
  EXPECT_TRUE(loaded[0].is_conversion());
  EXPECT_FALSE(loaded[1].is_conversion());
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}

TEST(Archive, RowFormat) {
  const Table3 f({Rational(1, 4), 1, 1, 2, 4, 1, 2, 8});
  const std::string row = witness_to_csv_row(Witness{{5, 5}, f, f, "2026-01-01T00:00:00Z"});
  EXPECT_EQ(row.substr(0, 15), "5,5,,1/4,1/1,1/");
  EXPECT_EQ(witness_from_csv_row(row).f, f);
  EXPECT_EQ(witness_csv_header().substr(0, 32), "classA,classB,classC,F000,F001,F");
}

TEST(Archive, TamperedRowFailsOnLoad) {
  const auto path = temp_path("tampered.csv");
  const Table3 f({Rational(1, 4), 1, 1, 2, 4, 1, 2, 8});
  append_witnesses(path, {Witness{{5, 5}, f, f, "t"}});
  std::string text = detail::read_file(path);
  text.replace(text.find("5,5,"), 4, "5,6,");
  std::ofstream(path, std::ios::trunc) << text;
  EXPECT_THROW(load_witness_archive(path), DomainError);
}
