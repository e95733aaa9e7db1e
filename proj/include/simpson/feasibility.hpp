#pragma once

// Parity obstruction to Simpson conversion and the exact hypothesis checkers
// behind it.
//
// At a vertex v, the incidence pattern of a triangulation records which of the
// three facets through v carry the diagonal through v. If both summands show
// the same odd pattern at v, the sum cannot show the complementary pattern.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "simpson/orbits.hpp"
#include "simpson/tables.hpp"
#include "simpson/triangulation.hpp"

namespace simpson {

struct ObstructionVerdict {
  bool obstructed = false;
  std::optional<Vertex> vertex;
};

/// No conversion from `a` to `b` is possible when some vertex has odd
/// incidence weight in `a` and the complementary incidence in `b`.
inline ObstructionVerdict obstruction(const Triangulation& a, const Triangulation& b) {
  for (int c = 0; c < 8; ++c) {
    const std::uint8_t ia = a.features().incidence[c];
    const std::uint8_t ib = b.features().incidence[c];
    if (incidence_weight(ia) % 2 == 1 && ib == (ia ^ 7u)) return {true, Vertex(c)};
  }
  return {};
}

/// Summands `a`, `b` and sum `c`: obstructed when some vertex has the same odd
/// incidence in both summands and the complementary incidence in the sum.
inline ObstructionVerdict triple_obstruction(const Triangulation& a, const Triangulation& b,
                                             const Triangulation& c) {
  for (int v = 0; v < 8; ++v) {
    const std::uint8_t ia = a.features().incidence[v];
    if (incidence_weight(ia) % 2 == 1 && b.features().incidence[v] == ia && c.features().incidence[v] == (ia ^ 7u)) {
      return {true, Vertex(v)};
    }
  }
  return {};
}

inline ObstructionVerdict obstruction_of_key(const ClassKey& key, const Catalog& cat = catalog()) {
  if (key.size() == 2) return obstruction(cat.at(key[0]), cat.at(key[1]));
  if (key.size() == 3) return triple_obstruction(cat.at(key[0]), cat.at(key[1]), cat.at(key[2]));
  throw DomainError("obstruction is defined for pairs and triples");
}

struct ClassVerdict {
  int class_index = 0;
  ClassKey representative;
  ObstructionVerdict verdict;
};

namespace detail {
inline std::vector<ClassVerdict> classify_partition(const OrbitPartition& part, const Catalog& cat, bool obstructed) {
  std::vector<ClassVerdict> out;
  for (std::size_t i = 0; i < part.classes().size(); ++i) {
    const auto& rep = part.classes()[i].representative;
    const auto v = obstruction_of_key(rep, cat);
    if (v.obstructed == obstructed) out.push_back({static_cast<int>(i), rep, v});
  }
  return out;
}
}  // namespace detail

/// Obstruction is constant on orbits, so it is decided on representatives.
inline std::vector<ClassVerdict> infeasible_pair_classes(const Catalog& cat = catalog(),
                                                         const OrbitPartition& pairs = orbit_partition(2)) {
  return detail::classify_partition(pairs, cat, true);
}
inline std::vector<ClassVerdict> feasible_pair_candidates(const Catalog& cat = catalog(),
                                                          const OrbitPartition& pairs = orbit_partition(2)) {
  return detail::classify_partition(pairs, cat, false);
}
inline std::vector<ClassVerdict> infeasible_triple_classes(const Catalog& cat = catalog(),
                                                           const OrbitPartition& triples = orbit_partition(3)) {
  return detail::classify_partition(triples, cat, true);
}
inline std::vector<ClassVerdict> feasible_triple_candidates(const Catalog& cat = catalog(),
                                                            const OrbitPartition& triples = orbit_partition(3)) {
  return detail::classify_partition(triples, cat, false);
}

/// For each orbit (type class), the number of obstructed pair classes whose
/// first triangulation lies in that orbit.
inline std::array<int, kTypeCount> obstructed_partner_counts(const Catalog& cat = catalog(),
                                                             const OrbitPartition& pairs = orbit_partition(2)) {
  std::array<int, kTypeCount> counts{};
  for (const auto& cv : infeasible_pair_classes(cat, pairs)) ++counts[cat.at(cv.representative[0]).type_class()];
  return counts;
}

// ---------------------------------------------------------------------------
// Exact lemma hypotheses

namespace detail {

/// F[n1] F[n2] versus F[v] F[n12] on the facet through v that fixes `axis`;
/// Pos means the facet's diagonal passes through v.
inline Sign corner_sign(const std::array<Rational, 8>& t, Vertex v, Axis fixed) {
  std::array<Axis, 2> free{};
  int k = 0;
  for (Axis a : kAxes)
    if (a != fixed) free[k++] = a;
  const Vertex n1 = v.flipped(free[0]);
  const Vertex n2 = v.flipped(free[1]);
  const Vertex n12 = n1.flipped(free[1]);
  const Rational through = t[v.code()] * t[n12.code()];
  const Rational across = t[n1.code()] * t[n2.code()];
  return through > across ? Sign::Pos : (through < across ? Sign::Neg : Sign::Zero);
}

inline std::array<Rational, 8> sum_entries(const Table3& f, const Table3& g) {
  std::array<Rational, 8> s;
  for (int i = 0; i < 8; ++i) s[i] = f.at(i) + g.at(i);
  return s;
}

/// Incidence pattern at v with strict signs; nullopt if some facet is tied.
inline std::optional<std::uint8_t> strict_pattern(const std::array<Rational, 8>& t, Vertex v) {
  std::uint8_t bits = 0;
  for (Axis a : kAxes) {
    const Sign s = corner_sign(t, v, a);
    if (s == Sign::Zero) return std::nullopt;
    if (s == Sign::Pos) bits |= static_cast<std::uint8_t>(1u << static_cast<int>(a));
  }
  return bits;
}

inline std::uint8_t lemma_pattern(int lemma, Axis diagonal_face) {
  if (lemma == 2) return 7;
  if (lemma == 3) return static_cast<std::uint8_t>(1u << static_cast<int>(diagonal_face));
  throw DomainError("three-dimensional lemmas are 2 and 3");
}

}  // namespace detail

/// Incidence pattern of a table at a vertex, read from its entries directly.
inline std::optional<std::uint8_t> local_pattern(const Table3& t, Vertex v) {
  return detail::strict_pattern(t.entries(), v);
}

/// Hypotheses of the full-vertex lemma (lemma 2) or the single-diagonal lemma
/// (lemma 3) at `v`: both tables carry the lemma's pattern at v. For lemma 3
/// the lone diagonal through v lies in the facet fixing `diagonal_face`
/// (z in the classical statement).
inline bool lemma_hypothesis_check(int lemma, const Table3& f, const Table3& g, Vertex v,
                                   Axis diagonal_face = Axis::Z) {
  const std::uint8_t pattern = detail::lemma_pattern(lemma, diagonal_face);
  return detail::strict_pattern(f.entries(), v) == pattern && detail::strict_pattern(g.entries(), v) == pattern;
}

/// The forbidden conclusion: the sum carries the complementary pattern at v.
inline bool lemma_conclusion_violated(int lemma, const Table3& f, const Table3& g, Vertex v,
                                      Axis diagonal_face = Axis::Z) {
  const std::uint8_t pattern = detail::lemma_pattern(lemma, diagonal_face);
  const auto sum = detail::sum_entries(f, g);
  for (Axis a : kAxes) {
    const bool through_in_f = (pattern >> static_cast<int>(a)) & 1u;
    // complementary pattern, strictly
    const Sign want = through_in_f ? Sign::Neg : Sign::Pos;
    if (detail::corner_sign(sum, v, a) != want) return false;
  }
  return true;
}

/// 2x2 reversal hypotheses at corner (x, y): both tables positively oriented
/// through (x, y) and the sum strictly reversed.
inline bool lemma1_hypothesis_check(const Table2& f, const Table2& g, int x, int y) {
  const int xb = 1 - x, yb = 1 - y;
  auto through = [&](const Table2& t) { return t.at(x, y) * t.at(xb, yb); };
  auto across = [&](const Table2& t) { return t.at(xb, y) * t.at(x, yb); };
  const Table2 s = f + g;
  return across(f) < through(f) && across(g) < through(g) && across(s) > through(s);
}

/// Which of the two conjunctions in the conclusion hold: {first, second}.
inline std::pair<bool, bool> lemma1_conclusions(const Table2& f, const Table2& g, int x, int y) {
  const int xb = 1 - x, yb = 1 - y;
  const Rational lhs1 = f.at(xb, y) * g.at(x, y), rhs1 = f.at(x, y) * g.at(xb, y);
  const Rational lhs2 = f.at(x, yb) * g.at(x, y), rhs2 = f.at(x, y) * g.at(x, yb);
  const bool first = lhs1 > rhs1 && lhs2 < rhs2;
  const bool second = lhs1 < rhs1 && lhs2 > rhs2;
  return {first, second};
}

/// Single entry point keyed by lemma number. Lemma 1 takes 2x2 tables and a
/// 2D corner; lemmas 2 and 3 take 2x2x2 tables and a cube vertex.
inline bool lemma_hypothesis_check(int lemma, const Table2& f, const Table2& g, int x, int y) {
  if (lemma != 1) throw DomainError("lemma 1 is the two-dimensional lemma");
  return lemma1_hypothesis_check(f, g, x, y);
}

}  // namespace simpson
