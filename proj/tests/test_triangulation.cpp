#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "envelope_oracle.hpp"
#include "simpson/geometry.hpp"
#include "simpson/triangulation.hpp"
#include "test_support.hpp"

using namespace simpson;

namespace {

const Table3& worked_example() {
  static const Table3 t({Rational(1, 4), 1, 1, 2, 4, 1, 2, 8});
  return t;
}

int count_with(int tets) {
  int n = 0;
  for (const auto& t : catalog().entries()) n += static_cast<int>(t.tetrahedra().size()) == tets;
  return n;
}

/// 6 * (signed volume) of the tetrahedron (a, b, c, d) for integer points.
long long vol6(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return det3(sub(b, a), sub(c, a), sub(d, a));
}

/// +1 strictly inside, 0 on the boundary, -1 outside. Points are scaled by `scale`.
int locate(const Tetrahedron& t, const Vec3& q, long long scale) {
  std::array<Vec3, 4> p;
  for (int i = 0; i < 4; ++i) {
    const Vec3 v = point(t[i]);
    p[i] = {v[0] * scale, v[1] * scale, v[2] * scale};
  }
  const long long whole = vol6(p[0], p[1], p[2], p[3]);
  const long long parts[4] = {vol6(q, p[1], p[2], p[3]), vol6(p[0], q, p[2], p[3]), vol6(p[0], p[1], q, p[3]),
                              vol6(p[0], p[1], p[2], q)};
  bool boundary = false;
  for (long long s : parts) {
    if (s == 0) {
      boundary = true;
    } else if ((s > 0) != (whole > 0)) {
      return -1;
    }
  }
  return boundary ? 0 : 1;
}

}  // namespace

TEST(Geometry, FiftyEightNondegenerateTetrahedra) {
  const auto& tets = nondegenerate_tetrahedra();
  EXPECT_EQ(tets.size(), 58u);
  std::map<int, int> by_volume;
  for (const auto& t : tets) ++by_volume[t.volume6()];
  // corner tetrahedra have volume 1/6, the two regular ones 1/3
  EXPECT_EQ(by_volume[2], 2);
  EXPECT_EQ(by_volume[1], 56);
}

TEST(Geometry, DisjointnessIsSymmetricAndIrreflexive) {
  const auto& tets = nondegenerate_tetrahedra();
  for (const auto& s : tets) {
    EXPECT_FALSE(interiors_disjoint(s, s));
    for (const auto& t : tets) ASSERT_EQ(interiors_disjoint(s, t), interiors_disjoint(t, s));
  }
}

TEST(Catalog, CountsMatchTheKnownEnumeration) {
  EXPECT_EQ(catalog().size(), kTriangulationCount);
  EXPECT_EQ(count_with(5), 2);
  EXPECT_EQ(count_with(6), 72);
  EXPECT_EQ(catalog().orbits().size(), 6u);
}

TEST(Catalog, IdsAreLexicographicRanks) {
  const auto& e = catalog().entries();
  for (std::size_t i = 0; i < e.size(); ++i) {
    EXPECT_EQ(e[i].id(), static_cast<int>(i) + 1);
    if (i > 0) {
      EXPECT_LT(e[i - 1].tetrahedra(), e[i].tetrahedra());
    }
    EXPECT_EQ(catalog().find(e[i].tetrahedra()), e[i].id());
  }
  EXPECT_THROW(catalog().at(0), DomainError);
  EXPECT_THROW(catalog().at(75), DomainError);
}

TEST(Catalog, EveryEntryTilesTheCubeExactly) {
  // lattice points with denominator 7 (a prime avoiding every facet plane
  // generically) and a sweep of random points with denominator 97
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<long long> d97(1, 96);
  for (const auto& t : catalog().entries()) {
    int volume = 0;
    for (const auto& tet : t.tetrahedra()) volume += tet.volume6();
    ASSERT_EQ(volume, 6);
    std::vector<Vec3> points;
    for (long long x = 1; x < 7; ++x)
      for (long long y = 1; y < 7; ++y)
        for (long long z = 1; z < 7; ++z) points.push_back({x, y, z});
    for (int i = 0; i < 200; ++i) points.push_back({d97(rng), d97(rng), d97(rng)});
    for (std::size_t i = 0; i < points.size(); ++i) {
      const long long scale = i < 216 ? 7 : 97;
      int inside = 0, boundary = 0;
      for (const auto& tet : t.tetrahedra()) {
        const int where = locate(tet, points[i], scale);
        inside += where == 1;
        boundary += where == 0;
      }
      ASSERT_TRUE(inside == 1 || (inside == 0 && boundary >= 2)) << t.id();
    }
  }
}

TEST(Catalog, EveryEntryIsFaceToFace) {
  for (const auto& t : catalog().entries()) EXPECT_TRUE(detail::is_face_to_face(t.tetrahedra())) << t.id();
}

TEST(Catalog, RegularOnesUseBothRegularTetrahedraNever) {
  for (const auto& t : catalog().entries()) {
    int big = 0;
    for (const auto& tet : t.tetrahedra()) big += tet.volume6() == 2;
    EXPECT_EQ(big, t.tetrahedra().size() == 5 ? 1 : 0);
  }
}

TEST(Classify, WorkedExample) {
  const Triangulation& t = classify_exact(worked_example());
  EXPECT_EQ(t.id(), 5);
  EXPECT_EQ(t.to_string(),
            "{000,001,010,100} {001,010,011,100} {001,011,100,111} {001,100,101,111} {010,011,100,111} "
            "{010,100,110,111}");
  std::string constraints;
  for (const auto& c : t.constraints()) constraints += c.to_string() + " ";
  EXPECT_EQ(constraints, "b d -e -t ");
  EXPECT_EQ(t.type(), TriangulationType::II);
}

TEST(Classify, AllOnesIsFullyDegenerate) {
  try {
    classify_exact(Table3::from_integers({1, 1, 1, 1, 1, 1, 1, 1}));
    FAIL() << "expected DegenerateTable";
  } catch (const DegenerateTable& e) {
    EXPECT_STREQ(e.what(), "degenerate: all forms vanish");
  }
}

TEST(Classify, VanishingFaceFormIsDegenerate) {
  // F000 F110 = F010 F100 makes form a vanish; every face form decides a face diagonal
  EXPECT_THROW(classify_exact(Table3::from_integers({2, 5, 3, 7, 4, 11, 6, 13})), DegenerateTable);
}

TEST(Classify, ScaleInvariant) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 200; ++i) {
    const Table3 t = simpson::testing::random_rational_table(rng);
    try {
      EXPECT_EQ(classify_exact(t).id(), classify_exact(t.scaled(Rational(13, 5))).id());
    } catch (const DegenerateTable&) {
    }
  }
}

TEST(Classify, AgreesWithUpperEnvelopeOracle) {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto t = simpson::testing::random_exp_entries(rng);
    const auto h = simpson::testing::logs_of(t);
    int oracle = 0;
    try {
      oracle = simpson::testing::classify_float_oracle(h).id();
    } catch (const DegenerateTable&) {
      continue;
    }
    ASSERT_EQ(classify_exact(Table3::from_doubles(t)).id(), oracle);
    ASSERT_EQ(catalog().classify_heights(h), oracle);
    ASSERT_EQ(catalog().classify_entries(t), oracle);
    ++checked;
  }
  EXPECT_GT(checked, 4900);
}

TEST(Classify, EveryRegionIsRealized) {
  std::mt19937_64 rng(24);
  std::set<int> hit;
  for (int i = 0; i < 20000 && hit.size() < 74; ++i) {
    const auto t = simpson::testing::random_exp_entries(rng);
    hit.insert(classify_exact(Table3::from_doubles(t)).id());
  }
  EXPECT_EQ(hit.size(), 74u);
}

TEST(Classify, SignVectorsSatisfyExactlyOneEntry) {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 2000; ++i) {
    const FormSigns s = eval_form_signs(Table3::from_doubles(simpson::testing::random_exp_entries(rng)));
    int matches = 0;
    for (const auto& t : catalog().entries()) matches += t.satisfied_by(s);
    ASSERT_EQ(matches, 1);
  }
}

TEST(Classify, FloatPathIgnoresVanishingNonWalls) {
  // forms k and r vanish on the worked example but bound no wall of its region
  const auto h = simpson::testing::logs_of({0.25, 1, 1, 2, 4, 1, 2, 8});
  EXPECT_EQ(catalog().classify_heights(h), 5);
  const std::array<double, 8> flat{};
  EXPECT_FALSE(catalog().classify_heights(flat).has_value());
}

TEST(Constraints, WallCircuitsAreBalancedAndPositiveOnApexes) {
  for (const auto& t : catalog().entries()) {
    for (std::size_t i = 0; i < t.tetrahedra().size(); ++i) {
      for (std::size_t j = i + 1; j < t.tetrahedra().size(); ++j) {
        const auto& s = t.tetrahedra()[i];
        const auto& u = t.tetrahedra()[j];
        int shared = 0;
        for (const auto& v : s.vertices()) shared += u.contains(v);
        if (shared != 3) continue;
        const auto c = wall_circuit(s, u);
        int total = 0;
        for (int x : c) total += x;
        EXPECT_EQ(total, 0);
        for (const auto& v : s.vertices())
          if (!u.contains(v)) {
            EXPECT_GT(c[v.code()], 0);
          }
        for (const auto& v : u.vertices())
          if (!s.contains(v)) {
            EXPECT_GT(c[v.code()], 0);
          }
        EXPECT_TRUE(constraint_for_circuit(c).has_value());
      }
    }
  }
}

TEST(Constraints, EveryWallHasANeighbourAcrossIt) {
  // the fan is complete, so crossing a wall lands in a region that flips it
  const auto& e = catalog().entries();
  for (const auto& t : e) {
    for (int form = 0; form < kFormCount; ++form) {
      const std::uint32_t bit = 1u << form;
      if (!(t.constraint_mask() & bit)) continue;
      int across = 0;
      for (const auto& u : e)
        across += (u.constraint_mask() & bit) && ((u.required_positive_mask() ^ t.required_positive_mask()) & bit);
      EXPECT_GE(across, 1) << t.id() << " form " << form;
    }
  }
}

TEST(Features, TypesMatchStructure) {
  std::map<TriangulationType, int> sizes;
  for (const auto& t : catalog().entries()) {
    ++sizes[t.type()];
    const auto& f = t.features();
    switch (t.type()) {
      case TriangulationType::I: EXPECT_EQ(f.tetrahedron_count, 5); break;
      case TriangulationType::II: EXPECT_TRUE(f.all_opposite_antiparallel()); break;
      case TriangulationType::IV:
        EXPECT_TRUE(f.all_opposite_parallel());
        EXPECT_TRUE(f.full_vertices.empty());
        break;
      case TriangulationType::VI:
        EXPECT_TRUE(f.all_opposite_parallel());
        EXPECT_TRUE(f.empty_vertices.empty());
        break;
      default: break;
    }
  }
  EXPECT_EQ(sizes[TriangulationType::I], 2);
  EXPECT_EQ(sizes[TriangulationType::II], 8);
  EXPECT_EQ(sizes[TriangulationType::III], 24);
  EXPECT_EQ(sizes[TriangulationType::IV], 12);
  EXPECT_EQ(sizes[TriangulationType::V], 24);
  EXPECT_EQ(sizes[TriangulationType::VI], 4);
}

TEST(Features, IncidenceMatchesEdges) {
  for (const auto& t : catalog().entries()) {
    const auto& f = t.features();
    for (const auto& v : all_vertices()) {
      for (Axis a : kAxes) {
        // diagonal through v in the facet fixing a: v and v with the other two bits flipped
        const Vertex opposite(v.code() ^ 7 ^ Vertex::axis_bit(a));
        const bool through = t.has_edge(v, opposite);
        EXPECT_EQ(((f.incidence[v.code()] >> static_cast<int>(a)) & 1u) != 0, through);
      }
      if (f.incidence[v.code()] == 7) {
        EXPECT_NE(std::find(f.full_vertices.begin(), f.full_vertices.end(), v), f.full_vertices.end());
      }
    }
  }
}

TEST(TwoDimensional, DiagonalMatchesUpperEnvelope) {
  // the square's upper envelope uses {00,11} exactly when h00 + h11 > h01 + h10
  std::mt19937_64 rng(26);
  std::uniform_int_distribution<int> d(1, 30);
  for (int i = 0; i < 1000; ++i) {
    const int a = d(rng), b = d(rng), c = d(rng), e = d(rng);
    const auto got = classify_2d(Table2::from_integers(a, b, c, e));
    const double lift = std::log(a) + std::log(e) - std::log(b) - std::log(c);
    if (a * e == b * c) {
      EXPECT_EQ(got, SquareDiagonal::Degenerate);
    } else {
      EXPECT_EQ(got, lift > 0 ? SquareDiagonal::Diag00_11 : SquareDiagonal::Diag01_10);
    }
  }
}
