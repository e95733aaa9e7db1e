#include <gtest/gtest.h>

#include <random>
#include <set>

#include "simpson/orbits.hpp"
#include "simpson/symmetry.hpp"
#include "simpson/triangulation.hpp"
#include "test_support.hpp"

using namespace simpson;

namespace {

/// Fixed points of group element g acting on single ids.
long long fixed_ids(std::size_t g) {
  long long n = 0;
  for (int id = 1; id <= catalog().size(); ++id) n += catalog().image(g, id) == id;
  return n;
}

/// Unordered pairs {A, B}, A != B, mapped to themselves by g.
long long fixed_unordered_pairs(std::size_t g) {
  const long long f = fixed_ids(g);
  long long swaps = 0;
  for (int id = 1; id <= catalog().size(); ++id) {
    const int img = catalog().image(g, id);
    if (img != id && catalog().image(g, img) == id) ++swaps;
  }
  return f * (f - 1) / 2 + swaps / 2;
}

}  // namespace

TEST(Group, FortyEightDistinctElements) {
  const auto& g = cube_symmetries();
  ASSERT_EQ(g.size(), 48u);
  EXPECT_EQ(g[0], CubeSymmetry::identity());
  std::set<std::array<int, 8>> images;
  int rotations = 0;
  for (const auto& s : g) {
    std::array<int, 8> img{};
    for (const auto& v : all_vertices()) img[v.code()] = s(v).code();
    images.insert(img);
    rotations += s.orientation() == 1;
  }
  EXPECT_EQ(images.size(), 48u);
  EXPECT_EQ(rotations, 24);
}

TEST(Group, ClosedUnderCompositionAndInverse) {
  const auto& g = cube_symmetries();
  for (const auto& a : g) {
    EXPECT_EQ(a.compose(a.inverse()), CubeSymmetry::identity());
    for (const auto& b : g) {
      const CubeSymmetry ab = a.compose(b);
      ASSERT_NE(std::find(g.begin(), g.end(), ab), g.end());
      for (const auto& v : all_vertices()) ASSERT_EQ(ab(v), a(b(v)));
    }
  }
}

TEST(Group, ActsOnVerticesAsCubeIsometries) {
  for (const auto& s : cube_symmetries()) {
    for (const auto& u : all_vertices())
      for (const auto& v : all_vertices())
        ASSERT_EQ(__builtin_popcount(u.code() ^ v.code()), __builtin_popcount(s(u).code() ^ s(v).code()));
  }
  EXPECT_EQ(CubeSymmetry::antipodal()(Vertex::parse("001")).name(), "110");
  EXPECT_EQ(CubeSymmetry::swap_axes(Axis::X, Axis::Z)(Vertex::parse("001")).name(), "100");
  EXPECT_EQ(CubeSymmetry::flip(Axis::Y)(Vertex::parse("001")).name(), "011");
}

TEST(Group, TableActionMovesEntriesWithVertices) {
  const Table3 t = Table3::from_integers({1, 2, 3, 4, 5, 6, 7, 8});
  for (const auto& s : cube_symmetries()) {
    const Table3 moved = apply(s, t);
    for (const auto& v : all_vertices()) ASSERT_EQ(moved[s(v)], t[v]);
  }
}

TEST(Equivariance, ClassificationCommutesWithSymmetry) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const Table3 t = Table3::from_doubles(simpson::testing::random_exp_entries(rng));
    const int id = classify_exact(t).id();
    for (std::size_t g = 0; g < cube_symmetries().size(); ++g) {
      ASSERT_EQ(classify_exact(apply(cube_symmetries()[g], t)).id(), catalog().image(g, id));
    }
  }
}

TEST(Equivariance, ImagesAreBijectionsPreservingStructure) {
  const auto& g = cube_symmetries();
  for (std::size_t k = 0; k < g.size(); ++k) {
    std::set<int> seen;
    for (const auto& t : catalog().entries()) {
      const int img = catalog().image(k, t.id());
      seen.insert(img);
      const auto& u = catalog().at(img);
      EXPECT_EQ(u.type(), t.type());
      EXPECT_EQ(u.tetrahedra().size(), t.tetrahedra().size());
    }
    EXPECT_EQ(seen.size(), 74u);
  }
}

TEST(Orbits, SingleTriangulations) {
  const auto& p = orbit_partition(1);
  EXPECT_EQ(p.size(), 6u);
  std::multiset<std::size_t> sizes;
  for (const auto& c : p.classes()) sizes.insert(c.size());
  EXPECT_EQ(sizes, (std::multiset<std::size_t>{2, 4, 8, 12, 24, 24}));
}

TEST(Orbits, PairAndTripleCounts) {
  EXPECT_EQ(orbit_partition(2).size(), 167u);
  EXPECT_EQ(orbit_partition(2).total_members(), 5476u);
  EXPECT_EQ(orbit_partition(3).size(), 4655u);
  EXPECT_EQ(orbit_partition(3).total_members(), 199874u);
}

TEST(Orbits, CountsAgreeWithBurnside) {
  long long pairs = 0, triples = 0, singles = 0;
  for (std::size_t g = 0; g < cube_symmetries().size(); ++g) {
    const long long f = fixed_ids(g);
    singles += f;
    pairs += f * f;
    triples += fixed_unordered_pairs(g) * f;
  }
  EXPECT_EQ(singles % 48, 0);
  EXPECT_EQ(singles / 48, 6);
  EXPECT_EQ(pairs / 48, 167);
  EXPECT_EQ(triples / 48, 4655);
}

TEST(Orbits, ClassIndexIsConstantOnOrbits) {
  const auto& p = orbit_partition(2);
  for (std::size_t c = 0; c < p.size(); ++c) {
    for (const auto& m : p.classes()[c].members) ASSERT_EQ(p.class_index(m), static_cast<int>(c));
    EXPECT_EQ(p.classes()[c].representative, p.classes()[c].members.front());
  }
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<int> id(1, 74);
  const auto& q = orbit_partition(3);
  for (int i = 0; i < 2000; ++i) {
    const int a = id(rng), c = id(rng);
    int b = id(rng);
    if (b == a) continue;
    const std::size_t g = rng() % 48;
    const ClassKey key{a, b, c};
    const ClassKey moved{catalog().image(g, b), catalog().image(g, a), catalog().image(g, c)};
    ASSERT_EQ(q.class_index(key), q.class_index(moved));
  }
}

TEST(Orbits, RepresentativesAreLexLeast) {
  const auto& p = orbit_partition(3);
  for (std::size_t c = 1; c < p.size(); ++c)
    ASSERT_LT(p.classes()[c - 1].representative, p.classes()[c].representative);
  EXPECT_EQ(canonical_class_of({2, 1, 5}), canonical_class_of({1, 2, 5}));
}

TEST(Orbits, RejectsBadKeys) {
  EXPECT_THROW(canonical_class_of({0, 3}), DomainError);
  EXPECT_THROW(canonical_class_of({75, 3}), DomainError);
  EXPECT_THROW(canonical_class_of({4, 4, 7}), DomainError);
  EXPECT_THROW(canonical_class_of({}), DomainError);
  EXPECT_THROW(orbit_partition(4), DomainError);
}
