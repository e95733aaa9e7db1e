#pragma once

// The 74 triangulations of the 3-cube: enumeration, wall constraints on the
// 20 forms, structural features, symmetry orbits and classifiers.

#include <algorithm>
#include <bit>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simpson/errors.hpp"
#include "simpson/forms.hpp"
#include "simpson/geometry.hpp"
#include "simpson/symmetry.hpp"
#include "simpson/tables.hpp"

namespace simpson {

inline constexpr int kTriangulationCount = 74;
inline constexpr int kTypeCount = 6;
inline constexpr double kDefaultTolerance = 1e-9;

/// "The signed form must have this sign" for a table inducing a triangulation.
struct SignConstraint {
  int form = 0;
  Sign required = Sign::Pos;

  std::string to_string() const {
    std::string s;
    if (required == Sign::Neg) s.push_back('-');
    s.push_back(form_letter(form));
    return s;
  }
  friend bool operator==(const SignConstraint&, const SignConstraint&) = default;
  friend auto operator<=>(const SignConstraint&, const SignConstraint&) = default;
};

using SignConstraintSet = std::vector<SignConstraint>;

/// Faces are indexed 2*axis + value: the facet where that axis is fixed.
struct Face {
  Axis axis;
  int value;

  static Face from_index(int f) { return {static_cast<Axis>(f / 2), f % 2}; }
  int index() const { return 2 * static_cast<int>(axis) + value; }

  /// The corner of the face whose two free coordinates are 0.
  Vertex origin() const {
    int c[3] = {0, 0, 0};
    c[static_cast<int>(axis)] = value;
    return Vertex(c[0], c[1], c[2]);
  }
  /// Corner diagonally opposite `v` within this face.
  Vertex opposite(Vertex v) const { return Vertex(v.code() ^ 7 ^ Vertex::axis_bit(axis)); }
  bool contains(Vertex v) const { return v.coord(axis) == value; }
};

struct Diagonal {
  Vertex a, b;
  bool touches(Vertex v) const { return a == v || b == v; }
  friend bool operator==(const Diagonal&, const Diagonal&) = default;
};

/// Type label I..VI, assigned from structure.
enum class TriangulationType { I = 1, II, III, IV, V, VI };

inline const char* to_string(TriangulationType t) {
  static const char* names[] = {"I", "II", "III", "IV", "V", "VI"};
  return names[static_cast<int>(t) - 1];
}

struct TriangulationFeatures {
  std::array<Diagonal, 6> face_diagonals{};
  /// Bit a set iff the diagonal of the facet fixing axis a (through v) passes through v.
  std::array<std::uint8_t, 8> incidence{};
  std::vector<Vertex> full_vertices;
  std::vector<Vertex> empty_vertices;
  bool has_hyperdiagonal = false;
  /// Per axis: the two opposite facets carry parallel diagonals.
  std::array<bool, 3> opposite_faces_parallel{};
  int tetrahedron_count = 0;

  bool all_opposite_antiparallel() const {
    return !opposite_faces_parallel[0] && !opposite_faces_parallel[1] && !opposite_faces_parallel[2];
  }
  bool all_opposite_parallel() const {
    return opposite_faces_parallel[0] && opposite_faces_parallel[1] && opposite_faces_parallel[2];
  }
};

inline int incidence_weight(std::uint8_t bits) { return __builtin_popcount(bits & 7u); }

class Triangulation {
 public:
  Triangulation() = default;
  explicit Triangulation(std::vector<Tetrahedron> tets) : tets_(std::move(tets)) {
    std::sort(tets_.begin(), tets_.end());
  }

  int id() const { return id_; }
  const std::vector<Tetrahedron>& tetrahedra() const { return tets_; }
  const SignConstraintSet& constraints() const { return constraints_; }
  const TriangulationFeatures& features() const { return features_; }
  int type_class() const { return type_class_; }
  TriangulationType type() const { return type_; }

  /// Bitmask of forms that appear in a constraint, and which of them must be positive.
  std::uint32_t constraint_mask() const { return care_mask_; }
  std::uint32_t required_positive_mask() const { return positive_mask_; }

  bool satisfied_by(const FormSigns& s) const {
    for (const auto& c : constraints_)
      if (s[c.form] != c.required) return false;
    return true;
  }

  bool has_edge(Vertex a, Vertex b) const {
    for (const auto& t : tets_)
      if (t.contains(a) && t.contains(b)) return true;
    return false;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < tets_.size(); ++i) {
      if (i) s += " ";
      s += tets_[i].to_string();
    }
    return s;
  }

 private:
  friend class Catalog;
  std::vector<Tetrahedron> tets_;
  int id_ = 0;
  SignConstraintSet constraints_;
  TriangulationFeatures features_;
  int type_class_ = -1;
  TriangulationType type_ = TriangulationType::I;
  std::uint32_t care_mask_ = 0;
  std::uint32_t positive_mask_ = 0;
};

// ---------------------------------------------------------------------------
// Enumeration

namespace detail {

/// Interior triangles of the dissection: each must be a facet of exactly two tetrahedra.
inline bool is_face_to_face(const std::vector<Tetrahedron>& tets) {
  std::map<std::uint8_t, int> interior;
  for (const auto& t : tets) {
    const std::uint8_t m = t.mask();
    for (int skip = 0; skip < 4; ++skip) {
      const std::uint8_t tri = m & static_cast<std::uint8_t>(~(1u << t[skip].code()));
      std::array<Vertex, 3> v;
      int k = 0;
      for (int i = 0; i < 4; ++i)
        if (i != skip) v[k++] = t[i];
      if (!on_cube_facet(v[0], v[1], v[2])) ++interior[tri];
    }
  }
  for (const auto& [tri, count] : interior)
    if (count != 2) return false;
  return true;
}

}  // namespace detail

/// All sets of interior-disjoint cube tetrahedra with total volume equal to the
/// cube, filtered to face-to-face dissections. Ordered lexicographically.
inline std::vector<std::vector<Tetrahedron>> enumerate_tetrahedron_covers() {
  const auto& tets = nondegenerate_tetrahedra();
  const int n = static_cast<int>(tets.size());
  std::vector<std::vector<bool>> compatible(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) compatible[i][j] = compatible[j][i] = interiors_disjoint(tets[i], tets[j]);

  std::vector<std::vector<Tetrahedron>> out;
  std::vector<int> chosen;
  auto recurse = [&](auto&& self, int start, int volume) -> void {
    if (volume == 6) {
      std::vector<Tetrahedron> cover;
      for (int i : chosen) cover.push_back(tets[i]);
      if (detail::is_face_to_face(cover)) out.push_back(std::move(cover));
      return;
    }
    for (int i = start; i < n; ++i) {
      const int v = tets[i].volume6();
      if (volume + v > 6) continue;
      bool ok = true;
      for (int j : chosen)
        if (!compatible[i][j]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen.push_back(i);
      self(self, i + 1, volume + v);
      chosen.pop_back();
    }
  };
  recurse(recurse, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Wall circuits

namespace detail {

inline long long det4(const std::array<std::array<long long, 4>, 4>& m) {
  long long total = 0;
  for (int c = 0; c < 4; ++c) {
    std::array<Vec3, 3> minor;
    for (int r = 1; r < 4; ++r) {
      int k = 0;
      for (int cc = 0; cc < 4; ++cc)
        if (cc != c) minor[r - 1][k++] = m[r][cc];
    }
    const long long d = det3(minor[0], minor[1], minor[2]);
    total += ((c % 2 == 0) ? 1 : -1) * m[0][c] * d;
  }
  return total;
}

}  // namespace detail

/// The affine dependence among the 5 vertices of two tetrahedra sharing a
/// triangle, as a primitive integer vector indexed by vertex code, positive
/// on the two apexes.
inline std::array<int, 8> wall_circuit(const Tetrahedron& s, const Tetrahedron& t) {
  const std::uint8_t shared = s.mask() & t.mask();
  if (__builtin_popcount(shared) != 3) throw DomainError("tetrahedra do not share a triangle");
  std::array<Vertex, 5> pts;
  int k = 0;
  for (int c = 0; c < 8; ++c)
    if (((s.mask() | t.mask()) >> c) & 1) pts[k++] = Vertex(c);
  // Columns are the homogeneous points (x, y, z, 1); lambda_i = (-1)^i det(M without column i).
  std::array<long long, 5> lambda{};
  for (int drop = 0; drop < 5; ++drop) {
    std::array<std::array<long long, 4>, 4> m{};
    int col = 0;
    for (int i = 0; i < 5; ++i) {
      if (i == drop) continue;
      const Vec3 p = point(pts[i]);
      m[0][col] = p[0];
      m[1][col] = p[1];
      m[2][col] = p[2];
      m[3][col] = 1;
      ++col;
    }
    lambda[drop] = ((drop % 2 == 0) ? 1 : -1) * detail::det4(m);
  }
  long long g = 0;
  for (long long l : lambda) g = std::gcd(g, std::llabs(l));
  if (g == 0) throw CatalogError("wall points are not minimally dependent");
  std::array<int, 8> circuit{};
  for (int i = 0; i < 5; ++i) circuit[pts[i].code()] = static_cast<int>(lambda[i] / g);
  const Vertex apex = Vertex(__builtin_ctz(s.mask() & ~shared));
  if (circuit[apex.code()] < 0)
    for (int& c : circuit) c = -c;
  return circuit;
}

/// Matches a circuit to +/- one of the 20 forms. Returns the constraint
/// "circuit . log F < 0" expressed on that form.
inline std::optional<SignConstraint> constraint_for_circuit(const std::array<int, 8>& circuit) {
  for (int k = 0; k < kFormCount; ++k) {
    bool same = true, opposite = true;
    for (int i = 0; i < 8; ++i) {
      same = same && kForms[k].coef[i] == circuit[i];
      opposite = opposite && kForms[k].coef[i] == -circuit[i];
    }
    if (same) return SignConstraint{k, Sign::Neg};
    if (opposite) return SignConstraint{k, Sign::Pos};
  }
  return std::nullopt;
}

/// Local convexity conditions across every interior wall of the triangulation.
inline SignConstraintSet derive_constraints(const std::vector<Tetrahedron>& tets) {
  SignConstraintSet out;
  for (std::size_t i = 0; i < tets.size(); ++i) {
    for (std::size_t j = i + 1; j < tets.size(); ++j) {
      const std::uint8_t shared = tets[i].mask() & tets[j].mask();
      if (__builtin_popcount(shared) != 3) continue;
      const auto circuit = wall_circuit(tets[i], tets[j]);
      const auto c = constraint_for_circuit(circuit);
      if (!c) {
        throw CatalogError("wall between " + tets[i].to_string() + " and " + tets[j].to_string() +
                           " matches no linear form");
      }
      if (std::find(out.begin(), out.end(), *c) == out.end()) out.push_back(*c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline SignConstraintSet derive_constraints(const Triangulation& t) { return derive_constraints(t.tetrahedra()); }

// ---------------------------------------------------------------------------
// Features

inline TriangulationFeatures compute_features(const std::vector<Tetrahedron>& tets) {
  TriangulationFeatures f;
  f.tetrahedron_count = static_cast<int>(tets.size());
  auto has_edge = [&](Vertex a, Vertex b) {
    for (const auto& t : tets)
      if (t.contains(a) && t.contains(b)) return true;
    return false;
  };
  for (int fi = 0; fi < 6; ++fi) {
    const Face face = Face::from_index(fi);
    const Vertex o = face.origin();
    const Vertex o2 = face.opposite(o);
    const Vertex p = Vertex(o.code() ^ Vertex::axis_bit(static_cast<Axis>((static_cast<int>(face.axis) + 1) % 3)));
    const Vertex p2 = face.opposite(p);
    const bool first = has_edge(o, o2);
    const bool second = has_edge(p, p2);
    if (first == second) throw CatalogError("facet must carry exactly one diagonal");
    f.face_diagonals[fi] = first ? Diagonal{o, o2} : Diagonal{p, p2};
  }
  for (int c = 0; c < 8; ++c) {
    const Vertex v(c);
    std::uint8_t bits = 0;
    for (Axis a : kAxes) {
      const Face face{a, v.coord(a)};
      if (f.face_diagonals[face.index()].touches(v)) bits |= static_cast<std::uint8_t>(1u << static_cast<int>(a));
    }
    f.incidence[c] = bits;
    if (bits == 7) f.full_vertices.push_back(v);
    if (bits == 0) f.empty_vertices.push_back(v);
  }
  for (int c = 0; c < 4; ++c)
    if (has_edge(Vertex(c), Vertex(c).antipode())) f.has_hyperdiagonal = true;
  for (Axis a : kAxes) {
    const auto& lo = f.face_diagonals[Face{a, 0}.index()];
    const auto& hi = f.face_diagonals[Face{a, 1}.index()];
    const int bit = Vertex::axis_bit(a);
    f.opposite_faces_parallel[static_cast<int>(a)] =
        (lo.a.code() ^ bit) == hi.a.code() || (lo.a.code() ^ bit) == hi.b.code();
  }
  return f;
}

// ---------------------------------------------------------------------------
// Catalog

class Catalog {
 public:
  /// Builds and validates the full catalog. Throws CatalogError on any
  /// inconsistency.
  static Catalog build() {
    Catalog cat;
    const auto covers = enumerate_tetrahedron_covers();
    if (static_cast<int>(covers.size()) != kTriangulationCount) {
      throw CatalogError("expected 74 triangulations, found " + std::to_string(covers.size()));
    }
    for (std::size_t i = 0; i < covers.size(); ++i) {
      Triangulation t(covers[i]);
      t.id_ = static_cast<int>(i) + 1;
      t.constraints_ = derive_constraints(t.tets_);
      t.features_ = compute_features(t.tets_);
      for (const auto& c : t.constraints_) {
        t.care_mask_ |= 1u << c.form;
        if (c.required == Sign::Pos) t.positive_mask_ |= 1u << c.form;
      }
      cat.index_[t.tets_] = t.id_;
      cat.entries_.push_back(std::move(t));
    }
    int five = 0;
    for (const auto& t : cat.entries_)
      if (t.tets_.size() == 5) ++five;
    if (five != 2) throw CatalogError("expected 2 five-tetrahedron triangulations, found " + std::to_string(five));

    const auto& group = cube_symmetries();
    cat.images_.resize(group.size());
    for (std::size_t g = 0; g < group.size(); ++g) {
      auto& img = cat.images_[g];
      img.resize(kTriangulationCount);
      std::vector<bool> hit(kTriangulationCount, false);
      for (const auto& t : cat.entries_) {
        std::vector<Tetrahedron> mapped;
        for (const auto& tet : t.tets_) {
          const auto& v = tet.vertices();
          mapped.emplace_back(group[g](v[0]), group[g](v[1]), group[g](v[2]), group[g](v[3]));
        }
        std::sort(mapped.begin(), mapped.end());
        const auto it = cat.index_.find(mapped);
        if (it == cat.index_.end()) throw CatalogError("symmetry image is not a catalog triangulation");
        img[t.id_ - 1] = it->second;
        if (hit[it->second - 1]) throw CatalogError("symmetry action is not a bijection");
        hit[it->second - 1] = true;
      }
    }

    std::vector<int> orbit_of(kTriangulationCount, -1);
    for (const auto& t : cat.entries_) {
      if (orbit_of[t.id_ - 1] >= 0) continue;
      const int o = static_cast<int>(cat.orbits_.size());
      std::vector<int> members;
      for (const auto& img : cat.images_) {
        const int m = img[t.id_ - 1];
        if (orbit_of[m - 1] < 0) {
          orbit_of[m - 1] = o;
          members.push_back(m);
        }
      }
      std::sort(members.begin(), members.end());
      cat.orbits_.push_back(std::move(members));
    }
    if (static_cast<int>(cat.orbits_.size()) != kTypeCount) {
      throw CatalogError("expected 6 symmetry orbits, found " + std::to_string(cat.orbits_.size()));
    }
    for (auto& t : cat.entries_) t.type_class_ = orbit_of[t.id_ - 1];
    cat.assign_types();
    for (const auto& t : cat.entries_) cat.masks_.push_back({t.care_mask_, t.positive_mask_});
    for (std::uint32_t b = 0; b < cat.buckets_.size(); ++b)
      for (std::size_t i = 0; i < cat.masks_.size(); ++i)
        if (((b ^ cat.masks_[i].positive) & cat.masks_[i].care & kBucketMask) == 0)
          cat.buckets_[b].push_back(static_cast<std::uint8_t>(i));
    return cat;
  }

  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<Triangulation>& entries() const { return entries_; }

  const Triangulation& at(int id) const {
    if (id < 1 || id > size()) throw DomainError("unknown triangulation id " + std::to_string(id));
    return entries_[id - 1];
  }

  std::optional<int> find(std::vector<Tetrahedron> tets) const {
    std::sort(tets.begin(), tets.end());
    const auto it = index_.find(tets);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Id of the image of triangulation `id` under the group element with index `g`.
  int image(std::size_t g, int id) const { return images_.at(g).at(id - 1); }
  int image(const CubeSymmetry& s, int id) const {
    const auto& group = cube_symmetries();
    for (std::size_t g = 0; g < group.size(); ++g)
      if (group[g] == s) return image(g, id);
    throw DomainError("not a cube symmetry");
  }
  const Triangulation& apply(const CubeSymmetry& s, const Triangulation& t) const { return at(image(s, t.id())); }

  const std::vector<std::vector<int>>& orbits() const { return orbits_; }
  const std::vector<int>& orbit_members(int type_class) const { return orbits_.at(type_class); }
  int orbit_representative(int type_class) const { return orbits_.at(type_class).front(); }

  /// The orbit class carrying a given structural type label.
  int type_class_of(TriangulationType t) const {
    for (std::size_t o = 0; o < orbits_.size(); ++o)
      if (at(orbits_[o].front()).type() == t) return static_cast<int>(o);
    throw CatalogError("no orbit carries that type");
  }

  /// Exact classification. Throws DegenerateTable when the table sits on a
  /// wall of its region.
  const Triangulation& classify(const Table3& table) const { return classify(eval_form_signs(table)); }

  const Triangulation& classify(const FormSigns& signs) const {
    for (const auto& t : entries_)
      if (t.satisfied_by(signs)) return t;
    if (signs.all_zero()) throw DegenerateTable("degenerate: all forms vanish");
    if (signs.any_zero()) {
      std::string which;
      for (int k = 0; k < kFormCount; ++k) {
        if (signs[k] != Sign::Zero) continue;
        if (!which.empty()) which += ",";
        which.push_back(form_letter(k));
      }
      throw DegenerateTable("degenerate: forms " + which + " vanish on a wall of the table's region");
    }
    throw CatalogError("nonzero sign vector " + signs.to_string() + " matches no triangulation");
  }

  /// Float classification from log-heights via the form signs. Returns the
  /// catalog id, or nullopt when a constraint form is within tol of zero.
  std::optional<int> classify_heights(std::span<const double, 8> heights, double tol = kDefaultTolerance) const {
    const auto values = form_values(heights);
    std::uint32_t positive = 0;
    for (int k = 0; k < kFormCount; ++k)
      if (values[k] > 0) positive |= 1u << k;
    for (std::size_t i : buckets_[positive & kBucketMask]) {
      if ((positive & masks_[i].care) != masks_[i].positive) continue;
      for (std::uint32_t m = masks_[i].care; m; m &= m - 1)
        if (std::fabs(values[std::countr_zero(m)]) < tol) return std::nullopt;
      return static_cast<int>(i) + 1;
    }
    return std::nullopt;
  }

  /// Float classification of positive entries (logs taken here).
  std::optional<int> classify_entries(std::span<const double, 8> entries, double tol = kDefaultTolerance) const {
    std::array<double, 8> h{};
    for (int i = 0; i < 8; ++i) h[i] = std::log(entries[i]);
    return classify_heights(h, tol);
  }

 private:
  void assign_types() {
    // I: the corner-cut pair; II: antiparallel opposite diagonals on every axis;
    // IV: parallel everywhere, no full vertex; VI: parallel everywhere, no empty vertex.
    // III and V are the two remaining orbits: V has two parallel axis pairs, III one.
    for (auto& t : entries_) {
      const auto& f = t.features_;
      TriangulationType ty;
      if (f.tetrahedron_count == 5) {
        ty = TriangulationType::I;
      } else if (f.all_opposite_antiparallel()) {
        ty = TriangulationType::II;
      } else if (f.all_opposite_parallel() && f.full_vertices.empty()) {
        ty = TriangulationType::IV;
      } else if (f.all_opposite_parallel() && f.empty_vertices.empty()) {
        ty = TriangulationType::VI;
      } else if (f.opposite_faces_parallel[0] + f.opposite_faces_parallel[1] + f.opposite_faces_parallel[2] == 2) {
        ty = TriangulationType::V;
      } else {
        ty = TriangulationType::III;
      }
      t.type_ = ty;
    }
    std::array<int, kTypeCount> seen{};
    for (const auto& orbit : orbits_) {
      const auto ty = at(orbit.front()).type();
      for (int m : orbit)
        if (at(m).type() != ty) throw CatalogError("structural type is not constant on an orbit");
      ++seen[static_cast<int>(ty) - 1];
    }
    for (int c : seen)
      if (c != 1) throw CatalogError("structural types do not separate the six orbits");
  }

  struct SignMasks {
    std::uint32_t care;
    std::uint32_t positive;
  };

  std::vector<Triangulation> entries_;
  // compact copy for the float scan, bucketed by the face-diagonal forms a..f
  static constexpr std::uint32_t kBucketMask = 63;
  std::vector<SignMasks> masks_;
  std::array<std::vector<std::uint8_t>, 64> buckets_;
  std::map<std::vector<Tetrahedron>, int> index_;
  std::vector<std::vector<int>> images_;
  std::vector<std::vector<int>> orbits_;
};

/// The process-wide catalog, built once on first use.
inline const Catalog& catalog() {
  static const Catalog instance = Catalog::build();
  return instance;
}

inline Catalog enumerate_triangulations() { return Catalog::build(); }

inline const Triangulation& classify_exact(const Table3& table) { return catalog().classify(table); }

inline const TriangulationFeatures& features(const Triangulation& t) { return t.features(); }

}  // namespace simpson
