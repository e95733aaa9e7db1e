#pragma once

// Exact integer geometry on the vertices of the unit cube.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "simpson/vertex.hpp"

namespace simpson {

using Vec3 = std::array<long long, 3>;

inline Vec3 point(Vertex v) { return {v.x(), v.y(), v.z()}; }
inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline long long dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline long long det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

/// Four cube vertices, kept sorted by code.
class Tetrahedron {
 public:
  Tetrahedron() = default;
  Tetrahedron(Vertex a, Vertex b, Vertex c, Vertex d) : v_{a, b, c, d} {
    std::sort(v_.begin(), v_.end());
    for (int i = 0; i < 3; ++i) {
      if (v_[i] == v_[i + 1]) throw DomainError("tetrahedron vertices must be distinct");
    }
  }
  explicit Tetrahedron(const std::array<int, 4>& codes)
      : Tetrahedron(Vertex(codes[0]), Vertex(codes[1]), Vertex(codes[2]), Vertex(codes[3])) {}

  const std::array<Vertex, 4>& vertices() const { return v_; }
  Vertex operator[](int i) const { return v_[i]; }

  bool contains(Vertex v) const { return std::find(v_.begin(), v_.end(), v) != v_.end(); }

  /// Volume in units of 1/6 of the cube: 0, 1 or 2.
  int volume6() const {
    const Vec3 o = point(v_[0]);
    return static_cast<int>(std::llabs(det3(sub(point(v_[1]), o), sub(point(v_[2]), o), sub(point(v_[3]), o))));
  }

  std::uint8_t mask() const {
    std::uint8_t m = 0;
    for (Vertex v : v_) m |= static_cast<std::uint8_t>(1u << v.code());
    return m;
  }

  std::string to_string() const {
    std::string s = "{";
    for (int i = 0; i < 4; ++i) {
      if (i) s += ",";
      s += v_[i].name();
    }
    return s + "}";
  }

  friend bool operator==(const Tetrahedron&, const Tetrahedron&) = default;
  friend auto operator<=>(const Tetrahedron&, const Tetrahedron&) = default;

 private:
  std::array<Vertex, 4> v_{};
};

/// The 58 tetrahedra with nonzero volume, in lexicographic order.
inline const std::vector<Tetrahedron>& nondegenerate_tetrahedra() {
  static const std::vector<Tetrahedron> all = [] {
    std::vector<Tetrahedron> out;
    for (int a = 0; a < 8; ++a)
      for (int b = a + 1; b < 8; ++b)
        for (int c = b + 1; c < 8; ++c)
          for (int d = c + 1; d < 8; ++d) {
            Tetrahedron t(std::array<int, 4>{a, b, c, d});
            if (t.volume6() != 0) out.push_back(t);
          }
    return out;
  }();
  return all;
}

/// True iff the two closed tetrahedra admit a weakly separating plane, i.e.
/// their interiors are disjoint. The candidate normals (face normals of either
/// and cross products of edge pairs) are complete for convex polytopes.
inline bool interiors_disjoint(const Tetrahedron& s, const Tetrahedron& t) {
  std::array<Vec3, 4> ps, pt;
  for (int i = 0; i < 4; ++i) {
    ps[i] = point(s[i]);
    pt[i] = point(t[i]);
  }
  auto separates = [&](const Vec3& n) {
    if (n[0] == 0 && n[1] == 0 && n[2] == 0) return false;
    long long smin = dot(n, ps[0]), smax = smin, tmin = dot(n, pt[0]), tmax = tmin;
    for (int i = 1; i < 4; ++i) {
      smin = std::min(smin, dot(n, ps[i]));
      smax = std::max(smax, dot(n, ps[i]));
      tmin = std::min(tmin, dot(n, pt[i]));
      tmax = std::max(tmax, dot(n, pt[i]));
    }
    return smax <= tmin || tmax <= smin;
  };
  auto face_normals = [](const std::array<Vec3, 4>& p) {
    std::array<Vec3, 4> n;
    for (int skip = 0; skip < 4; ++skip) {
      std::array<Vec3, 3> f;
      int k = 0;
      for (int i = 0; i < 4; ++i)
        if (i != skip) f[k++] = p[i];
      n[skip] = cross(sub(f[1], f[0]), sub(f[2], f[0]));
    }
    return n;
  };
  for (const auto& n : face_normals(ps))
    if (separates(n)) return true;
  for (const auto& n : face_normals(pt))
    if (separates(n)) return true;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = k + 1; l < 4; ++l)
          if (separates(cross(sub(ps[j], ps[i]), sub(pt[l], pt[k])))) return true;
  return false;
}

/// Whether three vertices lie in a common facet of the cube.
inline bool on_cube_facet(Vertex a, Vertex b, Vertex c) {
  for (Axis ax : kAxes) {
    if (a.coord(ax) == b.coord(ax) && b.coord(ax) == c.coord(ax)) return true;
  }
  return false;
}

}  // namespace simpson
