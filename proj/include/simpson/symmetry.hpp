#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "simpson/tables.hpp"
#include "simpson/vertex.hpp"

namespace simpson {

/// A signed permutation of the three coordinates: one of the 48 symmetries of
/// the cube. Acting on a vertex, output coordinate i is input coordinate
/// perm[i], complemented when flip bit i is set.
class CubeSymmetry {
 public:
  constexpr CubeSymmetry() = default;

  constexpr CubeSymmetry(std::array<int, 3> perm, std::array<int, 3> flips) : perm_(perm), flips_(flips) {
    for (int c = 0; c < 8; ++c) {
      const Vertex v(c);
      int out[3];
      for (int i = 0; i < 3; ++i) out[i] = v.coord(static_cast<Axis>(perm_[i])) ^ flips_[i];
      image_[c] = static_cast<std::uint8_t>(Vertex(out[0], out[1], out[2]).code());
    }
  }

  static constexpr CubeSymmetry identity() { return CubeSymmetry({0, 1, 2}, {0, 0, 0}); }
  static constexpr CubeSymmetry antipodal() { return CubeSymmetry({0, 1, 2}, {1, 1, 1}); }
  static constexpr CubeSymmetry swap_axes(Axis a, Axis b) {
    std::array<int, 3> p{0, 1, 2};
    std::swap(p[static_cast<int>(a)], p[static_cast<int>(b)]);
    return CubeSymmetry(p, {0, 0, 0});
  }
  static constexpr CubeSymmetry flip(Axis a) {
    std::array<int, 3> f{0, 0, 0};
    f[static_cast<int>(a)] = 1;
    return CubeSymmetry({0, 1, 2}, f);
  }

  constexpr const std::array<int, 3>& axis_permutation() const { return perm_; }
  constexpr const std::array<int, 3>& axis_flips() const { return flips_; }

  constexpr Vertex operator()(Vertex v) const { return Vertex(image_[v.code()]); }

  /// (this o rho)(v) = this(rho(v))
  constexpr CubeSymmetry compose(const CubeSymmetry& rho) const {
    std::array<int, 3> p{}, f{};
    for (int i = 0; i < 3; ++i) {
      p[i] = rho.perm_[perm_[i]];
      f[i] = rho.flips_[perm_[i]] ^ flips_[i];
    }
    return CubeSymmetry(p, f);
  }

  constexpr CubeSymmetry inverse() const {
    std::array<int, 3> p{}, f{};
    for (int i = 0; i < 3; ++i) {
      p[perm_[i]] = i;
      f[perm_[i]] = flips_[i];
    }
    return CubeSymmetry(p, f);
  }

  /// Determinant of the underlying orthogonal matrix (+1 rotation, -1 reflection).
  constexpr int orientation() const {
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (perm_[i] > perm_[j]) ++inversions;
    const int flips = flips_[0] + flips_[1] + flips_[2];
    return ((inversions + flips) % 2 == 0) ? 1 : -1;
  }

  std::string to_string() const {
    std::string s = "(";
    const char names[3] = {'x', 'y', 'z'};
    for (int i = 0; i < 3; ++i) {
      if (i) s += ",";
      if (flips_[i]) s += "~";
      s += names[perm_[i]];
    }
    return s + ")";
  }

  friend constexpr bool operator==(const CubeSymmetry& a, const CubeSymmetry& b) {
    return a.perm_ == b.perm_ && a.flips_ == b.flips_;
  }

 private:
  std::array<int, 3> perm_{0, 1, 2};
  std::array<int, 3> flips_{0, 0, 0};
  std::array<std::uint8_t, 8> image_{0, 1, 2, 3, 4, 5, 6, 7};
};

/// All 48 symmetries; element 0 is the identity.
inline const std::vector<CubeSymmetry>& cube_symmetries() {
  static const std::vector<CubeSymmetry> group = [] {
    std::vector<CubeSymmetry> g;
    std::array<int, 3> p{0, 1, 2};
    do {
      for (int mask = 0; mask < 8; ++mask) {
        g.emplace_back(p, std::array<int, 3>{(mask >> 2) & 1, (mask >> 1) & 1, mask & 1});
      }
    } while (std::next_permutation(p.begin(), p.end()));
    return g;
  }();
  return group;
}

inline Vertex apply(const CubeSymmetry& s, Vertex v) { return s(v); }

/// (s.F)[s(v)] = F[v]
inline Table3 apply(const CubeSymmetry& s, const Table3& t) {
  std::array<Rational, 8> e;
  for (int c = 0; c < 8; ++c) e[s(Vertex(c)).code()] = t.at(c);
  return Table3(std::move(e));
}

template <class T>
std::array<T, 8> apply_to_values(const CubeSymmetry& s, const std::array<T, 8>& values) {
  std::array<T, 8> out{};
  for (int c = 0; c < 8; ++c) out[s(Vertex(c)).code()] = values[c];
  return out;
}

}  // namespace simpson
