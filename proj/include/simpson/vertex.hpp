#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "simpson/errors.hpp"

namespace simpson {

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::X, Axis::Y, Axis::Z};

/// A vertex of the unit cube, encoded as the binary number xyz (x is the high bit).
class Vertex {
 public:
  constexpr Vertex() = default;
  constexpr explicit Vertex(int code) : code_(static_cast<std::uint8_t>(code & 7)) {}
  constexpr Vertex(int x, int y, int z) : code_(static_cast<std::uint8_t>(((x & 1) << 2) | ((y & 1) << 1) | (z & 1))) {}

  constexpr int code() const { return code_; }
  constexpr int coord(Axis a) const { return (code_ >> (2 - static_cast<int>(a))) & 1; }
  constexpr int x() const { return coord(Axis::X); }
  constexpr int y() const { return coord(Axis::Y); }
  constexpr int z() const { return coord(Axis::Z); }

  constexpr Vertex flipped(Axis a) const { return Vertex(code_ ^ axis_bit(a)); }
  constexpr Vertex antipode() const { return Vertex(code_ ^ 7); }

  static constexpr int axis_bit(Axis a) { return 1 << (2 - static_cast<int>(a)); }

  std::string name() const {
    return {static_cast<char>('0' + x()), static_cast<char>('0' + y()), static_cast<char>('0' + z())};
  }

  /// Accepts "xyz" bit strings such as "011".
  static Vertex parse(std::string_view text) {
    if (text.size() != 3) throw DomainError("vertex must be three bits, got '" + std::string(text) + "'");
    int code = 0;
    for (char c : text) {
      if (c != '0' && c != '1') throw DomainError("vertex must be three bits, got '" + std::string(text) + "'");
      code = (code << 1) | (c - '0');
    }
    return Vertex(code);
  }

  friend constexpr bool operator==(Vertex, Vertex) = default;
  friend constexpr auto operator<=>(Vertex, Vertex) = default;

 private:
  std::uint8_t code_ = 0;
};

inline constexpr std::array<Vertex, 8> all_vertices() {
  return {Vertex(0), Vertex(1), Vertex(2), Vertex(3), Vertex(4), Vertex(5), Vertex(6), Vertex(7)};
}

}  // namespace simpson
