#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

namespace simpson {

inline constexpr int kFormCount = 20;

/// One of the 20 balanced integer combinations of log-entries that cut the
/// positive orthant of R^8 into the triangulation regions of the cube.
/// Coefficients are indexed by vertex code (binary xyz).
struct LinearForm {
  char letter;
  std::array<int, 8> coef;
};

// Vertex codes: 000=0 001=1 010=2 011=3 100=4 101=5 110=6 111=7.
inline constexpr std::array<LinearForm, kFormCount> kForms{{
    // face diagonals: a,b fix z; c,d fix y; e,f fix x
    {'a', {+1, 0, -1, 0, -1, 0, +1, 0}},
    {'b', {0, +1, 0, -1, 0, -1, 0, +1}},
    {'c', {+1, -1, 0, 0, -1, +1, 0, 0}},
    {'d', {0, 0, +1, -1, 0, 0, -1, +1}},
    {'e', {+1, -1, -1, +1, 0, 0, 0, 0}},
    {'f', {0, 0, 0, 0, +1, -1, -1, +1}},
    // diagonal rectangles
    {'g', {+1, 0, 0, -1, -1, 0, 0, +1}},
    {'h', {0, +1, -1, 0, 0, -1, +1, 0}},
    {'i', {+1, 0, -1, 0, 0, -1, 0, +1}},
    {'j', {0, +1, 0, -1, -1, 0, +1, 0}},
    {'k', {+1, -1, 0, 0, 0, 0, -1, +1}},
    {'l', {0, 0, +1, -1, -1, +1, 0, 0}},
    // corner circuits
    {'m', {-2, +1, +1, 0, +1, 0, 0, -1}},
    {'n', {-1, 0, 0, +1, 0, +1, +1, -2}},
    {'o', {0, -1, +1, 0, +1, 0, -2, +1}},
    {'p', {+1, -2, 0, +1, 0, +1, -1, 0}},
    {'q', {0, +1, -1, 0, +1, -2, 0, +1}},
    {'r', {+1, 0, -2, +1, 0, -1, +1, 0}},
    {'s', {+1, 0, 0, -1, -2, +1, +1, 0}},
    {'t', {0, +1, +1, -2, -1, 0, 0, +1}},
}};

inline constexpr char form_letter(int index) { return static_cast<char>('a' + index); }

inline constexpr std::optional<int> form_index(char letter) {
  if (letter < 'a' || letter > 't') return std::nullopt;
  return letter - 'a';
}

namespace detail {
// coefficients by vertex, then form: the layout the evaluation loop vectorizes
inline constexpr auto kFormColumns = [] {
  std::array<std::array<double, kFormCount>, 8> out{};
  for (int k = 0; k < kFormCount; ++k)
    for (int i = 0; i < 8; ++i) out[i][k] = kForms[k].coef[i];
  return out;
}();
}  // namespace detail

/// Float evaluation on log-heights; used only by the sampling paths.
inline std::array<double, kFormCount> form_values(std::span<const double, 8> heights) {
  std::array<double, kFormCount> out{};
  for (int i = 0; i < 8; ++i) {
    const double h = heights[i];
    for (int k = 0; k < kFormCount; ++k) out[k] += detail::kFormColumns[i][k] * h;
  }
  return out;
}

}  // namespace simpson
