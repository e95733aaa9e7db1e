#pragma once

// Shared generators and small independent oracles for the test suites.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "simpson/rational.hpp"
#include "simpson/tables.hpp"
#include "simpson/vertex.hpp"

namespace simpson::testing {

using Entries = std::array<long long, 8>;

inline Entries random_entries(std::mt19937_64& rng, long long lo, long long hi) {
  std::uniform_int_distribution<long long> d(lo, hi);
  Entries e{};
  for (auto& x : e) x = d(rng);
  return e;
}

inline Table3 table_of(const Entries& e) {
  std::array<Rational, 8> r;
  for (int i = 0; i < 8; ++i) r[i] = Rational(e[i]);
  return Table3(r);
}

/// Sign of sum coef[i] * log e[i], by 128-bit products of integer entries.
inline Sign int128_sign(const Entries& e, const std::array<int, 8>& coef) {
  __int128 num = 1, den = 1;
  for (int i = 0; i < 8; ++i) {
    for (int k = 0; k < coef[i]; ++k) num *= e[i];
    for (int k = 0; k < -coef[i]; ++k) den *= e[i];
  }
  return num > den ? Sign::Pos : (num < den ? Sign::Neg : Sign::Zero);
}

/// i.i.d. Exp(1) entries from a test-local engine.
inline std::array<double, 8> random_exp_entries(std::mt19937_64& rng) {
  std::exponential_distribution<double> d(1.0);
  std::array<double, 8> t{};
  for (auto& x : t) x = d(rng);
  return t;
}

inline std::array<double, 8> logs_of(const std::array<double, 8>& t) {
  std::array<double, 8> h{};
  for (int i = 0; i < 8; ++i) h[i] = std::log(t[i]);
  return h;
}

/// Random positive rational table with small numerators and denominators.
inline Table3 random_rational_table(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(1, 60), den(1, 12);
  std::array<Rational, 8> r;
  for (auto& x : r) x = Rational(num(rng), den(rng));
  return Table3(r);
}

inline std::string sign_string(const std::array<Sign, 8>& s) {
  std::string out;
  for (Sign x : s) out += sign_char(x);
  return out;
}

}  // namespace simpson::testing
