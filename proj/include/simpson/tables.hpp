#pragma once

// Exact 2x2 and 2x2x2 contingency tables and the sign tests defined on them.
//
// Every sign here is a comparison of two monomials in the table entries, so
// it is decided with exact rational arithmetic. Log-space is never used.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "simpson/errors.hpp"
#include "simpson/forms.hpp"
#include "simpson/rational.hpp"
#include "simpson/vertex.hpp"

namespace simpson {

enum class Sign : std::int8_t { Neg = -1, Zero = 0, Pos = 1 };

inline constexpr Sign sign_from_int(int s) { return s > 0 ? Sign::Pos : (s < 0 ? Sign::Neg : Sign::Zero); }
inline constexpr Sign negate(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }
inline constexpr char sign_char(Sign s) { return s == Sign::Pos ? '+' : (s == Sign::Neg ? '-' : '0'); }

/// A 2x2x2 table with strictly positive exact entries, indexed by vertex code.
class Table3 {
 public:
  explicit Table3(std::array<Rational, 8> entries) : entries_(std::move(entries)) {
    for (int i = 0; i < 8; ++i) {
      if (entries_[i] <= 0) {
        throw DomainError("table entry " + Vertex(i).name() + " must be strictly positive, got " +
                          format_rational(entries_[i]));
      }
    }
  }

  static Table3 from_integers(std::initializer_list<long long> values) {
    if (values.size() != 8) throw DomainError("Table3 needs 8 entries");
    std::array<Rational, 8> e;
    int i = 0;
    for (long long v : values) e[i++] = Rational(v);
    return Table3(std::move(e));
  }

  /// Exact dyadic conversion of positive doubles.
  static Table3 from_doubles(std::span<const double, 8> values) {
    std::array<Rational, 8> e;
    for (int i = 0; i < 8; ++i) e[i] = rational_from_double(values[i]);
    return Table3(std::move(e));
  }

  const Rational& operator[](Vertex v) const { return entries_[v.code()]; }
  const Rational& at(int code) const { return entries_.at(code); }
  const std::array<Rational, 8>& entries() const { return entries_; }

  std::array<double, 8> to_doubles() const {
    std::array<double, 8> out{};
    for (int i = 0; i < 8; ++i) out[i] = to_double(entries_[i]);
    return out;
  }

  Table3 scaled(const Rational& lambda) const {
    std::array<Rational, 8> e;
    for (int i = 0; i < 8; ++i) e[i] = entries_[i] * lambda;
    return Table3(std::move(e));
  }

  Table3 smoothed(const Rational& eps) const {
    std::array<Rational, 8> e;
    for (int i = 0; i < 8; ++i) e[i] = entries_[i] + eps;
    return Table3(std::move(e));
  }

  friend Table3 operator+(const Table3& f, const Table3& g) {
    std::array<Rational, 8> e;
    for (int i = 0; i < 8; ++i) e[i] = f.entries_[i] + g.entries_[i];
    return Table3(std::move(e));
  }

  friend bool operator==(const Table3&, const Table3&) = default;

 private:
  std::array<Rational, 8> entries_;
};

/// A 2x2x2 table whose entries may be zero (raw count data). Only used to
/// slice into 2x2 layers and to apply smoothing before classification.
class NonnegTable3 {
 public:
  explicit NonnegTable3(std::array<Rational, 8> entries) : entries_(std::move(entries)) {
    for (const auto& e : entries_) {
      if (e < 0) throw DomainError("table entries must be nonnegative, got " + format_rational(e));
    }
  }
  const Rational& operator[](Vertex v) const { return entries_[v.code()]; }
  const std::array<Rational, 8>& entries() const { return entries_; }
  bool strictly_positive() const {
    for (const auto& e : entries_)
      if (e <= 0) return false;
    return true;
  }
  Table3 positive() const { return Table3(entries_); }
  Table3 smoothed(const Rational& eps) const {
    std::array<Rational, 8> e;
    for (int i = 0; i < 8; ++i) e[i] = entries_[i] + eps;
    return Table3(std::move(e));
  }

 private:
  std::array<Rational, 8> entries_;
};

/// A 2x2 table with nonnegative entries in order 00, 01, 10, 11.
class Table2 {
 public:
  explicit Table2(std::array<Rational, 4> entries) : entries_(std::move(entries)) {
    for (const auto& e : entries_) {
      if (e < 0) throw DomainError("2x2 entries must be nonnegative, got " + format_rational(e));
    }
  }
  static Table2 from_integers(long long f00, long long f01, long long f10, long long f11) {
    return Table2({Rational(f00), Rational(f01), Rational(f10), Rational(f11)});
  }

  const Rational& at(int x, int y) const { return entries_[2 * (x & 1) + (y & 1)]; }
  const std::array<Rational, 4>& entries() const { return entries_; }

  /// F00*F11 - F01*F10
  Rational det() const { return entries_[0] * entries_[3] - entries_[1] * entries_[2]; }

  friend Table2 operator+(const Table2& f, const Table2& g) {
    std::array<Rational, 4> e;
    for (int i = 0; i < 4; ++i) e[i] = f.entries_[i] + g.entries_[i];
    return Table2(std::move(e));
  }

 private:
  std::array<Rational, 4> entries_;
};

/// The 2x2 layer of a three-way table at a fixed value of one axis, with the
/// two remaining axes in (x, y, z) order.
inline Table2 layer(const NonnegTable3& t, Axis fixed, int value) {
  std::array<Rational, 4> e;
  int k = 0;
  for (int u = 0; u < 2; ++u) {
    for (int w = 0; w < 2; ++w) {
      int c[3];
      int free_pos = 0;
      for (int a = 0; a < 3; ++a) {
        if (a == static_cast<int>(fixed)) {
          c[a] = value;
        } else {
          c[a] = free_pos++ == 0 ? u : w;
        }
      }
      e[k++] = t[Vertex(c[0], c[1], c[2])];
    }
  }
  return Table2(std::move(e));
}

inline Table2 layer(const Table3& t, Axis fixed, int value) {
  return layer(NonnegTable3(t.entries()), fixed, value);
}

// ---------------------------------------------------------------------------
// Form signs

class FormSigns {
 public:
  FormSigns() { signs_.fill(Sign::Zero); }
  explicit FormSigns(std::array<Sign, kFormCount> s) : signs_(s) {}

  Sign operator[](int k) const { return signs_.at(k); }
  Sign operator[](char letter) const { return signs_.at(letter - 'a'); }
  const std::array<Sign, kFormCount>& signs() const { return signs_; }

  bool all_zero() const {
    for (Sign s : signs_)
      if (s != Sign::Zero) return false;
    return true;
  }
  bool any_zero() const {
    for (Sign s : signs_)
      if (s == Sign::Zero) return true;
    return false;
  }
  /// Bit k set iff form k is positive.
  std::uint32_t positive_mask() const {
    std::uint32_t m = 0;
    for (int k = 0; k < kFormCount; ++k)
      if (signs_[k] == Sign::Pos) m |= 1u << k;
    return m;
  }
  std::uint32_t zero_mask() const {
    std::uint32_t m = 0;
    for (int k = 0; k < kFormCount; ++k)
      if (signs_[k] == Sign::Zero) m |= 1u << k;
    return m;
  }
  std::string to_string() const {
    std::string out;
    for (Sign s : signs_) out.push_back(sign_char(s));
    return out;
  }

  friend bool operator==(const FormSigns&, const FormSigns&) = default;

 private:
  std::array<Sign, kFormCount> signs_;
};

namespace detail {

/// Sign of prod(F^c, c>0) - prod(F^-c, c<0) given entries split as num/den.
/// Both sides have equal total degree, so denominators can be cross-multiplied.
inline Sign monomial_comparison(const std::array<int, 8>& coef, const std::array<BigInt, 8>& num,
                                const std::array<BigInt, 8>& den) {
  BigInt lhs = 1;
  BigInt rhs = 1;
  for (int i = 0; i < 8; ++i) {
    for (int p = 0; p < coef[i]; ++p) {
      lhs *= num[i];
      rhs *= den[i];
    }
    for (int p = 0; p < -coef[i]; ++p) {
      rhs *= num[i];
      lhs *= den[i];
    }
  }
  return lhs > rhs ? Sign::Pos : (lhs < rhs ? Sign::Neg : Sign::Zero);
}

inline void split(const Table3& t, std::array<BigInt, 8>& num, std::array<BigInt, 8>& den) {
  for (int i = 0; i < 8; ++i) {
    num[i] = boost::multiprecision::numerator(t.at(i));
    den[i] = boost::multiprecision::denominator(t.at(i));
  }
}

}  // namespace detail

/// Sign of one linear form of the log-entries, as an exact product comparison.
inline Sign eval_form_sign(const Table3& table, int form) {
  std::array<BigInt, 8> num, den;
  detail::split(table, num, den);
  return detail::monomial_comparison(kForms.at(form).coef, num, den);
}

inline FormSigns eval_form_signs(const Table3& table) {
  std::array<BigInt, 8> num, den;
  detail::split(table, num, den);
  std::array<Sign, kFormCount> s{};
  for (int k = 0; k < kFormCount; ++k) s[k] = detail::monomial_comparison(kForms[k].coef, num, den);
  return FormSigns(s);
}

/// Sign of an arbitrary balanced integer combination of log-entries.
inline Sign eval_combination_sign(const Table3& table, const std::array<int, 8>& coef) {
  int total = 0;
  for (int c : coef) total += c;
  if (total != 0) throw DomainError("combination coefficients must sum to zero");
  std::array<BigInt, 8> num, den;
  detail::split(table, num, den);
  return detail::monomial_comparison(coef, num, den);
}

// ---------------------------------------------------------------------------
// Correlation profile

/// The 17 dependency signs of three binary variables.
///   mutual[code]       sign of P(XYZ) - P(X)P(Y)P(Z) for the pattern with that vertex code
///   marginal[axis]     sign of the correlation of the two other axes, summing out `axis`
///   conditional[k]     (x,y | z=0), (x,y | z=1), (x,z | y=0), (x,z | y=1), (y,z | x=0), (y,z | x=1)
/// The conditional order matches forms a..f.
struct CorrelationProfile {
  std::array<Sign, 8> mutual{};
  std::array<Sign, 3> marginal{};
  std::array<Sign, 6> conditional{};

  friend bool operator==(const CorrelationProfile&, const CorrelationProfile&) = default;
};

inline Sign det_sign(const Table2& t) { return sign_from_int(sign_of(t.det())); }

inline Table2 marginal_table(const Table3& t, Axis omitted) {
  const auto lo = layer(t, omitted, 0);
  const auto hi = layer(t, omitted, 1);
  return lo + hi;
}

inline CorrelationProfile correlation_profile(const Table3& t) {
  CorrelationProfile p;
  Rational total = 0;
  for (const auto& e : t.entries()) total += e;
  std::array<std::array<Rational, 2>, 3> axis_total{};
  for (int code = 0; code < 8; ++code) {
    Vertex v(code);
    for (Axis a : kAxes) axis_total[static_cast<int>(a)][v.coord(a)] += t.at(code);
  }
  const Rational n2 = total * total;
  for (int code = 0; code < 8; ++code) {
    Vertex v(code);
    const Rational lhs = n2 * t.at(code);
    const Rational rhs = axis_total[0][v.x()] * axis_total[1][v.y()] * axis_total[2][v.z()];
    p.mutual[code] = lhs > rhs ? Sign::Pos : (lhs < rhs ? Sign::Neg : Sign::Zero);
  }
  for (Axis a : kAxes) p.marginal[static_cast<int>(a)] = det_sign(marginal_table(t, a));
  const FormSigns forms = eval_form_signs(t);
  for (int k = 0; k < 6; ++k) p.conditional[k] = forms[k];
  return p;
}

/// Conditional signs recomputed from layer determinants; equals forms a..f.
inline std::array<Sign, 6> conditional_signs_from_layers(const Table3& t) {
  return {det_sign(layer(t, Axis::Z, 0)), det_sign(layer(t, Axis::Z, 1)), det_sign(layer(t, Axis::Y, 0)),
          det_sign(layer(t, Axis::Y, 1)), det_sign(layer(t, Axis::X, 0)), det_sign(layer(t, Axis::X, 1))};
}

// ---------------------------------------------------------------------------
// Two-dimensional reversal

enum class ReversalVerdict { ReversalPosToNeg, ReversalNegToPos, NoReversal, Degenerate };

inline const char* to_string(ReversalVerdict v) {
  switch (v) {
    case ReversalVerdict::ReversalPosToNeg: return "ReversalPosToNeg";
    case ReversalVerdict::ReversalNegToPos: return "ReversalNegToPos";
    case ReversalVerdict::NoReversal: return "NoReversal";
    case ReversalVerdict::Degenerate: return "Degenerate";
  }
  return "?";
}

inline ReversalVerdict detect_reversal_2d(const Table2& f, const Table2& g) {
  const Sign sf = det_sign(f);
  const Sign sg = det_sign(g);
  const Sign ss = det_sign(f + g);
  if (sf == Sign::Zero || sg == Sign::Zero || ss == Sign::Zero) return ReversalVerdict::Degenerate;
  if (sf == sg && ss == negate(sf)) {
    return sf == Sign::Pos ? ReversalVerdict::ReversalPosToNeg : ReversalVerdict::ReversalNegToPos;
  }
  return ReversalVerdict::NoReversal;
}

enum class SquareDiagonal { Diag00_11, Diag01_10, Degenerate };

inline const char* to_string(SquareDiagonal d) {
  switch (d) {
    case SquareDiagonal::Diag00_11: return "Diag00_11";
    case SquareDiagonal::Diag01_10: return "Diag01_10";
    case SquareDiagonal::Degenerate: return "Degenerate";
  }
  return "?";
}

/// Triangulation of the square induced by the log-entries.
inline SquareDiagonal classify_2d(const Table2& f) {
  for (const auto& e : f.entries()) {
    if (e <= 0) throw DomainError("classify_2d needs strictly positive entries");
  }
  switch (det_sign(f)) {
    case Sign::Pos: return SquareDiagonal::Diag00_11;
    case Sign::Neg: return SquareDiagonal::Diag01_10;
    default: return SquareDiagonal::Degenerate;
  }
}

}  // namespace simpson
