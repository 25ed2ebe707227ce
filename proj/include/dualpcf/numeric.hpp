#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dualpcf {

using Rational = mpq_class;

Rational make_rational(long num, unsigned long den = 1);
Rational dyadic(long num, unsigned exponent);  // num / 2^exponent

// Rational or one of the two infinities.
class ExtendedRational {
 public:
  enum class Kind : std::uint8_t { NegInf, Finite, PosInf };

  ExtendedRational() : kind_(Kind::Finite) {}
  ExtendedRational(Rational v);  // NOLINT: implicit on purpose
  ExtendedRational(long v) : ExtendedRational(Rational(v)) {}  // NOLINT

  static ExtendedRational neg_inf();
  static ExtendedRational pos_inf();

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  // throws std::logic_error on an infinity
  const Rational& value() const;

  int compare(const ExtendedRational& o) const;
  bool operator==(const ExtendedRational& o) const { return compare(o) == 0; }
  bool operator<(const ExtendedRational& o) const { return compare(o) < 0; }
  bool operator<=(const ExtendedRational& o) const { return compare(o) <= 0; }
  bool operator>(const ExtendedRational& o) const { return compare(o) > 0; }
  bool operator>=(const ExtendedRational& o) const { return compare(o) >= 0; }

  std::string to_string() const;

 private:
  Kind kind_;
  Rational value_;
};

// Compact rational interval or the whole line. Half-lines do not exist.
class Interval {
 public:
  Interval() : Interval(Rational(0)) {}
  explicit Interval(Rational point);
  Interval(Rational lo, Rational hi);  // throws std::invalid_argument if lo > hi

  static Interval bottom();
  static Interval point(Rational v) { return Interval(std::move(v)); }
  // throws std::invalid_argument for half-lines or lo > hi
  static Interval from_endpoints(const ExtendedRational& lo, const ExtendedRational& hi);

  bool is_bottom() const { return bottom_; }
  bool is_point() const { return !bottom_ && lo_ == hi_; }

  ExtendedRational lo() const;
  ExtendedRational hi() const;
  // finite endpoints; throw std::logic_error on bottom
  const Rational& lower() const;
  const Rational& upper() const;

  bool contains(const Rational& x) const;
  bool contains(const Interval& inner) const;  // set inclusion inner ⊆ *this

  bool operator==(const Interval& o) const;
  bool operator!=(const Interval& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  bool bottom_ = false;
  Rational lo_, hi_;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);

Interval iv_add(const Interval& a, const Interval& b);
Interval iv_sub(const Interval& a, const Interval& b);
Interval iv_neg(const Interval& a);
Interval iv_mul(const Interval& a, const Interval& b);
Interval iv_div_nat(const Interval& a, std::uint64_t n);
Interval iv_meet(const Interval& a, const Interval& b);
std::optional<Interval> iv_join(const Interval& a, const Interval& b);
bool iv_way_below(const Interval& a, const Interval& b);
ExtendedRational iv_width(const Interval& a);

// a ⊑ b in the information order, i.e. b ⊆ a
bool iv_refines(const Interval& a, const Interval& b);
bool iv_consistent(const Interval& a, const Interval& b);
// every point of a is strictly above every point of b
bool iv_above(const Interval& a, const Interval& b);

// Standard-part projections of the dual rules.
Interval iv_max(const Interval& a, const Interval& b);
Interval iv_min(const Interval& a, const Interval& b);
Interval iv_pr(const Interval& a);

struct DualInterval {
  Interval std;
  Interval inf;

  DualInterval() = default;
  DualInterval(Interval s, Interval i) : std(std::move(s)), inf(std::move(i)) {}
  explicit DualInterval(Interval s) : std(std::move(s)), inf(Rational(0)) {}

  static DualInterval bottom() { return {Interval::bottom(), Interval::bottom()}; }

  bool operator==(const DualInterval& o) const { return std == o.std && inf == o.inf; }
  bool operator!=(const DualInterval& o) const { return !(*this == o); }

  std::string to_string() const;
};

inline const Interval& St(const DualInterval& x) { return x.std; }
inline const Interval& In(const DualInterval& x) { return x.inf; }

DualInterval dual_add(const DualInterval& a, const DualInterval& b);
DualInterval dual_sub(const DualInterval& a, const DualInterval& b);
DualInterval dual_neg(const DualInterval& a);
DualInterval dual_mul(const DualInterval& a, const DualInterval& b);
DualInterval dual_div_nat(const DualInterval& a, std::uint64_t n);
DualInterval dual_max(const DualInterval& a, const DualInterval& b);
DualInterval dual_min(const DualInterval& a, const DualInterval& b);
DualInterval dual_pr(const DualInterval& a);
DualInterval dual_eps(const DualInterval& a);
DualInterval dual_meet(const DualInterval& a, const DualInterval& b);
bool dual_refines(const DualInterval& a, const DualInterval& b);

// Text forms: "3", "-1/2", "inf", "[lo,hi]", "[lo,hi] + eps [lo,hi]".
// Parsers accept surrounding whitespace and throw std::invalid_argument.
ExtendedRational parse_extended(std::string_view text);
Rational parse_rational(std::string_view text);
Interval parse_interval(std::string_view text);
DualInterval parse_dual(std::string_view text);

}  // namespace dualpcf
