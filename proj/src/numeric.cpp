#include "dualpcf/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace dualpcf {

Rational make_rational(long num, unsigned long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational dyadic(long num, unsigned exponent) {
  mpz_class den = 1;
  den <<= exponent;
  Rational q(mpz_class(num), den);
  q.canonicalize();
  return q;
}

ExtendedRational::ExtendedRational(Rational v) : kind_(Kind::Finite), value_(std::move(v)) {
  value_.canonicalize();
}

ExtendedRational ExtendedRational::neg_inf() {
  ExtendedRational r;
  r.kind_ = Kind::NegInf;
  return r;
}

ExtendedRational ExtendedRational::pos_inf() {
  ExtendedRational r;
  r.kind_ = Kind::PosInf;
  return r;
}

const Rational& ExtendedRational::value() const {
  if (!is_finite()) throw std::logic_error("infinite endpoint has no rational value");
  return value_;
}

int ExtendedRational::compare(const ExtendedRational& o) const {
  if (kind_ != o.kind_) return static_cast<int>(kind_) < static_cast<int>(o.kind_) ? -1 : 1;
  if (kind_ != Kind::Finite) return 0;
  int c = cmp(value_, o.value_);
  return (c > 0) - (c < 0);
}

std::string ExtendedRational::to_string() const {
  switch (kind_) {
    case Kind::NegInf: return "-inf";
    case Kind::PosInf: return "inf";
    case Kind::Finite: break;
  }
  return value_.get_str();
}

// ---------------------------------------------------------------------------

Interval::Interval(Rational point) : lo_(point), hi_(std::move(point)) {
  lo_.canonicalize();
  hi_.canonicalize();
}

Interval::Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  lo_.canonicalize();
  hi_.canonicalize();
  if (lo_ > hi_) throw std::invalid_argument("interval with lo > hi");
}

Interval Interval::bottom() {
  Interval i;
  i.bottom_ = true;
  return i;
}

Interval Interval::from_endpoints(const ExtendedRational& lo, const ExtendedRational& hi) {
  if (lo.is_finite() && hi.is_finite()) return Interval(lo.value(), hi.value());
  if (lo.kind() == ExtendedRational::Kind::NegInf && hi.kind() == ExtendedRational::Kind::PosInf)
    return bottom();
  throw std::invalid_argument("only compact intervals and the whole line are representable");
}

ExtendedRational Interval::lo() const {
  return bottom_ ? ExtendedRational::neg_inf() : ExtendedRational(lo_);
}

ExtendedRational Interval::hi() const {
  return bottom_ ? ExtendedRational::pos_inf() : ExtendedRational(hi_);
}

const Rational& Interval::lower() const {
  if (bottom_) throw std::logic_error("bottom interval has no finite endpoint");
  return lo_;
}

const Rational& Interval::upper() const {
  if (bottom_) throw std::logic_error("bottom interval has no finite endpoint");
  return hi_;
}

bool Interval::contains(const Rational& x) const {
  return bottom_ || (lo_ <= x && x <= hi_);
}

bool Interval::contains(const Interval& inner) const {
  if (bottom_) return true;
  if (inner.bottom_) return false;
  return lo_ <= inner.lo_ && inner.hi_ <= hi_;
}

bool Interval::operator==(const Interval& o) const {
  if (bottom_ || o.bottom_) return bottom_ == o.bottom_;
  return lo_ == o.lo_ && hi_ == o.hi_;
}

std::string Interval::to_string() const {
  return "[" + lo().to_string() + "," + hi().to_string() + "]";
}

// ---------------------------------------------------------------------------

Interval iv_add(const Interval& a, const Interval& b) {
  if (a.is_bottom() || b.is_bottom()) return Interval::bottom();
  return Interval(a.lower() + b.lower(), a.upper() + b.upper());
}

Interval iv_neg(const Interval& a) {
  if (a.is_bottom()) return a;
  return Interval(-a.upper(), -a.lower());
}

Interval iv_sub(const Interval& a, const Interval& b) { return iv_add(a, iv_neg(b)); }

static bool is_zero_point(const Interval& a) { return a.is_point() && sgn(a.lower()) == 0; }

Interval iv_mul(const Interval& a, const Interval& b) {
  // the set product with {0} is {0}, even against the whole line
  if (is_zero_point(a) || is_zero_point(b)) return Interval(Rational(0));
  if (a.is_bottom() || b.is_bottom()) return Interval::bottom();
  Rational p[4] = {a.lower() * b.lower(), a.lower() * b.upper(), a.upper() * b.lower(),
                   a.upper() * b.upper()};
  auto [lo, hi] = std::minmax_element(std::begin(p), std::end(p));
  return Interval(*lo, *hi);
}

Interval iv_div_nat(const Interval& a, std::uint64_t n) {
  if (n == 0 || a.is_bottom()) return Interval::bottom();
  Rational d{mpz_class(std::to_string(n))};
  return Interval(a.lower() / d, a.upper() / d);
}

Interval operator+(const Interval& a, const Interval& b) { return iv_add(a, b); }
Interval operator-(const Interval& a, const Interval& b) { return iv_sub(a, b); }
Interval operator-(const Interval& a) { return iv_neg(a); }
Interval operator*(const Interval& a, const Interval& b) { return iv_mul(a, b); }

Interval iv_meet(const Interval& a, const Interval& b) {
  if (a.is_bottom() || b.is_bottom()) return Interval::bottom();
  return Interval(std::min(a.lower(), b.lower()), std::max(a.upper(), b.upper()));
}

std::optional<Interval> iv_join(const Interval& a, const Interval& b) {
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  Rational lo = std::max(a.lower(), b.lower());
  Rational hi = std::min(a.upper(), b.upper());
  if (lo > hi) return std::nullopt;
  return Interval(lo, hi);
}

bool iv_way_below(const Interval& a, const Interval& b) {
  if (a.is_bottom()) return true;
  if (b.is_bottom()) return false;
  return a.lower() < b.lower() && b.upper() < a.upper();
}

ExtendedRational iv_width(const Interval& a) {
  if (a.is_bottom()) return ExtendedRational::pos_inf();
  return ExtendedRational(a.upper() - a.lower());
}

bool iv_refines(const Interval& a, const Interval& b) { return a.contains(b); }

bool iv_consistent(const Interval& a, const Interval& b) { return iv_join(a, b).has_value(); }

bool iv_above(const Interval& a, const Interval& b) {
  if (a.is_bottom() || b.is_bottom()) return false;
  return a.lower() > b.upper();
}

Interval iv_max(const Interval& a, const Interval& b) {
  if (iv_above(a, b)) return a;
  if (iv_above(b, a)) return b;
  if (a.is_bottom() || b.is_bottom()) return Interval::bottom();
  return Interval(std::max(a.lower(), b.lower()), std::max(a.upper(), b.upper()));
}

Interval iv_min(const Interval& a, const Interval& b) {
  return iv_neg(iv_max(iv_neg(a), iv_neg(b)));
}

static const Interval& unit_interval() {
  static const Interval u(Rational(-1), Rational(1));
  return u;
}

Interval iv_pr(const Interval& a) {
  if (!a.is_bottom()) {
    if (a.upper() < -1) return Interval(Rational(-1));
    if (a.lower() > 1) return Interval(Rational(1));
    if (a.lower() > -1 && a.upper() < 1) return a;
  }
  return *iv_join(a, unit_interval());
}

// ---------------------------------------------------------------------------

std::string DualInterval::to_string() const { return std.to_string() + " + eps " + inf.to_string(); }

DualInterval dual_add(const DualInterval& a, const DualInterval& b) {
  return {a.std + b.std, a.inf + b.inf};
}

DualInterval dual_sub(const DualInterval& a, const DualInterval& b) {
  return {a.std - b.std, a.inf - b.inf};
}

DualInterval dual_neg(const DualInterval& a) { return {-a.std, -a.inf}; }

DualInterval dual_mul(const DualInterval& a, const DualInterval& b) {
  return {a.std * b.std, a.std * b.inf + b.std * a.inf};
}

DualInterval dual_div_nat(const DualInterval& a, std::uint64_t n) {
  return {iv_div_nat(a.std, n), iv_div_nat(a.inf, n)};
}

DualInterval dual_max(const DualInterval& a, const DualInterval& b) {
  if (iv_above(a.std, b.std)) return a;
  if (iv_above(b.std, a.std)) return b;
  Interval inf = iv_meet(a.inf, b.inf);
  if (a.std.is_bottom() || b.std.is_bottom()) return {Interval::bottom(), inf};
  return {Interval(std::max(a.std.lower(), b.std.lower()), std::max(a.std.upper(), b.std.upper())),
          inf};
}

DualInterval dual_min(const DualInterval& a, const DualInterval& b) {
  return dual_neg(dual_max(dual_neg(a), dual_neg(b)));
}

DualInterval dual_pr(const DualInterval& a) {
  const Interval& x = a.std;
  if (!x.is_bottom()) {
    if (x.upper() < -1) return DualInterval(Interval(Rational(-1)));
    if (x.lower() > 1) return DualInterval(Interval(Rational(1)));
    if (x.lower() > -1 && x.upper() < 1) return a;
  }
  return {*iv_join(x, unit_interval()), iv_meet(a.inf, Interval(Rational(0)))};
}

DualInterval dual_eps(const DualInterval& a) {
  static const DualInterval e(Interval(Rational(0)), Interval(Rational(1)));
  return dual_mul(e, a);
}

DualInterval dual_meet(const DualInterval& a, const DualInterval& b) {
  return {iv_meet(a.std, b.std), iv_meet(a.inf, b.inf)};
}

bool dual_refines(const DualInterval& a, const DualInterval& b) {
  return iv_refines(a.std, b.std) && iv_refines(a.inf, b.inf);
}

// ---------------------------------------------------------------------------

static std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

static bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  std::string_view body = s;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{} : body.substr(slash + 1);
  if (!all_digits(num) || (slash != std::string_view::npos && !all_digits(den)))
    throw std::invalid_argument("malformed rational: " + std::string(text));
  mpz_class n{std::string(num)};
  mpz_class d{den.empty() ? std::string("1") : std::string(den)};
  if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
  if (s.front() == '-') n = -n;
  Rational q(n, d);
  q.canonicalize();
  return q;
}

ExtendedRational parse_extended(std::string_view text) {
  std::string_view s = trim(text);
  if (s == "inf" || s == "+inf") return ExtendedRational::pos_inf();
  if (s == "-inf") return ExtendedRational::neg_inf();
  return ExtendedRational(parse_rational(s));
}

Interval parse_interval(std::string_view text) {
  std::string_view s = trim(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw std::invalid_argument("malformed interval: " + std::string(text));
  s = s.substr(1, s.size() - 2);
  auto comma = s.find(',');
  if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos)
    throw std::invalid_argument("malformed interval: " + std::string(text));
  return Interval::from_endpoints(parse_extended(s.substr(0, comma)), parse_extended(s.substr(comma + 1)));
}

DualInterval parse_dual(std::string_view text) {
  std::string_view s = trim(text);
  auto close = s.find(']');
  if (close == std::string_view::npos) throw std::invalid_argument("malformed dual: " + std::string(text));
  Interval st = parse_interval(s.substr(0, close + 1));
  std::string_view rest = trim(s.substr(close + 1));
  if (rest.empty()) return DualInterval(st);
  if (rest.front() != '+') throw std::invalid_argument("malformed dual: " + std::string(text));
  rest = trim(rest.substr(1));
  if (rest.substr(0, 3) != "eps") throw std::invalid_argument("malformed dual: " + std::string(text));
  return {st, parse_interval(rest.substr(3))};
}

}  // namespace dualpcf
