#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_set>
#include <vector>

#include "dualpcf/syntax.hpp"

namespace dualpcf {
namespace {

enum class Tok {
  Ident, Nat, LParen, RParen, LBrack, RBrack, Comma, Dot, Colon, Plus, Minus, Star, Slash,
  Equals, Less, LAngle, RAngle, Lambda, Arrow, Bottom, End,
};

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
};

const std::unordered_set<std::string> kKeywords = {
    "fun", "let", "in", "if", "then", "else", "tt", "ff", "true", "false", "zero", "succ", "pred",
    "iszero", "pr", "max", "min", "int", "sup", "Y", "L", "in_pi", "in_delta", "eps", "In"};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourceLoc loc{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", loc});
        return out;
      }
      out.push_back(next(loc));
    }
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  bool starts(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void advance(std::size_t bytes) {
    for (std::size_t i = 0; i < bytes && pos_ < src_.size(); ++i, ++pos_) {
      unsigned char c = static_cast<unsigned char>(src_[pos_]);
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(1);
      } else {
        return;
      }
    }
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  Token next(SourceLoc loc) {
    struct Sym { std::string_view text; Tok kind; std::string_view canon; };
    static const Sym syms[] = {
        {"->", Tok::Arrow, "->"}, {"→", Tok::Arrow, "->"},  {"λ", Tok::Lambda, "λ"},
        {"\\", Tok::Lambda, "λ"}, {"⟨", Tok::LAngle, "⟨"},  {"⟩", Tok::RAngle, "⟩"},
        {"−", Tok::Minus, "-"},   {"⊥", Tok::Bottom, "⊥"},  {"ε", Tok::Ident, "eps"},
        {"δ", Tok::Ident, "delta"}, {"π", Tok::Ident, "pi"}, {"ν", Tok::Ident, "nu"},
        {"(", Tok::LParen, "("},  {")", Tok::RParen, ")"},  {"[", Tok::LBrack, "["},
        {"]", Tok::RBrack, "]"},  {",", Tok::Comma, ","},   {".", Tok::Dot, "."},
        {":", Tok::Colon, ":"},   {"+", Tok::Plus, "+"},    {"-", Tok::Minus, "-"},
        {"*", Tok::Star, "*"},    {"/", Tok::Slash, "/"},   {"=", Tok::Equals, "="},
        {"<", Tok::Less, "<"},
    };
    for (const auto& s : syms) {
      if (starts(s.text)) {
        advance(s.text.size());
        return {s.kind, std::string(s.canon), loc};
      }
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance(1);
      return {Tok::Nat, std::string(src_.substr(start, pos_ - start)), loc};
    }
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && ident_char(src_[pos_])) advance(1);
      std::string id(src_.substr(start, pos_ - start));
      if (id == "in_" && starts("δ")) {
        advance(std::string_view("δ").size());
        id = "in_delta";
      } else if (id == "in_" && starts("π")) {
        advance(std::string_view("π").size());
        id = "in_pi";
      }
      return {Tok::Ident, id, loc};
    }
    throw ParseError(loc, "unexpected character '" + std::string(1, c) + "'");
  }
};

class Parser {
 public:
  Parser(std::vector<Token> toks, ParseOptions opts) : toks_(std::move(toks)), opts_(opts) {}

  ExprPtr program() {
    ExprPtr e = expr();
    expect(Tok::End, "end of input");
    return e;
  }

  TypePtr whole_type() {
    TypePtr t = type();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  std::vector<Token> toks_;
  ParseOptions opts_;
  std::size_t i_ = 0;
  std::vector<std::string> scope_;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(std::string_view w) const { return at(Tok::Ident) && peek().text == w; }

  Token take() {
    Token t = peek();
    if (i_ < toks_.size() - 1) ++i_;
    return t;
  }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.loc, "expected " + what + ", found " + found);
  }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail(what);
    return take();
  }

  void expect_word(std::string_view w) {
    if (!at_word(w)) fail("'" + std::string(w) + "'");
    take();
  }

  std::string binder_name() {
    if (!at(Tok::Ident) || kKeywords.count(peek().text)) fail("variable name");
    return take().text;
  }

  // ---- types ----

  TypePtr type() {
    TypePtr lhs = type_atom();
    if (at(Tok::Arrow)) {
      take();
      return Type::arrow(lhs, type());
    }
    return lhs;
  }

  TypePtr type_atom() {
    if (at(Tok::LParen)) {
      take();
      TypePtr t = type();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (at(Tok::Ident)) {
      const std::string& w = peek().text;
      TypePtr t;
      if (w == "o" || w == "bool") t = Type::boolean();
      else if (w == "nu" || w == "nat") t = Type::nat();
      else if (w == "pi" || w == "real") t = Type::real();
      else if (w == "delta" || w == "dual") t = Type::dual();
      if (t) {
        take();
        return t;
      }
    }
    fail("type");
  }

  // ---- expressions ----

  bool starts_open_form() const {
    return at(Tok::Lambda) || at_word("fun") || at_word("let") || at_word("if");
  }

  ExprPtr expr() {
    SourceLoc loc = peek().loc;
    if (at(Tok::Lambda) || at_word("fun")) {
      take();
      std::string x = binder_name();
      expect(Tok::Colon, "':' and a type annotation");
      TypePtr t = type();
      expect(Tok::Dot, "'.'");
      scope_.push_back(x);
      ExprPtr body = expr();
      scope_.pop_back();
      return mk_lam(x, t, body, loc);
    }
    if (at_word("let")) {
      take();
      std::string x = binder_name();
      TypePtr t;
      if (at(Tok::Colon)) {
        take();
        t = type();
      }
      expect(Tok::Equals, "'='");
      ExprPtr bound = expr();
      expect_word("in");
      scope_.push_back(x);
      ExprPtr body = expr();
      scope_.pop_back();
      return mk_app(mk_lam(x, t, body, loc), bound, loc);
    }
    if (at_word("if")) {
      take();
      ExprPtr c = expr();
      expect_word("then");
      ExprPtr a = expr();
      expect_word("else");
      ExprPtr b = expr();
      return mk_if(c, a, b, nullptr, loc);
    }
    return sum();
  }

  ExprPtr sum() {
    ExprPtr lhs = product();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      Token op = take();
      ExprPtr rhs = product();
      lhs = mk_app(mk_app(mk_const(op.kind == Tok::Plus ? Prim::Add : Prim::Sub, Carrier::Unresolved, op.loc),
                          lhs, op.loc),
                   rhs, op.loc);
    }
    return lhs;
  }

  ExprPtr product() {
    ExprPtr lhs = application();
    while (at(Tok::Star) || at(Tok::Slash)) {
      Token op = take();
      ExprPtr rhs = application();
      lhs = mk_app(mk_app(mk_const(op.kind == Tok::Star ? Prim::Mul : Prim::Div, Carrier::Unresolved, op.loc),
                          lhs, op.loc),
                   rhs, op.loc);
    }
    return lhs;
  }

  bool starts_atom() const {
    switch (peek().kind) {
      case Tok::Nat:
      case Tok::LParen: return true;
      case Tok::LBrack:
      case Tok::LAngle:
      case Tok::Bottom: return opts_.extended;
      case Tok::Ident: {
        const std::string& w = peek().text;
        if (w == "in" || w == "then" || w == "else" || w == "let" || w == "fun" || w == "if" || w == "eps")
          return false;
        return true;
      }
      default: return false;
    }
  }

  // change of variable: int[a,b] f = (b - a) * int(λy:π. f((b - a) * y + a))
  ExprPtr ranged_integral(SourceLoc loc, ExprPtr a, ExprPtr b, ExprPtr f) {
    std::string y = "y";
    for (int k = 1; f->has_free(y); ++k) y = "y_" + std::to_string(k);
    auto op = [&](Prim p, ExprPtr l, ExprPtr r) {
      return mk_app(mk_app(mk_const(p, Carrier::Unresolved, loc), l, loc), r, loc);
    };
    ExprPtr len = op(Prim::Sub, b, a);
    ExprPtr inner = mk_lam(y, Type::real(), mk_app(f, op(Prim::Add, op(Prim::Mul, len, mk_var(y, nullptr, loc)), a), loc), loc);
    return op(Prim::Mul, len, mk_app(mk_const(Prim::Int, Carrier::Unresolved, loc), inner, loc));
  }

  ExprPtr application() {
    SourceLoc loc = peek().loc;
    std::vector<ExprPtr> items;
    if (at_word("int") && peek(1).kind == Tok::LBrack) {
      take();
      take();
      ExprPtr a = expr();
      expect(Tok::Comma, "','");
      ExprPtr b = expr();
      expect(Tok::RBrack, "']'");
      std::vector<ExprPtr> rest = arguments();
      if (rest.empty()) fail("function argument of ranged int");
      items.push_back(ranged_integral(loc, a, b, rest.front()));
      items.insert(items.end(), rest.begin() + 1, rest.end());
    } else {
      if (!starts_atom()) {
        if (starts_open_form()) return expr();
        fail("expression");
      }
      std::vector<ExprPtr> group = paren_group();
      if (group.size() != 1) throw ParseError(loc, "argument list without a function");
      items.push_back(group.front());
      std::vector<ExprPtr> rest = arguments();
      items.insert(items.end(), rest.begin(), rest.end());
    }
    ExprPtr e = items.front();
    for (std::size_t k = 1; k < items.size(); ++k) e = mk_app(e, items[k], loc);
    return e;
  }

  std::vector<ExprPtr> arguments() {
    std::vector<ExprPtr> out;
    while (starts_atom()) {
      std::vector<ExprPtr> g = paren_group();
      out.insert(out.end(), g.begin(), g.end());
    }
    if (starts_open_form()) out.push_back(expr());
    return out;
  }

  // An atom, or "(e1, ..., ek)" which supplies k arguments at once.
  std::vector<ExprPtr> paren_group() {
    if (at(Tok::LParen) && !is_operator_section()) {
      take();
      std::vector<ExprPtr> items{expr()};
      while (at(Tok::Comma)) {
        take();
        items.push_back(expr());
      }
      expect(Tok::RParen, "')'");
      return items;
    }
    return {atom()};
  }

  bool is_operator_section() const {
    Tok k1 = peek(1).kind;
    if ((k1 == Tok::Plus || k1 == Tok::Minus || k1 == Tok::Star || k1 == Tok::Slash) &&
        peek(2).kind == Tok::RParen)
      return true;
    return k1 == Tok::Nat && peek(1).text == "0" && peek(2).kind == Tok::Less && peek(3).kind == Tok::RParen;
  }

  ExprPtr atom() {
    Token t = peek();
    SourceLoc loc = t.loc;
    switch (t.kind) {
      case Tok::Nat: {
        take();
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc()) throw ParseError(loc, "numeral out of range");
        return mk_nat(v, loc);
      }
      case Tok::LParen: {
        take();
        Token op = take();
        Prim p;
        switch (op.kind) {
          case Tok::Plus: p = Prim::Add; break;
          case Tok::Minus: p = Prim::Sub; break;
          case Tok::Star: p = Prim::Mul; break;
          case Tok::Slash: p = Prim::Div; break;
          default:
            take();
            p = Prim::Pos;
        }
        expect(Tok::RParen, "')'");
        return mk_const(p, Carrier::Unresolved, loc);
      }
      case Tok::LBrack: return literal();
      case Tok::LAngle: return angle();
      case Tok::Bottom:
        take();
        return mk_bool(std::nullopt, loc);
      case Tok::Ident: break;
      default: fail("expression");
    }
    const std::string& w = t.text;
    take();
    static const std::pair<std::string_view, Prim> consts[] = {
        {"pr", Prim::Pr},       {"max", Prim::Max},         {"min", Prim::Min},     {"int", Prim::Int},
        {"sup", Prim::Sup},     {"succ", Prim::Succ},       {"pred", Prim::Pred},   {"iszero", Prim::IsZero},
        {"in_pi", Prim::InPi},  {"in_delta", Prim::InDelta},
    };
    for (const auto& [name, p] : consts)
      if (w == name) return mk_const(p, Carrier::Unresolved, loc);
    if (w == "In" && opts_.extended) return mk_const(Prim::In, Carrier::Dual, loc);
    if (w == "tt" || w == "true") return mk_bool(true, loc);
    if (w == "ff" || w == "false") return mk_bool(false, loc);
    if (w == "zero") return mk_nat(0, loc);
    if (w == "Y") {
      expect(Tok::LBrack, "'[' after Y");
      TypePtr ty = type();
      expect(Tok::RBrack, "']'");
      return mk_fix(ty, loc);
    }
    if (w == "L") {
      expect(Tok::LBrack, "'[' after L");
      std::vector<TypePtr> ts{type()};
      while (at(Tok::Comma)) {
        take();
        ts.push_back(type());
      }
      expect(Tok::RBrack, "']'");
      return mk_deriv(std::move(ts), loc);
    }
    if (kKeywords.count(w)) throw ParseError(loc, "unexpected keyword '" + w + "'");
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (*it == w) return mk_var(w, nullptr, loc);
    throw ParseError(loc, "unbound variable '" + w + "'");
  }

  ExtendedRational endpoint() {
    bool neg = false;
    if (at(Tok::Minus)) {
      take();
      neg = true;
    }
    if (at_word("inf")) {
      take();
      return neg ? ExtendedRational::neg_inf() : ExtendedRational::pos_inf();
    }
    std::string text = expect(Tok::Nat, "numeral").text;
    if (at(Tok::Slash)) {
      take();
      text += "/" + expect(Tok::Nat, "denominator").text;
    }
    Rational q;
    try {
      q = parse_rational(text);
    } catch (const std::invalid_argument& e) {
      throw ParseError(peek().loc, e.what());
    }
    return ExtendedRational(neg ? Rational(-q) : q);
  }

  Interval interval() {
    SourceLoc loc = expect(Tok::LBrack, "'['").loc;
    ExtendedRational lo = endpoint();
    expect(Tok::Comma, "','");
    ExtendedRational hi = endpoint();
    expect(Tok::RBrack, "']'");
    try {
      return Interval::from_endpoints(lo, hi);
    } catch (const std::invalid_argument& e) {
      throw ParseError(loc, e.what());
    }
  }

  ExprPtr literal() {
    SourceLoc loc = peek().loc;
    Interval st = interval();
    if (at(Tok::Plus) && peek(1).kind == Tok::Ident && peek(1).text == "eps") {
      take();
      take();
      return mk_dual({st, interval()}, loc);
    }
    return mk_iv(st, loc);
  }

  ExprPtr angle() {
    SourceLoc loc = take().loc;
    if ((at_word("int") || at_word("sup")) && peek(1).kind == Tok::Comma && peek(2).kind == Tok::LParen) {
      Prim p = take().text == "int" ? Prim::Int : Prim::Sup;
      take();
      take();
      std::uint64_t m = nat_value();
      expect(Tok::Comma, "','");
      std::uint64_t n = nat_value();
      expect(Tok::RParen, "')'");
      expect(Tok::RAngle, "'⟩'");
      return mk_bisect(p, Carrier::Unresolved, m, n, loc);
    }
    ExprPtr e = expr();
    expect(Tok::Comma, "','");
    std::uint64_t n = nat_value();
    expect(Tok::RAngle, "'⟩'");
    return mk_tag(e, n, loc);
  }

  std::uint64_t nat_value() {
    Token t = expect(Tok::Nat, "numeral");
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) throw ParseError(t.loc, "numeral out of range");
    return v;
  }
};

}  // namespace

ExprPtr parse(std::string_view source, ParseOptions opts) {
  Parser p(Lexer(source).run(), opts);
  return p.program();
}

TypePtr parse_type(std::string_view source) {
  Parser p(Lexer(source).run(), {});
  return p.whole_type();
}

}  // namespace dualpcf
