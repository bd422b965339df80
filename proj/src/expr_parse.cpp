#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

#include "cdalg/expr.hpp"

namespace cdalg {

namespace {

constexpr int kMaxDepth = 200;

bool has_variable(const Expr& e) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Constant>) {
          return false;
        } else if constexpr (std::is_same_v<T, node::Power> ||
                             std::is_same_v<T, node::Log>) {
          return true;
        } else if constexpr (std::is_same_v<T, node::Sum>) {
          for (const auto& t : n.terms) {
            if (has_variable(t)) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          return has_variable(n.arg);
        } else if constexpr (std::is_same_v<T, node::Product>) {
          return has_variable(n.left) || has_variable(n.right);
        } else {
          return has_variable(n.base);
        }
      },
      e.node().v);
}

// If e is `var - c` (a bare first power of var plus constants), returns c.
std::optional<CDNumber> affine_center(const Expr& e, Variable var,
                                      AlgebraLevel level) {
  if (const auto* p = std::get_if<node::Power>(&e.node().v)) {
    if (p->var == var && p->exponent == 1) return p->center;
    return std::nullopt;
  }
  const auto* s = std::get_if<node::Sum>(&e.node().v);
  if (!s) return std::nullopt;
  std::optional<CDNumber> center;
  CDNumber shift(level);
  for (const auto& t : s->terms) {
    if (const auto* c = std::get_if<node::Constant>(&t.node().v)) {
      shift += c->value;
    } else if (const auto* p = std::get_if<node::Power>(&t.node().v)) {
      if (center || p->var != var || p->exponent != 1) return std::nullopt;
      center = p->center;
    } else {
      return std::nullopt;
    }
  }
  if (!center) return std::nullopt;
  return *center - shift;
}

class Parser {
 public:
  Parser(std::string_view text, AlgebraLevel level) : text_(text), level_(level) {}

  Expr run() {
    skip_space();
    if (at_end()) throw SyntaxError(pos_, "empty expression");
    Expr e = phrase();
    skip_space();
    if (!at_end()) {
      throw SyntaxError(pos_, std::string("unexpected character '") + text_[pos_] + "'");
    }
    return e;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      throw SyntaxError(pos_, std::string("expected '") + c + "'" +
                                  (at_end() ? " before end of input" : ""));
    }
  }

  Expr fold(Expr e) const {
    if (has_variable(e) || std::holds_alternative<node::Constant>(e.node().v)) {
      return e;
    }
    CDNumber value = evaluate(Phrase{level_, e}, CDNumber(level_));
    if (!value.coeffs().allFinite()) {
      throw SyntaxError(pos_, "constant subexpression overflows");
    }
    return Expr::constant(std::move(value));
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxDepth) {
        throw SyntaxError(parser.pos_, "expression nested too deeply");
      }
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
  };

  Expr phrase() {
    DepthGuard guard(*this);
    std::vector<Expr> terms;
    bool negative = accept('-');
    while (true) {
      Expr t = term();
      terms.push_back(negative ? fold(Expr::negate(std::move(t))) : std::move(t));
      if (accept('+')) {
        negative = false;
      } else if (accept('-')) {
        negative = true;
      } else {
        break;
      }
    }
    if (terms.size() == 1) return terms.front();
    return fold(Expr::sum(std::move(terms)));
  }

  Expr term() {
    Expr e = factor();
    while (accept('*')) e = fold(Expr::product(std::move(e), factor()));
    return e;
  }

  int exponent() {
    skip_space();
    const std::size_t start = pos_;
    bool negative = false;
    if (peek() == '-' || peek() == '+') {
      negative = peek() == '-';
      ++pos_;
    }
    skip_space();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      throw SyntaxError(pos_, "expected integer exponent");
    }
    long value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (text_[pos_] - '0');
      ++pos_;
      if (value > kMaxExponent) {
        throw SyntaxError(start, "exponent out of range (|n| <= " +
                                     std::to_string(kMaxExponent) + ")");
      }
    }
    return static_cast<int>(negative ? -value : value);
  }

  std::optional<int> optional_exponent() {
    if (accept('^')) return exponent();
    return std::nullopt;
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    };
    digits();
    if (peek() == '.') {
      ++pos_;
      digits();
    }
    if (pos_ == start + 1 && text_[start] == '.') {
      throw SyntaxError(start, "malformed number");
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(value)) {
      throw SyntaxError(start, "malformed or out-of-range number");
    }
    return Expr::constant(CDNumber::real(level_, value));
  }

  Expr basis() {
    const std::size_t start = pos_;
    ++pos_;  // 'e'
    long index = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      index = index * 10 + (text_[pos_] - '0');
      ++pos_;
      if (index >= level_.dim()) break;
    }
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (index >= level_.dim()) {
      throw SyntaxError(start, "basis symbol " +
                                   std::string(text_.substr(start, pos_ - start)) +
                                   " out of range for level r=" +
                                   std::to_string(level_.r()));
    }
    Expr e = Expr::constant(CDNumber::unit(level_, static_cast<int>(index)));
    if (auto n = optional_exponent()) e = fold(Expr::general_power(std::move(e), *n));
    return e;
  }

  Expr factor() {
    skip_space();
    const std::size_t start = pos_;
    if (at_end()) throw SyntaxError(pos_, "unexpected end of input");
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr inner = phrase();
      expect(')');
      const auto n = optional_exponent();
      if (!n) return inner;
      for (Variable var : {Variable::z, Variable::zc}) {
        if (auto center = affine_center(inner, var, level_)) {
          return Expr::power(var, std::move(*center), *n);
        }
      }
      return fold(Expr::general_power(std::move(inner), *n));
    }
    if (c == 'e' && pos_ + 1 < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      return basis();
    }
    std::size_t end = pos_;
    while (end < text_.size() && std::isalpha(static_cast<unsigned char>(text_[end]))) ++end;
    const std::string_view word = text_.substr(pos_, end - pos_);
    if (word == "z" || word == "zc") {
      pos_ = end;
      const Variable var = word == "z" ? Variable::z : Variable::zc;
      const int n = optional_exponent().value_or(1);
      return Expr::power(var, CDNumber(level_), n);
    }
    if (word == "ln") {
      pos_ = end;
      expect('(');
      const std::size_t arg_start = pos_;
      Expr inner = phrase();
      expect(')');
      auto center = affine_center(inner, Variable::z, level_);
      if (!center) {
        throw SyntaxError(arg_start, "argument of ln must have the form z - c");
      }
      return Expr::log(std::move(*center));
    }
    if (word.empty()) {
      throw SyntaxError(start, std::string("unexpected character '") + c + "'");
    }
    throw SyntaxError(start, "unknown identifier '" + std::string(word) + "'");
  }

  std::string_view text_;
  AlgebraLevel level_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

Phrase parse(std::string_view text, AlgebraLevel level) {
  return Phrase{level, Parser(text, level).run()};
}

}  // namespace cdalg
