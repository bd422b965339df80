#ifndef CDALG_EXPR_HPP
#define CDALG_EXPR_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cdalg/number.hpp"

namespace cdalg {

enum class Variable { z, zc };

struct Node;

/// Immutable, shared expression tree handle. Copies share structure.
class Expr {
 public:
  static Expr constant(CDNumber value);
  /// (var - center)^exponent.
  static Expr power(Variable var, CDNumber center, int exponent);
  static Expr variable(AlgebraLevel level, Variable var = Variable::z) {
    return power(var, CDNumber(level), 1);
  }
  /// Ln(z - center), continued along a path when a branch context is given.
  static Expr log(CDNumber center);
  static Expr sum(std::vector<Expr> terms);
  static Expr negate(Expr arg);
  /// left * right with this exact bracketing.
  static Expr product(Expr left, Expr right);
  /// base^exponent with base^n = base(base(...)) and negative n through the
  /// inverse of base.
  static Expr general_power(Expr base, int exponent);

  const Node& node() const noexcept { return *node_; }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

namespace node {
struct Constant {
  CDNumber value;
};
struct Power {
  Variable var;
  CDNumber center;
  int exponent;
};
struct Log {
  CDNumber center;
};
struct Sum {
  std::vector<Expr> terms;
};
struct Negate {
  Expr arg;
};
struct Product {
  Expr left;
  Expr right;
};
struct GeneralPower {
  Expr base;
  int exponent;
};
}  // namespace node

struct Node {
  std::variant<node::Constant, node::Power, node::Log, node::Sum, node::Negate,
               node::Product, node::GeneralPower>
      v;
};

/// A phrase: an expression tree over A_r in the variables z and zc.
struct Phrase {
  AlgebraLevel level;
  Expr root;
};

/// Largest accepted |exponent| in parsed text.
inline constexpr int kMaxExponent = 4096;

/**
 * Parses the expression grammar
 *   phrase = ["-"] term { ("+"|"-") term }
 *   term   = factor { "*" factor }                 (left-associative)
 *   factor = scalar | "e" index ["^" int] | ("z"|"zc") ["^" int]
 *          | "(" phrase ")" ["^" int] | "ln" "(" phrase ")"
 * Variable-free subtrees are folded to constants. "(z - c)^n" with constant
 * c becomes a centered power; the argument of ln must have the form z - c.
 * Throws SyntaxError with the offending position.
 */
Phrase parse(std::string_view text, AlgebraLevel level);

/// Text that parses back to a structurally identical tree.
std::string format(const Expr& e);
inline std::string format(const Phrase& f) { return format(f.root); }
/// Shortest round-trip text for a constant, parenthesized unless a
/// nonnegative real.
std::string format_constant(const CDNumber& c);

bool structurally_equal(const Expr& a, const Expr& b);

/**
 * Continued logarithm values per center, used to select the branch of every
 * Ln(z - c) leaf during evaluation. Centers are matched exactly.
 */
class LogBranches {
 public:
  const CDNumber* find(const CDNumber& center) const;
  void set(const CDNumber& center, CDNumber log_value);
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<std::pair<CDNumber, CDNumber>>& entries() const noexcept {
    return entries_;
  }

 private:
  std::vector<std::pair<CDNumber, CDNumber>> entries_;
};

/// f(z) with zc bound to conj(z). Throws ErrorKind::pole at a singular base.
CDNumber evaluate(const Phrase& f, const CDNumber& z,
                  const LogBranches* branches = nullptr);

/// f with z bound to z1 and zc bound to z2 independently.
CDNumber evaluate2(const Phrase& f, const CDNumber& z1, const CDNumber& z2,
                   const LogBranches* branches = nullptr);

/**
 * (D_z f(z)).h by forward differentiation over the tree: the product rule
 * at every node, D(u^n).h = sum_k u^k h u^{n-k-1} nested like the power
 * itself, D_z zc = 0 and DLn from the transcendental module.
 */
CDNumber derivative_apply(const Phrase& f, const CDNumber& z, const CDNumber& h,
                          const LogBranches* branches = nullptr);

/// Value and differential together (one traversal).
std::pair<CDNumber, CDNumber> value_and_derivative(
    const Phrase& f, const CDNumber& z, const CDNumber& h,
    const LogBranches* branches = nullptr);

/// The tree of z -> (Df(z)).1. Throws unsupported_shape for negative
/// general powers.
Expr differentiate_one(const Expr& e, AlgebraLevel level);

/// Folds constant subtrees and removes zero terms and unit real factors.
Expr simplify(const Expr& e, AlgebraLevel level);

bool contains_conjugate(const Expr& e);
bool contains_log(const Expr& e);
/// True if the tree is a polynomial in z (no zc, no logs, no negative powers).
bool is_polynomial(const Expr& e);
bool is_zero_constant(const Expr& e);
/// Distinct centers of Ln leaves, in first-occurrence order.
std::vector<CDNumber> log_centers(const Expr& e);
/// Distinct centers of negative-power and Ln leaves.
std::vector<CDNumber> singular_centers(const Expr& e);

/// Ln term (left * Ln(z - center)) * right recognized in a primitive.
struct LogTerm {
  CDNumber left;
  CDNumber center;
  CDNumber right;
};

struct Primitive {
  Phrase g;
  std::vector<LogTerm> log_terms;
};

/**
 * A phrase g with (Dg(z)).1 = f(z). Supported shapes: constants, sums,
 * constant-sandwiched words, same-center power/log functions of z - c, and
 * products with a polynomial factor (integration by parts, terminating on
 * the polynomial side). Anything else throws unsupported_shape naming the
 * offending word.
 */
Primitive primitive(const Phrase& f);

/// (Dg(z)).h for g = primitive(f).
CDNumber hat_apply(const Phrase& f, const CDNumber& z, const CDNumber& h,
                   const LogBranches* branches = nullptr);

}  // namespace cdalg

#endif
