#include "cdalg/expr.hpp"

#include <algorithm>
#include <charconv>
#include <functional>

#include "cdalg/transcendental.hpp"

namespace cdalg {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void visit_all(const Expr& e, const std::function<void(const Node&)>& fn) {
  fn(e.node());
  std::visit(Overloaded{
                 [&](const node::Sum& s) {
                   for (const auto& t : s.terms) visit_all(t, fn);
                 },
                 [&](const node::Negate& n) { visit_all(n.arg, fn); },
                 [&](const node::Product& p) {
                   visit_all(p.left, fn);
                   visit_all(p.right, fn);
                 },
                 [&](const node::GeneralPower& g) { visit_all(g.base, fn); },
                 [](const auto&) {},
             },
             e.node().v);
}

std::string format_real(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

const char* var_name(Variable v) { return v == Variable::z ? "z" : "zc"; }

// " - c" or " + |c|" so that "var<suffix>" reads as var - center.
std::string center_suffix(const CDNumber& c) {
  if (c.is_real() && c.real_part() < 0) return " + " + format_real(-c.real_part());
  return " - " + format_constant(c);
}

bool is_sum_or_negate(const Expr& e) {
  return std::holds_alternative<node::Sum>(e.node().v) ||
         std::holds_alternative<node::Negate>(e.node().v);
}

std::string format_impl(const Expr& e);

std::string format_factor(const Expr& e, bool right_operand) {
  const bool product = std::holds_alternative<node::Product>(e.node().v);
  if (is_sum_or_negate(e) || (right_operand && product)) {
    return "(" + format_impl(e) + ")";
  }
  return format_impl(e);
}

std::string format_impl(const Expr& e) {
  return std::visit(
      Overloaded{
          [](const node::Constant& c) { return format_constant(c.value); },
          [](const node::Power& p) {
            const std::string name = var_name(p.var);
            const bool centered = !p.center.coeffs().isZero(0);
            if (!centered) {
              return p.exponent == 1 ? name
                                     : name + "^" + std::to_string(p.exponent);
            }
            return "(" + name + center_suffix(p.center) + ")^" +
                   std::to_string(p.exponent);
          },
          [](const node::Log& l) {
            if (l.center.coeffs().isZero(0)) return std::string("ln(z)");
            return "ln(z" + center_suffix(l.center) + ")";
          },
          [](const node::Sum& s) {
            std::string out;
            for (std::size_t i = 0; i < s.terms.size(); ++i) {
              const Expr& t = s.terms[i];
              if (const auto* n = std::get_if<node::Negate>(&t.node().v)) {
                out += i == 0 ? "-" : " - ";
                out += format_factor(n->arg, false);
              } else {
                if (i > 0) out += " + ";
                out += format_factor(t, false);
              }
            }
            return out;
          },
          [](const node::Negate& n) { return "-" + format_factor(n.arg, false); },
          [](const node::Product& p) {
            return format_factor(p.left, false) + "*" +
                   format_factor(p.right, true);
          },
          [](const node::GeneralPower& g) {
            return "(" + format_impl(g.base) + ")^" + std::to_string(g.exponent);
          },
      },
      e.node().v);
}

bool equal_impl(const Expr& a, const Expr& b) {
  if (&a.node() == &b.node()) return true;
  if (a.node().v.index() != b.node().v.index()) return false;
  return std::visit(
      Overloaded{
          [&](const node::Constant& x) {
            return x.value == std::get<node::Constant>(b.node().v).value;
          },
          [&](const node::Power& x) {
            const auto& y = std::get<node::Power>(b.node().v);
            return x.var == y.var && x.exponent == y.exponent &&
                   x.center == y.center;
          },
          [&](const node::Log& x) {
            return x.center == std::get<node::Log>(b.node().v).center;
          },
          [&](const node::Sum& x) {
            const auto& y = std::get<node::Sum>(b.node().v);
            if (x.terms.size() != y.terms.size()) return false;
            for (std::size_t i = 0; i < x.terms.size(); ++i) {
              if (!equal_impl(x.terms[i], y.terms[i])) return false;
            }
            return true;
          },
          [&](const node::Negate& x) {
            return equal_impl(x.arg, std::get<node::Negate>(b.node().v).arg);
          },
          [&](const node::Product& x) {
            const auto& y = std::get<node::Product>(b.node().v);
            return equal_impl(x.left, y.left) && equal_impl(x.right, y.right);
          },
          [&](const node::GeneralPower& x) {
            const auto& y = std::get<node::GeneralPower>(b.node().v);
            return x.exponent == y.exponent && equal_impl(x.base, y.base);
          },
      },
      a.node().v);
}

CDNumber checked_inverse(const CDNumber& u) {
  if (!(norm(u) > kEpsZero)) {
    throw Error(ErrorKind::pole, "negative power of a zero base (pole)");
  }
  return inverse(u);
}

// (Du^{-1}).h. The alternative-algebra identity -u^{-1}(h u^{-1}) holds for
// r <= 3; above that the derivative of conj(u)/|u|^2 is used directly.
CDNumber inverse_differential(const CDNumber& u, const CDNumber& u_inv,
                              const CDNumber& h) {
  if (u.level().r() <= 3) return -mul(u_inv, mul(h, u_inv));
  const double n2 = squared_norm(u);
  return conj(h) / n2 - conj(u) * (2.0 * dot(u, h) / (n2 * n2));
}

// base^n and its differential, nested as base(base(...)) like pow_int.
std::pair<CDNumber, CDNumber> power_with_differential(const CDNumber& u,
                                                      const CDNumber& du,
                                                      int n) {
  const AlgebraLevel level = u.level();
  if (n == 0) return {CDNumber::one(level), CDNumber(level)};
  CDNumber base = u;
  CDNumber dbase = du;
  if (n < 0) {
    base = checked_inverse(u);
    dbase = inverse_differential(u, base, du);
  }
  const int m = n > 0 ? n : -n;
  CDNumber value = base;
  CDNumber diff = dbase;
  for (int k = 1; k < m; ++k) {
    diff = mul(dbase, value) + mul(base, diff);
    value = mul(base, value);
  }
  return {value, diff};
}

CDNumber power_value(const CDNumber& u, int n) {
  if (n < 0) checked_inverse(u);
  return pow_int(u, n);
}

struct Evaluator {
  AlgebraLevel level;
  const CDNumber& z1;
  const CDNumber& z2;
  const LogBranches* branches;

  CDNumber log_value(const CDNumber& center) const {
    const CDNumber u = z1 - center;
    if (!(norm(u) > kEpsZero)) {
      throw Error(ErrorKind::pole, "logarithm evaluated at its center");
    }
    if (branches) {
      if (const CDNumber* ref = branches->find(center)) return ln_continued(u, *ref);
    }
    return ln_principal(u);
  }

  CDNumber value(const Expr& e) const {
    return std::visit(
        Overloaded{
            [](const node::Constant& c) { return c.value; },
            [&](const node::Power& p) {
              const CDNumber& w = p.var == Variable::z ? z1 : z2;
              return power_value(w - p.center, p.exponent);
            },
            [&](const node::Log& l) { return log_value(l.center); },
            [&](const node::Sum& s) {
              CDNumber acc(level);
              for (const auto& t : s.terms) acc += value(t);
              return acc;
            },
            [&](const node::Negate& n) { return -value(n.arg); },
            [&](const node::Product& p) {
              return mul(value(p.left), value(p.right));
            },
            [&](const node::GeneralPower& g) {
              return power_value(value(g.base), g.exponent);
            },
        },
        e.node().v);
  }

  // (value, (D_z e).h)
  std::pair<CDNumber, CDNumber> forward(const Expr& e, const CDNumber& h) const {
    return std::visit(
        Overloaded{
            [&](const node::Constant& c) {
              return std::pair{c.value, CDNumber(level)};
            },
            [&](const node::Power& p) {
              if (p.var == Variable::zc) {
                return std::pair{power_value(z2 - p.center, p.exponent),
                                 CDNumber(level)};
              }
              return power_with_differential(z1 - p.center, h, p.exponent);
            },
            [&](const node::Log& l) {
              const CDNumber v = log_value(l.center);
              const CDNumber u = z1 - l.center;
              const CDNumber* ref = branches ? branches->find(l.center) : nullptr;
              return std::pair{v, ref ? dln_apply(u, h, *ref) : dln_apply(u, h)};
            },
            [&](const node::Sum& s) {
              std::pair<CDNumber, CDNumber> acc{CDNumber(level), CDNumber(level)};
              for (const auto& t : s.terms) {
                auto [v, d] = forward(t, h);
                acc.first += v;
                acc.second += d;
              }
              return acc;
            },
            [&](const node::Negate& n) {
              auto [v, d] = forward(n.arg, h);
              return std::pair{-v, -d};
            },
            [&](const node::Product& p) {
              auto [a, da] = forward(p.left, h);
              auto [b, db] = forward(p.right, h);
              return std::pair{mul(a, b), mul(da, b) + mul(a, db)};
            },
            [&](const node::GeneralPower& g) {
              auto [b, db] = forward(g.base, h);
              if (g.exponent < 0 && !(norm(b) > kEpsZero)) {
                throw Error(ErrorKind::pole, "negative power of a zero base (pole)");
              }
              return power_with_differential(b, db, g.exponent);
            },
        },
        e.node().v);
  }
};

void check_argument(const Phrase& f, const CDNumber& z) {
  if (!(f.level == z.level())) {
    throw Error(ErrorKind::level_mismatch,
                "point of level r=" + std::to_string(z.level().r()) +
                    " for a phrase of level r=" + std::to_string(f.level.r()));
  }
}

Expr zero(AlgebraLevel level) { return Expr::constant(CDNumber(level)); }

const CDNumber* constant_of(const Expr& e) {
  if (const auto* c = std::get_if<node::Constant>(&e.node().v)) return &c->value;
  return nullptr;
}

bool is_real_one(const Expr& e) {
  const CDNumber* c = constant_of(e);
  return c && c->is_real() && c->real_part() == 1.0;
}

}  // namespace

Expr Expr::constant(CDNumber value) {
  return Expr(std::make_shared<const Node>(Node{node::Constant{std::move(value)}}));
}
Expr Expr::power(Variable var, CDNumber center, int exponent) {
  return Expr(std::make_shared<const Node>(
      Node{node::Power{var, std::move(center), exponent}}));
}
Expr Expr::log(CDNumber center) {
  return Expr(std::make_shared<const Node>(Node{node::Log{std::move(center)}}));
}
Expr Expr::sum(std::vector<Expr> terms) {
  return Expr(std::make_shared<const Node>(Node{node::Sum{std::move(terms)}}));
}
Expr Expr::negate(Expr arg) {
  return Expr(std::make_shared<const Node>(Node{node::Negate{std::move(arg)}}));
}
Expr Expr::product(Expr left, Expr right) {
  return Expr(std::make_shared<const Node>(
      Node{node::Product{std::move(left), std::move(right)}}));
}
Expr Expr::general_power(Expr base, int exponent) {
  return Expr(std::make_shared<const Node>(
      Node{node::GeneralPower{std::move(base), exponent}}));
}

std::string format_constant(const CDNumber& c) {
  if (c.is_real()) {
    const double x = c.real_part();
    return x < 0 ? "(-" + format_real(-x) + ")" : format_real(x);
  }
  std::string out = "(";
  bool first = true;
  for (int i = 0; i < c.dim(); ++i) {
    const double x = c[i];
    if (x == 0.0) continue;
    const double a = std::abs(x);
    if (first) {
      if (x < 0) out += "-";
    } else {
      out += x < 0 ? " - " : " + ";
    }
    first = false;
    if (i == 0) {
      out += format_real(a);
    } else {
      if (a != 1.0) out += format_real(a) + "*";
      out += "e" + std::to_string(i);
    }
  }
  return out + ")";
}

std::string format(const Expr& e) { return format_impl(e); }

bool structurally_equal(const Expr& a, const Expr& b) { return equal_impl(a, b); }

const CDNumber* LogBranches::find(const CDNumber& center) const {
  for (const auto& [c, v] : entries_) {
    if (c == center) return &v;
  }
  return nullptr;
}

void LogBranches::set(const CDNumber& center, CDNumber log_value) {
  for (auto& [c, v] : entries_) {
    if (c == center) {
      v = std::move(log_value);
      return;
    }
  }
  entries_.emplace_back(center, std::move(log_value));
}

CDNumber evaluate(const Phrase& f, const CDNumber& z, const LogBranches* branches) {
  check_argument(f, z);
  const CDNumber zc = conj(z);
  return Evaluator{f.level, z, zc, branches}.value(f.root);
}

CDNumber evaluate2(const Phrase& f, const CDNumber& z1, const CDNumber& z2,
                   const LogBranches* branches) {
  check_argument(f, z1);
  check_argument(f, z2);
  return Evaluator{f.level, z1, z2, branches}.value(f.root);
}

std::pair<CDNumber, CDNumber> value_and_derivative(const Phrase& f,
                                                   const CDNumber& z,
                                                   const CDNumber& h,
                                                   const LogBranches* branches) {
  check_argument(f, z);
  check_argument(f, h);
  const CDNumber zc = conj(z);
  return Evaluator{f.level, z, zc, branches}.forward(f.root, h);
}

CDNumber derivative_apply(const Phrase& f, const CDNumber& z, const CDNumber& h,
                          const LogBranches* branches) {
  return value_and_derivative(f, z, h, branches).second;
}

Expr differentiate_one(const Expr& e, AlgebraLevel level) {
  const Expr out = std::visit(
      Overloaded{
          [&](const node::Constant&) { return zero(level); },
          [&](const node::Power& p) {
            if (p.var == Variable::zc || p.exponent == 0) return zero(level);
            const Expr scale = Expr::constant(CDNumber::real(level, p.exponent));
            if (p.exponent == 1) return scale;
            return Expr::product(scale, Expr::power(Variable::z, p.center,
                                                    p.exponent - 1));
          },
          [&](const node::Log& l) {
            return Expr::power(Variable::z, l.center, -1);
          },
          [&](const node::Sum& s) {
            std::vector<Expr> terms;
            terms.reserve(s.terms.size());
            for (const auto& t : s.terms) terms.push_back(differentiate_one(t, level));
            return Expr::sum(std::move(terms));
          },
          [&](const node::Negate& n) {
            return Expr::negate(differentiate_one(n.arg, level));
          },
          [&](const node::Product& p) {
            return Expr::sum({Expr::product(differentiate_one(p.left, level), p.right),
                              Expr::product(p.left, differentiate_one(p.right, level))});
          },
          [&](const node::GeneralPower& g) {
            if (g.exponent < 0) {
              throw Error(ErrorKind::unsupported_shape,
                          "symbolic derivative of a negative general power: " +
                              format(e));
            }
            if (g.exponent == 0) return zero(level);
            const Expr db = differentiate_one(g.base, level);
            Expr value = g.base;
            Expr diff = db;
            for (int k = 1; k < g.exponent; ++k) {
              diff = Expr::sum({Expr::product(db, value), Expr::product(g.base, diff)});
              value = Expr::product(g.base, value);
            }
            return diff;
          },
      },
      e.node().v);
  return simplify(out, level);
}

Expr simplify(const Expr& e, AlgebraLevel level) {
  return std::visit(
      Overloaded{
          [&](const node::Constant&) { return e; },
          [&](const node::Power& p) {
            return p.exponent == 0 ? Expr::constant(CDNumber::one(level)) : e;
          },
          [&](const node::Log&) { return e; },
          [&](const node::Sum& s) {
            std::vector<Expr> terms;
            CDNumber constant(level);
            bool has_constant = false;
            for (const auto& t : s.terms) {
              Expr st = simplify(t, level);
              if (const CDNumber* c = constant_of(st)) {
                constant += *c;
                has_constant = true;
              } else {
                terms.push_back(std::move(st));
              }
            }
            if (has_constant && !constant.coeffs().isZero(0)) {
              terms.push_back(Expr::constant(constant));
            }
            if (terms.empty()) return zero(level);
            if (terms.size() == 1) return terms.front();
            return Expr::sum(std::move(terms));
          },
          [&](const node::Negate& n) {
            Expr a = simplify(n.arg, level);
            if (const CDNumber* c = constant_of(a)) return Expr::constant(-*c);
            if (const auto* inner = std::get_if<node::Negate>(&a.node().v)) {
              return inner->arg;
            }
            return Expr::negate(std::move(a));
          },
          [&](const node::Product& p) {
            Expr l = simplify(p.left, level);
            Expr r = simplify(p.right, level);
            if (is_zero_constant(l) || is_zero_constant(r)) return zero(level);
            const CDNumber* cl = constant_of(l);
            const CDNumber* cr = constant_of(r);
            if (cl && cr) return Expr::constant(mul(*cl, *cr));
            if (is_real_one(l)) return r;
            if (is_real_one(r)) return l;
            return Expr::product(std::move(l), std::move(r));
          },
          [&](const node::GeneralPower& g) {
            Expr b = simplify(g.base, level);
            if (g.exponent == 0) return Expr::constant(CDNumber::one(level));
            if (const CDNumber* c = constant_of(b)) {
              if (g.exponent < 0 && !(norm(*c) > kEpsZero)) {
                throw Error(ErrorKind::pole, "negative power of a zero constant");
              }
              return Expr::constant(pow_int(*c, g.exponent));
            }
            if (g.exponent == 1) return b;
            return Expr::general_power(std::move(b), g.exponent);
          },
      },
      e.node().v);
}

bool contains_conjugate(const Expr& e) {
  bool found = false;
  visit_all(e, [&](const Node& n) {
    if (const auto* p = std::get_if<node::Power>(&n.v)) {
      found = found || p->var == Variable::zc;
    }
  });
  return found;
}

bool contains_log(const Expr& e) {
  bool found = false;
  visit_all(e, [&](const Node& n) {
    found = found || std::holds_alternative<node::Log>(n.v);
  });
  return found;
}

bool is_polynomial(const Expr& e) {
  bool ok = true;
  visit_all(e, [&](const Node& n) {
    if (const auto* p = std::get_if<node::Power>(&n.v)) {
      ok = ok && p->var == Variable::z && p->exponent >= 0;
    } else if (const auto* g = std::get_if<node::GeneralPower>(&n.v)) {
      ok = ok && g->exponent >= 0;
    } else if (std::holds_alternative<node::Log>(n.v)) {
      ok = false;
    }
  });
  return ok;
}

bool is_zero_constant(const Expr& e) {
  const CDNumber* c = constant_of(e);
  return c && c->coeffs().isZero(0);
}

std::vector<CDNumber> log_centers(const Expr& e) {
  std::vector<CDNumber> out;
  visit_all(e, [&](const Node& n) {
    if (const auto* l = std::get_if<node::Log>(&n.v)) {
      if (std::find(out.begin(), out.end(), l->center) == out.end()) {
        out.push_back(l->center);
      }
    }
  });
  return out;
}

std::vector<CDNumber> singular_centers(const Expr& e) {
  std::vector<CDNumber> out;
  auto add = [&](const CDNumber& c) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  };
  visit_all(e, [&](const Node& n) {
    if (const auto* l = std::get_if<node::Log>(&n.v)) add(l->center);
    if (const auto* p = std::get_if<node::Power>(&n.v)) {
      if (p->exponent < 0) add(p->center);
    }
  });
  return out;
}

}  // namespace cdalg
