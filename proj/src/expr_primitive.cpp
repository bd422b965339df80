#include <map>
#include <optional>

#include "cdalg/expr.hpp"

namespace cdalg {

namespace {

// Guard on the number of integration-by-parts steps.
constexpr int kMaxPartsSteps = 64;

/**
 * sum_m (a_m u^m + b_m u^m Ln u) with u = z - center and real a_m, b_m.
 * All such functions of one u lie in a commutative plane, so they multiply
 * and integrate like their complex counterparts.
 */
struct CuFunction {
  std::optional<CDNumber> center;
  std::map<int, std::pair<double, double>> terms;
};

[[noreturn]] void unsupported(const Expr& word, const std::string& why) {
  throw Error(ErrorKind::unsupported_shape,
              "no primitive for word '" + format(word) + "': " + why);
}

bool merge_center(std::optional<CDNumber>& into, const std::optional<CDNumber>& c) {
  if (!c) return true;
  if (!into) {
    into = c;
    return true;
  }
  return *into == *c;
}

std::optional<CuFunction> cu_multiply(const CuFunction& x, const CuFunction& y) {
  CuFunction out;
  out.center = x.center;
  if (!merge_center(out.center, y.center)) return std::nullopt;
  for (const auto& [m, p] : x.terms) {
    for (const auto& [n, q] : y.terms) {
      if (p.second != 0.0 && q.second != 0.0) return std::nullopt;  // Ln^2
      auto& t = out.terms[m + n];
      t.first += p.first * q.first;
      t.second += p.first * q.second + p.second * q.first;
    }
  }
  return out;
}

std::optional<CuFunction> to_cu(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> std::optional<CuFunction> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Constant>) {
          if (!n.value.is_real()) return std::nullopt;
          CuFunction f;
          f.terms[0] = {n.value.real_part(), 0.0};
          return f;
        } else if constexpr (std::is_same_v<T, node::Power>) {
          if (n.var != Variable::z) return std::nullopt;
          CuFunction f;
          f.center = n.center;
          f.terms[n.exponent] = {1.0, 0.0};
          return f;
        } else if constexpr (std::is_same_v<T, node::Log>) {
          CuFunction f;
          f.center = n.center;
          f.terms[0] = {0.0, 1.0};
          return f;
        } else if constexpr (std::is_same_v<T, node::Sum>) {
          CuFunction f;
          for (const auto& t : n.terms) {
            auto g = to_cu(t);
            if (!g || !merge_center(f.center, g->center)) return std::nullopt;
            for (const auto& [m, p] : g->terms) {
              f.terms[m].first += p.first;
              f.terms[m].second += p.second;
            }
          }
          return f;
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          auto g = to_cu(n.arg);
          if (g) {
            for (auto& [m, p] : g->terms) p = {-p.first, -p.second};
          }
          return g;
        } else if constexpr (std::is_same_v<T, node::Product>) {
          auto a = to_cu(n.left);
          if (!a) return std::nullopt;
          auto b = to_cu(n.right);
          if (!b) return std::nullopt;
          return cu_multiply(*a, *b);
        } else {
          auto base = to_cu(n.base);
          if (!base) return std::nullopt;
          if (n.exponent >= 0) {
            CuFunction f;
            f.terms[0] = {1.0, 0.0};
            for (int k = 0; k < n.exponent; ++k) {
              auto g = cu_multiply(*base, f);
              if (!g) return std::nullopt;
              f = std::move(*g);
            }
            return f;
          }
          // Negative powers only of a single pure monomial a u^m.
          int nonzero = 0;
          for (const auto& [m, p] : base->terms) {
            if (p.second != 0.0) return std::nullopt;
            if (p.first != 0.0) ++nonzero;
          }
          if (nonzero != 1) return std::nullopt;
          for (const auto& [m, p] : base->terms) {
            if (p.first == 0.0) continue;
            CuFunction f;
            f.center = base->center;
            f.terms[m * n.exponent] = {std::pow(p.first, n.exponent), 0.0};
            return f;
          }
          return std::nullopt;
        }
      },
      e.node().v);
}

CuFunction cu_primitive(const CuFunction& f, const Expr& word) {
  CuFunction out;
  out.center = f.center;
  for (const auto& [m, p] : f.terms) {
    const auto [a, b] = p;
    if (a != 0.0) {
      if (m == -1) {
        out.terms[0].second += a;
      } else {
        out.terms[m + 1].first += a / (m + 1);
      }
    }
    if (b != 0.0) {
      if (m == -1) unsupported(word, "primitive of Ln(u)/u is not representable");
      const double k = m + 1;
      out.terms[m + 1].first -= b / (k * k);
      out.terms[m + 1].second += b / k;
    }
  }
  return out;
}

Expr cu_to_expr(const CuFunction& f, AlgebraLevel level) {
  const CDNumber center = f.center.value_or(CDNumber(level));
  auto scaled = [&](double c, Expr e) {
    if (c == 1.0) return e;
    if (c == -1.0) return Expr::negate(std::move(e));
    return Expr::product(Expr::constant(CDNumber::real(level, c)), std::move(e));
  };
  std::vector<Expr> terms;
  for (const auto& [m, p] : f.terms) {
    const auto [a, b] = p;
    if (a != 0.0) {
      if (m == 0) {
        terms.push_back(Expr::constant(CDNumber::real(level, a)));
      } else {
        terms.push_back(scaled(a, Expr::power(Variable::z, center, m)));
      }
    }
    if (b != 0.0) {
      Expr log = Expr::log(center);
      if (m != 0) log = Expr::product(Expr::power(Variable::z, center, m), std::move(log));
      terms.push_back(scaled(b, std::move(log)));
    }
  }
  if (terms.empty()) return Expr::constant(CDNumber(level));
  if (terms.size() == 1) return terms.front();
  return Expr::sum(std::move(terms));
}

Expr expand_power(const Expr& base, int n, AlgebraLevel level) {
  if (n == 0) return Expr::constant(CDNumber::one(level));
  Expr e = base;
  for (int k = 1; k < n; ++k) e = Expr::product(base, e);
  return e;
}

Expr primitive_expr(const Expr& e, AlgebraLevel level);

// (Lq)^ = sum_j (-1)^j L^(j) Q_{j+1} with Q_j the iterated primitives of q;
// terminates because L is a polynomial.
Expr parts_polynomial_left(const Expr& word, const Expr& left, const CuFunction& q,
                           AlgebraLevel level) {
  std::vector<Expr> terms;
  Expr dl = left;
  CuFunction qj = cu_primitive(q, word);
  for (int j = 0; !is_zero_constant(dl); ++j) {
    if (j >= kMaxPartsSteps) unsupported(word, "integration by parts does not terminate");
    Expr t = Expr::product(dl, cu_to_expr(qj, level));
    terms.push_back(j % 2 == 0 ? t : Expr::negate(t));
    dl = differentiate_one(dl, level);
    qj = cu_primitive(qj, word);
  }
  return Expr::sum(std::move(terms));
}

// (pR)^ = sum_j (-1)^j P^{j+1}(p) R^(j) with P the primitive operator;
// terminates because R is a polynomial.
Expr parts_polynomial_right(const Expr& word, const Expr& left, const Expr& right,
                            AlgebraLevel level) {
  std::vector<Expr> terms;
  Expr dr = right;
  Expr pl = simplify(primitive_expr(left, level), level);
  for (int j = 0; !is_zero_constant(dr); ++j) {
    if (j >= kMaxPartsSteps) unsupported(word, "integration by parts does not terminate");
    Expr t = Expr::product(pl, dr);
    terms.push_back(j % 2 == 0 ? t : Expr::negate(t));
    dr = differentiate_one(dr, level);
    if (!is_zero_constant(dr)) pl = simplify(primitive_expr(pl, level), level);
  }
  return Expr::sum(std::move(terms));
}

Expr primitive_expr(const Expr& e, AlgebraLevel level) {
  if (contains_conjugate(e)) unsupported(e, "depends on zc");
  if (const auto* c = std::get_if<node::Constant>(&e.node().v)) {
    const Expr z = Expr::variable(level);
    if (c->value.coeffs().isZero(0)) return e;
    if (c->value == CDNumber::one(level)) return z;
    return Expr::product(e, z);
  }
  if (const auto* s = std::get_if<node::Sum>(&e.node().v)) {
    std::vector<Expr> terms;
    for (const auto& t : s->terms) terms.push_back(primitive_expr(t, level));
    return Expr::sum(std::move(terms));
  }
  if (const auto* n = std::get_if<node::Negate>(&e.node().v)) {
    return Expr::negate(primitive_expr(n->arg, level));
  }
  if (auto cu = to_cu(e)) return cu_to_expr(cu_primitive(*cu, e), level);

  if (const auto* p = std::get_if<node::Product>(&e.node().v)) {
    if (std::holds_alternative<node::Constant>(p->left.node().v)) {
      return Expr::product(p->left, primitive_expr(p->right, level));
    }
    if (std::holds_alternative<node::Constant>(p->right.node().v)) {
      return Expr::product(primitive_expr(p->left, level), p->right);
    }
    if (is_polynomial(p->left)) {
      if (auto q = to_cu(p->right)) return parts_polynomial_left(e, p->left, *q, level);
    }
    if (is_polynomial(p->right)) {
      return parts_polynomial_right(e, p->left, p->right, level);
    }
    auto distribute = [&](const Expr& sum_side, bool on_left) -> std::optional<Expr> {
      std::vector<Expr> parts;
      if (const auto* s = std::get_if<node::Sum>(&sum_side.node().v)) {
        for (const auto& t : s->terms) {
          parts.push_back(on_left ? Expr::product(t, p->right) : Expr::product(p->left, t));
        }
      } else if (const auto* n = std::get_if<node::Negate>(&sum_side.node().v)) {
        parts.push_back(Expr::negate(on_left ? Expr::product(n->arg, p->right)
                                             : Expr::product(p->left, n->arg)));
      } else {
        return std::nullopt;
      }
      return primitive_expr(Expr::sum(std::move(parts)), level);
    };
    if (auto d = distribute(p->left, true)) return *d;
    if (auto d = distribute(p->right, false)) return *d;
    // (c X) Y = c (X Y) and X (Y c) = (X Y) c when X, Y are functions of one
    // u: c and u generate an associative subalgebra for r <= 3 (alternative).
    if (level.r() <= 3) {
      const auto* l = std::get_if<node::Product>(&p->left.node().v);
      if (l && std::holds_alternative<node::Constant>(l->left.node().v)) {
        if (auto merged = to_cu(Expr::product(l->right, p->right))) {
          return Expr::product(l->left, cu_to_expr(cu_primitive(*merged, e), level));
        }
      }
      const auto* r = std::get_if<node::Product>(&p->right.node().v);
      if (r && std::holds_alternative<node::Constant>(r->right.node().v)) {
        if (auto merged = to_cu(Expr::product(p->left, r->left))) {
          return Expr::product(cu_to_expr(cu_primitive(*merged, e), level), r->right);
        }
      }
    }
    unsupported(e, "product of two non-polynomial factors of different shape");
  }
  if (const auto* g = std::get_if<node::GeneralPower>(&e.node().v)) {
    if (g->exponent >= 0) return primitive_expr(expand_power(g->base, g->exponent, level), level);
    unsupported(e, "negative power of a non-monomial base");
  }
  unsupported(e, "unsupported leaf");
}

const CDNumber* constant_value(const Expr& e) {
  if (const auto* c = std::get_if<node::Constant>(&e.node().v)) return &c->value;
  return nullptr;
}

std::optional<LogTerm> match_log_term(const Expr& e, AlgebraLevel level) {
  const CDNumber one = CDNumber::one(level);
  if (const auto* l = std::get_if<node::Log>(&e.node().v)) return LogTerm{one, l->center, one};
  const auto* p = std::get_if<node::Product>(&e.node().v);
  if (!p) return std::nullopt;
  if (const CDNumber* b = constant_value(p->right)) {
    if (const auto* l = std::get_if<node::Log>(&p->left.node().v)) {
      return LogTerm{one, l->center, *b};
    }
    if (const auto* q = std::get_if<node::Product>(&p->left.node().v)) {
      const CDNumber* a = constant_value(q->left);
      const auto* l = std::get_if<node::Log>(&q->right.node().v);
      if (a && l) return LogTerm{*a, l->center, *b};
    }
    return std::nullopt;
  }
  if (const CDNumber* a = constant_value(p->left)) {
    if (const auto* l = std::get_if<node::Log>(&p->right.node().v)) {
      return LogTerm{*a, l->center, one};
    }
  }
  return std::nullopt;
}

void collect_log_terms(const Expr& e, AlgebraLevel level, bool negated,
                       std::vector<LogTerm>& out) {
  if (auto t = match_log_term(e, level)) {
    if (negated) t->left = -t->left;
    out.push_back(std::move(*t));
    return;
  }
  if (const auto* s = std::get_if<node::Sum>(&e.node().v)) {
    for (const auto& t : s->terms) collect_log_terms(t, level, negated, out);
  } else if (const auto* n = std::get_if<node::Negate>(&e.node().v)) {
    collect_log_terms(n->arg, level, !negated, out);
  }
}

}  // namespace

Primitive primitive(const Phrase& f) {
  Primitive out{Phrase{f.level, simplify(primitive_expr(f.root, f.level), f.level)}, {}};
  collect_log_terms(out.g.root, f.level, false, out.log_terms);
  return out;
}

CDNumber hat_apply(const Phrase& f, const CDNumber& z, const CDNumber& h,
                   const LogBranches* branches) {
  return derivative_apply(primitive(f).g, z, h, branches);
}

}  // namespace cdalg
