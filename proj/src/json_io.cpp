#include "cdalg/json_io.hpp"

#include <cmath>

namespace cdalg {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::usage, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double real_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) bad(std::string("field \"") + key + "\" must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad(std::string("field \"") + key + "\" must be finite");
  return x;
}

int int_field(const Json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) bad(std::string("field \"") + key + "\" must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < -kMaxExponent || x > kMaxExponent) {
    bad(std::string("field \"") + key + "\" out of range");
  }
  return static_cast<int>(x);
}

Json real_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

const char* mode_name(CoefficientMode m) {
  return m == CoefficientMode::value ? "value" : "functional";
}

}  // namespace

Json to_json(const CDNumber& z) {
  Json out = Json::array();
  for (int i = 0; i < z.dim(); ++i) out.push_back(real_or_null(z[i]));
  return out;
}

CDNumber number_from_json(const Json& j, AlgebraLevel level) {
  if (j.is_number()) {
    const double x = j.get<double>();
    if (!std::isfinite(x)) bad("numbers must be finite");
    return CDNumber::real(level, x);
  }
  if (j.is_string()) {
    const Phrase p = parse(j.get<std::string>(), level);
    const auto* c = std::get_if<node::Constant>(&p.root.node().v);
    if (!c) bad("expected a constant, got \"" + j.get<std::string>() + "\"");
    return c->value;
  }
  if (!j.is_array()) bad("a number must be a JSON array of 2^r reals or constant text");
  if (static_cast<int>(j.size()) != level.dim()) {
    bad("a number at level " + std::to_string(level.r()) + " needs " +
        std::to_string(level.dim()) + " coefficients, got " + std::to_string(j.size()));
  }
  CDNumber out(level);
  for (int i = 0; i < level.dim(); ++i) {
    if (!j[i].is_number()) bad("number coefficients must be reals");
    out[i] = j[i].get<double>();
    if (!std::isfinite(out[i])) bad("number coefficients must be finite");
  }
  return out;
}

Json to_json(const Expr& e) {
  return std::visit(
      [](const auto& n) -> Json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Constant>) {
          return Json{{"const", to_json(n.value)}};
        } else if constexpr (std::is_same_v<T, node::Power>) {
          Json out{{"var", n.var == Variable::z ? "z" : "zc"}, {"pow", n.exponent}};
          if (norm(n.center) != 0.0) out["center"] = to_json(n.center);
          return out;
        } else if constexpr (std::is_same_v<T, node::Log>) {
          return Json{{"ln", "z"}, {"center", to_json(n.center)}};
        } else if constexpr (std::is_same_v<T, node::Sum>) {
          Json args = Json::array();
          for (const auto& t : n.terms) args.push_back(to_json(t));
          return Json{{"op", "add"}, {"args", std::move(args)}};
        } else if constexpr (std::is_same_v<T, node::Negate>) {
          return Json{{"op", "neg"}, {"args", Json::array({to_json(n.arg)})}};
        } else if constexpr (std::is_same_v<T, node::Product>) {
          return Json{{"op", "mul"}, {"args", Json::array({to_json(n.left), to_json(n.right)})}};
        } else {
          return Json{{"op", "pow"}, {"args", Json::array({to_json(n.base)})}, {"exp", n.exponent}};
        }
      },
      e.node().v);
}

namespace {

Expr expr_from_json_depth(const Json& j, AlgebraLevel level, int depth) {
  if (depth > 200) bad("expression tree nested too deeply");
  if (!j.is_object()) bad("expression tree nodes must be objects");
  if (j.contains("const")) return Expr::constant(number_from_json(j.at("const"), level));
  if (j.contains("var")) {
    const Json& v = j.at("var");
    if (!v.is_string() || (v != "z" && v != "zc")) bad("\"var\" must be \"z\" or \"zc\"");
    const CDNumber center = j.contains("center") ? number_from_json(j.at("center"), level)
                                                 : CDNumber(level);
    return Expr::power(v == "z" ? Variable::z : Variable::zc, center, int_field(j, "pow", 1));
  }
  if (j.contains("ln")) {
    if (j.at("ln") != "z") bad("\"ln\" must be \"z\"");
    const CDNumber center = j.contains("center") ? number_from_json(j.at("center"), level)
                                                 : CDNumber(level);
    return Expr::log(center);
  }
  const Json& op = field(j, "op");
  const Json& args = field(j, "args");
  if (!op.is_string() || !args.is_array()) bad("\"op\" must be a string and \"args\" an array");
  std::vector<Expr> parsed;
  for (const auto& a : args) parsed.push_back(expr_from_json_depth(a, level, depth + 1));
  const std::string name = op.get<std::string>();
  if (name == "add") {
    if (parsed.empty()) bad("\"add\" needs at least one argument");
    if (parsed.size() == 1) return parsed.front();
    return Expr::sum(std::move(parsed));
  }
  if (name == "mul") {
    if (parsed.size() < 2) bad("\"mul\" needs at least two arguments");
    Expr acc = parsed.front();
    for (std::size_t i = 1; i < parsed.size(); ++i) acc = Expr::product(acc, parsed[i]);
    return acc;
  }
  if (name == "neg") {
    if (parsed.size() != 1) bad("\"neg\" takes one argument");
    return Expr::negate(parsed.front());
  }
  if (name == "pow") {
    if (parsed.size() != 1 || !j.contains("exp")) bad("\"pow\" takes one argument and \"exp\"");
    return Expr::general_power(parsed.front(), int_field(j, "exp", 1));
  }
  bad("unknown op \"" + name + "\"");
}

}  // namespace

Expr expr_from_json(const Json& j, AlgebraLevel level) {
  return expr_from_json_depth(j, level, 0);
}

Phrase phrase_from_json(const Json& j, AlgebraLevel level) {
  if (j.is_string()) return parse(j.get<std::string>(), level);
  return Phrase{level, expr_from_json(j, level)};
}

Json to_json(const Path& p) {
  Json out;
  switch (p.kind()) {
    case PathKind::circle:
      out = Json{{"kind", "circle"}, {"center", to_json(p.center())}, {"radius", p.radius()},
                 {"direction", to_json(p.direction())}, {"turns", p.turns()}};
      break;
    case PathKind::polyline: {
      Json pts = Json::array();
      for (const auto& v : p.vertices()) pts.push_back(to_json(v));
      out = Json{{"kind", "polyline"}, {"points", std::move(pts)}};
      break;
    }
    case PathKind::parametric:
      out = Json{{"kind", "parametric"}, {"label", p.label()}};
      break;
  }
  return out;
}

Path path_from_json(const Json& j, AlgebraLevel level) {
  const Json& kind = field(j, "kind");
  if (kind == "circle") {
    const CDNumber center = j.contains("center") ? number_from_json(j.at("center"), level)
                                                 : CDNumber(level);
    const double turns = j.contains("turns") ? real_field(j, "turns") : 1.0;
    return Path::circle(center, real_field(j, "radius"),
                        number_from_json(field(j, "direction"), level), turns);
  }
  if (kind == "polyline") {
    const Json& pts = field(j, "points");
    if (!pts.is_array()) bad("\"points\" must be an array");
    std::vector<CDNumber> points;
    for (const auto& q : pts) points.push_back(number_from_json(q, level));
    return Path::polyline(std::move(points));
  }
  bad("path kind must be \"circle\" or \"polyline\"");
}

Json to_json(const QuadratureResult& q) {
  return Json{{"value", to_json(q.value)},
              {"est_error", real_or_null(q.est_error)},
              {"refinements", q.refinements},
              {"knots", q.knots},
              {"converged", q.converged}};
}

Json to_json(const ContourValue& v) {
  Json out{{"value", to_json(v.value)}};
  out["recovered"] = v.recovered ? to_json(*v.recovered) : Json(nullptr);
  out["est_error"] = real_or_null(v.est_error);
  out["converged"] = v.converged;
  out["mode"] = mode_name(v.mode);
  return out;
}

Json to_json(const ContourReport& r) {
  return Json{{"lhs", to_json(r.lhs)},
              {"rhs", to_json(r.rhs)},
              {"diff", real_or_null(r.diff)},
              {"est_error", real_or_null(r.est_error)},
              {"converged", r.converged},
              {"mode", mode_name(r.mode)},
              {"paths_used", r.paths_used}};
}

Json to_json(const CoefficientReport& r) {
  Json coeffs = Json::array();
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
    Json c = to_json(r.coeffs[i]);
    c["k"] = r.k_min + static_cast<int>(i);
    coeffs.push_back(std::move(c));
  }
  return Json{{"k_min", r.k_min},
              {"coeffs", std::move(coeffs)},
              {"est_error", real_or_null(r.est_error)},
              {"converged", r.converged},
              {"mode", mode_name(r.mode)}};
}

Json to_json(const CRReport& r) {
  Json residuals = Json::object();
  for (const auto& [key, value] : r.residuals) residuals[key] = real_or_null(value);
  return Json{{"max_residual", real_or_null(r.max_residual)},
              {"residuals", std::move(residuals)},
              {"threshold", r.threshold},
              {"pass", r.pass}};
}

Json to_json(const RootResult& r) {
  return Json{{"root", to_json(r.root)},
              {"residual", real_or_null(r.residual)},
              {"iterations", r.iterations},
              {"restarts", r.restarts}};
}

Json to_json(const IndexVector& v) {
  Json out = Json::array();
  for (const auto& x : v.per_plane) out.push_back(x ? Json(*x) : Json(nullptr));
  return out;
}

Json error_json(ErrorKind kind, const std::string& detail) {
  return Json{{"error", {{"kind", std::string(to_string(kind))}, {"detail", detail}}}};
}

}  // namespace cdalg
