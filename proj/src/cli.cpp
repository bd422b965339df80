#include "cdalg/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "cdalg/acceptance.hpp"
#include "cdalg/basis_table.hpp"

namespace cdalg {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::usage, what); }

struct CommandSpec {
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

const std::map<std::string, CommandSpec>& command_table() {
  static const std::map<std::string, CommandSpec> table = {
      {"eval", {{"expression"}, {"point"}}},
      {"diff", {{"expression"}, {"point", "h"}}},
      {"integrate", {{"expression", "path"}, {}}},
      {"logint", {{"path"}, {"center"}}},
      {"index", {{"path"}, {"point"}}},
      {"residue", {{"expression", "point", "rho"}, {"direction"}}},
      {"cauchy", {{"expression", "point", "path"}, {"k"}}},
      {"taylor", {{"expression", "path"}, {"count", "point"}}},
      {"laurent",
       {{"expression", "k_min", "k_max", "rho_inner", "rho_outer"}, {"point", "direction"}}},
      {"restheorem", {{"expression", "poles", "path"}, {}}},
      {"argprinciple", {{"expression", "path", "zeros"}, {}}},
      {"roots", {{"expression"}, {"point", "max_iter"}}},
      {"crcheck", {{"expression", "point"}, {"threshold", "step"}}},
      {"harmonic", {{"expression", "point"}, {"threshold", "step"}}},
      {"zbarcheck", {{"expression", "point"}, {"threshold", "step"}}},
      {"zerodiv", {{}, {"budget"}}},
  };
  return table;
}

const std::set<std::string> kCommonKeys = {"command", "level", "tol",   "max_knots",
                                           "seed",    "output", "format"};

class Job {
 public:
  explicit Job(const Json& j) : j_(j) {
    if (!j_.is_object()) bad("a job must be a JSON object");
    const Json& cmd = at("command");
    if (!cmd.is_string()) bad("\"command\" must be a string");
    command_ = cmd.get<std::string>();
    const auto it = command_table().find(command_);
    if (it == command_table().end()) bad("unknown command \"" + command_ + "\"");
    std::set<std::string> allowed = kCommonKeys;
    for (const auto& k : it->second.required) allowed.insert(k);
    for (const auto& k : it->second.optional) allowed.insert(k);
    for (const auto& [key, value] : j_.items()) {
      if (!allowed.count(key)) bad("field \"" + key + "\" is not used by " + command_);
    }
    for (const auto& k : it->second.required) at(k);
    if (j_.contains("format") && j_.at("format") != "json") bad("only --format json is supported");
    const std::int64_t r = integer("level", AlgebraLevel::kDefaultR, INT32_MIN, INT32_MAX);
    level_ = AlgebraLevel(static_cast<int>(r));
  }

  const std::string& command() const { return command_; }
  AlgebraLevel level() const { return level_; }
  bool has(const char* key) const { return j_.contains(key); }

  const Json& at(const std::string& key) const {
    if (!j_.contains(key)) bad("missing field \"" + key + "\"");
    return j_.at(key);
  }

  std::int64_t integer(const char* key, std::int64_t fallback, std::int64_t lo,
                       std::int64_t hi) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_number_integer()) bad(std::string("\"") + key + "\" must be an integer");
    const auto x = v.get<std::int64_t>();
    if (x < lo || x > hi) {
      bad(std::string("\"") + key + "\" must be in " + std::to_string(lo) + ".." +
          std::to_string(hi));
    }
    return x;
  }

  std::uint64_t seed() const {
    if (!has("seed")) return 42;
    const Json& v = at("seed");
    if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0))) bad("\"seed\" must be a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  double positive(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_number()) bad(std::string("\"") + key + "\" must be a number");
    const double x = v.get<double>();
    if (!(x > 0.0) || !std::isfinite(x)) {
      bad(std::string("\"") + key + "\" must be positive and finite");
    }
    return x;
  }

  /// JSON array, real scalar, or constant phrase text such as "0.3*e1".
  CDNumber number(const std::string& key, const CDNumber& fallback) const {
    if (!j_.contains(key)) return fallback;
    return number_value(at(key));
  }
  CDNumber number(const std::string& key) const { return number_value(at(key)); }

  CDNumber number_value(const Json& v) const { return number_from_json(v, level_); }

  Phrase phrase() const { return phrase_from_json(at("expression"), level_); }
  Path path() const { return path_from_json(at("path"), level_); }
  double tol(double fallback = kDefaultTol) const { return positive("tol", fallback); }
  int max_knots() const {
    return static_cast<int>(integer("max_knots", kDefaultMaxKnots, kInitialKnots, 1 << 24));
  }

 private:
  const Json& j_;
  std::string command_;
  AlgebraLevel level_;
};

CDNumber e1(AlgebraLevel level) { return CDNumber::unit(level, 1); }

Json execute(const Job& job) {
  const std::string& cmd = job.command();
  const AlgebraLevel level = job.level();
  const CDNumber zero(level);

  if (cmd == "eval") {
    return Json{{"value", to_json(evaluate(job.phrase(), job.number("point", zero)))}};
  }
  if (cmd == "diff") {
    const auto [v, d] = value_and_derivative(job.phrase(), job.number("point", zero),
                                             job.number("h", CDNumber::one(level)));
    return Json{{"value", to_json(v)}, {"derivative", to_json(d)}};
  }
  if (cmd == "integrate") {
    return to_json(line_integral(job.phrase(), job.path(), job.tol(), job.max_knots()));
  }
  if (cmd == "logint") {
    return to_json(log_integral(job.number("center", zero), job.path(), job.tol(), job.max_knots()));
  }
  if (cmd == "index") {
    const Path gamma = job.path();
    const CDNumber a = job.number("point", zero);
    Json out{{"winding", to_json(winding_index(a, gamma))}};
    out["ar_index"] = to_json(ar_index(a, gamma, job.tol()));
    return out;
  }
  if (cmd == "residue") {
    return to_json(residue(job.phrase(), job.number("point"), job.number("direction", e1(level)),
                           job.positive("rho", 1.0), job.tol()));
  }
  if (cmd == "cauchy") {
    const int k = static_cast<int>(job.integer("k", 0, 0, 64));
    return to_json(cauchy_derivative(job.phrase(), job.number("point"), k, job.path(), job.tol()));
  }
  if (cmd == "taylor") {
    const Path psi = job.path();
    const CDNumber a = job.number("point", psi.kind() == PathKind::circle ? psi.center() : zero);
    const int count = static_cast<int>(job.integer("count", 4, 1, 256));
    return to_json(taylor_coeffs(job.phrase(), a, count, psi, job.tol()));
  }
  if (cmd == "laurent") {
    return to_json(laurent_coeffs(
        job.phrase(), job.number("point", zero), static_cast<int>(job.integer("k_min", 0, -128, 0)),
        static_cast<int>(job.integer("k_max", 0, 0, 128)), job.positive("rho_inner", 1.0),
        job.positive("rho_outer", 1.0), job.number("direction", e1(level)), job.tol()));
  }
  if (cmd == "restheorem") {
    const Json& arr = job.at("poles");
    if (!arr.is_array()) bad("\"poles\" must be an array of numbers");
    std::vector<CDNumber> poles;
    for (const auto& p : arr) poles.push_back(job.number_value(p));
    return to_json(residue_theorem_check(job.phrase(), poles, job.path(), job.tol()));
  }
  if (cmd == "argprinciple") {
    const Json& arr = job.at("zeros");
    if (!arr.is_array()) bad("\"zeros\" must be an array of {\"point\", \"order\"}");
    std::vector<DivisorEntry> zeros;
    for (const auto& z : arr) {
      if (!z.is_object() || !z.contains("point") || !z.contains("order") ||
          !z.at("order").is_number_integer()) {
        bad("each zero needs \"point\" and an integer \"order\"");
      }
      const auto order = z.at("order").get<std::int64_t>();
      if (order < -kMaxExponent || order > kMaxExponent) bad("zero order out of range");
      zeros.push_back({job.number_value(z.at("point")), static_cast<int>(order)});
    }
    return to_json(argument_principle(job.phrase(), job.path(), zeros, job.tol()));
  }
  if (cmd == "roots") {
    const int max_iter = static_cast<int>(job.integer("max_iter", 200, 1, 100000));
    return to_json(find_root(job.phrase(), job.number("point", zero), max_iter, job.tol(1e-10),
                             job.seed()));
  }
  if (cmd == "crcheck" || cmd == "harmonic" || cmd == "zbarcheck") {
    const double step = job.has("step") ? job.positive("step", 1.0) : 0.0;
    const RealFieldSample field = RealFieldSample::from_phrase(job.phrase(), step);
    const double threshold = job.positive("threshold", kDefaultCheckThreshold);
    const CDNumber z = job.number("point");
    if (cmd == "crcheck") return to_json(cr_check(field, z, threshold));
    if (cmd == "harmonic") return to_json(harmonic_check(field, z, threshold));
    return to_json(zbar_check(field, z, threshold));
  }
  // zerodiv
  const auto budget = job.integer("budget", 10'000'000, 1, std::int64_t{1} << 40);
  const auto pair = find_zero_divisor(level, budget);
  if (!pair) return Json{{"found", false}};
  return Json{{"found", true},
              {"a", to_json(pair->a)},
              {"b", to_json(pair->b)},
              {"product_norm", pair->product_norm},
              {"norm_product", norm(pair->a) * norm(pair->b)}};
}

int exit_code_for(ErrorKind kind) { return is_usage_error(kind) ? 1 : 2; }

}  // namespace

RunOutcome run_job(const Json& job) {
  RunOutcome out;
  try {
    const Job parsed(job);
    out.report = Json{{"command", parsed.command()}, {"level", parsed.level().r()}};
    out.report["result"] = execute(parsed);
    out.exit_code = 0;
  } catch (const Error& e) {
    out.exit_code = exit_code_for(e.kind());
    out.report = error_json(e.kind(), e.what());
  } catch (const nlohmann::json::exception& e) {
    out.exit_code = 1;
    out.report = error_json(ErrorKind::usage, e.what());
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.report = error_json(ErrorKind::domain, e.what());
  }
  return out;
}

std::string dump_report(const Json& report) {
  return report.dump(2, ' ', false, nlohmann::json::error_handler_t::replace);
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot read \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(what + " is not valid JSON: " + e.what());
  }
}

// Option values that parse as JSON become JSON; other text stays a string
// (constants such as "0.3*e1").
Json loose_value(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  return j.is_discarded() ? Json(text) : j;
}

int emit(const Json& report, int code, const std::string& output) {
  const std::string text = dump_report(report) + "\n";
  if (output.empty()) {
    std::cout << text;
    return code;
  }
  std::ofstream out(output, std::ios::binary);
  if (!(out << text)) {
    std::cout << dump_report(error_json(ErrorKind::usage, "cannot write \"" + output + "\"")) << "\n";
    return 1;
  }
  return code;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"cdcalc: calculus over Cayley-Dickson algebras. Reports are JSON."};
  std::string command;
  app.add_option("command", command,
                 "eval diff integrate logint index residue cauchy taylor laurent restheorem "
                 "argprinciple roots crcheck harmonic zbarcheck zerodiv selftest");

  // flag -> job key; values are converted by loose_value except text fields.
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"--level", "level"},         {"--tol", "tol"},
      {"--max-knots", "max_knots"}, {"--seed", "seed"},
      {"--point", "point"},         {"--delta", "h"},
      {"--center", "center"},       {"--direction", "direction"},
      {"--rho", "rho"},             {"--rho-inner", "rho_inner"},
      {"--rho-outer", "rho_outer"}, {"--k", "k"},
      {"--count", "count"},         {"--k-min", "k_min"},
      {"--k-max", "k_max"},         {"--poles", "poles"},
      {"--zeros", "zeros"},         {"--threshold", "threshold"},
      {"--step", "step"},           {"--max-iter", "max_iter"},
      {"--budget", "budget"},       {"--path", "path"},
  };
  std::map<std::string, std::string> values;
  for (const auto& [flag, key] : flags) app.add_option(flag, values[key]);
  std::string expr, expr_file, path_file, output, format, job_file;
  bool inject_fault = false;
  app.add_option("--expr", expr, "phrase text, e.g. \"(z - e1)^-1 + 2*z\"");
  app.add_option("--expr-file", expr_file, "file with phrase text or a JSON tree");
  app.add_option("--path-file", path_file, "file with a path JSON object");
  app.add_option("--output", output, "write the report here instead of stdout");
  app.add_option("--format", format, "report format (json)");
  app.add_option("--job", job_file, "job JSON file; flags override its fields");
  app.add_flag("--inject-sign-fault", inject_fault, "selftest with a corrupted basis table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << dump_report(error_json(ErrorKind::usage, e.what())) << "\n";
    return 1;
  }

  Json job = Json::object();
  try {
    if (!job_file.empty()) job = parse_json_text(read_file(job_file), "job file");
    if (!job.is_object()) bad("a job must be a JSON object");
    if (!command.empty()) job["command"] = command;
    for (const auto& [flag, key] : flags) {
      if (app.count(flag)) job[key] = loose_value(values[key]);
    }
    if (app.count("--expr") && app.count("--expr-file")) bad("give --expr or --expr-file, not both");
    if (app.count("--expr")) job["expression"] = expr;
    if (app.count("--expr-file")) {
      const std::string text = read_file(expr_file);
      const auto first = text.find_first_not_of(" \t\r\n");
      job["expression"] = first != std::string::npos && text[first] == '{'
                              ? parse_json_text(text, "expression file")
                              : Json(text);
    }
    if (app.count("--path-file")) job["path"] = parse_json_text(read_file(path_file), "path file");
    if (app.count("--format")) job["format"] = format;
    if (!output.empty()) job["output"] = output;
  } catch (const Error& e) {
    std::cout << dump_report(error_json(e.kind(), e.what())) << "\n";
    return 1;
  }
  const std::string destination =
      job.contains("output") && job["output"].is_string() ? job["output"].get<std::string>() : "";

  if (job.value("command", "") == "selftest") {
    AcceptanceOptions opts;
    opts.reduced = true;
    opts.inject_sign_fault = inject_fault;
    opts.nested_selftest = false;
    if (job.contains("seed")) {
      if (!job["seed"].is_number_integer() || job["seed"].get<std::int64_t>() < 0) {
        std::cout << dump_report(error_json(ErrorKind::usage, "\"seed\" must be a nonnegative integer")) << "\n";
        return 1;
      }
      opts.seed = job["seed"].get<std::uint64_t>();
    }
    const auto results = run_acceptance(opts);
    std::cout << format_results(results);
    bool all = true;
    for (const auto& r : results) all = all && r.pass;
    return all ? 0 : 2;
  }

  const RunOutcome outcome = run_job(job);
  return emit(outcome.report, outcome.exit_code, destination);
}

}  // namespace cdalg
