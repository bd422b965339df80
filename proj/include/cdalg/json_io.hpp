#ifndef CDALG_JSON_IO_HPP
#define CDALG_JSON_IO_HPP

#include <json.hpp>

#include "cdalg/contour.hpp"
#include "cdalg/diffcheck.hpp"
#include "cdalg/structure.hpp"

namespace cdalg {

/// Insertion-ordered so reports keep a fixed, readable field order.
using Json = nlohmann::ordered_json;

// Malformed input throws ErrorKind::usage.

Json to_json(const CDNumber& z);
/// A real, an array of 2^r reals, or constant phrase text such as "1 + 2*e3".
CDNumber number_from_json(const Json& j, AlgebraLevel level);

/**
 * Tree form: {"op":"add"|"mul"|"neg","args":[...]}, {"op":"pow","args":[x],
 * "exp":n}, {"const":[...]}, {"var":"z"|"zc","pow":n,"center":[...]} and
 * {"ln":"z","center":[...]}. "pow" defaults to 1 and "center" to 0.
 */
Json to_json(const Expr& e);
Expr expr_from_json(const Json& j, AlgebraLevel level);
/// A string is parsed as phrase text, an object as a tree.
Phrase phrase_from_json(const Json& j, AlgebraLevel level);

Json to_json(const Path& p);
Path path_from_json(const Json& j, AlgebraLevel level);

Json to_json(const QuadratureResult& q);
Json to_json(const ContourValue& v);
Json to_json(const ContourReport& r);
Json to_json(const CoefficientReport& r);
Json to_json(const CRReport& r);
Json to_json(const RootResult& r);
Json to_json(const IndexVector& v);

Json error_json(ErrorKind kind, const std::string& detail);

}  // namespace cdalg

#endif
