#include <doctest.h>

#include <random>

#include "cdalg/expr.hpp"
#include "cdalg/transcendental.hpp"
#include "oracles.hpp"

using namespace cdalg;

namespace {

const AlgebraLevel H(2), O(3);

CDNumber e(AlgebraLevel level, int i) { return CDNumber::unit(level, i); }

// Central difference of f along h, the oracle for differentials.
CDNumber fd(const Phrase& f, const CDNumber& z, const CDNumber& h, double step = 1e-6) {
  return (evaluate(f, z + h * step) - evaluate(f, z - h * step)) / (2 * step);
}

}  // namespace

TEST_CASE("parse errors carry the syntax kind") {
  for (const char* bad : {"", "z +", "(z", "z^", "e99", "q", "z^99999", "ln(z*z)", "z ** 2", "2 3"}) {
    CAPTURE(bad);
    try {
      parse(bad, O);
      FAIL("accepted");
    } catch (const Error& err) {
      CHECK(err.kind() == ErrorKind::syntax);
    }
  }
}

TEST_CASE("evaluation") {
  CHECK(norm(evaluate(parse("z^2", H), e(H, 1) + e(H, 2)) + CDNumber::real(H, 2)) < 1e-15);
  CHECK(norm(evaluate(parse("z^-1", H), e(H, 1) * 2.0) + e(H, 1) * 0.5) < 1e-15);
  CHECK(evaluate(parse("3 + e1*z", H), e(H, 2)) == CDNumber::real(H, 3) + e(H, 3));
  CHECK(evaluate(parse("z^0", O), e(O, 5)) == CDNumber::one(O));
  CHECK(evaluate(parse("(z-1)^-2", O), CDNumber::real(O, 3)) == CDNumber::real(O, 0.25));
  CHECK(evaluate(parse("zc", O), e(O, 3) + CDNumber::one(O)) == CDNumber::one(O) - e(O, 3));
  CHECK_THROWS_AS(evaluate(parse("(z-e1)^-1", O), e(O, 1)), Error);
}

TEST_CASE("bracketing is preserved") {
  const CDNumber z = e(O, 4);
  const CDNumber left = evaluate(parse("(e1*z)*e2", O), z);
  const CDNumber right = evaluate(parse("e1*(z*e2)", O), z);
  CHECK(left == mul(mul(e(O, 1), z), e(O, 2)));
  CHECK(right == mul(e(O, 1), mul(z, e(O, 2))));
  CHECK_FALSE(left == right);
}

TEST_CASE("format round trip") {
  std::mt19937_64 rng(1);
  for (const char* text : {"z^2 + e1*z*e2", "(e1*z)*(e2*z^3) - 2*zc", "(z - e1)^-2 + ln(z - 2)",
                           "e3*(z^2*e5) + 0.25"}) {
    const Phrase f = parse(text, O);
    const Phrase g = parse(format(f), O);
    const CDNumber z = oracle::random_number(rng, O) + CDNumber::real(O, 5);
    CHECK(norm(evaluate(f, z) - evaluate(g, z)) < 1e-12 * (1 + norm(evaluate(f, z))));
  }
}

TEST_CASE("differential against finite differences") {
  std::mt19937_64 rng(2);
  for (const char* text : {"z^2", "e1*z^3*e2 + (e3*z)*(e4*z)", "(z - e2)^-2", "(z^2 + e1)^-1",
                           "ln(z - 3)*e1", "z*zc"}) {
    const Phrase f = parse(text, O);
    for (int t = 0; t < 3; ++t) {
      const CDNumber z = oracle::random_number(rng, O, 0.5);
      const CDNumber h = oracle::random_number(rng, O);
      const CDNumber d = derivative_apply(f, z, h);
      CAPTURE(text);
      if (contains_conjugate(f.root)) {
        // D_z holds zc fixed: the z-slot difference of the two-slot form.
        const double s = 1e-6;
        const CDNumber ref =
            (evaluate2(f, z + h * s, conj(z)) - evaluate2(f, z - h * s, conj(z))) / (2 * s);
        CHECK(norm(d - ref) < 1e-6 * (1 + norm(ref)));
      } else {
        const CDNumber ref = fd(f, z, h);
        CHECK(norm(d - ref) < 1e-6 * (1 + norm(ref)));
      }
    }
  }
}

TEST_CASE("differential examples") {
  CHECK(norm(derivative_apply(parse("z^2", H), e(H, 1), e(H, 2))) < 1e-15);
  std::mt19937_64 rng(3);
  const CDNumber z = oracle::random_number(rng, O);
  CHECK(norm(derivative_apply(parse("z^2", O), z, CDNumber::one(O)) - z * 2.0) < 1e-14);
  const CDNumber d = derivative_apply(parse("z^-1", O), e(O, 1) * 2.0, CDNumber::one(O));
  CHECK(norm(d - CDNumber::real(O, 0.25)) < 1e-14);
  CHECK(norm(fd(parse("z^-1", O), e(O, 1) * 2.0, CDNumber::one(O)) - d) < 1e-8);
}

TEST_CASE("differentiate_one matches the differential at h = 1") {
  std::mt19937_64 rng(4);
  for (const char* text : {"e1*z^3*e2 + z", "(e3*z)*(e4*z^2)", "(z - e2)^-3", "ln(z - 2)"}) {
    const Phrase f = parse(text, O);
    const Phrase df{O, differentiate_one(f.root, O)};
    const CDNumber z = oracle::random_number(rng, O, 0.3);
    CHECK(norm(evaluate(df, z) - derivative_apply(f, z, CDNumber::one(O))) < 1e-12);
  }
}

TEST_CASE("primitive") {
  std::mt19937_64 rng(5);
  SUBCASE("power rule") {
    const Phrase g = primitive(parse("z^2", O)).g;
    const CDNumber z = oracle::random_number(rng, O);
    CHECK(norm(evaluate(g, z) - pow_int(z, 3) / 3.0) < 1e-12 * (1 + std::pow(norm(z), 3)));
    const CDNumber c = oracle::random_number(rng, O);
    const Phrase g3 = primitive(Phrase{O, Expr::power(Variable::z, c, -3)}).g;
    CHECK(norm(evaluate(g3, z) + pow_int(z - c, -2) * 0.5) < 1e-12);
  }
  SUBCASE("sandwiched inverse gives a log term") {
    const Primitive p = primitive(parse("e1*(z^-1)*e2", O));
    REQUIRE(p.log_terms.size() == 1);
    CHECK(p.log_terms[0].left == e(O, 1));
    CHECK(p.log_terms[0].center == CDNumber(O));
    CHECK(p.log_terms[0].right == e(O, 2));
  }
  SUBCASE("(Dg).1 = f") {
    for (const char* text : {"1", "e1*z^2*e3", "(e3*z)*(e5*z^2) + 2", "(e1*z^2)*e2*z",
                             "(z - e1)^-2 + e4*(z - e2)^-1"}) {
      const Phrase f = parse(text, O);
      const CDNumber z = oracle::random_number(rng, O, 0.3) + CDNumber::real(O, 2);
      CAPTURE(text);
      CHECK(norm(hat_apply(f, z, CDNumber::one(O)) - evaluate(f, z)) < 1e-12 * (1 + norm(evaluate(f, z))));
    }
  }
  SUBCASE("constant integrand integrates to h") {
    const CDNumber h = oracle::random_number(rng, O);
    CHECK(norm(hat_apply(parse("1", O), e(O, 2), h) - h) < 1e-15);
    CHECK(norm(hat_apply(parse("z", H), e(H, 2), e(H, 1))) < 1e-15);
  }
  SUBCASE("unsupported shapes") {
    CHECK_THROWS_AS(primitive(parse("(z - 1)^-1*(z - 2)^-1", O)), Error);
    CHECK_THROWS_AS(primitive(parse("zc", O)), Error);
  }
}

TEST_CASE("tree queries") {
  const Phrase f = parse("e1*(z - e2)^-1 + ln(z - 3) + zc", O);
  CHECK(contains_conjugate(f.root));
  CHECK(contains_log(f.root));
  CHECK_FALSE(is_polynomial(f.root));
  CHECK(is_polynomial(parse("e1*z^3 + 2", O).root));
  CHECK(log_centers(f.root).size() == 1);
  CHECK(singular_centers(f.root).size() == 2);
  CHECK(is_zero_constant(simplify(parse("0*z + 0", O).root, O)));
}

TEST_CASE("constant-sandwiched products of one function") {
  std::mt19937_64 rng(6);
  const Phrase f = parse("(e5*(z - e1)^-1)*(z - e1)^-2 + (z - e1)^-1*((z - e1)^-1*e3)", O);
  const CDNumber z = oracle::random_number(rng, O, 0.3) + CDNumber::real(O, 2);
  CHECK(norm(hat_apply(f, z, CDNumber::one(O)) - evaluate(f, z)) < 1e-12);
  // Sedenions are not alternative: the rewrite does not apply.
  CHECK_THROWS_AS(primitive(parse("(e5*(z - e1)^-1)*(z - e1)^-2", AlgebraLevel(4))), Error);
}
