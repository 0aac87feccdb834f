#include <cmath>

#include <boost/math/special_functions/expint.hpp>
#include <gtest/gtest.h>

#include "gfc/fractional.hpp"

namespace {

using namespace gfc;
using namespace gfc::frac;

TEST(Fractional, TypeTwoOfOne) {
  const double expected = 2.0 * exp_integral_e1(2.0) - std::exp(-2.0) + 1.0;
  EXPECT_NEAR(s0(0.5, constant_function(1.0), 1.0), expected, 1e-9);
  EXPECT_NEAR(expected, 2.0 * boost::math::expint(1, 2.0) - std::exp(-2.0) + 1.0, 1e-14);
  EXPECT_NEAR(expected, 0.9624657, 1e-7);
  EXPECT_NEAR(s0_of_one(0.5, 1.0), expected, 1e-14);
  // mirror
  EXPECT_NEAR(s1(0.5, constant_function(1.0), 0.0), expected, 1e-9);
}

TEST(Fractional, TypeOneOfOneIsBounded) {
  // H_0^a 1 (x) = a int_0^{x/a} F, finite although F is not integrable to a power.
  const double v = h0(1.0, constant_function(1.0), 1.0);
  EXPECT_GT(v, 1.0);
  EXPECT_LT(v, 2.0);
  EXPECT_NEAR(h1(1.0, constant_function(1.0), 0.0), v, 1e-9);
}

TEST(Fractional, CompositionGivesPlainIntegral) {
  const auto f = registered_function("ident");
  const auto hs = left_integral(type1_context(0.5), integral_as_function(type2_context(0.5), f, Side::left), 1.0);
  EXPECT_NEAR(hs, 0.5, 1e-4);
}

TEST(Fractional, TypeOneIntegrationByParts) {
  const double r = integration_by_parts_residual(make_volterra_kernel(1.0), WeightFunction::unit(),
                                                 registered_function("ident"), constant_function(1.0), 1e-10);
  EXPECT_LE(r, 1e-4);
}

TEST(Fractional, RepresentationFormula) {
  const auto d = frac_derivative_left(2.0, registered_function("ident"), 0.5);
  const double expected = 0.5 * exp_integral_e1(0.5) - std::exp(-0.5) + 1.0;
  ASSERT_TRUE(d.representation.has_value());
  EXPECT_NEAR(*d.representation, expected, 1e-9);
  EXPECT_NEAR(expected, 0.5 * boost::math::expint(1, 0.5) - std::exp(-0.5) + 1.0, 1e-14);
  EXPECT_NEAR(expected, 0.6733561, 1e-7);
  EXPECT_NEAR(d.direct, expected, 1e-4);
  const auto r = frac_derivative_right(1.5, registered_function("sin"), 0.3);
  EXPECT_NEAR(r.direct, *r.representation, 1e-4);
}

TEST(Fractional, InverseOfTypeOne) {
  const double theta = 1.5;
  const auto pair = pair_context(theta - 1.0);
  const auto g = integral_as_function(pair, registered_function("sin"), Side::left);
  EXPECT_NEAR(left_derivative(pair.derivative_context(), g, 0.7), std::sin(0.7), 1e-4);
  EXPECT_NEAR(frac_derivative_left(theta, g, 0.7).direct, std::sin(0.7), 1e-4);
}

TEST(Fractional, BoundaryTermFormula) {
  // f = t has (S_0 f)(0) = 0; f = 1 does not, and the F-term accounts for it.
  const auto k = katr_left(1.5, registered_function("ident"), 0.6);
  EXPECT_NEAR(k.boundary_value, 0.0, 1e-10);
  EXPECT_NEAR(k.composed, 0.6, 1e-4);
  const auto c = katr_right(2.0, registered_function("cos"), 0.4);
  EXPECT_LE(c.defect(), 1e-4);
}

TEST(Fractional, OrderGap) {
  EXPECT_THROW(frac_derivative_left(1.0, registered_function("ident"), 0.5), DomainError);
  EXPECT_THROW(frac_derivative_left(1.0005, registered_function("ident"), 0.5), DomainError);
}

TEST(Fractional, ApproximateIdentity) {
  const auto f = registered_function("ident");
  double prev = INFINITY;
  for (double a : {0.2, 0.1, 0.05, 0.025}) {
    const double e = approx_identity_error(f, a, Side::left);
    EXPECT_LT(e, prev) << "alpha = " << a;
    prev = e;
  }
  for (double a : {0.2, 0.05}) EXPECT_EQ(approx_identity_error(registered_function("zero"), a, Side::right), 0.0);
}

TEST(Fractional, DerivativeApproximation) {
  const auto f = registered_function("tsq");
  double prev = INFINITY;
  for (double t : {1.2, 1.1, 1.05}) {
    const double e = derivative_approx_error(f, t, Side::left);
    EXPECT_LT(e, prev) << "theta = " << t;
    prev = e;
  }
  EXPECT_THROW(derivative_approx_error(make_function([](double x) { return x; }), 1.2, Side::left), DomainError);
}

TEST(Fractional, IntegrationByPartsOfDerivatives) {
  EXPECT_LE(frac_ibp_residual(1.5, constant_function(1.0), registered_function("ident")), 1e-4);
  const auto z = frac_ibp(1.5, constant_function(0.0), registered_function("ident"));
  EXPECT_EQ(z.lhs, 0.0);
  EXPECT_EQ(z.rhs, 0.0);
}

TEST(Fractional, TypeOneIsNotASemigroup) {
  // H^{1/2}(H^{1/2} 1) and H^1 1 differ; recorded, no tolerance is claimed.
  const auto one = constant_function(1.0);
  const double nested = left_integral(type1_context(0.5), integral_as_function(type1_context(0.5), one, Side::left), 1.0);
  const double direct = h0(1.0, one, 1.0);
  RecordProperty("nested", std::to_string(nested));
  RecordProperty("direct", std::to_string(direct));
  EXPECT_NE(nested, direct);
}

}  // namespace
