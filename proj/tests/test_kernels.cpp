#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "gfc/kernels.hpp"

namespace {

using namespace gfc;
const double kSqrtPi = std::sqrt(std::numbers::pi);

TEST(Kernels, Unit) {
  const auto k = make_unit_kernel();
  const auto w = WeightFunction::unit();
  EXPECT_EQ(k(0.7, 0.2), 1.0);
  EXPECT_NEAR(composition_delta(k, k, w, 0.9, 0.4), 0.5, 1e-14);
  const auto m = membership_report(k, w, 16);
  EXPECT_TRUE(m.passes);
  EXPECT_NEAR(m.sup_fk, 1.0, 1e-12);
  EXPECT_NEAR(m.sup_gk, 1.0, 1e-12);
  EXPECT_FALSE(check_conjugacy(k, k, w).conjugate);
}

TEST(Kernels, RiemannLiouville) {
  const auto k = make_rl_kernel(0.5);
  EXPECT_NEAR(k(1.0, 0.75), 2.0 / kSqrtPi, 1e-13);
  EXPECT_EQ(k.diag_exponent(), 0.5);
  EXPECT_NEAR(make_rl_conjugate(0.3).diag_exponent(), 0.3, 1e-15);
  EXPECT_NEAR(make_rl_kernel(0.3).diag_exponent(), 0.7, 1e-15);
  const auto p = rl_pair(0.5);
  EXPECT_NEAR(composition_delta(p.kernel, *p.conjugate, p.weight, 0.6, 0.1), 1.0, 1e-8);
  EXPECT_TRUE(check_conjugacy(rl_pair(0.25).kernel, *rl_pair(0.25).conjugate, p.weight).conjugate);
  EXPECT_THROW(make_rl_kernel(0.0), DomainError);
  EXPECT_THROW(make_rl_conjugate(1.0), DomainError);
}

TEST(Kernels, RiemannLiouvilleMembership) {
  const auto m = membership_report(make_rl_kernel(0.5), WeightFunction::unit(), 16);
  ASSERT_TRUE(m.passes);
  // F_k(y) = (1 - y)^a / (a Gamma(a)), largest at y = 0.
  EXPECT_NEAR(m.sup_fk, 1.0 / (0.5 * std::tgamma(0.5)), 1e-8);
}

TEST(Kernels, SemigroupDelta) {
  // delta_{k_0.3, k_0.4} = k_0.7 = (x - y)^{-0.3} / Gamma(0.7); brute tanh-sinh quadrature as a second oracle.
  const double d = composition_delta(make_rl_kernel(0.3), make_rl_kernel(0.4), WeightFunction::unit(), 1.0, 0.5);
  EXPECT_NEAR(d, std::pow(0.5, -0.3) / std::tgamma(0.7), 1e-9);
  // z = 0.5 + 0.5 s, split at s = 1/2 so each piece is singular only at its left end.
  auto lo = [](double s) { return std::pow(s, -0.6) * std::pow(1.0 - s, -0.7); };
  auto hi = [](double u) { return std::pow(1.0 - u, -0.6) * std::pow(u, -0.7); };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double scale = std::pow(0.5, -0.3) / (std::tgamma(0.3) * std::tgamma(0.4));
  EXPECT_NEAR(d, scale * (ts.integrate(lo, 0.0, 0.5) + ts.integrate(hi, 0.0, 0.5)), 1e-9);
}

TEST(Kernels, Hadamard) {
  const auto k = make_hadamard_kernel(0.5, 1.0, std::numbers::e);
  EXPECT_NEAR(k(std::numbers::e, 1.0), 1.0 / kSqrtPi, 1e-13);
  const auto p = hadamard_pair(0.5);
  const auto rep = check_conjugacy(p.kernel, *p.conjugate, p.weight, triangular_grid(1.0, std::numbers::e, 8), 1e-8);
  EXPECT_TRUE(rep.conjugate) << rep.max_dev_forward << " " << rep.max_dev_backward;
}

TEST(Kernels, ErdelyiKober) {
  // sigma = 1 reduces to Riemann-Liouville.
  const auto ek = make_erdelyi_kober_kernel(0.5, 1.0, 0.5, 1.5);
  const auto rl = make_rl_kernel(0.5, 0.5, 1.5);
  for (auto [x, y] : triangular_grid(0.5, 1.5, 5)) {
    if (x > y) EXPECT_NEAR(ek(x, y), rl(x, y), 1e-13);
  }
  const auto p = erdelyi_kober_pair(0.5, 2.0);
  EXPECT_TRUE(check_conjugacy(p.kernel, *p.conjugate, p.weight, triangular_grid(0.5, 1.5, 8), 1e-8).conjugate);
  const auto q = erdelyi_kober_pair(0.3, 2.0);
  EXPECT_NEAR(composition_delta(q.kernel, *q.conjugate, q.weight, 1.2, 0.8), 1.0, 1e-8);
}

TEST(Kernels, VolterraAndE1) {
  const auto e1 = make_e1_kernel(1.0);
  EXPECT_NEAR(e1(1.0, 0.0), 0.21938393439552, 1e-12);
  EXPECT_TRUE(e1.logarithmic());
  EXPECT_EQ(e1.diag_exponent(), 0.0);
  const auto m = membership_report(e1, WeightFunction::unit(), 16);
  EXPECT_TRUE(m.passes);
  EXPECT_LE(m.sup_fk, 1.0 + 1e-10);
  const auto p = volterra_pair(0.5);
  EXPECT_TRUE(check_conjugacy(p.kernel, *p.conjugate, p.weight, triangular_grid(0.0, 1.0, 6), 1e-5).conjugate);
  const auto v = membership_report(make_e1_kernel(0.5), WeightFunction::unit(), 16);
  EXPECT_LE(v.sup_fk, 1.0 + 1e-10);
  EXPECT_THROW(make_volterra_kernel(0.0), DomainError);
}

TEST(Kernels, SonineForm) {
  std::vector<double> ts = {0.1, 0.4, 0.8, 1.0};
  EXPECT_LE(sonine_residual(make_rl_kernel(0.4), make_rl_conjugate(0.4), ts), 1e-9);
  EXPECT_LE(sonine_residual(make_e1_kernel(1.0), make_volterra_kernel(1.0), ts), 1e-5);
  EXPECT_THROW(sonine_residual(make_hadamard_kernel(0.5, 1.0, 2.0), make_hadamard_conjugate(0.5, 1.0, 2.0), ts),
               DomainError);
}

TEST(Kernels, ConjugacyCheckIsSymmetric) {
  const auto p = rl_pair(0.75);
  const auto g = triangular_grid(0.0, 1.0, 5);
  const auto ab = check_conjugacy(p.kernel, *p.conjugate, p.weight, g, 1e-7);
  const auto ba = check_conjugacy(*p.conjugate, p.kernel, p.weight, g, 1e-7);
  ASSERT_EQ(ab.points.size(), ba.points.size());
  for (std::size_t i = 0; i < ab.points.size(); ++i) {
    EXPECT_DOUBLE_EQ(ab.points[i].forward, ba.points[i].backward);
    EXPECT_DOUBLE_EQ(ab.points[i].backward, ba.points[i].forward);
  }
}

TEST(Kernels, ConvolutionDeltaDependsOnGapOnly) {
  const auto w = WeightFunction::unit();
  for (const auto& [k1, k2] : {std::pair{make_rl_kernel(0.3), make_rl_kernel(0.6)},
                               std::pair{make_e1_kernel(0.5), make_e1_kernel(1.0)}}) {
    const double d1 = composition_delta(k1, k2, w, 0.5, 0.2);
    const double d2 = composition_delta(k1, k2, w, 0.9, 0.6);
    EXPECT_NEAR(d1, d2, 1e-9);
  }
}

TEST(Kernels, CompositionMembershipBound) {
  const auto k1 = make_rl_kernel(0.5), k2 = make_rl_kernel(0.7);
  const auto w = WeightFunction::unit();
  const auto m1 = membership_report(k1, w, 16), m2 = membership_report(k2, w, 16);
  const auto md = membership_report(CompositionKernel{k1, k2, w}.as_kernel(), w, 16);
  ASSERT_TRUE(md.passes);
  EXPECT_LE(md.sup_fk, m1.sup_fk * m2.sup_fk * (1 + 1e-6));
}

TEST(Kernels, Weights) {
  EXPECT_TRUE(WeightFunction::unit().check_bounds());
  EXPECT_TRUE(WeightFunction::reciprocal(1.0, 3.0).check_bounds());
  EXPECT_TRUE(WeightFunction::power(2.0, 0.5, 1.5).check_bounds());
  EXPECT_THROW(WeightFunction::reciprocal(0.0, 1.0), DomainError);
  EXPECT_THROW(WeightFunction::unit(1.0, 0.0), DomainError);
  EXPECT_TRUE(sample_positivity(make_hadamard_kernel(0.5, 1.0, 2.0), WeightFunction::reciprocal(1.0, 2.0)));
}

}  // namespace
