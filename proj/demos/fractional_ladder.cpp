// L1 error ladders of the approximation theorems on [0, 1]:
//   ||S_0^a f - f||      as a -> 0
//   ||D_0^t f - f'||     as t -> 1
// printed together with the observed convergence rate between rungs.

#include <cmath>
#include <cstdio>
#include <vector>

#include "gfc/gfc.hpp"

namespace {

void print_ladder(const char* title, const char* param, const gfc::checks::Ladder& l) {
  std::printf("%s\n  %-8s %14s %8s\n", title, param, "L1 error", "rate");
  for (std::size_t i = 0; i < l.errors.size(); ++i) {
    std::printf("  %-8.4g %14.6e", l.parameters[i], l.errors[i]);
    if (i > 0) {
      const double gap_now = std::abs(l.parameters[i] - (param[0] == 't' ? 1.0 : 0.0));
      const double gap_prev = std::abs(l.parameters[i - 1] - (param[0] == 't' ? 1.0 : 0.0));
      std::printf(" %8.3f", std::log(l.errors[i - 1] / l.errors[i]) / std::log(gap_prev / gap_now));
    }
    std::printf("\n");
  }
  std::printf("  monotone: %s\n\n", l.monotone() ? "yes" : "no");
}

}  // namespace

int main() {
  using namespace gfc;
  const std::vector<double> alphas = {0.2, 0.1, 0.05, 0.025, 0.0125};
  const std::vector<double> thetas = {1.2, 1.1, 1.05, 1.025, 1.0125};
  print_ladder("S_0^a f -> f, f(t) = t", "alpha", checks::identity_ladder(registered_function("ident"), alphas, Side::left));
  print_ladder("S_1^a f -> f, f(t) = cos t", "alpha",
               checks::identity_ladder(registered_function("cos"), alphas, Side::right));
  print_ladder("D_0^t f -> f', f(t) = t^2", "theta",
               checks::derivative_ladder(registered_function("tsq"), thetas, Side::left));
  print_ladder("D_0^t f -> f', f(t) = sin t", "theta",
               checks::derivative_ladder(registered_function("sin"), thetas, Side::left));
  return 0;
}
