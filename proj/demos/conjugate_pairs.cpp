// Checks every built-in kernel pair for conjugacy on a 20 x 20 triangular
// grid and prints the largest deviation of delta from 1 in both orders.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "gfc/gfc.hpp"

int main() {
  using namespace gfc;
  struct Entry {
    std::string label;
    KernelPair pair;
  };
  const std::vector<Entry> pairs = {
      {"Riemann-Liouville a=0.25", rl_pair(0.25)},
      {"Riemann-Liouville a=0.50", rl_pair(0.5)},
      {"Riemann-Liouville a=0.75", rl_pair(0.75)},
      {"Hadamard a=0.5 on [1,e]", hadamard_pair(0.5)},
      {"Erdelyi-Kober a=0.5 s=2", erdelyi_kober_pair(0.5, 2.0)},
      {"Volterra/E1 a=0.5", volterra_pair(0.5)},
      {"Volterra/E1 a=1.0", volterra_pair(1.0)},
  };
  std::printf("%-28s %12s %12s %10s %8s\n", "pair", "dev k,k'", "dev k',k", "tol", "time s");
  for (const auto& [label, p] : pairs) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = check_conjugacy(p.kernel, *p.conjugate, p.weight);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%-28s %12.3e %12.3e %10.0e %8.2f %s\n", label.c_str(), rep.max_dev_forward, rep.max_dev_backward,
                rep.tolerance, dt, rep.conjugate ? "conjugate" : "NOT conjugate");
  }
  // A pair that is not conjugate: delta_{1,1}(x, y) = x - y.
  const auto u = make_unit_kernel();
  const auto rep = check_conjugacy(u, u, WeightFunction::unit());
  std::printf("%-28s %12.3e %12.3e %10.0e %8s %s\n", "unit/unit", rep.max_dev_forward, rep.max_dev_backward,
              rep.tolerance, "", rep.conjugate ? "conjugate" : "NOT conjugate");
  return 0;
}
