// Fields on short paths where D_m goes negative while -Lv stays positive, so
// no finite d works.
#include <cstdio>

#include "pmelab/pmelab.hpp"

using namespace pmelab;

int main()
{
  for (int n : {3, 4}) {
    const auto c = chain_counterexample(n, Exponent(2), 0.0);
    std::printf("path %d, m = 2: D_m = %.12f, -Lv = %.6f\n", n, c.d_m, c.minus_lv);
  }

  std::printf("\npath 5, v = (0, eps, 1, 2 - 2 eps, 3 - 5 eps)\n");
  std::printf("%6s %10s %22s %22s\n", "m", "eps", "D_m", "limit");
  for (double m : {2.0, 2.5, 3.0, 5.0}) {
    for (double eps : {1e-2, 1e-4, 1e-8}) {
      const auto c = chain_counterexample(5, Exponent(m), eps);
      if (m > 2.0)
        std::printf("%6.2f %10.1e %22.15f %22.15f\n", m, eps, c.d_m, chain5_limit(Exponent(m)));
      else
        std::printf("%6.2f %10.1e %22.15f %22s\n", m, eps, c.d_m, "-1/2");
    }
  }
}
