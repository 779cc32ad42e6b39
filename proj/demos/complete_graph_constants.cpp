// Empirical CD_{m,0}(0, d) constants on complete graphs, next to the numbers
// the closed form f_{nu,m} predicts.
#include <cstdio>
#include <thread>

#include "pmelab/pmelab.hpp"

using namespace pmelab;

int main()
{
  SearchConfig cfg;
  cfg.samples = 6000;
  cfg.seed = 1;
  cfg.jobs = std::max(1u, std::thread::hardware_concurrency());

  std::printf("%4s %6s %14s\n", "D", "m", "sup ratio");
  for (int D : {2, 3, 4, 5}) {
    for (double m : {1.5, 2.0, 3.0}) {
      const Graph g = complete_graph(D);
      const double d = empirical_optimal_d(g, Exponent(m), MixingParameter(0), 0, cfg);
      std::printf("%4d %6.2f %14.8f\n", D, m, d);
    }
  }

  // f_{nu,m} >= 0 on (0,1]^(D-1) is the CD statement with d = 1/nu
  const Exponent m3(3);
  double worst = 1e300;
  for (int i = 1; i <= 100; ++i)
    for (int j = 1; j <= 100; ++j) {
      const double z[] = {i / 100.0, j / 100.0};
      worst = std::min(worst, complete_graph_f(4.0 / 3.0, m3, z));
    }
  std::printf("\nmin f_{4/3,3} on a 100x100 grid of (0,1]^2: %.3e\n", worst);
}
