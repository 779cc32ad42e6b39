// On two points with u(0) = (1, a2), sup_t t(-Lv) tends to 1/e as a2 -> 0,
// which shows the Aronson-Benilan constant cannot be lowered below 1/e there.
#include <cmath>
#include <cstdio>

#include "pmelab/pmelab.hpp"

using namespace pmelab;

int main()
{
  const Graph g = complete_graph(2);
  const auto ts = linspace(1e-4, 4.0, 4000);
  std::printf("%10s %16s %16s\n", "a2", "sup t(-Lv)", "exact");
  for (double a2 : {0.5, 0.1, 1e-2, 1e-4, 1e-6}) {
    const auto traj = integrate(g, Exponent(2), PositiveField{1.0, a2}, ts);
    std::printf("%10.1e %16.12f %16.12f\n", a2, ab_sharpness(traj, 0),
                (1.0 - a2) / ((1.0 + a2) * std::exp(1.0)));
  }
  std::printf("1/e = %.12f\n", 1.0 / std::exp(1.0));
}
