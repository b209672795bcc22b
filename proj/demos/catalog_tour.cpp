// Prints the catalogued surfaces with their worst sampled residual, then the
// weighted area of a few graphs over the Gaussian plane.

#include <cstdio>

#include "wgeom/wgeom.hpp"

int main() {
  using namespace wgeom;
  std::printf("%-48s %-34s %s\n", "surface", "claim", "residual");
  for (const auto& e : verify_catalog(default_catalog(), 1e-5).entries) {
    std::printf("%-48s %-34s %.3e\n", e.name.c_str(), e.claim.c_str(), e.residual);
  }
  std::printf("\nweighted area over G^2 (1 only for constants):\n");
  for (const char* name : {"constant:0.5", "linear:0.1", "parabola", "sinusoid", "random_bump"}) {
    std::printf("  %-14s %.12f\n", name, bernstein_functional(GraphFunction::from_name(name, 2)));
  }
}
