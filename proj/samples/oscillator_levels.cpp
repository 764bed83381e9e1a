// Wigner functions of the first oscillator levels, re-read at other hbar'.
// Prints the smallest eigenvalue of the reconstructed operator.

#include <cstdio>
#include <string>

#include "hbarcheck/verifier.hpp"

using namespace hbarcheck;

int main() {
  const PositionGrid grid(12.0, 256);
  const double sigma_x = std::sqrt(0.5);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto w = wigner_transform(hermite_wavefunction(k, sigma_x, grid));
    std::printf("level %zu  W(0,0) = %+.6f\n", k, w.at(grid.size() / 2, grid.size() / 2));
    for (double h : {0.8, 1.0, 1.2}) {
      const auto v = verify_state(w, h);
      std::printf("  hbar' %.2f  %-9s  min eig %+.3e  purity %.6f\n", h,
                  std::string(to_string(v.label)).c_str(), v.min_eigenvalue, v.purity);
    }
  }
}
