// Sweep hbar' for a random two-mode Gaussian and print where it stops being a
// quantum state. Usage: hbar_sweep [seed]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "hbarcheck/gaussian.hpp"

using namespace hbarcheck;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 7;
  const RealMatrix s = random_symplectic(2, seed);
  // thermal occupations 1.3 and 2.1 (in units of hbar/2), then a symplectic map
  const RealMatrix d = RealMatrix::diagonal({0.65, 1.05, 0.65, 1.05});
  const GaussianState state(s * d * transpose(s));

  std::printf("hbar_c = %.10f\n", critical_hbar(state));
  std::printf("%8s  %-14s %12s  %s\n", "hbar'", "label", "purity", "RSI");
  for (int i = 1; i <= 16; ++i) {
    const double h = 0.1 * i;
    const auto v = classify_gaussian(state, h);
    std::string rsi;
    for (bool ok : v.rsi_satisfied) rsi += ok ? '+' : '-';
    const double purity = v.label == GaussianLabel::ClassicalOnly ? 0.0 : gaussian_purity(state, h);
    std::printf("%8.2f  %-14s %12.8f  %s\n", h, std::string(to_string(v.label)).c_str(), purity,
                rsi.c_str());
  }
}
