#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "debranges/errors.hpp"

namespace debranges {

/// Seeded generator; uniform draws use the top 53 bits directly so the
/// sequence does not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Complex uniform_box(double x_lo, double x_hi, double y_lo, double y_hi) {
    const double x = uniform(x_lo, x_hi);
    return {x, uniform(y_lo, y_hi)};
  }
  Complex uniform_disk(double radius);

 private:
  std::mt19937_64 engine_;
};

std::vector<double> linspace(double start, double stop, int count);
std::vector<Complex> segment(Complex start, Complex stop, int count);
std::vector<Complex> random_box(Rng& rng, int count, double x_lo, double x_hi, double y_lo, double y_hi);
std::vector<Complex> random_disk(Rng& rng, int count, double radius);

/// Uniform real grid on [-4, 4] with spacing min(0.08, pi / (2 bound)), fine
/// enough to unwrap the phase of e^{i alpha x} for |alpha| <= bound.
std::vector<double> exponent_grid(double bound);

/// Points scanned for common zeros: {-3..3} x {-1, -0.5, 0, 0.5, 1} plus the
/// extraction anchors -i/2 and i/2.
std::vector<Complex> standard_scan_grid();

}  // namespace debranges
