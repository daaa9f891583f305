#include "debranges/grids.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace debranges {

Complex Rng::uniform_disk(double radius) {
  const double r = radius * std::sqrt(uniform());
  return std::polar(r, uniform(-std::numbers::pi, std::numbers::pi));
}

std::vector<double> linspace(double start, double stop, int count) {
  if (count < 1) throw PreconditionError("grid needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = start;
    return out;
  }
  const double step = (stop - start) / (count - 1);
  for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = start + k * step;
  return out;
}

std::vector<Complex> segment(Complex start, Complex stop, int count) {
  if (count < 1) throw PreconditionError("grid needs at least one point");
  std::vector<Complex> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    out[static_cast<std::size_t>(k)] = start + t * (stop - start);
  }
  return out;
}

std::vector<Complex> random_box(Rng& rng, int count, double x_lo, double x_hi, double y_lo, double y_hi) {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) out.push_back(rng.uniform_box(x_lo, x_hi, y_lo, y_hi));
  return out;
}

std::vector<Complex> random_disk(Rng& rng, int count, double radius) {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) out.push_back(rng.uniform_disk(radius));
  return out;
}

std::vector<double> exponent_grid(double bound) {
  if (!(bound > 0.0)) throw PreconditionError("exponent bound must be positive");
  const double spacing = std::min(0.08, std::numbers::pi / (2.0 * bound));
  const int half = static_cast<int>(std::ceil(4.0 / spacing));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * half + 1));
  for (int k = -half; k <= half; ++k) out.push_back(k * spacing);
  return out;
}

std::vector<Complex> standard_scan_grid() {
  std::vector<Complex> out;
  for (double y : {-1.0, -0.5, 0.0, 0.5, 1.0})
    for (int x = -3; x <= 3; ++x) out.emplace_back(static_cast<double>(x), y);
  out.emplace_back(0.0, -0.5);
  out.emplace_back(0.0, 0.5);
  return out;
}

}  // namespace debranges
