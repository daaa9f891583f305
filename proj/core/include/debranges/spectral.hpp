#pragma once

// Piecewise exponential-polynomial spectral densities.
//
// Fourier convention: an entire function f of exponential type is written
//
//     f(z) = \int phi(t) e^{izt} dt,
//
// so ||f||^2_{L^2(R)} = 2 pi \int |phi|^2 dt and multiplying f by e^{i beta z}
// translates phi by +beta. A Paley-Wiener kernel section k_a(lambda, .) has
// density (1/2pi) e^{-i conj(lambda) t} on [-a, a].

#include <vector>

#include "debranges/errors.hpp"

namespace debranges {

/// coefficient * t^power * exp(rate * t), supported on [lo, hi].
struct SpectralPiece {
  double lo = 0.0;
  double hi = 0.0;
  Complex coefficient{};
  int power = 0;
  Complex rate{};
};

class SpectralDensity {
 public:
  SpectralDensity() = default;
  explicit SpectralDensity(std::vector<SpectralPiece> pieces);

  static SpectralDensity exponential(double lo, double hi, Complex coefficient, Complex rate);

  const std::vector<SpectralPiece>& pieces() const noexcept { return pieces_; }
  bool empty() const noexcept { return pieces_.empty(); }
  double support_lo() const;
  double support_hi() const;

  /// f(z) = \int phi(t) e^{izt} dt.
  Complex transform(Complex z) const;

  SpectralDensity scaled(Complex factor) const;
  /// Density of e^{i beta z} f.
  SpectralDensity shifted(double beta) const;
  /// Orthogonal projection onto the band [lo, hi].
  SpectralDensity restricted(double lo, double hi) const;
  /// Density of f(z) / (z - mu); assumes f(mu) = 0.
  SpectralDensity divided(Complex mu) const;

  SpectralDensity& operator+=(const SpectralDensity& other);
  friend SpectralDensity operator+(SpectralDensity a, const SpectralDensity& b) { return a += b; }
  friend SpectralDensity operator-(SpectralDensity a, const SpectralDensity& b) {
    return a += b.scaled(-1.0);
  }

 private:
  void coalesce();

  std::vector<SpectralPiece> pieces_;
};

/// \int_lo^hi t^n e^{s t} dt by panelled Gauss-Legendre quadrature.
Complex integrate_power_exponential(int n, Complex s, double lo, double hi);

/// <f, g> in L^2(R), i.e. 2 pi \int phi_f conj(phi_g) dt.
Complex spectral_inner(const SpectralDensity& f, const SpectralDensity& g);

double spectral_norm(const SpectralDensity& f);

}  // namespace debranges
