#include "debranges/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

namespace debranges {

namespace {

constexpr int kGaussPoints = 20;

struct GaussLegendre {
  std::array<double, kGaussPoints> nodes{};
  std::array<double, kGaussPoints> weights{};
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule = [] {
    GaussLegendre g;
    const int n = kGaussPoints;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      g.nodes[i] = x;
      g.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
  }();
  return rule;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

double falling_factorial(int n, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= (n - j);
  return r;
}

}  // namespace

Complex integrate_power_exponential(int n, Complex s, double lo, double hi) {
  if (!(hi > lo)) return {};
  const auto& g = gauss_legendre();
  const double width = hi - lo;
  const double scale = std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  const int panels = std::max(
      1, static_cast<int>(std::ceil(width * std::abs(s) / 2.0 + width * n / (4.0 * scale))));
  const double h = width / panels;
  Complex total{};
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    Complex acc{};
    for (int i = 0; i < kGaussPoints; ++i) {
      const double t = mid + 0.5 * h * g.nodes[i];
      acc += g.weights[i] * std::pow(t, n) * std::exp(s * t);
    }
    total += 0.5 * h * acc;
  }
  return total;
}

SpectralDensity::SpectralDensity(std::vector<SpectralPiece> pieces) : pieces_(std::move(pieces)) {
  coalesce();
}

SpectralDensity SpectralDensity::exponential(double lo, double hi, Complex coefficient, Complex rate) {
  return SpectralDensity({SpectralPiece{lo, hi, coefficient, 0, rate}});
}

double SpectralDensity::support_lo() const {
  double lo = 0.0;
  bool first = true;
  for (const auto& p : pieces_) {
    lo = first ? p.lo : std::min(lo, p.lo);
    first = false;
  }
  return lo;
}

double SpectralDensity::support_hi() const {
  double hi = 0.0;
  bool first = true;
  for (const auto& p : pieces_) {
    hi = first ? p.hi : std::max(hi, p.hi);
    first = false;
  }
  return hi;
}

Complex SpectralDensity::transform(Complex z) const {
  const Complex iz(-z.imag(), z.real());
  Complex total{};
  for (const auto& p : pieces_)
    total += p.coefficient * integrate_power_exponential(p.power, p.rate + iz, p.lo, p.hi);
  return total;
}

SpectralDensity SpectralDensity::scaled(Complex factor) const {
  SpectralDensity out = *this;
  for (auto& p : out.pieces_) p.coefficient *= factor;
  return out;
}

SpectralDensity SpectralDensity::shifted(double beta) const {
  std::vector<SpectralPiece> out;
  for (const auto& p : pieces_) {
    const Complex base = p.coefficient * std::exp(-p.rate * beta);
    for (int k = 0; k <= p.power; ++k) {
      const Complex c = base * binomial(p.power, k) * std::pow(-beta, p.power - k);
      out.push_back({p.lo + beta, p.hi + beta, c, k, p.rate});
    }
  }
  return SpectralDensity(std::move(out));
}

SpectralDensity SpectralDensity::restricted(double lo, double hi) const {
  std::vector<SpectralPiece> out;
  for (auto p : pieces_) {
    p.lo = std::max(p.lo, lo);
    p.hi = std::min(p.hi, hi);
    if (p.hi > p.lo) out.push_back(p);
  }
  return SpectralDensity(std::move(out));
}

SpectralDensity SpectralDensity::divided(Complex mu) const {
  // (z - mu) g = f  <=>  i phi_g' - mu phi_g = phi_f, so
  // phi_g(s) = -i e^{-i mu s} \int_{-inf}^{s} e^{i mu u} phi_f(u) du.
  // The accumulated constant beyond the support is -i e^{-i mu s} f(mu), which
  // vanishes when mu is a zero of f; the representation stops at the support end.
  if (pieces_.empty()) return {};
  const double top = support_hi();
  const Complex i_mu(-mu.imag(), mu.real());
  const Complex minus_i(0.0, -1.0);
  const Complex plus_i(0.0, 1.0);
  std::vector<SpectralPiece> out;
  for (const auto& p : pieces_) {
    const Complex sigma = p.rate + i_mu;
    const double scale = std::max({1.0, std::abs(p.lo), std::abs(p.hi)});
    const int n = p.power;
    // Antiderivative of c u^n e^{sigma u}, written as e^{sigma u} * poly(u).
    std::vector<Complex> poly(static_cast<std::size_t>(n) + 2, Complex{});
    Complex edge_rate = p.rate;
    if (std::abs(sigma) * scale < 1e-12) {
      poly[static_cast<std::size_t>(n) + 1] = p.coefficient / static_cast<double>(n + 1);
      edge_rate = -i_mu;
    } else {
      Complex inv_pow = 1.0 / sigma;
      for (int k = 0; k <= n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        poly[static_cast<std::size_t>(n - k)] = p.coefficient * sign * falling_factorial(n, k) * inv_pow;
        inv_pow /= sigma;
      }
    }
    const bool degenerate = std::abs(sigma) * scale < 1e-12;
    auto antiderivative = [&](double u) {
      Complex v{};
      for (std::size_t k = poly.size(); k-- > 0;) v = v * u + poly[k];
      return degenerate ? v : v * std::exp(sigma * u);
    };
    for (std::size_t k = 0; k < poly.size(); ++k) {
      if (poly[k] == Complex{}) continue;
      out.push_back({p.lo, p.hi, minus_i * poly[k], static_cast<int>(k), edge_rate});
    }
    const Complex a_lo = antiderivative(p.lo);
    const Complex a_hi = antiderivative(p.hi);
    out.push_back({p.lo, top, plus_i * a_lo, 0, -i_mu});
    if (top > p.hi) out.push_back({p.hi, top, minus_i * a_hi, 0, -i_mu});
  }
  return SpectralDensity(std::move(out));
}

SpectralDensity& SpectralDensity::operator+=(const SpectralDensity& other) {
  pieces_.insert(pieces_.end(), other.pieces_.begin(), other.pieces_.end());
  coalesce();
  return *this;
}

void SpectralDensity::coalesce() {
  using Key = std::tuple<double, double, int, double, double>;
  std::map<Key, Complex> merged;
  for (const auto& p : pieces_) {
    if (!(p.hi > p.lo)) continue;
    merged[Key{p.lo, p.hi, p.power, p.rate.real(), p.rate.imag()}] += p.coefficient;
  }
  pieces_.clear();
  for (const auto& [key, c] : merged) {
    if (c == Complex{}) continue;
    const auto& [lo, hi, power, re, im] = key;
    pieces_.push_back({lo, hi, c, power, Complex(re, im)});
  }
}

Complex spectral_inner(const SpectralDensity& f, const SpectralDensity& g) {
  Complex total{};
  for (const auto& p : f.pieces()) {
    for (const auto& q : g.pieces()) {
      const double lo = std::max(p.lo, q.lo);
      const double hi = std::min(p.hi, q.hi);
      if (!(hi > lo)) continue;
      total += p.coefficient * std::conj(q.coefficient) *
               integrate_power_exponential(p.power + q.power, p.rate + std::conj(q.rate), lo, hi);
    }
  }
  return 2.0 * std::numbers::pi * total;
}

double spectral_norm(const SpectralDensity& f) {
  return std::sqrt(std::max(0.0, spectral_inner(f, f).real()));
}

}  // namespace debranges
