#include "debranges/near_invariance.hpp"

#include <algorithm>
#include <cmath>

#include "debranges/json_io.hpp"

namespace debranges {

namespace {

constexpr double kZeroTolerance = 1e-8;
constexpr double kCommonZeroThreshold = 1e-12;

double local_scale(const EntireModel& f, Complex mu) {
  double scale = 0.0;
  for (Complex d : {Complex{1, 0}, Complex{-1, 0}, Complex{0, 1}, Complex{0, -1}})
    scale = std::max(scale, std::abs(f(mu + d)));
  return scale;
}

bool vanishes(const SubspaceModel& sub, Complex lambda) {
  const double kn = (*sub.kernel())(lambda, lambda).real();
  const double ke = sub.ambient().kernel(lambda, lambda).real();
  return kn <= kCommonZeroThreshold * ke;
}

}  // namespace

EntireModel divide_zero(const EntireModel& f, Complex mu) {
  if (!std::isfinite(mu.real()) || !std::isfinite(mu.imag())) throw DomainError("divide_zero: non-finite node");
  const double at = std::abs(f(mu));
  if (at > kZeroTolerance * local_scale(f, mu))
    throw NotAZeroError("divide_zero: f does not vanish at the node (|f(mu)| = " + std::to_string(at) + ")", at);
  return EntireModel::zero_divided(f, mu);
}

double near_invariance_residual(const SubspaceModel& sub, Complex mu) {
  const Kernel& k = *sub.kernel();
  if (vanishes(sub, mu)) throw CommonZeroError("near_invariance_residual: node is a common zero", {mu});

  Complex probe{0.0, 1.0};
  if (vanishes(sub, probe)) probe = {0.0, 2.0};
  if (vanishes(sub, probe)) throw CommonZeroError("near_invariance_residual: probe points are common zeros", {probe});

  const Complex ratio = k(probe, mu) / k(mu, mu);
  const EntireModel f = EntireModel::linear_combination({1.0, -ratio}, {sub.section(probe), sub.section(mu)});
  const EntireModel g = divide_zero(f, mu);

  const auto density = spectral_density(g);
  if (!density) throw UnsupportedRepresentation("near_invariance_residual needs a Paley-Wiener ambient");
  const double total = spectral_norm(*density);
  if (total == 0.0) return 0.0;
  const double off = spectral_norm(*density - project_density(sub, *density));
  return std::clamp(off / total, 0.0, 1.0);
}

std::vector<Complex> common_zero_scan(const SubspaceModel& sub, std::span<const Complex> grid) {
  std::vector<Complex> out;
  for (Complex lambda : grid)
    if (vanishes(sub, lambda)) out.push_back(lambda);
  return out;
}

NearInvarianceReport near_invariance_report(const SubspaceModel& sub, std::span<const Complex> nodes,
                                            std::span<const Complex> scan_grid) {
  NearInvarianceReport r;
  r.common_zeros = common_zero_scan(sub, scan_grid);
  for (Complex mu : nodes) {
    r.nodes.push_back(mu);
    r.residuals.push_back(near_invariance_residual(sub, mu));
    r.max_residual = std::max(r.max_residual, r.residuals.back());
  }
  return r;
}

nlohmann::json to_json(const NearInvarianceReport& report, double tolerance) {
  nlohmann::json nodes = nlohmann::json::array();
  for (Complex z : report.nodes) nodes.push_back(complex_to_json(z));
  nlohmann::json zeros = nlohmann::json::array();
  for (Complex z : report.common_zeros) zeros.push_back(complex_to_json(z));
  return {{"nodes", std::move(nodes)},
          {"residuals", report.residuals},
          {"max_residual", report.max_residual},
          {"common_zeros", std::move(zeros)},
          {"verdict", report.common_zeros.empty() && report.max_residual <= tolerance ? "pass" : "fail"}};
}

}  // namespace debranges
