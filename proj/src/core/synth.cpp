#include "core/synth.hpp"

#include <cmath>
#include <memory>
#include <random>

#include "core/error.hpp"

namespace dsgm {

namespace {

double unit(std::mt19937_64& rng) {
  // 53 uniform bits in [0, 1); stable across platforms, unlike
  // std::uniform_real_distribution.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t poisson_draw(std::mt19937_64& rng, double lambda) {
  if (!(lambda > 0.0)) return 0;
  if (lambda > 500.0) return poisson_draw(rng, lambda / 2.0) + poisson_draw(rng, lambda / 2.0);
  const double u = unit(rng);
  double term = std::exp(-lambda);
  double cdf = term;
  std::uint64_t k = 0;
  while (u > cdf) {
    ++k;
    term *= lambda / static_cast<double>(k);
    cdf += term;
    if (term <= 0.0 || k > 10000000) break;
  }
  return k;
}

}  // namespace

SynthProblem make_synth_problem(std::size_t n, std::uint64_t seed, std::size_t kernel_width,
                                bool poisson, double noise_scale) {
  if (n < 2) throw DomainError("signal length must be >= 2");
  if (kernel_width == 0 || kernel_width > n) throw DomainError("kernel width must be in [1, n]");
  if (poisson && !(std::isfinite(noise_scale) && noise_scale > 0.0))
    throw DomainError("noise scale must be positive when Poisson noise is on");

  std::mt19937_64 rng(seed);

  std::size_t spike_pos[3];
  double spike_height[3];
  for (std::size_t& s : spike_pos) {
    s = static_cast<std::size_t>(unit(rng) * static_cast<double>(n));
    if (s >= n) s = n - 1;
  }
  for (double& h : spike_height) h = 3.0 + 5.0 * unit(rng);
  std::size_t bump_center = static_cast<std::size_t>(unit(rng) * static_cast<double>(n));
  if (bump_center >= n) bump_center = n - 1;

  Vector x_true(n, 0.1);
  for (int s = 0; s < 3; ++s) x_true[spike_pos[s]] += spike_height[s];
  const double bump_sigma = static_cast<double>(n) / 8.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double raw = std::fabs(static_cast<double>(j) - static_cast<double>(bump_center));
    const double d = std::min(raw, static_cast<double>(n) - raw);
    x_true[j] += 2.0 * std::exp(-0.5 * (d / bump_sigma) * (d / bump_sigma));
  }

  Vector kernel(kernel_width);
  const double kc = (static_cast<double>(kernel_width) - 1.0) / 2.0;
  const double ksigma = static_cast<double>(kernel_width) / 7.0;
  double ksum = 0.0;
  for (std::size_t k = 0; k < kernel_width; ++k) {
    const double d = (static_cast<double>(k) - kc) / ksigma;
    kernel[k] = std::exp(-0.5 * d * d);
    ksum += kernel[k];
  }
  for (double& w : kernel) w /= ksum;

  auto op = std::make_shared<Convolution1D>(kernel, n, Boundary::Periodic);
  Vector p = op->forward(x_true);
  if (poisson) {
    for (double& v : p)
      v = static_cast<double>(poisson_draw(rng, noise_scale * v)) / noise_scale;
  }

  const double mean = vsum(x_true) / static_cast<double>(n);
  Vector x0(n, mean);

  SynthProblem out;
  out.problem = InverseProblem{std::move(op), std::move(p), std::nullopt};
  out.x_true = std::move(x_true);
  out.x0 = std::move(x0);
  out.kernel = std::move(kernel);
  return out;
}

}  // namespace dsgm
