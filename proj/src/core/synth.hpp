#pragma once

#include <cstdint>

#include "core/linear_model.hpp"
#include "core/vec.hpp"

namespace dsgm {

// Deterministic deconvolution test problem: a spiky non-negative signal
// blurred by a periodic Gaussian kernel.  The same (n, seed, kernel_width,
// poisson, noise_scale) tuple always reproduces the same bytes.
struct SynthProblem {
  InverseProblem problem;
  Vector x_true;
  Vector x0;
  Vector kernel;
};

// x_true = 0.1 pedestal + three spikes + one smooth bump; the measurement is
// the periodic blur of x_true, optionally Poisson-corrupted at count level
// noise_scale * q_i.  x0 is flat with the same total mass as x_true.
SynthProblem make_synth_problem(std::size_t n, std::uint64_t seed, std::size_t kernel_width,
                                bool poisson, double noise_scale);

}  // namespace dsgm
