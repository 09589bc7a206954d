#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "gridpart/network.hpp"

namespace gridpart {

enum class Distribution { Uniform, TruncatedGaussian, TruncatedLaplace };

/// Relative susceptance noise: B_e -> B_e (1 + scale * u_e), u_e i.i.d.
/// Uniform draws u on [-1, 1]; the Gaussian and Laplace samplers use unit
/// scale truncated to [-3, 3]. Draws that would make a susceptance
/// non-positive are rejected and redrawn, so the law keeps a density.
struct PerturbationSpec {
  Distribution distribution = Distribution::Uniform;
  double scale = 1e-3;
  std::uint64_t seed = 0;
};

/// Parses "eps=1e-3,dist=uniform,seed=42" (any order, keys optional).
/// dist is one of uniform | gaussian | laplace.
PerturbationSpec parse_perturbation(std::string_view text);

std::string_view to_string(Distribution d) noexcept;

/// Same topology, perturbed susceptances. Deterministic in (net, spec).
Network perturb(const Network& net, const PerturbationSpec& spec);

}  // namespace gridpart
