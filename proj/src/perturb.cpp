#include "gridpart/perturb.hpp"

#include <cmath>
#include <random>
#include <string>

#include "gridpart/error.hpp"

namespace gridpart {

namespace {

constexpr double kTruncation = 3.0;

double draw(Distribution d, std::mt19937_64& rng) {
  switch (d) {
    case Distribution::Uniform:
      return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    case Distribution::TruncatedGaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      double u;
      do u = normal(rng);
      while (std::abs(u) > kTruncation);
      return u;
    }
    case Distribution::TruncatedLaplace: {
      std::exponential_distribution<double> expo(1.0);
      std::bernoulli_distribution sign(0.5);
      double u;
      do u = expo(rng);
      while (u > kTruncation);
      return sign(rng) ? u : -u;
    }
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(Distribution d) noexcept {
  switch (d) {
    case Distribution::Uniform: return "uniform";
    case Distribution::TruncatedGaussian: return "gaussian";
    case Distribution::TruncatedLaplace: return "laplace";
  }
  return "unknown";
}

PerturbationSpec parse_perturbation(std::string_view text) {
  PerturbationSpec spec;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw Error(Errc::InvalidArgument, "bad perturbation item '" + std::string(item) + "'");
    const std::string key(item.substr(0, eq));
    const std::string value(item.substr(eq + 1));
    try {
      if (key == "eps" || key == "scale") {
        spec.scale = std::stod(value);
      } else if (key == "seed") {
        spec.seed = std::stoull(value);
      } else if (key == "dist") {
        if (value == "uniform") spec.distribution = Distribution::Uniform;
        else if (value == "gaussian" || value == "truncated_gaussian") spec.distribution = Distribution::TruncatedGaussian;
        else if (value == "laplace" || value == "truncated_laplace") spec.distribution = Distribution::TruncatedLaplace;
        else throw Error(Errc::InvalidArgument, "unknown distribution '" + value + "'");
      } else {
        throw Error(Errc::InvalidArgument, "unknown perturbation key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw Error(Errc::InvalidArgument, "bad value for '" + key + "'");
    }
  }
  if (!(spec.scale >= 0.0)) throw Error(Errc::InvalidArgument, "perturbation scale must be >= 0");
  return spec;
}

Network perturb(const Network& net, const PerturbationSpec& spec) {
  if (!(spec.scale >= 0.0)) throw Error(Errc::InvalidArgument, "perturbation scale must be >= 0");
  if (spec.scale == 0.0) return net;
  std::mt19937_64 rng(spec.seed);
  Eigen::VectorXd b = net.susceptances();
  for (Eigen::Index k = 0; k < b.size(); ++k) {
    double value;
    do value = b[k] * (1.0 + spec.scale * draw(spec.distribution, rng));
    while (!(value > 0.0));
    b[k] = value;
  }
  return net.with_susceptances(b);
}

}  // namespace gridpart
