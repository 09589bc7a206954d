#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gridpart/flow.hpp"
#include "gridpart/network.hpp"
#include "gridpart/partition.hpp"

namespace gridpart {

/// Linear balance rule: an imbalance M is absorbed as α_j·M at each
/// participating bus j. Weights are positive and sum to 1.
class BalanceRule {
 public:
  /// Throws `Error(InvalidWeights)` unless all weights are > 0 and sum to 1
  /// within 1e-12.
  explicit BalanceRule(std::map<BusId, double> weights, std::string name = "custom");

  /// Normalizes raw participation factors (any positive scale) first.
  static BalanceRule normalized(const std::map<BusId, double>& factors, std::string name = "custom");
  /// Equal weights over `participants`.
  static BalanceRule uniform(std::span<const BusId> participants, std::string name = "uniform");

  const std::map<BusId, double>& weights() const noexcept { return weights_; }
  std::vector<BusId> participants() const;
  bool participates(BusId id) const { return weights_.count(id) != 0; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::map<BusId, double> weights_;
  std::string name_;
};

/// Participants are the generator buses, α_j = 1/G.
BalanceRule uniform_generator_rule(const Network& net);

/// Reads a `bus_id,alpha` CSV; factors are normalized to sum to 1.
BalanceRule read_weights(const std::filesystem::path& path);

struct IslandFreeReport {
  bool island_free = true;
  std::vector<LineId> violating;  // bridges with |P_e| < tolerance
};

IslandFreeReport check_island_free(const Network& net, const Eigen::VectorXd& injection,
                                   double tolerance = kDefaultTolerance);

struct ParticipationReport {
  bool participating = true;
  std::vector<std::pair<std::size_t, std::size_t>> failing_cells;  // (region, cell)
};

/// Every cell must contain a participating bus that is not a cut vertex.
ParticipationReport check_participating(const Network& net, const TreePartition& tp,
                                        const CellDecomposition& cd, const BalanceRule& rule);

/// Adjustments α̃_j·M for the participants inside `component`, with α̃ the
/// rule weights renormalized over that component. They sum to M.
std::map<BusId, double> apply_rule(const BalanceRule& rule, std::span<const BusId> component, double imbalance);

}  // namespace gridpart
