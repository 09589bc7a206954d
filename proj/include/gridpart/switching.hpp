#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gridpart/balance.hpp"
#include "gridpart/flow.hpp"
#include "gridpart/network.hpp"
#include "gridpart/partition.hpp"

namespace gridpart {

struct PartitionSummary {
  std::size_t region_count = 0;
  std::vector<std::size_t> region_sizes;  // descending
  std::vector<LineId> bridges;
  std::size_t cell_count = 0;
  std::vector<BusId> cut_vertices;
};

PartitionSummary summarize(const TreePartition& tp, const CellDecomposition& cd);

struct FlowChange {
  LineId line = 0;
  double before = 0.0;
  double after = 0.0;
  double normalized = 0.0;  // (after - before) / before
};

struct SwitchOptions {
  double threshold = 0.005;
  double tolerance = kDefaultTolerance;
};

struct SwitchEvaluation {
  std::vector<LineId> switched_off;
  PartitionSummary partition_before;
  PartitionSummary partition_after;

  std::size_t influence_density_before = 0;
  std::size_t influence_density_after = 0;
  /// Influence edges joining non-bridge lines of different regions.
  std::size_t cross_region_edges_after = 0;
  bool bridge_columns_before = false;
  bool bridge_columns_after = false;
  /// Non-bridge factors above tolerance where the partition predicts zero.
  std::size_t zero_block_violations_after = 0;

  double total_abs_flow_before = 0.0;
  double total_abs_flow_after = 0.0;
  double conservation_residual_before = 0.0;
  double conservation_residual_after = 0.0;

  std::vector<FlowChange> flow_changes;        // lines alive in both with |P| > tolerance
  std::vector<LineId> undefined_normalization; // alive in both, |P| <= tolerance
  double fraction_increased = 0.0;
  double fraction_decreased = 0.0;
  double fraction_unchanged = 0.0;
  std::vector<std::pair<double, double>> cdf_points;  // over positive normalized changes

  std::string to_json() const;
  std::string flow_changes_csv() const;
};

/// Switch off `off`, then compare partitions, influence graphs and flows.
/// Bridge columns enter each influence graph only when that topology's
/// injection is island-free and every side has a participant.
SwitchEvaluation evaluate_switch(const Network& net, const Eigen::VectorXd& injection, std::span<const LineId> off,
                                 const BalanceRule& rule, const SwitchOptions& options = {});

struct CutCandidate {
  std::vector<LineId> lines;
  std::size_t region_count = 0;
  std::vector<std::size_t> region_sizes;  // descending
  /// second largest / largest region size (0 with a single region).
  double balance = 0.0;
};

/// Every line set of size <= k_max (k_max <= 3) whose removal keeps the
/// network connected and raises the irreducible region count. Sorted by
/// balance, best first. `limit` = 0 keeps all.
std::vector<CutCandidate> enumerate_bridging_cuts(const Network& net, std::size_t k_max, std::size_t limit = 0);

}  // namespace gridpart
