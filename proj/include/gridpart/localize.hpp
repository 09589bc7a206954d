#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gridpart/lodf.hpp"
#include "gridpart/network.hpp"
#include "gridpart/partition.hpp"

namespace gridpart {

/// Where an ordered pair (e, ê) sits relative to the partition and cells.
/// SameCell and SourceIsBridge are the classes where a failure of e is
/// expected to reach ê; every other class is a structural zero.
enum class PairClass {
  SameCell,
  SameRegionDiffCell,
  DiffRegion,
  SourceIsBridge,
  TargetIsBridge,  // ê is a bridge, e is not
  Diagonal,
};

std::string_view to_string(PairClass c) noexcept;

inline bool predicted_nonzero(PairClass c) noexcept {
  return c == PairClass::SameCell || c == PairClass::SourceIsBridge;
}

PairClass classify_pair(const TreePartition& tp, const CellDecomposition& cd, LineId e, LineId ehat);

struct InfluenceGraph {
  std::vector<LineId> nodes;
  std::vector<std::pair<LineId, LineId>> edges;  // first < second, sorted
  double threshold = 0.0;
  bool includes_bridge_columns = false;

  /// Graphviz export; nodes are labeled "from-to".
  std::string to_dot(const Network& net) const;
  std::string to_json() const;
};

/// Undirected edge {e, ê} iff max(|K(e,ê)|, |K(ê,e)|) >= threshold over the
/// entries that are present.
InfluenceGraph influence_graph(const LodfMatrix& k, double threshold);

struct SparsityReport {
  struct Counts {
    std::size_t pairs = 0;
    std::size_t nonzero = 0;
  };
  double tolerance = 0.0;
  std::map<PairClass, Counts> by_class;
  /// Predicted-zero pairs whose factor is at or above the tolerance.
  std::vector<std::pair<LineId, LineId>> violations;  // (e, ê)

  std::string to_json() const;
};

SparsityReport sparsity_report(const LodfMatrix& k, const TreePartition& tp, const CellDecomposition& cd,
                               double tolerance = kDefaultTolerance);

}  // namespace gridpart
