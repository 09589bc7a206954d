#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include <boost/container/flat_map.hpp>

#include "gridpart/network.hpp"

namespace gridpart {

/// Irreducible tree partition: regions are the components left after deleting
/// every bridge, and the bridges are exactly the inter-region lines.
/// Regions are numbered by their smallest bus id.
struct TreePartition {
  std::vector<std::vector<BusId>> regions;  // each sorted
  std::vector<LineId> bridges;              // sorted
  boost::container::flat_map<BusId, std::size_t> region_of;

  bool is_bridge(LineId id) const;
};

/// Block decomposition of the non-bridge lines. Cells are numbered by their
/// smallest line id; singleton regions own no cells.
struct CellDecomposition {
  std::vector<std::vector<LineId>> cells;                 // each sorted
  std::vector<std::size_t> cell_region;                   // region index per cell
  std::vector<BusId> cut_vertices;                        // sorted
  std::vector<std::vector<BusId>> cut_vertices_by_region; // indexed by region
  boost::container::flat_map<LineId, std::size_t> cell_of; // total over non-bridge lines

  bool is_cut_vertex(BusId id) const;
  /// Buses touched by the lines of cell `c`, sorted.
  std::vector<BusId> cell_buses(const Network& net, std::size_t c) const;
};

/// Finer-than check between two partitions of the same bus set.
struct PartitionOrderResult {
  bool finer = false;
  std::map<std::size_t, std::size_t> witness;  // p1 region -> containing p2 region, when finer
};

std::set<LineId> find_bridges(const Network& net);

TreePartition irreducible_tree_partition(const Network& net);

CellDecomposition cell_decomposition(const Network& net, const TreePartition& tp);

PartitionOrderResult is_finer(const std::vector<std::vector<BusId>>& p1,
                              const std::vector<std::vector<BusId>>& p2);

/// True iff the reduced multigraph of `regions` over `net` is a tree.
bool is_tree_partition(const Network& net, const std::vector<std::vector<BusId>>& regions);

}  // namespace gridpart
