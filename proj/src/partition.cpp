#include "gridpart/partition.hpp"

#include <algorithm>
#include <numeric>

#include "gridpart/error.hpp"

namespace gridpart {

bool TreePartition::is_bridge(LineId id) const {
  return std::binary_search(bridges.begin(), bridges.end(), id);
}

bool CellDecomposition::is_cut_vertex(BusId id) const {
  return std::binary_search(cut_vertices.begin(), cut_vertices.end(), id);
}

std::vector<BusId> CellDecomposition::cell_buses(const Network& net, std::size_t c) const {
  std::set<BusId> buses;
  for (LineId id : cells.at(c)) {
    const Line& l = net.line(net.line_index(id));
    buses.insert(l.source);
    buses.insert(l.target);
  }
  return {buses.begin(), buses.end()};
}

std::set<LineId> find_bridges(const Network& net) {
  const auto flags = bridge_flags(net.graph());
  std::set<LineId> out;
  for (std::size_t k = 0; k < flags.size(); ++k) {
    if (flags[k]) out.insert(net.line(k).id);
  }
  return out;
}

// Both builders walk buses and lines in ascending id order (precomputed by
// the Network), so every list comes out sorted and numbered by smallest id
// without a sort here.

TreePartition irreducible_tree_partition(const Network& net) {
  const Graph& g = net.graph();
  const auto bridge = bridge_flags(g);
  EdgeMask alive(g.edge_count());
  for (std::size_t k = 0; k < alive.size(); ++k) alive[k] = !bridge[k];
  const Components comps = connected_components(g, alive);

  TreePartition tp;
  tp.regions.reserve(comps.count);
  std::vector<std::size_t> number(comps.count, comps.count);  // component label -> region index
  std::vector<std::pair<BusId, std::size_t>> owner;
  owner.reserve(g.vertex_count());
  for (std::size_t v : net.buses_by_id()) {
    std::size_t& r = number[comps.label[v]];
    if (r == comps.count) {
      r = tp.regions.size();
      tp.regions.emplace_back();
    }
    const BusId id = net.bus(v).id;
    tp.regions[r].push_back(id);
    owner.emplace_back(id, r);
  }
  tp.region_of.insert(boost::container::ordered_unique_range, owner.begin(), owner.end());
  for (std::size_t k : net.lines_by_id()) {
    if (bridge[k]) tp.bridges.push_back(net.line(k).id);
  }
  return tp;
}

CellDecomposition cell_decomposition(const Network& net, const TreePartition& tp) {
  const BlockStructure blocks = block_structure(net.graph());
  const std::size_t n = net.bus_count();

  // region_of and buses_by_id are both in id order; walk them together.
  if (tp.region_of.size() != n) throw Error(Errc::InvalidArgument, "tree partition does not match the network");
  std::vector<std::size_t> region(n);
  auto owner_it = tp.region_of.begin();
  for (std::size_t v : net.buses_by_id()) {
    if (owner_it->first != net.bus(v).id) throw Error(Errc::InvalidArgument, "tree partition does not match the network");
    region[v] = (owner_it++)->second;
  }

  // Bridges are single-edge blocks; every other block is a cell.
  CellDecomposition cd;
  std::vector<long> number(blocks.block_count, -1);  // block -> cell index
  std::vector<std::pair<LineId, std::size_t>> owner;
  owner.reserve(net.line_count());
  std::vector<bool> in_cell(n, false);
  for (std::size_t k : net.lines_by_id()) {
    if (blocks.bridge[k]) continue;
    long& c = number[static_cast<std::size_t>(blocks.block_of_edge[k])];
    if (c < 0) {
      c = static_cast<long>(cd.cells.size());
      cd.cells.emplace_back();
      cd.cell_region.push_back(region[net.source_index(k)]);
    }
    const LineId id = net.line(k).id;
    cd.cells[static_cast<std::size_t>(c)].push_back(id);
    owner.emplace_back(id, static_cast<std::size_t>(c));
    in_cell[net.source_index(k)] = true;
    in_cell[net.target_index(k)] = true;
  }
  cd.cell_of.insert(boost::container::ordered_unique_range, owner.begin(), owner.end());

  cd.cut_vertices_by_region.resize(tp.regions.size());
  for (std::size_t v : net.buses_by_id()) {
    if (!blocks.articulation[v] || !in_cell[v]) continue;
    const BusId id = net.bus(v).id;
    cd.cut_vertices.push_back(id);
    cd.cut_vertices_by_region[region[v]].push_back(id);
  }
  return cd;
}

PartitionOrderResult is_finer(const std::vector<std::vector<BusId>>& p1,
                              const std::vector<std::vector<BusId>>& p2) {
  std::map<BusId, std::size_t> owner;
  for (std::size_t j = 0; j < p2.size(); ++j) {
    for (BusId id : p2[j]) owner[id] = j;
  }
  PartitionOrderResult out;
  for (std::size_t i = 0; i < p1.size(); ++i) {
    if (p1[i].empty()) continue;
    const auto first = owner.find(p1[i].front());
    if (first == owner.end()) return {};
    for (BusId id : p1[i]) {
      const auto it = owner.find(id);
      if (it == owner.end() || it->second != first->second) return {};
    }
    out.witness[i] = first->second;
  }
  out.finer = true;
  return out;
}

bool is_tree_partition(const Network& net, const std::vector<std::vector<BusId>>& regions) {
  std::vector<std::size_t> owner(net.bus_count(), regions.size());
  std::size_t covered = 0;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    for (BusId id : regions[r]) {
      const std::size_t v = net.bus_index(id);
      if (owner[v] != regions.size()) return false;
      owner[v] = r;
      ++covered;
    }
  }
  if (covered != net.bus_count() || regions.empty()) return false;

  // Reduced multigraph is a tree iff it is connected with |regions| - 1 edges.
  std::vector<Edge> reduced;
  for (std::size_t k = 0; k < net.line_count(); ++k) {
    const std::size_t a = owner[net.source_index(k)];
    const std::size_t b = owner[net.target_index(k)];
    if (a != b) reduced.push_back({a, b});
  }
  if (reduced.size() != regions.size() - 1) return false;
  return is_connected(Graph(regions.size(), std::move(reduced)));
}

}  // namespace gridpart
