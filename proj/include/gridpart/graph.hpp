#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gridpart {

/// Undirected edge between vertex indices. Orientation is kept by `Network`;
/// the graph algorithms here ignore it.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
};

/// Per-edge on/off flags indexed like `Graph::edges()`. An empty mask means
/// "every edge alive".
using EdgeMask = std::vector<bool>;

/// Index-based undirected graph in CSR form. All structural algorithms run on
/// this so they can take edge masks (switching studies, post-outage topologies)
/// without rebuilding a `Network`.
class Graph {
 public:
  // 32-bit fields keep the adjacency arrays compact; graphs beyond 2^32
  // vertices or edges are out of reach for the dense solvers anyway.
  struct Incidence {
    std::uint32_t vertex;
    std::uint32_t edge;
  };

  Graph() = default;
  Graph(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const Edge& edge(std::size_t k) const { return edges_[k]; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const Incidence> neighbors(std::size_t v) const {
    return {incidences_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

 private:
  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<Incidence> incidences_;
};

struct Components {
  std::vector<std::size_t> label;  // by vertex
  std::size_t count = 0;
};

/// BFS labeling of the connected components of (V, alive edges). Labels are
/// assigned in order of the smallest vertex index in each component.
Components connected_components(const Graph& g, const EdgeMask& alive = {});

bool is_connected(const Graph& g, const EdgeMask& alive = {});

/// Low-link DFS result over the alive edges.
struct BlockStructure {
  std::vector<bool> bridge;           // by edge
  std::vector<bool> articulation;     // by vertex
  std::vector<long> block_of_edge;    // by edge; -1 for dead edges
  std::size_t block_count = 0;
};

/// Tarjan/Hopcroft-Tarjan in one iterative pass: bridges, articulation points
/// and the biconnected blocks (edge partition). O(n + m).
BlockStructure block_structure(const Graph& g, const EdgeMask& alive = {});

/// Just the bridges; same traversal as `block_structure`.
std::vector<bool> bridge_flags(const Graph& g, const EdgeMask& alive = {});

}  // namespace gridpart
