#include "gridpart/graph.hpp"

#include <algorithm>
#include <cstdint>

namespace gridpart {

namespace {

bool alive_at(const EdgeMask& alive, std::size_t k) { return alive.empty() || alive[k]; }

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

}  // namespace

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  std::vector<std::size_t> degree(vertex_count_, 0);
  for (const auto& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(vertex_count_ + 1, 0);
  for (std::size_t v = 0; v < vertex_count_; ++v) offsets_[v + 1] = offsets_[v] + static_cast<std::uint32_t>(degree[v]);
  incidences_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    incidences_[fill[edges_[k].u]++] = {static_cast<std::uint32_t>(edges_[k].v), static_cast<std::uint32_t>(k)};
    incidences_[fill[edges_[k].v]++] = {static_cast<std::uint32_t>(edges_[k].u), static_cast<std::uint32_t>(k)};
  }
}

Components connected_components(const Graph& g, const EdgeMask& alive) {
  Components out;
  out.label.assign(g.vertex_count(), kNone);
  // Every vertex enters the queue once, so one flat buffer serves all BFS runs.
  std::vector<std::uint32_t> queue;
  queue.reserve(g.vertex_count());
  for (std::size_t s = 0; s < g.vertex_count(); ++s) {
    if (out.label[s] != kNone) continue;
    out.label[s] = out.count;
    std::size_t head = queue.size();
    queue.push_back(static_cast<std::uint32_t>(s));
    while (head < queue.size()) {
      const std::uint32_t v = queue[head++];
      for (const auto& inc : g.neighbors(v)) {
        if (!alive_at(alive, inc.edge) || out.label[inc.vertex] != kNone) continue;
        out.label[inc.vertex] = out.count;
        queue.push_back(inc.vertex);
      }
    }
    ++out.count;
  }
  return out;
}

bool is_connected(const Graph& g, const EdgeMask& alive) {
  return g.vertex_count() <= 1 || connected_components(g, alive).count == 1;
}

BlockStructure block_structure(const Graph& g, const EdgeMask& alive) {
  const std::size_t n = g.vertex_count();
  BlockStructure out;
  out.bridge.assign(g.edge_count(), false);
  out.articulation.assign(n, false);
  out.block_of_edge.assign(g.edge_count(), -1);

  constexpr std::uint32_t kNil = static_cast<std::uint32_t>(-1);
  // disc and low are read together, so they share a cache line per vertex.
  struct Stamp {
    std::uint32_t disc;
    std::uint32_t low;
  };
  std::vector<Stamp> t(n, Stamp{kNil, 0});
  std::vector<std::uint32_t> edge_stack;

  struct Frame {
    std::uint32_t vertex;
    std::uint32_t parent_edge;
    std::uint32_t next;  // position in neighbors(vertex)
    std::uint32_t children;
  };
  std::vector<Frame> stack;
  std::uint32_t clock = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (t[root].disc != kNil) continue;
    t[root].disc = t[root].low = clock++;
    stack.push_back({static_cast<std::uint32_t>(root), kNil, 0, 0});

    while (!stack.empty()) {
      Frame& top = stack.back();
      const auto adj = g.neighbors(top.vertex);
      if (top.next < adj.size()) {
        const auto inc = adj[top.next++];
        if (!alive_at(alive, inc.edge) || inc.edge == top.parent_edge) continue;
        const std::uint32_t w = inc.vertex;
        if (t[w].disc == kNil) {
          edge_stack.push_back(inc.edge);
          t[w].disc = t[w].low = clock++;
          ++top.children;
          stack.push_back({w, inc.edge, 0, 0});
        } else if (t[w].disc < t[top.vertex].disc) {
          edge_stack.push_back(inc.edge);
          t[top.vertex].low = std::min(t[top.vertex].low, t[w].disc);
        }
        continue;
      }

      // top is finished; fold it into its parent.
      const Frame done = top;
      stack.pop_back();
      if (stack.empty()) {
        if (done.children >= 2) out.articulation[done.vertex] = true;
        break;
      }
      Frame& parent = stack.back();
      const std::uint32_t v = parent.vertex;
      const std::uint32_t w = done.vertex;
      t[v].low = std::min(t[v].low, t[w].low);
      if (t[w].low > t[v].disc) out.bridge[done.parent_edge] = true;
      if (t[w].low >= t[v].disc) {
        if (parent.parent_edge != kNil) out.articulation[v] = true;
        const long block = static_cast<long>(out.block_count++);
        while (true) {
          const std::uint32_t k = edge_stack.back();
          edge_stack.pop_back();
          out.block_of_edge[k] = block;
          if (k == done.parent_edge) break;
        }
      }
    }
  }
  return out;
}

std::vector<bool> bridge_flags(const Graph& g, const EdgeMask& alive) {
  return block_structure(g, alive).bridge;
}

}  // namespace gridpart
