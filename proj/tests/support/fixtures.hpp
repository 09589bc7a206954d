#pragma once

// Test-only network builders and brute-force oracles. Nothing here calls the
// library's graph algorithms, so the checks stay independent of them.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <cstddef>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gridpart/network.hpp"

namespace gridpart::testing {

using Pair = std::pair<BusId, BusId>;

/// Lines numbered 1.. in the given order, unit susceptance unless given.
inline Network make_network(std::size_t n, const std::vector<Pair>& pairs, std::vector<double> b = {},
                            std::vector<double> p = {}) {
  std::vector<Bus> buses;
  for (std::size_t i = 0; i < n; ++i) {
    buses.push_back({static_cast<BusId>(i + 1), p.empty() ? 0.0 : p[i], false});
  }
  std::vector<Line> lines;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    lines.push_back({static_cast<LineId>(k + 1), pairs[k].first, pairs[k].second, b.empty() ? 1.0 : b[k]});
  }
  return Network(std::move(buses), std::move(lines));
}

inline Network triangle(std::vector<double> b = {}) { return make_network(3, {{1, 2}, {2, 3}, {1, 3}}, b); }

/// Two triangles {1,2,3} and {4,5,6}; line 7 = (3,4) joins them.
inline Network two_triangles() {
  return make_network(6, {{1, 2}, {2, 3}, {1, 3}, {4, 5}, {5, 6}, {4, 6}, {3, 4}});
}

/// Wings {1,2,3} and {3,4,5} sharing body bus 3. Lines 1-3 left, 4-6 right.
inline Network butterfly() { return make_network(5, {{1, 2}, {2, 3}, {1, 3}, {3, 4}, {4, 5}, {3, 5}}); }

inline Network complete_graph(std::size_t n) {
  std::vector<Pair> pairs;
  for (BusId i = 1; i <= static_cast<BusId>(n); ++i) {
    for (BusId j = i + 1; j <= static_cast<BusId>(n); ++j) pairs.emplace_back(i, j);
  }
  return make_network(n, pairs);
}

inline Network cycle(std::size_t n) {
  std::vector<Pair> pairs;
  for (BusId i = 1; i <= static_cast<BusId>(n); ++i) pairs.emplace_back(i, i % static_cast<BusId>(n) + 1);
  return make_network(n, pairs);
}

inline Network path(std::size_t n) {
  std::vector<Pair> pairs;
  for (BusId i = 1; i < static_cast<BusId>(n); ++i) pairs.emplace_back(i, i + 1);
  return make_network(n, pairs);
}

/// Double ring: hexagons 1..6 and 7..12. Upper tie (1,7) is line 13, lower
/// tie (6,12) is line 14. The generator sits at 6, the load at 12.
inline Network double_ring() {
  std::vector<Pair> pairs;
  for (BusId i = 1; i <= 6; ++i) pairs.emplace_back(i, i % 6 + 1);
  for (BusId i = 7; i <= 12; ++i) pairs.emplace_back(i, i == 12 ? 7 : i + 1);
  pairs.emplace_back(1, 7);
  pairs.emplace_back(6, 12);
  std::vector<Bus> buses;
  for (BusId i = 1; i <= 12; ++i) buses.push_back({i, i == 6 ? 1.0 : (i == 12 ? -1.0 : 0.0), i == 6});
  std::vector<Line> lines;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    lines.push_back({static_cast<LineId>(k + 1), pairs[k].first, pairs[k].second, 1.0});
  }
  return Network(std::move(buses), std::move(lines));
}

// ------------------------------------------------------------- random inputs

/// Susceptance on a 1/100 grid in [0.5, 5], exactly rationalizable.
inline double random_susceptance(std::mt19937_64& rng) {
  return std::uniform_int_distribution<int>(50, 500)(rng) / 100.0;
}

/// Connected simple graph on n buses with `extra` lines beyond a random
/// spanning tree (capped by completeness). Random orientation.
inline Network random_connected(std::size_t n, std::size_t extra, std::mt19937_64& rng, BusId first_id = 1) {
  std::vector<Pair> pairs;
  std::set<Pair> used;
  std::vector<BusId> order(n);
  std::iota(order.begin(), order.end(), first_id);
  std::shuffle(order.begin(), order.end(), rng);
  auto add = [&](BusId a, BusId b) {
    if (a == b || used.count(std::minmax(a, b))) return false;
    used.insert(std::minmax(a, b));
    if (std::bernoulli_distribution(0.5)(rng)) std::swap(a, b);
    pairs.emplace_back(a, b);
    return true;
  };
  for (std::size_t i = 1; i < n; ++i) {
    add(order[i], order[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)]);
  }
  const std::size_t max_lines = n * (n - 1) / 2;
  std::uniform_int_distribution<BusId> pick(first_id, first_id + static_cast<BusId>(n) - 1);
  while (pairs.size() < std::min(max_lines, n - 1 + extra)) add(pick(rng), pick(rng));

  std::vector<Bus> buses;
  for (std::size_t i = 0; i < n; ++i) buses.push_back({first_id + static_cast<BusId>(i), 0.0, false});
  std::vector<Line> lines;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    lines.push_back({static_cast<LineId>(k + 1), pairs[k].first, pairs[k].second, random_susceptance(rng)});
  }
  return Network(std::move(buses), std::move(lines));
}

/// Zero-sum injection with entries on a 1/100 grid.
inline Eigen::VectorXd random_balanced_injection(std::size_t n, std::mt19937_64& rng) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(n));
  std::uniform_int_distribution<int> d(-200, 200);
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = d(rng) / 100.0;
  p[p.size() - 1] -= p.sum();
  return p;
}

/// `regions` blocks, each a random connected graph with cycles, chained into a
/// tree by single lines between random members. Bus ids are 1..N.
inline Network random_multi_region(std::size_t regions, std::size_t max_size, std::mt19937_64& rng) {
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<std::vector<BusId>> members;
  BusId next = 1;
  for (std::size_t r = 0; r < regions; ++r) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, max_size)(rng);
    const std::size_t extra = std::uniform_int_distribution<std::size_t>(1, n)(rng);
    const Network block = random_connected(n, extra, rng, next);
    std::vector<BusId> ids;
    for (const auto& b : block.buses()) {
      buses.push_back(b);
      ids.push_back(b.id);
    }
    for (auto l : block.lines()) {
      l.id = static_cast<LineId>(lines.size() + 1);
      lines.push_back(l);
    }
    members.push_back(ids);
    next += static_cast<BusId>(n);
  }
  for (std::size_t r = 1; r < regions; ++r) {
    const std::size_t other = std::uniform_int_distribution<std::size_t>(0, r - 1)(rng);
    auto pick = [&](const std::vector<BusId>& v) {
      return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };
    lines.push_back({static_cast<LineId>(lines.size() + 1), pick(members[other]), pick(members[r]),
                     random_susceptance(rng)});
  }
  return Network(std::move(buses), std::move(lines));
}

// ------------------------------------------------------------ brute force

/// Connectivity of the bus set using only lines with keep[k] (union-find),
/// optionally ignoring one bus.
inline bool brute_connected(const Network& net, const std::vector<bool>& keep, long skip_bus_index = -1) {
  const std::size_t n = net.bus_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t k = 0; k < net.line_count(); ++k) {
    if (!keep[k]) continue;
    const std::size_t s = net.bus_index(net.line(k).source);
    const std::size_t t = net.bus_index(net.line(k).target);
    if (static_cast<long>(s) == skip_bus_index || static_cast<long>(t) == skip_bus_index) continue;
    parent[find(s)] = find(t);
  }
  std::set<std::size_t> roots;
  for (std::size_t v = 0; v < n; ++v) {
    if (static_cast<long>(v) != skip_bus_index) roots.insert(find(v));
  }
  return roots.size() <= 1;
}

/// Lines whose single removal disconnects the network.
inline std::set<LineId> brute_bridges(const Network& net) {
  std::set<LineId> out;
  for (std::size_t k = 0; k < net.line_count(); ++k) {
    std::vector<bool> keep(net.line_count(), true);
    keep[k] = false;
    if (!brute_connected(net, keep)) out.insert(net.line(k).id);
  }
  return out;
}

/// Components (as sorted bus-id sets) of the graph restricted to `keep`.
inline std::set<std::vector<BusId>> brute_components(const Network& net, const std::vector<bool>& keep) {
  const std::size_t n = net.bus_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t k = 0; k < net.line_count(); ++k) {
    if (keep[k]) parent[find(net.bus_index(net.line(k).source))] = find(net.bus_index(net.line(k).target));
  }
  std::map<std::size_t, std::vector<BusId>> groups;
  for (std::size_t v = 0; v < n; ++v) groups[find(v)].push_back(net.bus(v).id);
  std::set<std::vector<BusId>> out;
  for (auto& [root, ids] : groups) {
    std::sort(ids.begin(), ids.end());
    out.insert(ids);
  }
  return out;
}

/// Buses whose removal disconnects the rest of the network.
inline std::set<BusId> brute_articulation(const Network& net) {
  std::set<BusId> out;
  const std::vector<bool> all(net.line_count(), true);
  for (std::size_t v = 0; v < net.bus_count(); ++v) {
    if (!brute_connected(net, all, static_cast<long>(v))) out.insert(net.bus(v).id);
  }
  return out;
}

/// A set of lines is 2-connected as a subgraph when it is connected and stays
/// connected after deleting any one of its vertices (>= 2 lines).
inline bool brute_two_connected(const Network& net, const std::vector<LineId>& cell) {
  std::set<BusId> verts;
  for (LineId id : cell) {
    const Line& l = net.line(net.line_index(id));
    verts.insert(l.source);
    verts.insert(l.target);
  }
  auto connected_without = [&](std::optional<BusId> skip) {
    std::map<BusId, BusId> parent;
    for (BusId v : verts) parent[v] = v;
    std::function<BusId(BusId)> find = [&](BusId x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (LineId id : cell) {
      const Line& l = net.line(net.line_index(id));
      if (skip && (l.source == *skip || l.target == *skip)) continue;
      parent[find(l.source)] = find(l.target);
    }
    std::set<BusId> roots;
    for (BusId v : verts) {
      if (!skip || v != *skip) roots.insert(find(v));
    }
    return roots.size() <= 1;
  };
  if (!connected_without(std::nullopt)) return false;
  if (cell.size() < 2) return true;
  for (BusId v : verts) {
    if (!connected_without(v)) return false;
  }
  return true;
}

}  // namespace gridpart::testing

#include "gridpart/flow.hpp"

namespace gridpart::testing {

/// (P' - P) / P_e from two independent solves, keyed by line id (e excluded).
inline std::map<LineId, double> resolve_factors(const Network& net, LineId e, const Eigen::VectorXd& p) {
  const FlowSolution before = solve_dc(net, p);
  const LineId removed[] = {e};
  const Network after_net = net.without_lines(removed);
  const FlowSolution after = solve_dc(after_net, p);
  const double pe = before.flow_of(net, e);
  std::map<LineId, double> out;
  for (const auto& l : after_net.lines()) {
    out[l.id] = (after.flow_of(after_net, l.id) - before.flow_of(net, l.id)) / pe;
  }
  return out;
}

/// An injection with nonzero flow on every line is not guaranteed, so callers
/// pick one where |P_e| is comfortably large.
inline Eigen::VectorXd dipole(const Network& net, BusId from, BusId to, double amount = 1.0) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.bus_count()));
  p[static_cast<Eigen::Index>(net.bus_index(from))] += amount;
  p[static_cast<Eigen::Index>(net.bus_index(to))] -= amount;
  return p;
}

}  // namespace gridpart::testing
