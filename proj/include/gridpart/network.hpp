#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "gridpart/graph.hpp"

namespace gridpart {

using BusId = long;
using LineId = long;

struct Bus {
  BusId id = 0;
  double injection = 0.0;  // per-unit
  bool is_generator = false;
};

/// Oriented transmission line; flow is positive from `source` to `target`.
struct Line {
  LineId id = 0;
  BusId source = 0;
  BusId target = 0;
  double susceptance = 1.0;  // per-unit, > 0
};

/// Connected simple power network. Immutable once built: the constructor
/// validates every structural invariant and throws `ValidationError`.
class Network {
 public:
  /// `slack` defaults to the lowest bus id.
  Network(std::vector<Bus> buses, std::vector<Line> lines, std::optional<BusId> slack = {},
          double base_mva = 100.0);

  std::size_t bus_count() const noexcept { return buses_.size(); }
  std::size_t line_count() const noexcept { return lines_.size(); }
  std::span<const Bus> buses() const noexcept { return buses_; }
  std::span<const Line> lines() const noexcept { return lines_; }
  const Bus& bus(std::size_t index) const { return buses_[index]; }
  const Line& line(std::size_t index) const { return lines_[index]; }

  BusId slack() const noexcept { return buses_[slack_index_].id; }
  std::size_t slack_index() const noexcept { return slack_index_; }
  double base_mva() const noexcept { return base_mva_; }

  std::optional<std::size_t> find_bus(BusId id) const;
  std::optional<std::size_t> find_line(LineId id) const;
  /// Throw `Error(UnknownBus / UnknownLine)` when absent.
  std::size_t bus_index(BusId id) const;
  std::size_t line_index(LineId id) const;

  std::size_t source_index(std::size_t line) const { return graph_.edge(line).u; }
  std::size_t target_index(std::size_t line) const { return graph_.edge(line).v; }

  /// Bus / line indices ordered by ascending id.
  std::span<const std::size_t> buses_by_id() const noexcept { return buses_by_id_; }
  std::span<const std::size_t> lines_by_id() const noexcept { return lines_by_id_; }

  /// Undirected topology with edge k = line k, u = source, v = target.
  const Graph& graph() const noexcept { return graph_; }

  Eigen::VectorXd injections() const;
  Eigen::VectorXd susceptances() const;
  double total_injection() const;

  Network with_injections(const Eigen::VectorXd& p) const;
  Network with_susceptances(const Eigen::VectorXd& b) const;
  Network with_slack(BusId slack) const;
  /// Drops the listed lines; throws `ValidationError(Disconnected)` if the
  /// remainder is not connected.
  Network without_lines(std::span<const LineId> removed) const;

 private:
  std::vector<Bus> buses_;
  std::vector<Line> lines_;
  std::size_t slack_index_ = 0;
  double base_mva_ = 100.0;
  std::unordered_map<BusId, std::size_t> bus_lookup_;
  std::unordered_map<LineId, std::size_t> line_lookup_;
  std::vector<std::size_t> buses_by_id_;
  std::vector<std::size_t> lines_by_id_;
  Graph graph_;
};

/// Dense n×m signed incidence matrix, +1 at a line's source, -1 at its target.
Eigen::MatrixXi incidence(const Network& net);

struct CollapseReport {
  std::map<BusId, BusId> absorbed_by;  // removed bus -> surviving bus holding its injection
  std::vector<LineId> removed_lines;
  std::size_t buses_before = 0;
  std::size_t buses_after = 0;
};

/// Repeatedly removes degree-1 buses and their line, moving the bus injection
/// onto its neighbor. Ends with min degree >= 2 or a single bus.
std::pair<Network, CollapseReport> collapse_dangling_bridges(const Network& net);

}  // namespace gridpart
