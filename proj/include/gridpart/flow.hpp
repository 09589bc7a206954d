#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include "gridpart/network.hpp"

namespace gridpart {

inline constexpr double kDefaultTolerance = 1e-9;

/// Weighted Laplacian C B C^T of one connected vertex set, with the slack row
/// and column removed, factorized once. This is the solver seam: everything
/// that needs L^-1 goes through here.
class ReducedLaplacian {
 public:
  /// `vertices` must induce a connected subgraph over the alive edges.
  ReducedLaplacian(const Graph& g, const Eigen::VectorXd& susceptance, const EdgeMask& alive,
                   std::span<const std::size_t> vertices, std::size_t slack);

  /// Angles for an injection vector over all graph vertices; entries outside
  /// `vertices` are ignored and left at 0 in the result. θ(slack) = 0.
  Eigen::VectorXd solve(const Eigen::VectorXd& injection) const;

  /// Pseudo-inverse lifted to graph size: zero slack row/column, zero outside
  /// the vertex set.
  Eigen::MatrixXd lifted_inverse() const;

  std::size_t slack() const noexcept { return slack_; }

 private:
  std::size_t n_ = 0;
  std::size_t slack_ = 0;
  std::vector<long> local_;  // graph vertex -> reduced row, -1 if absent or slack
  std::vector<std::size_t> global_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
};

struct FlowSolution {
  Eigen::VectorXd theta;  // by bus index, radians
  Eigen::VectorXd flow;   // by line index, per-unit
  BusId slack = 0;

  double theta_of(const Network& net, BusId id) const { return theta[static_cast<Eigen::Index>(net.bus_index(id))]; }
  double flow_of(const Network& net, LineId id) const { return flow[static_cast<Eigen::Index>(net.line_index(id))]; }
};

FlowSolution solve_dc(const Network& net, double tolerance = kDefaultTolerance);
FlowSolution solve_dc(const Network& net, const Eigen::VectorXd& injection,
                      double tolerance = kDefaultTolerance);

/// Independent DC solves on each component of (N, alive lines).
struct ComponentFlows {
  std::vector<std::vector<BusId>> components;  // sorted, ordered by smallest bus index
  std::vector<std::size_t> component_of;       // by bus index
  std::vector<BusId> slacks;                   // lowest bus id in each component
  Eigen::VectorXd theta;                       // by bus index
  Eigen::VectorXd flow;                        // by line index; NaN on dead lines
};

ComponentFlows solve_dc_component(const Network& net, const EdgeMask& alive,
                                  const Eigen::VectorXd& injection,
                                  double tolerance = kDefaultTolerance);

/// max_i |(C P - p)_i| over alive lines.
double conservation_residual(const Network& net, const Eigen::VectorXd& flow,
                             const Eigen::VectorXd& injection);

}  // namespace gridpart
