#include "gridpart/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gridpart/error.hpp"

namespace gridpart {

namespace {

using Index = Eigen::Index;

Index at(std::size_t i) { return static_cast<Index>(i); }

}  // namespace

ReducedLaplacian::ReducedLaplacian(const Graph& g, const Eigen::VectorXd& susceptance,
                                   const EdgeMask& alive, std::span<const std::size_t> vertices,
                                   std::size_t slack)
    : n_(g.vertex_count()), slack_(slack), local_(g.vertex_count(), -1) {
  for (std::size_t v : vertices) {
    if (v == slack) continue;
    local_[v] = static_cast<long>(global_.size());
    global_.push_back(v);
  }
  const Index dim = at(global_.size());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<bool> member(n_, false);
  for (std::size_t v : vertices) member[v] = true;

  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    if (!alive.empty() && !alive[k]) continue;
    const Edge& e = g.edge(k);
    if (!member[e.u] || !member[e.v]) continue;
    const double b = susceptance[at(k)];
    const long a = local_[e.u];
    const long c = local_[e.v];
    if (a >= 0) lap(a, a) += b;
    if (c >= 0) lap(c, c) += b;
    if (a >= 0 && c >= 0) {
      lap(a, c) -= b;
      lap(c, a) -= b;
    }
  }
  if (dim == 0) return;
  ldlt_.compute(lap);
  const auto d = ldlt_.vectorD().cwiseAbs();
  if (ldlt_.info() != Eigen::Success || d.minCoeff() <= 1e-12 * std::max(1.0, d.maxCoeff())) {
    throw Error(Errc::SingularSystem, "reduced Laplacian is singular (disconnected vertex set)");
  }
}

Eigen::VectorXd ReducedLaplacian::solve(const Eigen::VectorXd& injection) const {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(at(n_));
  if (global_.empty()) return theta;
  Eigen::VectorXd rhs(at(global_.size()));
  for (std::size_t r = 0; r < global_.size(); ++r) rhs[at(r)] = injection[at(global_[r])];
  const Eigen::VectorXd x = ldlt_.solve(rhs);
  for (std::size_t r = 0; r < global_.size(); ++r) theta[at(global_[r])] = x[at(r)];
  return theta;
}

Eigen::MatrixXd ReducedLaplacian::lifted_inverse() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(at(n_), at(n_));
  if (global_.empty()) return out;
  const Index dim = at(global_.size());
  const Eigen::MatrixXd inv = ldlt_.solve(Eigen::MatrixXd::Identity(dim, dim));
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c) out(at(global_[r]), at(global_[c])) = inv(r, c);
  }
  return out;
}

FlowSolution solve_dc(const Network& net, double tolerance) {
  return solve_dc(net, net.injections(), tolerance);
}

FlowSolution solve_dc(const Network& net, const Eigen::VectorXd& injection, double tolerance) {
  if (injection.size() != at(net.bus_count())) {
    throw Error(Errc::InvalidArgument, "injection vector has wrong length");
  }
  const double sum = injection.sum();
  if (std::abs(sum) > tolerance) {
    throw Error(Errc::ImbalancedInjection, "sum of injections is " + std::to_string(sum));
  }
  std::vector<std::size_t> all(net.bus_count());
  for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
  const Eigen::VectorXd b = net.susceptances();
  const ReducedLaplacian lap(net.graph(), b, {}, all, net.slack_index());

  FlowSolution out;
  out.slack = net.slack();
  out.theta = lap.solve(injection);
  out.flow.resize(at(net.line_count()));
  for (std::size_t k = 0; k < net.line_count(); ++k) {
    out.flow[at(k)] = b[at(k)] * (out.theta[at(net.source_index(k))] - out.theta[at(net.target_index(k))]);
  }
  return out;
}

ComponentFlows solve_dc_component(const Network& net, const EdgeMask& alive,
                                  const Eigen::VectorXd& injection, double tolerance) {
  if (injection.size() != at(net.bus_count())) {
    throw Error(Errc::InvalidArgument, "injection vector has wrong length");
  }
  const Graph& g = net.graph();
  const Components comps = connected_components(g, alive);
  const Eigen::VectorXd b = net.susceptances();

  ComponentFlows out;
  out.component_of = comps.label;
  out.components.resize(comps.count);
  std::vector<std::vector<std::size_t>> members(comps.count);
  for (std::size_t v = 0; v < net.bus_count(); ++v) {
    members[comps.label[v]].push_back(v);
    out.components[comps.label[v]].push_back(net.bus(v).id);
  }
  out.theta = Eigen::VectorXd::Zero(at(net.bus_count()));
  out.flow = Eigen::VectorXd::Constant(at(net.line_count()), std::numeric_limits<double>::quiet_NaN());

  for (std::size_t c = 0; c < comps.count; ++c) {
    auto& ids = out.components[c];
    double sum = 0.0;
    std::size_t slack = members[c].front();
    for (std::size_t v : members[c]) {
      sum += injection[at(v)];
      if (net.bus(v).id < net.bus(slack).id) slack = v;
    }
    if (std::abs(sum) > tolerance) {
      throw Error(Errc::ImbalancedComponent,
                  "component " + std::to_string(c) + " has net injection " + std::to_string(sum));
    }
    std::sort(ids.begin(), ids.end());
    out.slacks.push_back(net.bus(slack).id);
    const ReducedLaplacian lap(g, b, alive, members[c], slack);
    const Eigen::VectorXd theta = lap.solve(injection);
    for (std::size_t v : members[c]) out.theta[at(v)] = theta[at(v)];
  }
  for (std::size_t k = 0; k < net.line_count(); ++k) {
    if (!alive.empty() && !alive[k]) continue;
    out.flow[at(k)] = b[at(k)] * (out.theta[at(net.source_index(k))] - out.theta[at(net.target_index(k))]);
  }
  return out;
}

double conservation_residual(const Network& net, const Eigen::VectorXd& flow,
                             const Eigen::VectorXd& injection) {
  Eigen::VectorXd net_out = Eigen::VectorXd::Zero(at(net.bus_count()));
  for (std::size_t k = 0; k < net.line_count(); ++k) {
    const double f = flow[at(k)];
    if (std::isnan(f)) continue;
    net_out[at(net.source_index(k))] += f;
    net_out[at(net.target_index(k))] -= f;
  }
  return (net_out - injection).cwiseAbs().maxCoeff();
}

}  // namespace gridpart
