#include "gridpart/lodf.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gridpart/error.hpp"

namespace gridpart {

namespace {

using Index = Eigen::Index;

Index ix(std::size_t i) { return static_cast<Index>(i); }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::size_t> all_vertices(const Network& net) {
  std::vector<std::size_t> v(net.bus_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

/// Column of K for outage k given y = L⁺ C_k (lifted, n entries).
void fill_nonbridge_column(const Network& net, const Eigen::VectorXd& b, std::size_t k,
                           const Eigen::VectorXd& y, double tolerance, Eigen::Ref<Eigen::VectorXd> column) {
  const double self = b[ix(k)] * (y[ix(net.source_index(k))] - y[ix(net.target_index(k))]);
  const double denom = 1.0 - self;
  if (std::abs(denom) < tolerance) {
    throw Error(Errc::NearSingularDenominator, "line " + std::to_string(net.line(k).id));
  }
  for (std::size_t r = 0; r < net.line_count(); ++r) {
    if (r == k) {
      column[ix(r)] = kNaN;
      continue;
    }
    const double ptdf = b[ix(r)] * (y[ix(net.source_index(r))] - y[ix(net.target_index(r))]);
    column[ix(r)] = ptdf / denom;
  }
}

}  // namespace

LodfMatrix::LodfMatrix(std::vector<LineId> lines, Eigen::MatrixXd values, std::vector<ColumnKind> kinds,
                       std::optional<BridgeContext> context)
    : lines_(std::move(lines)), values_(std::move(values)), kinds_(std::move(kinds)), context_(std::move(context)) {
  for (std::size_t k = 0; k < lines_.size(); ++k) index_[lines_[k]] = k;
}

std::optional<double> LodfMatrix::at_index(std::size_t row, std::size_t col) const {
  if (row == col || kinds_[col] == ColumnKind::Omitted) return std::nullopt;
  return values_(ix(row), ix(col));
}

std::optional<double> LodfMatrix::at(LineId ehat, LineId e) const {
  const auto r = index_.find(ehat);
  const auto c = index_.find(e);
  if (r == index_.end()) throw Error(Errc::UnknownLine, "line " + std::to_string(ehat));
  if (c == index_.end()) throw Error(Errc::UnknownLine, "line " + std::to_string(e));
  return at_index(r->second, c->second);
}

LineFactors lodf_nonbridge(const Network& net, LineId e, double tolerance) {
  const std::size_t k = net.line_index(e);
  if (bridge_flags(net.graph())[k]) {
    throw Error(Errc::BridgeColumn, "line " + std::to_string(e) + " is a bridge");
  }
  const Eigen::VectorXd b = net.susceptances();
  const auto vertices = all_vertices(net);
  const ReducedLaplacian lap(net.graph(), b, {}, vertices, net.slack_index());
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(ix(net.bus_count()));
  unit[ix(net.source_index(k))] = 1.0;
  unit[ix(net.target_index(k))] = -1.0;
  const Eigen::VectorXd y = lap.solve(unit);

  Eigen::VectorXd column(ix(net.line_count()));
  fill_nonbridge_column(net, b, k, y, tolerance, column);
  LineFactors out;
  for (std::size_t r = 0; r < net.line_count(); ++r) {
    if (r != k) out[net.line(r).id] = column[ix(r)];
  }
  return out;
}

std::map<LineId, Rational> lodf_nonbridge_exact(const Network& net, LineId e) {
  const std::size_t k = net.line_index(e);
  if (bridge_flags(net.graph())[k]) {
    throw Error(Errc::BridgeColumn, "line " + std::to_string(e) + " is a bridge");
  }
  const std::size_t n = net.bus_count();
  const std::size_t slack = net.slack_index();
  std::vector<long> row(n, -1);
  std::size_t dim = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (v != slack) row[v] = static_cast<long>(dim++);
  }
  std::vector<Rational> b(net.line_count());
  RationalMatrix lap(dim, dim);
  for (std::size_t j = 0; j < net.line_count(); ++j) {
    b[j] = to_rational(net.line(j).susceptance);
    const long s = row[net.source_index(j)];
    const long t = row[net.target_index(j)];
    if (s >= 0) lap(s, s) += b[j];
    if (t >= 0) lap(t, t) += b[j];
    if (s >= 0 && t >= 0) {
      lap(s, t) -= b[j];
      lap(t, s) -= b[j];
    }
  }
  std::vector<Rational> rhs(dim);
  if (row[net.source_index(k)] >= 0) rhs[row[net.source_index(k)]] = 1;
  if (row[net.target_index(k)] >= 0) rhs[row[net.target_index(k)]] = -1;
  const std::vector<Rational> x = solve_exact(std::move(lap), std::move(rhs));
  auto y = [&](std::size_t v) -> Rational { return row[v] < 0 ? Rational(0) : x[row[v]]; };

  const Rational denom = 1 - b[k] * (y(net.source_index(k)) - y(net.target_index(k)));
  if (denom == 0) throw Error(Errc::NearSingularDenominator, "line " + std::to_string(e));
  std::map<LineId, Rational> out;
  for (std::size_t r = 0; r < net.line_count(); ++r) {
    if (r == k) continue;
    out[net.line(r).id] = b[r] * (y(net.source_index(r)) - y(net.target_index(r))) / denom;
  }
  return out;
}

namespace {

Eigen::VectorXd extended_column(const Network& net, const Eigen::VectorXd& injection, const BalanceRule& rule,
                                std::size_t k, const FlowSolution& base, double tolerance) {
  const double pe = base.flow[ix(k)];
  if (std::abs(pe) < tolerance) {
    throw Error(Errc::IslandedAtBridge, "bridge " + std::to_string(net.line(k).id) + " carries no flow");
  }
  EdgeMask alive(net.line_count(), true);
  alive[k] = false;
  const Components comps = connected_components(net.graph(), alive);

  Eigen::VectorXd adjusted = injection;
  std::vector<std::vector<BusId>> members(comps.count);
  std::vector<double> shortage(comps.count, 0.0);
  for (std::size_t v = 0; v < net.bus_count(); ++v) {
    members[comps.label[v]].push_back(net.bus(v).id);
    shortage[comps.label[v]] -= injection[ix(v)];
  }
  for (std::size_t c = 0; c < comps.count; ++c) {
    for (const auto& [id, delta] : apply_rule(rule, members[c], shortage[c])) {
      adjusted[ix(net.bus_index(id))] += delta;
    }
  }
  const ComponentFlows after = solve_dc_component(net, alive, adjusted, tolerance);

  Eigen::VectorXd column(ix(net.line_count()));
  for (std::size_t r = 0; r < net.line_count(); ++r) {
    column[ix(r)] = r == k ? kNaN : (after.flow[ix(r)] - base.flow[ix(r)]) / pe;
  }
  return column;
}

}  // namespace

LineFactors extended_lodf(const Network& net, const Eigen::VectorXd& injection, const BalanceRule& rule,
                          LineId e, double tolerance) {
  const std::size_t k = net.line_index(e);
  if (!bridge_flags(net.graph())[k]) {
    throw Error(Errc::NotABridge, "line " + std::to_string(e) + " is not a bridge");
  }
  const FlowSolution base = solve_dc(net, injection, tolerance);
  const Eigen::VectorXd column = extended_column(net, injection, rule, k, base, tolerance);
  LineFactors out;
  for (std::size_t r = 0; r < net.line_count(); ++r) {
    if (r != k) out[net.line(r).id] = column[ix(r)];
  }
  return out;
}

LodfMatrix lodf_matrix(const Network& net, const std::optional<BridgeContext>& context, double tolerance) {
  const std::size_t m = net.line_count();
  const Eigen::VectorXd b = net.susceptances();
  const auto bridge = bridge_flags(net.graph());
  const auto vertices = all_vertices(net);
  const ReducedLaplacian lap(net.graph(), b, {}, vertices, net.slack_index());
  const Eigen::MatrixXd inverse = lap.lifted_inverse();

  Eigen::MatrixXd values = Eigen::MatrixXd::Constant(ix(m), ix(m), kNaN);
  std::vector<ColumnKind> kinds(m, ColumnKind::NonBridge);
  std::optional<FlowSolution> base;
  if (context) base = solve_dc(net, context->injection, tolerance);

  for (std::size_t k = 0; k < m; ++k) {
    if (bridge[k]) {
      if (!context) {
        kinds[k] = ColumnKind::Omitted;
        continue;
      }
      kinds[k] = ColumnKind::BridgeExtended;
      values.col(ix(k)) = extended_column(net, context->injection, context->rule, k, *base, tolerance);
      continue;
    }
    const Eigen::VectorXd y = inverse.col(ix(net.source_index(k))) - inverse.col(ix(net.target_index(k)));
    fill_nonbridge_column(net, b, k, y, tolerance, values.col(ix(k)));
  }
  std::vector<LineId> ids(m);
  for (std::size_t k = 0; k < m; ++k) ids[k] = net.line(k).id;
  return LodfMatrix(std::move(ids), std::move(values), std::move(kinds), context);
}

}  // namespace gridpart
