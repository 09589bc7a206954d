#include "gridpart/balance.hpp"

#include <cmath>
#include <set>

#include "gridpart/error.hpp"
#include "gridpart/io.hpp"

namespace gridpart {

BalanceRule::BalanceRule(std::map<BusId, double> weights, std::string name)
    : weights_(std::move(weights)), name_(std::move(name)) {
  if (weights_.empty()) throw Error(Errc::InvalidWeights, "balance rule has no participants");
  double sum = 0.0;
  for (const auto& [id, w] : weights_) {
    if (!(w > 0.0)) throw Error(Errc::InvalidWeights, "weight of bus " + std::to_string(id) + " is not positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(Errc::InvalidWeights, "weights sum to " + std::to_string(sum));
  }
}

BalanceRule BalanceRule::normalized(const std::map<BusId, double>& factors, std::string name) {
  double sum = 0.0;
  for (const auto& [id, f] : factors) {
    if (!(f > 0.0)) throw Error(Errc::InvalidWeights, "factor of bus " + std::to_string(id) + " is not positive");
    sum += f;
  }
  std::map<BusId, double> weights;
  for (const auto& [id, f] : factors) weights[id] = f / sum;
  // Re-absorb the rounding residue into the largest weight.
  if (!weights.empty()) {
    double total = 0.0;
    for (const auto& [id, w] : weights) total += w;
    auto largest = weights.begin();
    for (auto it = weights.begin(); it != weights.end(); ++it) {
      if (it->second > largest->second) largest = it;
    }
    largest->second += 1.0 - total;
  }
  return BalanceRule(std::move(weights), std::move(name));
}

BalanceRule BalanceRule::uniform(std::span<const BusId> participants, std::string name) {
  std::map<BusId, double> factors;
  for (BusId id : participants) factors[id] = 1.0;
  return normalized(factors, std::move(name));
}

std::vector<BusId> BalanceRule::participants() const {
  std::vector<BusId> out;
  out.reserve(weights_.size());
  for (const auto& [id, w] : weights_) out.push_back(id);
  return out;
}

BalanceRule uniform_generator_rule(const Network& net) {
  std::vector<BusId> gens;
  for (const auto& b : net.buses()) {
    if (b.is_generator) gens.push_back(b.id);
  }
  if (gens.empty()) throw Error(Errc::NoGenerators, "network has no generator buses");
  return BalanceRule::uniform(gens, "uniform-gen");
}

BalanceRule read_weights(const std::filesystem::path& path) {
  return BalanceRule::normalized(read_bus_value_csv(path), "weights:" + path.filename().string());
}

IslandFreeReport check_island_free(const Network& net, const Eigen::VectorXd& injection, double tolerance) {
  const FlowSolution flow = solve_dc(net, injection, tolerance);
  IslandFreeReport out;
  for (LineId id : find_bridges(net)) {
    if (std::abs(flow.flow_of(net, id)) < tolerance) {
      out.island_free = false;
      out.violating.push_back(id);
    }
  }
  return out;
}

ParticipationReport check_participating(const Network& net, const TreePartition& tp,
                                        const CellDecomposition& cd, const BalanceRule& rule) {
  (void)tp;
  ParticipationReport out;
  for (std::size_t c = 0; c < cd.cells.size(); ++c) {
    bool ok = false;
    for (BusId id : cd.cell_buses(net, c)) {
      if (rule.participates(id) && !cd.is_cut_vertex(id)) {
        ok = true;
        break;
      }
    }
    if (!ok) out.failing_cells.emplace_back(cd.cell_region[c], c);
  }
  out.participating = out.failing_cells.empty();
  return out;
}

std::map<BusId, double> apply_rule(const BalanceRule& rule, std::span<const BusId> component, double imbalance) {
  std::map<BusId, double> inside;
  double mass = 0.0;
  for (BusId id : std::set<BusId>(component.begin(), component.end())) {
    const auto it = rule.weights().find(id);
    if (it == rule.weights().end()) continue;
    inside[id] = it->second;
    mass += it->second;
  }
  if (inside.empty()) {
    throw Error(Errc::NoParticipatingBusInComponent, "no participating bus in component");
  }
  std::map<BusId, double> out;
  double assigned = 0.0;
  for (const auto& [id, w] : inside) {
    out[id] = w / mass * imbalance;
    assigned += out[id];
  }
  out.rbegin()->second += imbalance - assigned;
  return out;
}

}  // namespace gridpart
