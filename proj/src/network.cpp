#include "gridpart/network.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "gridpart/error.hpp"

namespace gridpart {

Network::Network(std::vector<Bus> buses, std::vector<Line> lines, std::optional<BusId> slack,
                 double base_mva)
    : buses_(std::move(buses)), lines_(std::move(lines)), base_mva_(base_mva) {
  if (buses_.empty()) throw ValidationError(Errc::Disconnected, "network has no buses");

  for (std::size_t i = 0; i < buses_.size(); ++i) {
    if (!bus_lookup_.emplace(buses_[i].id, i).second) {
      throw ValidationError(Errc::DuplicateBusId, "bus " + std::to_string(buses_[i].id));
    }
  }

  std::set<std::pair<BusId, BusId>> pairs;
  std::vector<Edge> edges;
  edges.reserve(lines_.size());
  for (std::size_t k = 0; k < lines_.size(); ++k) {
    const Line& l = lines_[k];
    const std::string tag = "line " + std::to_string(l.id);
    if (!line_lookup_.emplace(l.id, k).second) throw ValidationError(Errc::DuplicateLineId, tag);
    if (l.source == l.target) throw ValidationError(Errc::SelfLoop, tag);
    if (!(l.susceptance > 0.0)) throw ValidationError(Errc::NonPositiveSusceptance, tag);
    const auto s = bus_lookup_.find(l.source);
    const auto t = bus_lookup_.find(l.target);
    if (s == bus_lookup_.end() || t == bus_lookup_.end()) {
      throw ValidationError(Errc::UnknownBus, tag + " references a missing bus");
    }
    if (!pairs.emplace(std::minmax(l.source, l.target)).second) {
      throw ValidationError(Errc::ParallelLine, tag);
    }
    edges.push_back({s->second, t->second});
  }
  graph_ = Graph(buses_.size(), std::move(edges));

  buses_by_id_.resize(buses_.size());
  std::iota(buses_by_id_.begin(), buses_by_id_.end(), std::size_t{0});
  std::sort(buses_by_id_.begin(), buses_by_id_.end(),
            [&](std::size_t a, std::size_t b) { return buses_[a].id < buses_[b].id; });
  lines_by_id_.resize(lines_.size());
  std::iota(lines_by_id_.begin(), lines_by_id_.end(), std::size_t{0});
  std::sort(lines_by_id_.begin(), lines_by_id_.end(),
            [&](std::size_t a, std::size_t b) { return lines_[a].id < lines_[b].id; });
  if (!is_connected(graph_)) throw ValidationError(Errc::Disconnected, "network is not connected");

  if (slack) {
    slack_index_ = bus_index(*slack);
  } else {
    slack_index_ = static_cast<std::size_t>(
        std::min_element(buses_.begin(), buses_.end(),
                         [](const Bus& a, const Bus& b) { return a.id < b.id; }) -
        buses_.begin());
  }
}

std::optional<std::size_t> Network::find_bus(BusId id) const {
  const auto it = bus_lookup_.find(id);
  if (it == bus_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Network::find_line(LineId id) const {
  const auto it = line_lookup_.find(id);
  if (it == line_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t Network::bus_index(BusId id) const {
  if (auto i = find_bus(id)) return *i;
  throw Error(Errc::UnknownBus, "bus " + std::to_string(id));
}

std::size_t Network::line_index(LineId id) const {
  if (auto k = find_line(id)) return *k;
  throw Error(Errc::UnknownLine, "line " + std::to_string(id));
}

Eigen::VectorXd Network::injections() const {
  Eigen::VectorXd p(buses_.size());
  for (std::size_t i = 0; i < buses_.size(); ++i) p[i] = buses_[i].injection;
  return p;
}

Eigen::VectorXd Network::susceptances() const {
  Eigen::VectorXd b(lines_.size());
  for (std::size_t k = 0; k < lines_.size(); ++k) b[k] = lines_[k].susceptance;
  return b;
}

double Network::total_injection() const {
  double sum = 0.0;
  for (const auto& b : buses_) sum += b.injection;
  return sum;
}

Network Network::with_injections(const Eigen::VectorXd& p) const {
  if (static_cast<std::size_t>(p.size()) != buses_.size()) {
    throw Error(Errc::InvalidArgument, "injection vector has wrong length");
  }
  auto buses = buses_;
  for (std::size_t i = 0; i < buses.size(); ++i) buses[i].injection = p[i];
  return Network(std::move(buses), lines_, slack(), base_mva_);
}

Network Network::with_susceptances(const Eigen::VectorXd& b) const {
  if (static_cast<std::size_t>(b.size()) != lines_.size()) {
    throw Error(Errc::InvalidArgument, "susceptance vector has wrong length");
  }
  auto lines = lines_;
  for (std::size_t k = 0; k < lines.size(); ++k) lines[k].susceptance = b[k];
  return Network(buses_, std::move(lines), slack(), base_mva_);
}

Network Network::with_slack(BusId slack) const { return Network(buses_, lines_, slack, base_mva_); }

Network Network::without_lines(std::span<const LineId> removed) const {
  std::set<LineId> drop(removed.begin(), removed.end());
  for (LineId id : drop) line_index(id);
  std::vector<Line> kept;
  kept.reserve(lines_.size());
  for (const auto& l : lines_) {
    if (!drop.count(l.id)) kept.push_back(l);
  }
  return Network(buses_, std::move(kept), slack(), base_mva_);
}

Eigen::MatrixXi incidence(const Network& net) {
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(net.bus_count()),
                                            static_cast<Eigen::Index>(net.line_count()));
  for (std::size_t k = 0; k < net.line_count(); ++k) {
    c(static_cast<Eigen::Index>(net.source_index(k)), static_cast<Eigen::Index>(k)) = 1;
    c(static_cast<Eigen::Index>(net.target_index(k)), static_cast<Eigen::Index>(k)) = -1;
  }
  return c;
}

std::pair<Network, CollapseReport> collapse_dangling_bridges(const Network& net) {
  const Graph& g = net.graph();
  const std::size_t n = net.bus_count();
  std::vector<std::size_t> degree(n);
  for (std::size_t v = 0; v < n; ++v) degree[v] = g.neighbors(v).size();

  std::vector<bool> bus_alive(n, true), line_alive(net.line_count(), true);
  std::vector<double> p(n);
  std::vector<bool> generator(n);
  for (std::size_t v = 0; v < n; ++v) {
    p[v] = net.bus(v).injection;
    generator[v] = net.bus(v).is_generator;
  }
  std::vector<std::size_t> absorbed_into(n, n);  // immediate absorber
  std::size_t remaining = n;

  CollapseReport report;
  report.buses_before = n;

  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v) {
    if (degree[v] == 1) queue.push_back(v);
  }
  while (!queue.empty() && remaining > 1) {
    const std::size_t v = queue.front();
    queue.pop_front();
    if (!bus_alive[v] || degree[v] != 1) continue;
    for (const auto& inc : g.neighbors(v)) {
      if (!line_alive[inc.edge]) continue;
      const std::size_t w = inc.vertex;
      line_alive[inc.edge] = false;
      report.removed_lines.push_back(net.line(inc.edge).id);
      bus_alive[v] = false;
      --remaining;
      p[w] += p[v];
      // the absorber also takes over any generation capability
      generator[w] = generator[w] || generator[v];
      absorbed_into[v] = w;
      --degree[v];
      if (--degree[w] == 1) queue.push_back(w);
      break;
    }
  }

  std::vector<Bus> buses;
  for (std::size_t v = 0; v < n; ++v) {
    if (!bus_alive[v]) {
      std::size_t root = absorbed_into[v];
      while (!bus_alive[root]) root = absorbed_into[root];
      report.absorbed_by[net.bus(v).id] = net.bus(root).id;
      continue;
    }
    Bus b = net.bus(v);
    b.injection = p[v];
    b.is_generator = generator[v];
    buses.push_back(b);
  }
  std::vector<Line> lines;
  for (std::size_t k = 0; k < net.line_count(); ++k) {
    if (line_alive[k]) lines.push_back(net.line(k));
  }
  std::sort(report.removed_lines.begin(), report.removed_lines.end());

  std::optional<BusId> slack = net.slack();
  if (!bus_alive[net.slack_index()]) slack = report.absorbed_by.at(net.slack());
  report.buses_after = buses.size();
  return {Network(std::move(buses), std::move(lines), slack, net.base_mva()), report};
}

}  // namespace gridpart
