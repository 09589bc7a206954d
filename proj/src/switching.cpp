#include "gridpart/switching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gridpart/error.hpp"
#include "gridpart/localize.hpp"
#include "gridpart/lodf.hpp"

namespace gridpart {

namespace {

using Index = Eigen::Index;

struct TopologyView {
  TreePartition tp;
  CellDecomposition cd;
  FlowSolution flow;
  InfluenceGraph influence;
  std::size_t violations = 0;
  bool bridge_columns = false;
};

TopologyView analyze(const Network& net, const Eigen::VectorXd& injection, const BalanceRule& rule,
                     const SwitchOptions& options) {
  TopologyView view{irreducible_tree_partition(net), {}, solve_dc(net, injection, options.tolerance), {}, 0, false};
  view.cd = cell_decomposition(net, view.tp);

  std::optional<BridgeContext> context;
  if (!view.tp.bridges.empty() && check_island_free(net, injection, options.tolerance).island_free) {
    context = BridgeContext{injection, rule};
  }
  std::optional<LodfMatrix> k;
  try {
    k = lodf_matrix(net, context, options.tolerance);
  } catch (const Error& err) {
    if (err.code() != Errc::NoParticipatingBusInComponent) throw;
    k = lodf_matrix(net, std::nullopt, options.tolerance);
  }
  view.bridge_columns = k->context().has_value();
  view.influence = influence_graph(*k, options.threshold);
  view.violations = sparsity_report(*k, view.tp, view.cd, options.tolerance).violations.size();
  return view;
}

std::size_t cross_region_edges(const InfluenceGraph& g, const TreePartition& tp, const CellDecomposition& cd) {
  std::size_t count = 0;
  for (const auto& [a, b] : g.edges) {
    if (tp.is_bridge(a) || tp.is_bridge(b)) continue;
    if (cd.cell_region[cd.cell_of.at(a)] != cd.cell_region[cd.cell_of.at(b)]) ++count;
  }
  return count;
}

std::vector<std::size_t> sizes_descending(const std::vector<std::vector<BusId>>& regions) {
  std::vector<std::size_t> sizes;
  for (const auto& r : regions) sizes.push_back(r.size());
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

double balance_of(const std::vector<std::size_t>& sizes) {
  return sizes.size() < 2 ? 0.0 : static_cast<double>(sizes[1]) / static_cast<double>(sizes[0]);
}

}  // namespace

PartitionSummary summarize(const TreePartition& tp, const CellDecomposition& cd) {
  return {tp.regions.size(), sizes_descending(tp.regions), tp.bridges, cd.cells.size(), cd.cut_vertices};
}

SwitchEvaluation evaluate_switch(const Network& net, const Eigen::VectorXd& injection, std::span<const LineId> off,
                                 const BalanceRule& rule, const SwitchOptions& options) {
  std::set<LineId> removed(off.begin(), off.end());
  for (LineId id : removed) net.line_index(id);
  std::optional<Network> after_net;
  try {
    after_net.emplace(net.without_lines(std::vector<LineId>(removed.begin(), removed.end())));
  } catch (const ValidationError& err) {
    if (err.kind() != Errc::Disconnected) throw;
    throw Error(Errc::WouldDisconnect, "switching off the given lines disconnects the network");
  }

  const TopologyView before = analyze(net, injection, rule, options);
  const TopologyView after = analyze(*after_net, injection, rule, options);

  SwitchEvaluation ev;
  ev.switched_off.assign(removed.begin(), removed.end());
  ev.partition_before = summarize(before.tp, before.cd);
  ev.partition_after = summarize(after.tp, after.cd);
  ev.influence_density_before = before.influence.edges.size();
  ev.influence_density_after = after.influence.edges.size();
  ev.cross_region_edges_after = cross_region_edges(after.influence, after.tp, after.cd);
  ev.bridge_columns_before = before.bridge_columns;
  ev.bridge_columns_after = after.bridge_columns;
  ev.zero_block_violations_after = after.violations;
  ev.total_abs_flow_before = before.flow.flow.cwiseAbs().sum();
  ev.total_abs_flow_after = after.flow.flow.cwiseAbs().sum();
  ev.conservation_residual_before = conservation_residual(net, before.flow.flow, injection);
  ev.conservation_residual_after = conservation_residual(*after_net, after.flow.flow, injection);

  std::size_t up = 0, down = 0, same = 0;
  std::vector<double> positive;
  for (std::size_t k = 0; k < after_net->line_count(); ++k) {
    const LineId id = after_net->line(k).id;
    const double p_before = before.flow.flow_of(net, id);
    const double p_after = after.flow.flow[static_cast<Index>(k)];
    if (std::abs(p_before) <= options.tolerance) {
      ev.undefined_normalization.push_back(id);
      continue;
    }
    const double normalized = (p_after - p_before) / p_before;
    ev.flow_changes.push_back({id, p_before, p_after, normalized});
    if (std::abs(p_after - p_before) <= options.tolerance) {
      ++same;
    } else if (normalized > 0.0) {
      ++up;
      positive.push_back(normalized);
    } else {
      ++down;
    }
  }
  const double defined = static_cast<double>(ev.flow_changes.size());
  if (defined > 0) {
    ev.fraction_increased = up / defined;
    ev.fraction_decreased = down / defined;
    ev.fraction_unchanged = same / defined;
  } else {
    ev.fraction_unchanged = 1.0;
  }

  if (!positive.empty()) {
    std::sort(positive.begin(), positive.end());
    const double top = positive.back();
    for (int step = 0; step <= 100; ++step) {
      const double x = top * step / 100.0;
      const auto below = std::upper_bound(positive.begin(), positive.end(), x) - positive.begin();
      ev.cdf_points.emplace_back(x, static_cast<double>(below) / static_cast<double>(positive.size()));
    }
  }
  return ev;
}

std::string SwitchEvaluation::to_json() const {
  using nlohmann::json;
  auto summary = [](const PartitionSummary& s) {
    return json{{"regions", s.region_count},
                {"region_sizes", s.region_sizes},
                {"bridges", s.bridges},
                {"cells", s.cell_count},
                {"cut_vertices", s.cut_vertices}};
  };
  json doc;
  doc["switched_off"] = switched_off;
  doc["partition_before"] = summary(partition_before);
  doc["partition_after"] = summary(partition_after);
  doc["influence_density_before"] = influence_density_before;
  doc["influence_density_after"] = influence_density_after;
  doc["cross_region_edges_after"] = cross_region_edges_after;
  doc["bridge_columns_before"] = bridge_columns_before;
  doc["bridge_columns_after"] = bridge_columns_after;
  doc["zero_block_violations_after"] = zero_block_violations_after;
  doc["total_abs_flow_before"] = total_abs_flow_before;
  doc["total_abs_flow_after"] = total_abs_flow_after;
  doc["fraction_increased"] = fraction_increased;
  doc["fraction_decreased"] = fraction_decreased;
  doc["fraction_unchanged"] = fraction_unchanged;
  doc["undefined_normalization"] = undefined_normalization;
  doc["cdf_points"] = json::array();
  for (const auto& [x, f] : cdf_points) doc["cdf_points"].push_back({x, f});
  return doc.dump(2);
}

std::string SwitchEvaluation::flow_changes_csv() const {
  std::ostringstream out;
  out.precision(12);
  out << "line_id,flow_before,flow_after,normalized_change\n";
  for (const auto& c : flow_changes) out << c.line << ',' << c.before << ',' << c.after << ',' << c.normalized << '\n';
  return out.str();
}

std::vector<CutCandidate> enumerate_bridging_cuts(const Network& net, std::size_t k_max, std::size_t limit) {
  if (k_max > 3) throw Error(Errc::InvalidArgument, "k_max must be at most 3");
  const Graph& g = net.graph();
  const std::size_t m = g.edge_count();
  const std::size_t base_regions = irreducible_tree_partition(net).regions.size();

  std::vector<CutCandidate> out;
  EdgeMask alive(m, true);
  std::vector<std::size_t> chosen;

  // Returns false when the current removal disconnects the network.
  auto evaluate = [&] {
    if (!is_connected(g, alive)) return false;
    const BlockStructure blocks = block_structure(g, alive);
    EdgeMask inner = alive;
    for (std::size_t k = 0; k < m; ++k) inner[k] = alive[k] && !blocks.bridge[k];
    const Components regions = connected_components(g, inner);
    if (regions.count <= base_regions) return true;
    std::vector<std::size_t> sizes(regions.count, 0);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) ++sizes[regions.label[v]];
    std::sort(sizes.rbegin(), sizes.rend());
    CutCandidate c;
    for (std::size_t k : chosen) c.lines.push_back(net.line(k).id);
    std::sort(c.lines.begin(), c.lines.end());
    c.region_count = regions.count;
    c.balance = balance_of(sizes);
    c.region_sizes = std::move(sizes);
    out.push_back(std::move(c));
    return true;
  };

  // Depth-first over increasing line indices.
  auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (!chosen.empty() && !evaluate()) return;
    if (chosen.size() == k_max) return;
    for (std::size_t k = start; k < m; ++k) {
      alive[k] = false;
      chosen.push_back(k);
      self(self, k + 1);
      chosen.pop_back();
      alive[k] = true;
    }
  };
  recurse(recurse, 0);

  std::stable_sort(out.begin(), out.end(), [](const CutCandidate& a, const CutCandidate& b) {
    if (a.balance != b.balance) return a.balance > b.balance;
    return a.lines.size() < b.lines.size();
  });
  if (limit > 0 && out.size() > limit) out.resize(limit);
  return out;
}

}  // namespace gridpart
