// Acceptance suite: one PASS/FAIL line per criterion. All tolerances are fixed
// here; `--criterion N` runs a single one.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>

#include "gridpart/balance.hpp"
#include "gridpart/error.hpp"
#include "gridpart/flow.hpp"
#include "gridpart/forest_oracle.hpp"
#include "gridpart/io.hpp"
#include "gridpart/localize.hpp"
#include "gridpart/lodf.hpp"
#include "gridpart/partition.hpp"
#include "gridpart/perturb.hpp"
#include "gridpart/switching.hpp"
#include "support/fixtures.hpp"

using namespace gridpart;
using namespace gridpart::testing;

namespace {

constexpr double kZero = 1e-9;          // structural zero / float agreement
constexpr double kNonzero = 1e-12;      // almost-sure nonzero floor
constexpr double kFlowTol = 1e-9;       // flow identities
constexpr double kOracleSeconds = 60.0;
constexpr double kDoublingRatio = 2.5;
constexpr double kIeeeSeconds = 300.0;
constexpr double kInfluenceThreshold = 0.005;
constexpr double kSmallChange = 0.25;
constexpr double kSmallShare = 0.70;
constexpr double kRegionRatioMax = 3.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<BusId> bus_ids(const Network& net) {
  std::vector<BusId> ids;
  for (const auto& b : net.buses()) ids.push_back(b.id);
  return ids;
}

/// The shared corpus for criteria 1 and 2: n in [3,6], susceptances k/100 in [0.5, 5].
std::vector<Network> small_corpus() {
  std::mt19937_64 rng(2024);
  std::vector<Network> out;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 3 + static_cast<std::size_t>(i % 4);
    const std::size_t extra = 1 + static_cast<std::size_t>(i / 4) % (n * (n - 1) / 2 - n + 2);
    out.push_back(random_connected(n, extra, rng));
  }
  return out;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t pairs = 0, exact_mismatch = 0;
  for (const Network& net : small_corpus()) {
    const auto bridges = find_bridges(net);
    for (const auto& e : net.lines()) {
      if (bridges.count(e.id)) continue;
      const LineFactors k = lodf_nonbridge(net, e.id);
      const auto exact = lodf_nonbridge_exact(net, e.id);
      for (const auto& f : net.lines()) {
        if (f.id == e.id) continue;
        const Rational forest = lodf_forest(net, e.id, f.id);
        worst = std::max(worst, std::abs(to_double(forest) - k.at(f.id)));
        if (forest != exact.at(f.id)) ++exact_mismatch;
        ++pairs;
      }
    }
  }
  const double secs = seconds_since(t0);
  char buf[200];
  std::snprintf(buf, sizeof buf, "200 graphs, %zu pairs, max |forest-matrix| = %.3g, rational mismatches = %zu, %.1fs",
                pairs, worst, exact_mismatch, secs);
  return {worst < kZero && exact_mismatch == 0 && secs < kOracleSeconds && pairs > 0, buf};
}

Outcome criterion2() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  std::size_t checks = 0;
  for (const Network& net : small_corpus()) {
    const Eigen::VectorXd p = random_balanced_injection(net.bus_count(), rng);
    const FlowSolution before = solve_dc(net, p);
    const auto bridges = find_bridges(net);
    for (const auto& e : net.lines()) {
      if (bridges.count(e.id)) continue;
      const LineFactors k = lodf_nonbridge(net, e.id);
      const LineId removed[] = {e.id};
      const Network cut = net.without_lines(removed);
      const FlowSolution after = solve_dc(cut, p);
      for (const auto& [id, factor] : k) {
        const double predicted = before.flow_of(net, id) + factor * before.flow_of(net, e.id);
        worst = std::max(worst, std::abs(after.flow_of(cut, id) - predicted));
        ++checks;
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu post-outage flows, max |P' - (P + K P_e)| = %.3g", checks, worst);
  return {worst < kZero && checks > 0, buf};
}

Outcome criterion3() {
  std::mt19937_64 rng(303);
  double worst = 0.0;
  std::size_t instances = 0, pairs = 0;
  while (instances < 60) {
    const std::size_t regions = 2 + instances % 2;
    const Network net = random_multi_region(regions, regions == 2 ? 7 : 4, rng);
    if (net.bus_count() > 14) continue;
    const TreePartition tp = irreducible_tree_partition(net);
    const CellDecomposition cd = cell_decomposition(net, tp);
    for (const auto& e : net.lines()) {
      if (tp.is_bridge(e.id)) continue;
      const LineFactors k = lodf_nonbridge(net, e.id);
      for (const auto& [id, v] : k) {
        if (tp.is_bridge(id) || cd.cell_of.at(id) != cd.cell_of.at(e.id)) {
          worst = std::max(worst, std::abs(v));
          ++pairs;
        }
      }
    }
    ++instances;
  }

  // Golden zeros, exact in rational arithmetic and tiny in floats.
  bool golden = true;
  double golden_float = 0.0;
  const Network bf = butterfly();
  for (LineId e : {1, 2, 3}) {
    for (LineId f : {4, 5, 6}) {
      golden = golden && lodf_forest(bf, e, f) == 0 && lodf_forest(bf, f, e) == 0;
      golden_float = std::max({golden_float, std::abs(lodf_nonbridge(bf, e).at(f)), std::abs(lodf_nonbridge(bf, f).at(e))});
    }
  }
  const Network k5 = complete_graph(5);
  std::size_t k5_pairs = 0;
  for (const auto& e : k5.lines()) {
    const LineFactors k = lodf_nonbridge(k5, e.id);
    for (const auto& f : k5.lines()) {
      if (f.source == e.source || f.source == e.target || f.target == e.source || f.target == e.target) continue;
      golden = golden && lodf_forest(k5, e.id, f.id) == 0;
      golden_float = std::max(golden_float, std::abs(k.at(f.id)));
      ++k5_pairs;
    }
  }
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "%zu networks, %zu off-cell pairs, max |K| = %.3g; butterfly + K5 (%zu pairs) exact zeros: %s, float max %.3g",
                instances, pairs, worst, k5_pairs, golden ? "yes" : "no", golden_float);
  return {worst < kZero && golden && golden_float < kZero && instances >= 50, buf};
}

Outcome criterion4() {
  std::mt19937_64 rng(404);
  double min_cell = 1.0, min_bridge = 1.0;
  std::size_t same_cell = 0, bridge_pairs = 0, draws = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    // Symmetric bases are the hard case: without noise they have exact zeros
    // inside cells. Alternate them with random multi-region networks, redrawn
    // until every cell has a bus that is not a cut vertex.
    const BalanceRule* rule_ptr = nullptr;
    Network net = complete_graph(4);
    std::optional<BalanceRule> rule_store;
    for (;;) {
      const Network base = seed % 3 == 0 ? complete_graph(4)
                           : seed % 3 == 1 ? double_ring()
                                           : random_multi_region(3, 5, rng);
      net = perturb(base, {Distribution::Uniform, 1e-3, seed});
      rule_store.emplace(BalanceRule::uniform(bus_ids(net)));
      const TreePartition tp0 = irreducible_tree_partition(net);
      if (check_participating(net, tp0, cell_decomposition(net, tp0), *rule_store).participating) break;
      if (seed % 3 != 2) return {false, "symmetric base is not participating"};
    }
    rule_ptr = &*rule_store;
    const BalanceRule& rule = *rule_ptr;
    const TreePartition tp = irreducible_tree_partition(net);
    const CellDecomposition cd = cell_decomposition(net, tp);
    Eigen::VectorXd p;
    do {
      p = random_balanced_injection(net.bus_count(), rng);
    } while (!check_island_free(net, p).island_free);

    const LodfMatrix k = lodf_matrix(net, BridgeContext{p, rule});
    for (std::size_t col = 0; col < k.size(); ++col) {
      for (std::size_t row = 0; row < k.size(); ++row) {
        if (row == col) continue;
        const PairClass c = classify_pair(tp, cd, k.lines()[col], k.lines()[row]);
        const double v = std::abs(*k.at_index(row, col));
        if (c == PairClass::SameCell) {
          min_cell = std::min(min_cell, v);
          ++same_cell;
        } else if (c == PairClass::SourceIsBridge) {
          min_bridge = std::min(min_bridge, v);
          ++bridge_pairs;
        }
      }
    }
    ++draws;
  }

  // Necessity of island-free: a balanced sub-island behind the bridge.
  bool islanded = false;
  {
    const Network tt = two_triangles();
    Eigen::VectorXd p(6);
    p << 1, -1, 0, 0, 0.5, -0.5;
    try {
      extended_lodf(tt, p, BalanceRule::uniform(bus_ids(tt)), 7);
    } catch (const Error& e) {
      islanded = e.code() == Errc::IslandedAtBridge;
    }
  }
  // Necessity of participation: the right triangle's only participant is its gate.
  bool zero_found = false;
  {
    const Network tt = perturb(two_triangles(), {Distribution::Uniform, 1e-3, 9});
    const BalanceRule rule({{1, 0.5}, {4, 0.5}});
    const TreePartition tp = irreducible_tree_partition(tt);
    const bool failing = !check_participating(tt, tp, cell_decomposition(tt, tp), rule).participating;
    for (const auto& [id, v] : extended_lodf(tt, dipole(tt, 1, 6), rule, 7)) zero_found = zero_found || (failing && std::abs(v) < kNonzero);
  }
  char buf[260];
  std::snprintf(buf, sizeof buf,
                "%zu draws: %zu same-cell pairs min |K| = %.3g, %zu bridge-source pairs min |K| = %.3g; "
                "IslandedAtBridge: %s; non-participating zero: %s",
                draws, same_cell, min_cell, bridge_pairs, min_bridge, islanded ? "yes" : "no", zero_found ? "yes" : "no");
  return {draws == 100 && min_cell > kNonzero && min_bridge > kNonzero && islanded && zero_found && bridge_pairs > 0, buf};
}

/// Coarser tree partitions: merge two adjacent regions of the reduced tree.
std::vector<std::vector<BusId>> merge_adjacent(const Network& net, const TreePartition& tp, LineId bridge) {
  const Line& l = net.line(net.line_index(bridge));
  const std::size_t a = tp.region_of.at(l.source), b = tp.region_of.at(l.target);
  std::vector<std::vector<BusId>> out;
  std::vector<BusId> merged;
  for (std::size_t r = 0; r < tp.regions.size(); ++r) {
    if (r == a || r == b) {
      merged.insert(merged.end(), tp.regions[r].begin(), tp.regions[r].end());
    } else {
      out.push_back(tp.regions[r]);
    }
  }
  out.push_back(merged);
  return out;
}

/// Overwrites a buffer larger than the private caches so the next timed call
/// starts cold. Without this the smallest size runs out of L1 while the larger
/// ones do not, and the ratio measures the cache hierarchy instead of the code.
void evict_caches() {
  static std::vector<std::uint64_t> junk(1 << 20);  // 8 MiB
  static std::uint64_t salt = 0;
  ++salt;
  for (auto& x : junk) x += salt;
}

/// Doubling ratios of cold-cache partition + cell time over `sizes`. Each
/// round times every size back to back (several graphs each, so one unusual
/// graph does not decide it) and yields one ratio per doubling; the median over
/// rounds is reported, which cancels the slow drift of a shared machine.
std::vector<double> doubling_ratios(const std::vector<std::size_t>& sizes, std::mt19937_64& rng) {
  constexpr int kGraphsPerSize = 6;
  constexpr int kReps = 5;
  constexpr int kRounds = 15;
  std::vector<std::vector<Network>> nets(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    for (int g = 0; g < kGraphsPerSize; ++g) nets[i].push_back(random_connected(sizes[i], sizes[i], rng));
  }
  std::vector<std::vector<double>> ratios(sizes.size() - 1);
  for (int round = 0; round < kRounds; ++round) {
    std::vector<double> total(sizes.size(), 0.0);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      for (const Network& net : nets[i]) {
        for (int r = 0; r < kReps; ++r) {
          evict_caches();
          const auto t0 = Clock::now();
          const TreePartition tp = irreducible_tree_partition(net);
          const CellDecomposition cd = cell_decomposition(net, tp);
          total[i] += seconds_since(t0);
          if (cd.cells.size() > net.line_count()) std::abort();
        }
      }
    }
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) ratios[i].push_back(total[i + 1] / total[i]);
  }
  std::vector<double> out;
  for (auto& r : ratios) {
    std::nth_element(r.begin(), r.begin() + r.size() / 2, r.end());
    out.push_back(r[r.size() / 2]);
  }
  return out;
}

Outcome criterion5() {
  std::mt19937_64 rng(505);
  std::size_t instances = 0, mismatches = 0, finer_checks = 0, finer_failures = 0;
  for (; instances < 500; ++instances) {
    const std::size_t n = 2 + instances % 49;
    const Network net = instances % 3 == 0 ? random_multi_region(2 + instances % 4, 8, rng)
                                           : random_connected(n, (instances * 7) % (n + 3), rng);
    if (net.bus_count() > 50) continue;
    const TreePartition tp = irreducible_tree_partition(net);
    const auto bridges = brute_bridges(net);
    std::vector<bool> keep(net.line_count());
    for (std::size_t k = 0; k < net.line_count(); ++k) keep[k] = !bridges.count(net.line(k).id);
    const std::set<std::vector<BusId>> regions(tp.regions.begin(), tp.regions.end());
    if (regions != brute_components(net, keep) || tp.bridges.size() + 1 != tp.regions.size() ||
        std::set<LineId>(tp.bridges.begin(), tp.bridges.end()) != bridges) {
      ++mismatches;
    }
    // Ten coarser tree partitions built by merging regions across bridges.
    std::vector<LineId> order = tp.bridges;
    for (int q = 0; q < 10 && !order.empty(); ++q) {
      std::shuffle(order.begin(), order.end(), rng);
      TreePartition coarse = tp;
      auto current = tp.regions;
      const std::size_t merges = 1 + static_cast<std::size_t>(q) % order.size();
      for (std::size_t j = 0; j < merges; ++j) {
        coarse.regions = current;
        coarse.region_of.clear();
        for (std::size_t r = 0; r < current.size(); ++r) {
          for (BusId b : current[r]) coarse.region_of[b] = r;
        }
        const Line& l = net.line(net.line_index(order[j]));
        if (coarse.region_of.at(l.source) == coarse.region_of.at(l.target)) continue;
        current = merge_adjacent(net, coarse, order[j]);
      }
      ++finer_checks;
      if (!is_tree_partition(net, current) || !is_finer(tp.regions, current).finer) ++finer_failures;
    }
  }

  const auto ratios = doubling_ratios({1000, 2000, 4000}, rng);
  const double r1 = ratios[0], r2 = ratios[1];
  char buf[260];
  std::snprintf(buf, sizeof buf,
                "%zu graphs, %zu partition mismatches, %zu/%zu maximality failures; doubling ratios %.2f, %.2f",
                instances, mismatches, finer_failures, finer_checks, r1, r2);
  return {mismatches == 0 && finer_failures == 0 && finer_checks > 0 && r1 <= kDoublingRatio && r2 <= kDoublingRatio,
          buf};
}

Outcome criterion6() {
  const auto t0 = Clock::now();
  const MatpowerCase mc = load_matpower(std::filesystem::path(GRIDPART_DATA_DIR) / "case118.m");
  const auto [net, collapse] = collapse_dangling_bridges(mc.network);
  const BalanceRule rule = uniform_generator_rule(net);
  const Eigen::VectorXd p = net.injections();
  const auto cuts = enumerate_bridging_cuts(net, 3);

  std::size_t comparable = 0, tried = 0;
  for (const auto& cut : cuts) {
    if (cut.lines.size() != 3 || cut.region_count != 2) continue;
    const double ratio = static_cast<double>(cut.region_sizes[0]) / static_cast<double>(cut.region_sizes[1]);
    if (ratio > kRegionRatioMax) continue;
    ++comparable;
    ++tried;
    const SwitchEvaluation ev = evaluate_switch(net, p, cut.lines, rule, {kInfluenceThreshold, kDefaultTolerance});
    std::size_t small = 0;
    for (const auto& fc : ev.flow_changes) small += std::abs(fc.normalized) < kSmallChange;
    const double share = ev.flow_changes.empty() ? 0.0 : static_cast<double>(small) / static_cast<double>(ev.flow_changes.size());
    if (ev.cross_region_edges_after == 0 && ev.influence_density_after < ev.influence_density_before &&
        share >= kSmallShare) {
      const double secs = seconds_since(t0);
      char buf[320];
      std::snprintf(buf, sizeof buf,
                    "%zu buses after collapse, %zu candidate cuts; off = {%ld,%ld,%ld}, regions %zu/%zu, "
                    "cross-region edges 0, influence edges %zu -> %zu, %.1f%% of |dP/P| < %.2f, %.1fs",
                    net.bus_count(), cuts.size(), cut.lines[0], cut.lines[1], cut.lines[2], cut.region_sizes[0],
                    cut.region_sizes[1], ev.influence_density_before, ev.influence_density_after, 100 * share,
                    kSmallChange, secs);
      return {secs < kIeeeSeconds, buf};
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "no qualifying cut among %zu comparable 3-line cuts (%zu tried)", comparable, tried);
  return {false, buf};
}

Outcome criterion7() {
  const Network net = double_ring();
  const double original = solve_dc(net).flow.cwiseAbs().sum();
  double best = original;
  LineId best_line = 0;
  std::size_t candidates = 0;
  for (const auto& l : net.lines()) {
    const LineId off[] = {l.id};
    std::vector<bool> keep(net.line_count(), true);
    keep[net.line_index(l.id)] = false;
    if (!brute_connected(net, keep)) continue;
    ++candidates;
    const Network cut = net.without_lines(off);
    const double total = solve_dc(cut).flow.cwiseAbs().sum();
    if (total < best - kFlowTol) {
      best = total;
      best_line = l.id;
    }
  }
  const LineId tie[] = {13};
  const double tie_total = solve_dc(net.without_lines(tie)).flow.cwiseAbs().sum();
  char buf[200];
  std::snprintf(buf, sizeof buf, "sum|P| %.4f -> %.4f after removing the upper tie; exhaustive minimum over %zu removals at line %ld (%.4f)",
                original, tie_total, candidates, best_line, best);
  return {tie_total < original - kFlowTol && best_line == 13 && std::abs(best - tie_total) < kFlowTol, buf};
}

Outcome criterion8() {
  std::mt19937_64 rng(808);
  double conservation = 0, slack = 0, scaling = 0, energy = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 30;
    const Network net = random_connected(n, static_cast<std::size_t>(trial) % 12, rng);
    const Eigen::VectorXd p = random_balanced_injection(n, rng);
    const FlowSolution s = solve_dc(net, p);
    conservation = std::max(conservation, conservation_residual(net, s.flow, p));
    const FlowSolution moved = solve_dc(net.with_slack(net.bus(n / 2).id), p);
    slack = std::max(slack, (moved.flow - s.flow).cwiseAbs().maxCoeff());
    const double lambda = std::uniform_real_distribution<double>(0.1, 10.0)(rng);
    const FlowSolution scaled = solve_dc(net.with_susceptances(net.susceptances() * lambda), p);
    scaling = std::max({scaling, (scaled.flow - s.flow).cwiseAbs().maxCoeff(),
                        (scaled.theta * lambda - s.theta).cwiseAbs().maxCoeff()});
    energy = std::max(energy, std::abs((s.flow.array().square() / net.susceptances().array()).sum() - p.dot(s.theta)));
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "100 instances: conservation %.2g, slack %.2g, scaling %.2g, energy %.2g", conservation,
                slack, scaling, energy);
  return {std::max({conservation, slack, scaling, energy}) < kFlowTol, buf};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle equivalence", criterion1},   {"re-solve consistency", criterion2},
      {"structural zeros", criterion3},     {"almost-sure nonzeros", criterion4},
      {"partition correctness", criterion5}, {"IEEE-118 switching study", criterion6},
      {"double-ring minimum", criterion7},  {"flow solver properties", criterion8},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  int failures = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    if (only != 0 && static_cast<std::size_t>(only) != c + 1) continue;
    Outcome o;
    try {
      o = criteria[c].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    std::printf("[%s] criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", c + 1, criteria[c].first, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
