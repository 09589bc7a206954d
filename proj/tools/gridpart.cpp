#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gridpart/balance.hpp"
#include "gridpart/error.hpp"
#include "gridpart/exact.hpp"
#include "gridpart/flow.hpp"
#include "gridpart/forest_oracle.hpp"
#include "gridpart/io.hpp"
#include "gridpart/localize.hpp"
#include "gridpart/lodf.hpp"
#include "gridpart/network.hpp"
#include "gridpart/partition.hpp"
#include "gridpart/perturb.hpp"
#include "gridpart/switching.hpp"

namespace fs = std::filesystem;
using namespace gridpart;
using nlohmann::json;

namespace {

struct GlobalOptions {
  std::string perturb;
  double tolerance = kDefaultTolerance;
  bool collapse = false;
  bool verbose = false;
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool looks_like_matpower(const fs::path& path) {
  if (path.extension() == ".m") return true;
  if (path.extension() == ".json") return false;
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  return first == std::string::npos || text[first] != '{';
}

Network load(const fs::path& path, const GlobalOptions& opt) {
  Network net = [&] {
    if (!looks_like_matpower(path)) return load_native(path);
    MatpowerCase mc = load_matpower(path);
    if (opt.verbose) {
      const auto& r = mc.report;
      std::cerr << "matpower: " << r.bus_rows << " bus rows, " << r.branch_rows << " branch rows -> " << r.bus_count
                << " buses, " << r.line_count << " lines (" << r.merged.size() << " merged, " << r.out_of_service
                << " out of service, " << r.isolated_buses << " isolated); slack adjusted by "
                << format_number(r.slack_adjustment) << " pu\n";
    }
    return std::move(mc.network);
  }();
  if (opt.collapse) {
    auto [collapsed, report] = collapse_dangling_bridges(net);
    if (opt.verbose) {
      std::cerr << "collapse: " << report.buses_before << " -> " << report.buses_after << " buses, "
                << report.removed_lines.size() << " lines removed\n";
    }
    net = std::move(collapsed);
  }
  if (!opt.perturb.empty()) net = perturb(net, parse_perturbation(opt.perturb));
  return net;
}

std::vector<LineId> parse_id_list(const std::string& text) {
  std::vector<LineId> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const long id = std::stol(item, &used);
    if (used != item.size()) throw Error(Errc::InvalidArgument, "bad line id '" + item + "'");
    out.push_back(id);
  }
  if (out.empty()) throw Error(Errc::InvalidArgument, "empty line list");
  return out;
}

BalanceRule parse_rule(const Network& net, const std::string& text) {
  if (text == "uniform-gen") return uniform_generator_rule(net);
  const std::string prefix = "weights:";
  if (text.rfind(prefix, 0) == 0) return read_weights(text.substr(prefix.size()));
  throw Error(Errc::InvalidArgument, "--rule expects uniform-gen or weights:<path>, got '" + text + "'");
}

/// Primary output goes to `path` or stdout.
void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write " + path);
  out << text;
}

/// Secondary output: explicit path, else derived from the primary file, else stderr.
void emit_secondary(const std::string& text, const std::string& path, const std::string& primary,
                    const std::string& suffix) {
  if (!path.empty()) return emit(text, path);
  if (!primary.empty() && primary != "-") {
    fs::path derived(primary);
    derived.replace_extension(suffix);
    return emit(text, derived.string());
  }
  std::cerr << text;
}

struct ContextOptions {
  std::string injection;
  std::string rule;
};

Eigen::VectorXd injection_for(const Network& net, const ContextOptions& c) {
  return c.injection.empty() ? net.injections() : read_injections_csv(net, c.injection);
}

/// Bridge columns are evaluated only when an injection or a rule was asked for.
std::optional<BridgeContext> context_for(const Network& net, const ContextOptions& c) {
  if (c.injection.empty() && c.rule.empty()) return std::nullopt;
  return BridgeContext{injection_for(net, c), parse_rule(net, c.rule.empty() ? "uniform-gen" : c.rule)};
}

// ------------------------------------------------------------------ commands

int cmd_partition(const Network& net) {
  const TreePartition tp = irreducible_tree_partition(net);
  const CellDecomposition cd = cell_decomposition(net, tp);
  json doc;
  doc["regions"] = tp.regions;
  doc["bridges"] = tp.bridges;
  doc["cells"] = cd.cells;
  doc["cut_vertices"] = cd.cut_vertices;
  std::cout << doc.dump(2) << '\n';
  return 0;
}

int cmd_flow(const Network& net, double tol) {
  const FlowSolution sol = solve_dc(net, tol);
  std::cout << "line_id,from,to,susceptance,flow\n";
  for (std::size_t k = 0; k < net.line_count(); ++k) {
    const Line& l = net.line(k);
    std::cout << l.id << ',' << l.source << ',' << l.target << ',' << format_number(l.susceptance) << ','
              << format_number(sol.flow[static_cast<Eigen::Index>(k)]) << '\n';
  }
  return 0;
}

std::string_view kind_name(ColumnKind k) {
  switch (k) {
    case ColumnKind::NonBridge: return "non_bridge";
    case ColumnKind::BridgeExtended: return "bridge_extended";
    case ColumnKind::Omitted: return "omitted";
  }
  return "?";
}

int cmd_lodf(const Network& net, const ContextOptions& ctx, double threshold, const std::string& output,
             const std::string& kinds_path, double tol) {
  const LodfMatrix k = lodf_matrix(net, context_for(net, ctx), tol);
  const auto& ids = k.lines();
  std::ostringstream csv;
  csv << "line";
  for (LineId e : ids) csv << ',' << e;
  csv << '\n';
  for (std::size_t row = 0; row < k.size(); ++row) {
    csv << ids[row];
    for (std::size_t col = 0; col < k.size(); ++col) {
      csv << ',';
      if (const auto v = k.at_index(row, col)) csv << (std::abs(*v) < threshold ? "0" : format_number(*v));
    }
    csv << '\n';
  }
  emit(csv.str(), output);

  json sidecar;
  sidecar["threshold"] = threshold;
  sidecar["bridge_context"] = k.context().has_value();
  if (k.context()) sidecar["rule"] = k.context()->rule.name();
  sidecar["columns"] = json::array();
  for (std::size_t col = 0; col < k.size(); ++col) {
    sidecar["columns"].push_back({{"line", ids[col]}, {"kind", kind_name(k.kind(col))}});
  }
  emit_secondary(sidecar.dump(2) + "\n", kinds_path, output, ".kinds.json");
  return 0;
}

int cmd_influence(const Network& net, const ContextOptions& ctx, double threshold, const std::string& dot_path,
                  const std::string& json_path, double tol) {
  const LodfMatrix k = lodf_matrix(net, context_for(net, ctx), tol);
  const InfluenceGraph g = influence_graph(k, threshold);
  if (dot_path.empty() && json_path.empty()) {
    std::cout << g.to_dot(net);
    return 0;
  }
  if (!dot_path.empty()) emit(g.to_dot(net), dot_path);
  if (!json_path.empty()) emit(g.to_json() + "\n", json_path);
  std::cout << g.nodes.size() << " nodes, " << g.edges.size() << " edges at threshold " << threshold
            << (g.includes_bridge_columns ? "" : " (non-bridge columns only)") << '\n';
  return 0;
}

/// Random connected simple graph on n buses with susceptances k/100 in [0.5, 5].
Network random_small_network(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> hundredths(50, 500);
  std::vector<Bus> buses;
  for (std::size_t i = 1; i <= n; ++i) buses.push_back({static_cast<BusId>(i), 0.0, false});
  std::set<std::pair<BusId, BusId>> pairs;
  for (std::size_t v = 2; v <= n; ++v) {
    const auto u = std::uniform_int_distribution<std::size_t>(1, v - 1)(rng);
    pairs.emplace(static_cast<BusId>(u), static_cast<BusId>(v));
  }
  const std::size_t max_lines = std::min(n * (n - 1) / 2, kOracleMaxLines);
  const std::size_t extra = std::uniform_int_distribution<std::size_t>(0, max_lines - (n - 1))(rng);
  std::uniform_int_distribution<std::size_t> pick(1, n);
  while (pairs.size() < n - 1 + extra) {
    const auto a = static_cast<BusId>(pick(rng)), b = static_cast<BusId>(pick(rng));
    if (a != b) pairs.emplace(std::min(a, b), std::max(a, b));
  }
  std::vector<Line> lines;
  for (const auto& [a, b] : pairs) {
    lines.push_back({static_cast<LineId>(lines.size() + 1), a, b, hundredths(rng) / 100.0});
  }
  return Network(std::move(buses), std::move(lines));
}

/// Builds the sub-network spanned by one cell, keeping ids and susceptances.
Network cell_network(const Network& net, const CellDecomposition& cd, std::size_t c) {
  std::vector<Bus> buses;
  for (BusId id : cd.cell_buses(net, c)) buses.push_back({id, 0.0, false});
  std::vector<Line> lines;
  for (LineId id : cd.cells[c]) lines.push_back(net.line(net.line_index(id)));
  return Network(std::move(buses), std::move(lines));
}

struct Discrepancy {
  std::size_t pairs = 0;
  double worst = 0.0;
  std::size_t exact_mismatch = 0;
};

/// Compares the forest oracle on `target` with `k`, whose entries are looked
/// up by line id. With `exact`, the rational matrix route must agree exactly.
void compare(const Network& target, const LodfMatrix& k, bool exact, Discrepancy& d) {
  const auto bridges = find_bridges(target);
  for (const Line& e : target.lines()) {
    if (bridges.count(e.id)) continue;
    const auto rational = exact ? lodf_nonbridge_exact(target, e.id) : std::map<LineId, Rational>{};
    for (const Line& eh : target.lines()) {
      if (eh.id == e.id) continue;
      const Rational oracle = lodf_forest(target, e.id, eh.id);
      d.worst = std::max(d.worst, std::abs(to_double(oracle) - k.at(eh.id, e.id).value()));
      if (exact && rational.at(eh.id) != oracle) ++d.exact_mismatch;
      ++d.pairs;
    }
  }
}

int cmd_verify(const Network& net, std::size_t max_n, std::size_t corpus, std::uint64_t seed, double tol) {
  auto fits = [&](const Network& n) { return n.bus_count() <= max_n && n.line_count() <= kOracleMaxLines; };

  // The file is checked whole when small. Otherwise each cell that fits is
  // checked on its own, since a factor between two lines of one cell only
  // depends on that cell.
  Discrepancy file;
  std::size_t checked_cells = 0;
  const LodfMatrix k = lodf_matrix(net, std::nullopt, tol);
  const bool whole = fits(net);
  if (whole) {
    compare(net, k, true, file);
  } else {
    const TreePartition tp = irreducible_tree_partition(net);
    const CellDecomposition cd = cell_decomposition(net, tp);
    for (std::size_t c = 0; c < cd.cells.size(); ++c) {
      if (cd.cells[c].size() < 3) continue;
      const Network sub = cell_network(net, cd, c);
      if (!fits(sub)) continue;
      compare(sub, k, false, file);
      ++checked_cells;
    }
  }

  Discrepancy random;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < corpus; ++i) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, max_n)(rng);
    const Network g = random_small_network(n, rng);
    compare(g, lodf_matrix(g, std::nullopt, tol), true, random);
  }

  auto ok = [&](const Discrepancy& d) { return d.worst < tol && d.exact_mismatch == 0; };
  const bool pass = ok(file) && ok(random);
  std::cout << "file: " << file.pairs << " pairs ";
  if (whole) {
    std::cout << "(whole network), max discrepancy " << format_number(file.worst) << ", exact mismatches "
              << file.exact_mismatch << '\n';
  } else {
    std::cout << "(" << checked_cells << " cells within --max-n " << max_n << "), max discrepancy "
              << format_number(file.worst) << '\n';
  }
  std::cout << "random: " << corpus << " graphs, " << random.pairs << " pairs, max discrepancy "
            << format_number(random.worst) << ", exact mismatches " << random.exact_mismatch << '\n';
  std::cout << (pass ? "PASS" : "FAIL") << ": max discrepancy " << format_number(std::max(file.worst, random.worst))
            << " (tolerance " << tol << ")\n";
  return pass ? 0 : 1;
}

int cmd_switch(const Network& net, const std::string& off_text, const ContextOptions& ctx, double threshold,
               const std::string& output, const std::string& csv_path, double tol) {
  const std::vector<LineId> off = parse_id_list(off_text);
  const BalanceRule rule = parse_rule(net, ctx.rule.empty() ? "uniform-gen" : ctx.rule);
  const SwitchEvaluation ev = evaluate_switch(net, injection_for(net, ctx), off, rule, {threshold, tol});
  emit(ev.to_json() + "\n", output);
  emit_secondary(ev.flow_changes_csv(), csv_path, output, ".csv");
  return 0;
}

int cmd_switch_search(const Network& net, std::size_t k, std::size_t limit) {
  const auto candidates = enumerate_bridging_cuts(net, k, limit);
  std::cout << "lines,regions,region_sizes,balance\n";
  for (const auto& c : candidates) {
    std::string lines, sizes;
    for (LineId id : c.lines) lines += (lines.empty() ? "" : " ") + std::to_string(id);
    for (std::size_t s : c.region_sizes) sizes += (sizes.empty() ? "" : " ") + std::to_string(s);
    std::cout << lines << ',' << c.region_count << ',' << sizes << ',' << format_number(c.balance) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree partitions, cells and line outage factors for DC power networks"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions opt;
  app.add_option("--perturb", opt.perturb, "Perturb susceptances, e.g. eps=1e-3,dist=uniform,seed=42");
  app.add_option("--tol", opt.tolerance, "Absolute zero tolerance on per-unit quantities")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--collapse", opt.collapse, "Fold dangling trees into their attachment bus first");
  app.add_flag("-v,--verbose", opt.verbose, "Report ingestion details on stderr");

  std::string file;
  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", file, "Network (.m Matpower case or native JSON)")->required()->check(CLI::ExistingFile);
  };
  auto add_context = [](CLI::App* sub, ContextOptions& c) {
    sub->add_option("--injection", c.injection, "CSV bus_id,p overriding the file injections");
    sub->add_option("--rule", c.rule, "Balance rule: uniform-gen or weights:<path>");
  };

  auto* partition = app.add_subcommand("partition", "Regions, bridges, cells and cut vertices as JSON");
  add_file(partition);
  auto* flow = app.add_subcommand("flow", "DC flows as CSV");
  add_file(flow);

  ContextOptions lodf_ctx;
  double lodf_threshold = 0.0;
  std::string lodf_out, lodf_kinds;
  auto* lodf = app.add_subcommand("lodf", "Outage factor matrix as CSV (row: affected line, column: tripped line)");
  add_file(lodf);
  add_context(lodf, lodf_ctx);
  lodf->add_option("--threshold", lodf_threshold, "Print factors below this magnitude as 0")->capture_default_str();
  lodf->add_option("-o,--output", lodf_out, "Matrix CSV path (default stdout)");
  lodf->add_option("--kinds", lodf_kinds, "Column kinds JSON path (default next to --output, else stderr)");

  ContextOptions inf_ctx;
  double inf_threshold = 0.005;
  std::string inf_dot, inf_json;
  auto* influence = app.add_subcommand("influence", "Influence graph between lines");
  add_file(influence);
  add_context(influence, inf_ctx);
  influence->add_option("--threshold", inf_threshold)->capture_default_str();
  influence->add_option("--dot", inf_dot, "Graphviz output path");
  influence->add_option("--json", inf_json, "JSON output path");

  std::size_t max_n = 6, corpus = 200;
  std::uint64_t seed = 1;
  auto* verify = app.add_subcommand("verify", "Check matrix factors against the spanning-forest formula");
  add_file(verify);
  verify->add_option("--max-n", max_n, "Largest bus count handed to the oracle")
      ->check(CLI::Range(std::size_t{2}, kOracleMaxBuses))
      ->capture_default_str();
  verify->add_option("--count", corpus, "Random graphs checked besides the file")->capture_default_str();
  verify->add_option("--seed", seed, "Seed for the random graphs")->capture_default_str();

  ContextOptions sw_ctx;
  std::string off, sw_out, sw_csv;
  double sw_threshold = 0.005;
  auto* sw = app.add_subcommand("switch", "Evaluate switching off a set of lines");
  add_file(sw);
  add_context(sw, sw_ctx);
  sw->add_option("--off", off, "Comma separated line ids")->required();
  sw->add_option("--threshold", sw_threshold)->capture_default_str();
  sw->add_option("-o,--output", sw_out, "JSON path (default stdout)");
  sw->add_option("--csv", sw_csv, "Flow change CSV path (default next to --output, else stderr)");

  std::size_t k_max = 3, limit = 0;
  auto* search = app.add_subcommand("switch-search", "List line sets whose removal splits a region");
  add_file(search);
  search->add_option("--k", k_max, "Largest set size")->check(CLI::Range(1, 3))->capture_default_str();
  search->add_option("--limit", limit, "Keep only the best candidates (0 keeps all)")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const Network net = load(file, opt);
    const double tol = opt.tolerance;
    if (*partition) return cmd_partition(net);
    if (*flow) return cmd_flow(net, tol);
    if (*lodf) return cmd_lodf(net, lodf_ctx, lodf_threshold, lodf_out, lodf_kinds, tol);
    if (*influence) return cmd_influence(net, inf_ctx, inf_threshold, inf_dot, inf_json, tol);
    if (*verify) return cmd_verify(net, max_n, corpus, seed, tol);
    if (*sw) return cmd_switch(net, off, sw_ctx, sw_threshold, sw_out, sw_csv, tol);
    if (*search) return cmd_switch_search(net, k_max, limit);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
