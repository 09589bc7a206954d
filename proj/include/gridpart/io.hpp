#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gridpart/network.hpp"

namespace gridpart {

// Native JSON:
//   { "baseMVA": 100, "slack": 1,
//     "buses": [{"id": 1, "p": 0.5, "gen": true}, ...],
//     "lines": [{"id": 1, "from": 1, "to": 2, "b": 4.0}, ...] }
// Injections are per-unit; "slack" is optional (lowest bus id otherwise).

Network parse_native(std::string_view json_text);
Network load_native(const std::filesystem::path& path);
std::string to_native_json(const Network& net);
void save_native(const Network& net, const std::filesystem::path& path);

/// What the Matpower ingest did to the raw tables.
struct MatpowerReport {
  std::size_t bus_rows = 0;
  std::size_t branch_rows = 0;
  std::size_t out_of_service = 0;       // status-0 branches dropped
  std::size_t isolated_buses = 0;       // type-4 buses dropped
  std::map<LineId, std::vector<std::size_t>> merged;  // line id -> 1-based branch rows (only when > 1)
  double slack_adjustment = 0.0;        // per-unit added to the slack to balance Pg - Pd
  std::size_t bus_count = 0;
  std::size_t line_count = 0;
};

struct MatpowerCase {
  Network network;
  MatpowerReport report;
};

/// Reads `mpc.baseMVA`, `mpc.bus`, `mpc.gen`, `mpc.branch`. Branch susceptance
/// is 1/x; parallel branches are merged by summing susceptances; the type-3
/// bus is the slack and absorbs any Pg - Pd mismatch.
MatpowerCase parse_matpower(std::string_view text);
MatpowerCase load_matpower(const std::filesystem::path& path);

/// CSV `bus_id,value` (header optional, '#' comments). Unlisted buses get 0.
Eigen::VectorXd read_injections_csv(const Network& net, const std::filesystem::path& path);

/// CSV `bus_id,value` as an ordered map, duplicates rejected.
std::map<BusId, double> read_bus_value_csv(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace gridpart
