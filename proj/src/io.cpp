#include "gridpart/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "gridpart/error.hpp"

namespace gridpart {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------- native JSON

Network parse_native(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  try {
    std::vector<Bus> buses;
    for (const auto& b : doc.at("buses")) {
      buses.push_back({b.at("id").get<BusId>(), b.value("p", 0.0), b.value("gen", false)});
    }
    std::vector<Line> lines;
    for (const auto& l : doc.at("lines")) {
      lines.push_back({l.at("id").get<LineId>(), l.at("from").get<BusId>(), l.at("to").get<BusId>(),
                       l.at("b").get<double>()});
    }
    std::optional<BusId> slack;
    if (doc.contains("slack") && !doc["slack"].is_null()) slack = doc["slack"].get<BusId>();
    const double base = doc.value("baseMVA", 100.0);
    return Network(std::move(buses), std::move(lines), slack, base);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

Network load_native(const std::filesystem::path& path) { return parse_native(read_text_file(path)); }

std::string to_native_json(const Network& net) {
  json doc;
  doc["baseMVA"] = net.base_mva();
  doc["slack"] = net.slack();
  doc["buses"] = json::array();
  for (const auto& b : net.buses()) {
    doc["buses"].push_back({{"id", b.id}, {"p", b.injection}, {"gen", b.is_generator}});
  }
  doc["lines"] = json::array();
  for (const auto& l : net.lines()) {
    doc["lines"].push_back({{"id", l.id}, {"from", l.source}, {"to", l.target}, {"b", l.susceptance}});
  }
  return doc.dump(2);
}

void save_native(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << to_native_json(net) << '\n';
}

// ------------------------------------------------------------------- Matpower

namespace {

std::string strip_comments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool comment = false;
  for (char c : text) {
    if (c == '\n') comment = false;
    if (c == '%') comment = true;
    if (!comment) out.push_back(c);
  }
  return out;
}

using Table = std::vector<std::vector<double>>;

double parse_number(const std::string& token) {
  if (token == "Inf" || token == "inf") return HUGE_VAL;
  if (token == "-Inf" || token == "-inf") return -HUGE_VAL;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') throw ParseError("bad number '" + token + "'");
  return v;
}

/// Finds `mpc.<name> = [ ... ];` and splits it into rows.
std::optional<Table> find_table(const std::string& text, const std::string& name) {
  const std::string key = "mpc." + name;
  std::size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    std::size_t i = pos + key.size();
    pos = i;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size() || text[i] != '=') continue;
    ++i;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size() || text[i] != '[') continue;
    const std::size_t close = text.find(']', i);
    if (close == std::string::npos) throw ParseError("unterminated matrix mpc." + name);

    Table rows;
    std::vector<double> row;
    std::string token;
    auto flush_token = [&] {
      if (!token.empty()) {
        row.push_back(parse_number(token));
        token.clear();
      }
    };
    auto flush_row = [&] {
      flush_token();
      if (!row.empty()) rows.push_back(std::move(row));
      row.clear();
    };
    for (std::size_t j = i + 1; j < close; ++j) {
      const char c = text[j];
      if (c == ';' || c == '\n') {
        flush_row();
      } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
        flush_token();
      } else {
        token.push_back(c);
      }
    }
    flush_row();
    return rows;
  }
  return std::nullopt;
}

std::optional<double> find_scalar(const std::string& text, const std::string& name) {
  const std::string key = "mpc." + name;
  const std::size_t pos = text.find(key);
  if (pos == std::string::npos) return std::nullopt;
  std::size_t i = text.find('=', pos);
  const std::size_t end = text.find(';', pos);
  if (i == std::string::npos || end == std::string::npos || i > end) return std::nullopt;
  std::string token = text.substr(i + 1, end - i - 1);
  token.erase(0, token.find_first_not_of(" \t\r\n"));
  token.erase(token.find_last_not_of(" \t\r\n") + 1);
  return parse_number(token);
}

void require_columns(const Table& t, std::size_t cols, const std::string& name) {
  for (const auto& row : t) {
    if (row.size() < cols) throw ParseError("mpc." + name + " row has too few columns");
  }
}

}  // namespace

MatpowerCase parse_matpower(std::string_view raw) {
  const std::string text = strip_comments(raw);
  const double base = find_scalar(text, "baseMVA").value_or(100.0);
  const auto bus_table = find_table(text, "bus");
  const auto gen_table = find_table(text, "gen");
  const auto branch_table = find_table(text, "branch");
  if (!bus_table || !branch_table) throw ParseError("missing mpc.bus or mpc.branch");
  require_columns(*bus_table, 3, "bus");
  require_columns(*branch_table, 11, "branch");
  if (gen_table) require_columns(*gen_table, 2, "gen");

  MatpowerReport report;
  report.bus_rows = bus_table->size();
  report.branch_rows = branch_table->size();

  // BUS_I, BUS_TYPE, PD
  std::vector<Bus> buses;
  std::unordered_map<BusId, std::size_t> bus_pos;
  std::unordered_map<BusId, bool> isolated;
  std::optional<BusId> slack;
  for (const auto& row : *bus_table) {
    const auto id = static_cast<BusId>(row[0]);
    const int type = static_cast<int>(row[1]);
    if (type == 4) {
      isolated[id] = true;
      ++report.isolated_buses;
      continue;
    }
    if (type == 3) {
      if (slack) throw ParseError("more than one type-3 bus");
      slack = id;
    }
    if (!bus_pos.emplace(id, buses.size()).second) {
      throw ValidationError(Errc::DuplicateBusId, "bus " + std::to_string(id));
    }
    buses.push_back({id, -row[2] / base, false});
  }
  if (!slack) throw ValidationError(Errc::NoSlackBus, "no type-3 bus in mpc.bus");

  // GEN_BUS, PG
  if (gen_table) {
    for (const auto& row : *gen_table) {
      const auto id = static_cast<BusId>(row[0]);
      if (isolated.count(id)) continue;
      const auto it = bus_pos.find(id);
      if (it == bus_pos.end()) throw ValidationError(Errc::UnknownBus, "gen at bus " + std::to_string(id));
      buses[it->second].injection += row[1] / base;
      buses[it->second].is_generator = true;
    }
  }

  double total = 0.0;
  for (const auto& b : buses) total += b.injection;
  report.slack_adjustment = -total;
  buses[bus_pos.at(*slack)].injection -= total;

  // F_BUS, T_BUS, BR_X, BR_STATUS
  std::vector<Line> lines;
  std::map<std::pair<BusId, BusId>, std::size_t> by_pair;
  for (std::size_t r = 0; r < branch_table->size(); ++r) {
    const auto& row = (*branch_table)[r];
    const auto from = static_cast<BusId>(row[0]);
    const auto to = static_cast<BusId>(row[1]);
    const double x = row[3];
    if (row[10] == 0.0) {
      ++report.out_of_service;
      continue;
    }
    if (isolated.count(from) || isolated.count(to)) continue;
    const std::string tag = "branch row " + std::to_string(r + 1);
    if (x == 0.0) throw ValidationError(Errc::ZeroReactance, tag);
    if (from == to) throw ValidationError(Errc::SelfLoop, tag);
    const double b = 1.0 / x;
    const auto key = std::minmax(from, to);
    const auto found = by_pair.find(key);
    if (found != by_pair.end()) {
      Line& line = lines[found->second];
      line.susceptance += b;
      auto& rows = report.merged[line.id];
      rows.push_back(r + 1);
      continue;
    }
    const auto id = static_cast<LineId>(lines.size() + 1);
    by_pair.emplace(key, lines.size());
    lines.push_back({id, from, to, b});
    report.merged[id] = {r + 1};
  }
  for (auto it = report.merged.begin(); it != report.merged.end();) {
    it = it->second.size() > 1 ? std::next(it) : report.merged.erase(it);
  }

  MatpowerCase out{Network(std::move(buses), std::move(lines), slack, base), report};
  out.report.bus_count = out.network.bus_count();
  out.report.line_count = out.network.line_count();
  return out;
}

MatpowerCase load_matpower(const std::filesystem::path& path) {
  return parse_matpower(read_text_file(path));
}

// ------------------------------------------------------------------------ CSV

std::map<BusId, double> read_bus_value_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::map<BusId, double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(path.string() + ":" + std::to_string(lineno));
    const std::string key = line.substr(0, comma);
    const std::string value = line.substr(comma + 1);
    char* end = nullptr;
    const long id = std::strtol(key.c_str(), &end, 10);
    if (end == key.c_str()) {
      if (lineno == 1 || out.empty()) continue;  // header
      throw ParseError(path.string() + ":" + std::to_string(lineno) + " bad bus id");
    }
    std::string v = value;
    v.erase(0, v.find_first_not_of(" \t"));
    if (!out.emplace(id, parse_number(v)).second) {
      throw ParseError(path.string() + ": duplicate bus " + std::to_string(id));
    }
  }
  return out;
}

Eigen::VectorXd read_injections_csv(const Network& net, const std::filesystem::path& path) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.bus_count()));
  for (const auto& [id, value] : read_bus_value_csv(path)) {
    p[static_cast<Eigen::Index>(net.bus_index(id))] = value;
  }
  return p;
}

}  // namespace gridpart
