#include "gridpart/localize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gridpart/error.hpp"

namespace gridpart {

std::string_view to_string(PairClass c) noexcept {
  switch (c) {
    case PairClass::SameCell: return "SameCell";
    case PairClass::SameRegionDiffCell: return "SameRegionDiffCell";
    case PairClass::DiffRegion: return "DiffRegion";
    case PairClass::SourceIsBridge: return "SourceIsBridge";
    case PairClass::TargetIsBridge: return "TargetIsBridge";
    case PairClass::Diagonal: return "Diagonal";
  }
  return "Unknown";
}

PairClass classify_pair(const TreePartition& tp, const CellDecomposition& cd, LineId e, LineId ehat) {
  auto known = [&](LineId id) { return tp.is_bridge(id) || cd.cell_of.count(id) != 0; };
  if (!known(e)) throw Error(Errc::UnknownLine, "line " + std::to_string(e));
  if (!known(ehat)) throw Error(Errc::UnknownLine, "line " + std::to_string(ehat));
  if (e == ehat) return PairClass::Diagonal;
  if (tp.is_bridge(e)) return PairClass::SourceIsBridge;
  if (tp.is_bridge(ehat)) return PairClass::TargetIsBridge;
  const std::size_t ce = cd.cell_of.at(e);
  const std::size_t ch = cd.cell_of.at(ehat);
  if (cd.cell_region[ce] != cd.cell_region[ch]) return PairClass::DiffRegion;
  return ce == ch ? PairClass::SameCell : PairClass::SameRegionDiffCell;
}

InfluenceGraph influence_graph(const LodfMatrix& k, double threshold) {
  if (!(threshold > 0.0)) throw Error(Errc::InvalidArgument, "threshold must be positive");
  InfluenceGraph g;
  g.threshold = threshold;
  g.nodes = k.lines();
  for (std::size_t c = 0; c < k.size(); ++c) {
    if (k.kind(c) == ColumnKind::BridgeExtended) g.includes_bridge_columns = true;
  }
  for (std::size_t a = 0; a < k.size(); ++a) {
    for (std::size_t b = a + 1; b < k.size(); ++b) {
      double strength = -1.0;
      if (auto v = k.at_index(a, b)) strength = std::max(strength, std::abs(*v));
      if (auto v = k.at_index(b, a)) strength = std::max(strength, std::abs(*v));
      if (strength >= threshold) g.edges.emplace_back(std::minmax(k.lines()[a], k.lines()[b]));
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::string InfluenceGraph::to_dot(const Network& net) const {
  std::ostringstream out;
  out << "graph influence {\n";
  out << "  // threshold " << threshold << (includes_bridge_columns ? "" : ", non-bridge columns only") << "\n";
  for (LineId id : nodes) {
    const Line& l = net.line(net.line_index(id));
    out << "  l" << id << " [label=\"" << l.source << '-' << l.target << "\"];\n";
  }
  for (const auto& [a, b] : edges) out << "  l" << a << " -- l" << b << ";\n";
  out << "}\n";
  return out.str();
}

std::string InfluenceGraph::to_json() const {
  nlohmann::json doc;
  doc["threshold"] = threshold;
  doc["includes_bridge_columns"] = includes_bridge_columns;
  doc["nodes"] = nodes;
  doc["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : edges) doc["edges"].push_back({a, b});
  return doc.dump(2);
}

SparsityReport sparsity_report(const LodfMatrix& k, const TreePartition& tp, const CellDecomposition& cd,
                               double tolerance) {
  SparsityReport report;
  report.tolerance = tolerance;
  const auto& ids = k.lines();
  for (std::size_t col = 0; col < k.size(); ++col) {
    for (std::size_t row = 0; row < k.size(); ++row) {
      const auto value = k.at_index(row, col);
      if (!value) continue;
      const PairClass cls = classify_pair(tp, cd, ids[col], ids[row]);
      auto& counts = report.by_class[cls];
      ++counts.pairs;
      if (std::abs(*value) >= tolerance) {
        ++counts.nonzero;
        if (!predicted_nonzero(cls)) report.violations.emplace_back(ids[col], ids[row]);
      }
    }
  }
  return report;
}

std::string SparsityReport::to_json() const {
  nlohmann::json doc;
  doc["tolerance"] = tolerance;
  for (const auto& [cls, counts] : by_class) {
    doc["classes"][std::string(gridpart::to_string(cls))] = {{"pairs", counts.pairs}, {"nonzero", counts.nonzero}};
  }
  doc["violations"] = nlohmann::json::array();
  for (const auto& [e, eh] : violations) doc["violations"].push_back({e, eh});
  return doc.dump(2);
}

}  // namespace gridpart
