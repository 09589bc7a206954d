#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "gridpart/balance.hpp"
#include "gridpart/exact.hpp"
#include "gridpart/flow.hpp"
#include "gridpart/network.hpp"

namespace gridpart {

/// Factors K(e, ê) for one outaged line e, keyed by ê. Never contains e.
using LineFactors = std::map<LineId, double>;

enum class ColumnKind {
  NonBridge,       // injection independent
  BridgeExtended,  // computed under a BridgeContext
  Omitted,         // bridge column, no context supplied
};

/// Injection and balance rule under which bridge columns are evaluated.
struct BridgeContext {
  Eigen::VectorXd injection;
  BalanceRule rule;
};

/// m×m factor matrix. Row ê, column e holds K(e, ê), the change on ê per unit
/// of pre-outage flow on e. Diagonal and omitted columns carry no value.
class LodfMatrix {
 public:
  LodfMatrix(std::vector<LineId> lines, Eigen::MatrixXd values, std::vector<ColumnKind> kinds,
             std::optional<BridgeContext> context);

  std::size_t size() const noexcept { return lines_.size(); }
  const std::vector<LineId>& lines() const noexcept { return lines_; }
  ColumnKind kind(std::size_t col) const { return kinds_[col]; }
  const std::optional<BridgeContext>& context() const noexcept { return context_; }

  /// K(e = lines[col], ê = lines[row]); nullopt on the diagonal or an omitted column.
  std::optional<double> at_index(std::size_t row, std::size_t col) const;
  std::optional<double> at(LineId ehat, LineId e) const;

  /// Raw storage; NaN where `at_index` is nullopt.
  const Eigen::MatrixXd& values() const noexcept { return values_; }

 private:
  std::vector<LineId> lines_;
  std::map<LineId, std::size_t> index_;
  Eigen::MatrixXd values_;
  std::vector<ColumnKind> kinds_;
  std::optional<BridgeContext> context_;
};

/// K(e, ê) = B_ê (C_ê^T L⁺ C_e) / (1 - B_e C_e^T L⁺ C_e) for a non-bridge e.
/// Throws `BridgeColumn` for bridges, `NearSingularDenominator` when the
/// denominator falls below `tolerance`.
LineFactors lodf_nonbridge(const Network& net, LineId e, double tolerance = kDefaultTolerance);

/// Same formula evaluated in exact rational arithmetic on rationalized
/// susceptances (see `to_rational`).
std::map<LineId, Rational> lodf_nonbridge_exact(const Network& net, LineId e);

/// Extended factor for a bridge e: trip e, rebalance each side with `rule`,
/// re-solve, and divide the flow change by the pre-outage P_e.
LineFactors extended_lodf(const Network& net, const Eigen::VectorXd& injection, const BalanceRule& rule,
                          LineId e, double tolerance = kDefaultTolerance);

/// All columns. Bridge columns need `context`; without it they are Omitted.
LodfMatrix lodf_matrix(const Network& net, const std::optional<BridgeContext>& context = std::nullopt,
                       double tolerance = kDefaultTolerance);

}  // namespace gridpart
