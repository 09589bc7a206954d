#pragma once

#include <cstddef>
#include <span>

#include "gridpart/exact.hpp"
#include "gridpart/graph.hpp"
#include "gridpart/network.hpp"

namespace gridpart {

/// Enumeration limits; larger inputs throw `Error(TooLarge)`.
inline constexpr std::size_t kOracleMaxBuses = 10;
inline constexpr std::size_t kOracleMaxLines = 20;

/// Numerator families and denominator of the spanning-forest LODF formula for
/// e = (i, j), ê = (w, z):
///   positive    Σ χ(F) over 2-forests separating {i, w} from {j, z}
///   negative    Σ χ(F) over 2-forests separating {i, z} from {j, w}
///   denominator Σ χ(T) over spanning trees avoiding e
/// where χ multiplies the susceptances of the chosen lines.
struct ForestWeight {
  Rational numerator_pos;
  Rational numerator_neg;
  Rational denominator;
};

/// Σ over spanning trees using only `allowed` lines (empty mask = all) of the
/// product of their susceptances, by exhaustive enumeration. 0 if none exist.
Rational spanning_tree_weight(const Network& net, const EdgeMask& allowed = {});

/// The same quantity from the weighted Matrix-Tree theorem (a cofactor of the
/// Laplacian restricted to `allowed`).
Rational matrix_tree_weight(const Network& net, const EdgeMask& allowed = {});

/// Σ χ(F) over spanning forests with exactly two trees, one containing
/// `group1` and the other `group2`. 0 when the groups intersect.
Rational two_forest_weight(const Network& net, std::span<const BusId> group1, std::span<const BusId> group2);

/// Throws `DisconnectsGraph` when e is a bridge. Also asserts that no forest
/// lands in both numerator families.
ForestWeight forest_weight(const Network& net, LineId e, LineId ehat);

/// K(e, ê) from spanning forests, exactly.
Rational lodf_forest(const Network& net, LineId e, LineId ehat);

}  // namespace gridpart
