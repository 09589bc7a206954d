#include "gridpart/forest_oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridpart/error.hpp"

namespace gridpart {

namespace {

void check_size(const Network& net) {
  if (net.bus_count() > kOracleMaxBuses || net.line_count() > kOracleMaxLines) {
    throw Error(Errc::TooLarge, std::to_string(net.bus_count()) + " buses / " +
                                    std::to_string(net.line_count()) + " lines exceeds the oracle limit");
  }
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

/// Calls fn(subset, sets) for every `size`-subset of `pool` that is acyclic;
/// `sets` holds the resulting components.
template <typename Fn>
void for_each_forest(const Network& net, const std::vector<std::size_t>& pool, std::size_t size, Fn&& fn) {
  if (size > pool.size()) return;
  std::vector<std::size_t> pick(size);
  std::iota(pick.begin(), pick.end(), 0);
  std::vector<std::size_t> subset(size);
  while (true) {
    DisjointSets sets(net.bus_count());
    bool acyclic = true;
    for (std::size_t i = 0; i < size && acyclic; ++i) {
      subset[i] = pool[pick[i]];
      acyclic = sets.unite(net.source_index(subset[i]), net.target_index(subset[i]));
    }
    if (acyclic) fn(subset, sets);

    // next combination
    std::size_t i = size;
    while (i > 0 && pick[i - 1] == pool.size() - size + i - 1) --i;
    if (i == 0) return;
    ++pick[i - 1];
    for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
}

std::vector<Rational> rational_susceptances(const Network& net) {
  std::vector<Rational> b(net.line_count());
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = to_rational(net.line(k).susceptance);
  return b;
}

Rational weight_of(const std::vector<Rational>& b, const std::vector<std::size_t>& lines) {
  Rational w = 1;
  for (std::size_t k : lines) w *= b[k];
  return w;
}

std::vector<std::size_t> pool_of(const Network& net, const EdgeMask& allowed) {
  std::vector<std::size_t> pool;
  for (std::size_t k = 0; k < net.line_count(); ++k) {
    if (allowed.empty() || allowed[k]) pool.push_back(k);
  }
  return pool;
}

std::vector<std::size_t> indices_of(const Network& net, std::span<const BusId> ids) {
  std::vector<std::size_t> out;
  for (BusId id : ids) out.push_back(net.bus_index(id));
  return out;
}

/// True when every vertex of `group` sits in one set; `root` receives it.
bool together(DisjointSets& sets, const std::vector<std::size_t>& group, std::size_t& root) {
  if (group.empty()) return true;
  root = sets.find(group.front());
  for (std::size_t v : group) {
    if (sets.find(v) != root) return false;
  }
  return true;
}

bool separates(DisjointSets& sets, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::size_t ra = static_cast<std::size_t>(-1), rb = static_cast<std::size_t>(-2);
  if (!together(sets, a, ra) || !together(sets, b, rb)) return false;
  return a.empty() || b.empty() || ra != rb;
}

}  // namespace

Rational spanning_tree_weight(const Network& net, const EdgeMask& allowed) {
  check_size(net);
  const auto b = rational_susceptances(net);
  Rational total = 0;
  if (net.bus_count() == 1) return 1;
  for_each_forest(net, pool_of(net, allowed), net.bus_count() - 1,
                  [&](const std::vector<std::size_t>& lines, DisjointSets&) { total += weight_of(b, lines); });
  return total;
}

Rational matrix_tree_weight(const Network& net, const EdgeMask& allowed) {
  const std::size_t n = net.bus_count();
  if (n == 1) return 1;
  RationalMatrix lap(n - 1, n - 1);
  // Drop the last vertex's row and column.
  for (std::size_t k = 0; k < net.line_count(); ++k) {
    if (!allowed.empty() && !allowed[k]) continue;
    const Rational bk = to_rational(net.line(k).susceptance);
    const std::size_t s = net.source_index(k);
    const std::size_t t = net.target_index(k);
    if (s < n - 1) lap(s, s) += bk;
    if (t < n - 1) lap(t, t) += bk;
    if (s < n - 1 && t < n - 1) {
      lap(s, t) -= bk;
      lap(t, s) -= bk;
    }
  }
  return determinant(std::move(lap));
}

Rational two_forest_weight(const Network& net, std::span<const BusId> group1, std::span<const BusId> group2) {
  check_size(net);
  const auto g1 = indices_of(net, group1);
  const auto g2 = indices_of(net, group2);
  for (std::size_t v : g1) {
    if (std::find(g2.begin(), g2.end(), v) != g2.end()) return 0;
  }
  if (net.bus_count() < 2) return 0;
  const auto b = rational_susceptances(net);
  Rational total = 0;
  for_each_forest(net, pool_of(net, {}), net.bus_count() - 2,
                  [&](const std::vector<std::size_t>& lines, DisjointSets& sets) {
                    if (separates(sets, g1, g2)) total += weight_of(b, lines);
                  });
  return total;
}

ForestWeight forest_weight(const Network& net, LineId e, LineId ehat) {
  check_size(net);
  const std::size_t k = net.line_index(e);
  const std::size_t kh = net.line_index(ehat);
  if (k == kh) throw Error(Errc::InvalidArgument, "e and ehat must differ");

  EdgeMask without(net.line_count(), true);
  without[k] = false;
  ForestWeight out;
  out.denominator = spanning_tree_weight(net, without);
  if (out.denominator == 0) {
    throw Error(Errc::DisconnectsGraph, "removing line " + std::to_string(e) + " disconnects the network");
  }

  const std::size_t i = net.source_index(k), j = net.target_index(k);
  const std::size_t w = net.source_index(kh), z = net.target_index(kh);
  const std::vector<std::size_t> iw{i, w}, jz{j, z}, iz{i, z}, jw{j, w};
  const bool pos_possible = i != z && j != w;  // {i,w} ∩ {j,z} = ∅ needs i≠z, w≠j (i≠j, w≠z always)
  const bool neg_possible = i != w && j != z;

  const auto b = rational_susceptances(net);
  for_each_forest(net, pool_of(net, {}), net.bus_count() - 2,
                  [&](const std::vector<std::size_t>& lines, DisjointSets& sets) {
                    const bool pos = pos_possible && separates(sets, iw, jz);
                    const bool neg = neg_possible && separates(sets, iz, jw);
                    if (pos && neg) throw std::logic_error("2-forest counted in both numerator families");
                    if (pos) out.numerator_pos += weight_of(b, lines);
                    if (neg) out.numerator_neg += weight_of(b, lines);
                  });
  return out;
}

Rational lodf_forest(const Network& net, LineId e, LineId ehat) {
  const ForestWeight fw = forest_weight(net, e, ehat);
  const Rational bh = to_rational(net.line(net.line_index(ehat)).susceptance);
  return bh * (fw.numerator_pos - fw.numerator_neg) / fw.denominator;
}

}  // namespace gridpart
