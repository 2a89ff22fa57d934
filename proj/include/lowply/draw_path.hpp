#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "lowply/errors.hpp"

namespace lowply {

/// Edge lengths of a 2-drawing of an anchored path.
///
/// `weights[i]` is the weight of the i-th path vertex. Output index 0 is the
/// anchor edge, index i >= 1 the edge between path vertices i-1 and i.
/// Lengths start at w_1 and w_i + w_{i+1}; edges are then visited longest first
/// (ties: lower index) and each visit lifts both neighbours to at least half
/// its length. A visited edge is never lifted again, so the result satisfies
/// ½ ≤ l_{i+1}/l_i ≤ 2 everywhere and stays within 6·Σw.
///
/// All values are integers halved a bounded number of times, so they are exact
/// in double precision.
inline std::vector<double> drawpath_lengths(std::span<const std::int64_t> weights) {
  if (weights.empty()) throw PreconditionError("drawpath_lengths needs at least one weight");
  for (auto w : weights)
    if (w < 1) throw PreconditionError("drawpath_lengths needs positive weights");

  const std::size_t m = weights.size();
  std::vector<double> len(m);
  len[0] = static_cast<double>(weights[0]);
  for (std::size_t i = 1; i < m; ++i) len[i] = static_cast<double>(weights[i - 1] + weights[i]);

  // ordered by (-length, index): begin() is the next edge to visit
  std::set<std::pair<double, std::size_t>> pending;
  for (std::size_t i = 0; i < m; ++i) pending.emplace(-len[i], i);
  std::vector<char> visited(m, 0);

  auto lift = [&](std::size_t k, double floor) {
    if (visited[k] || len[k] >= floor) return;
    pending.erase({-len[k], k});
    len[k] = floor;
    pending.emplace(-len[k], k);
  };

  while (!pending.empty()) {
    const std::size_t i = pending.begin()->second;
    pending.erase(pending.begin());
    visited[i] = 1;
    const double half = len[i] / 2.0;
    if (i > 0) lift(i - 1, half);
    if (i + 1 < m) lift(i + 1, half);
  }
  return len;
}

}  // namespace lowply
