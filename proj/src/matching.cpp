#include "eprnet/matching.hpp"

#include <limits>

namespace eprnet::matching {

// Hungarian algorithm, potentials formulation with one augmentation per
// row; O(rows^2 * cols).
std::vector<int> min_cost_assignment(
    const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) return {};
  const int m = static_cast<int>(cost[0].size());
  if (m < n) return {};

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based with a virtual row/column 0.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> way(m + 1, 0);
  std::vector<int> matched_row(m + 1, 0);  // column -> row

  for (int r = 1; r <= n; ++r) {
    matched_row[0] = r;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = matched_row[j0];
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 < 0 || delta > 0.5 * kForbidden) return {};  // only forbidden left
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[matched_row[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (matched_row[j0] != 0);
    do {
      const int j1 = way[j0];
      matched_row[j0] = matched_row[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> result(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (matched_row[j] > 0) result[matched_row[j] - 1] = j - 1;
  }
  return result;
}

}  // namespace eprnet::matching
