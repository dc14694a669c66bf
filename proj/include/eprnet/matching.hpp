#pragma once

#include <vector>

namespace eprnet::matching {

// Forbidden assignment sentinel; any finite cost must stay well below it.
inline constexpr double kForbidden = 1e100;

// Minimum-cost assignment of every row to a distinct column
// (rows <= columns). cost[r][c] == kForbidden marks a forbidden pair.
// Returns the matched column per row, or an empty vector when no
// assignment avoiding forbidden pairs exists.
std::vector<int> min_cost_assignment(
    const std::vector<std::vector<double>>& cost);

}  // namespace eprnet::matching
