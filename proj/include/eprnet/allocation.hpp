#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace eprnet::alloc {

// Partition of m channels among kappa node pairs. channel_pair[x] is the
// pair owning channel x, so every channel is assigned exactly once by
// construction; received is the canonical recomputation of the per-pair
// EPR rates.
struct Allocation {
  std::size_t m = 0;
  std::size_t kappa = 0;
  std::vector<std::uint32_t> channel_pair;
  std::vector<double> received;
};

struct StrategyResult {
  Allocation allocation;
  std::string strategy;
  double objective = 0.0;    // min over received
  double threshold = 0.0;    // internal search value where applicable
  bool complete = true;      // false when the exact search ran out of budget
  double upper_bound = 0.0;  // proven bound; equals objective when complete
  double seconds = 0.0;
};

// received[p] = lambda[p] * sum of rates of p's channels, accumulated in
// ascending channel order. All strategies report through this so results
// are bit-recomputable.
std::vector<double> compute_received(
    const std::vector<std::uint32_t>& channel_pair,
    std::span<const double> lambda, std::span<const double> rates);

// Worst pairs (ascending transmittance) pick the strongest channels in
// cyclic order.
Allocation round_robin(std::span<const double> lambda,
                       std::span<const double> rates);

// Sequential channels feed the current worst pair until it reaches T;
// the largest feasible T is found by binary search over the integer grid
// scaled by search_scale (grid step 1/search_scale). Channels left after
// every pair is satisfied stay with the last pair reached.
StrategyResult first_fit(std::span<const double> lambda,
                         std::span<const double> rates, int search_scale = 1);

// One strongest channel per pair, then each remaining channel goes to the
// pair with the lowest accumulated rate.
StrategyResult modified_lpt(std::span<const double> lambda,
                            std::span<const double> rates);

// Iterative matching rounds: raise T while a perfect matching of the
// still-unsatisfied pairs exists, commit the minimum-total-rate matching,
// repeat while at least kappa channels remain; leftovers go round-robin.
// Achieves at least 1/(m - kappa + 1) of the optimum.
StrategyResult modified_bd(std::span<const double> lambda,
                           std::span<const double> rates);

struct ExactOptions {
  double time_limit_s = 30.0;
  // Randomizes the branching order among equally-needy pairs; the optimal
  // objective is unchanged but tie assignments vary, for Jain averaging.
  std::optional<std::uint64_t> shuffle_seed;
};

// Branch and bound over channel -> pair assignments with a divisible
// water-filling relaxation bound. When the budget runs out the result is
// marked incomplete and carries the incumbent and bound.
StrategyResult exact_maxmin(std::span<const double> lambda,
                            std::span<const double> rates,
                            const ExactOptions& options = {});

// Columns: channel_index, pair, rate_contribution (lambda_p * rate_x).
void write_csv(const Allocation& a, std::span<const double> lambda,
               std::span<const double> rates,
               const std::vector<std::string>& pair_labels, std::ostream& os);

nlohmann::json result_json(const StrategyResult& r);

}  // namespace eprnet::alloc
