#include "eprnet/allocation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "eprnet/errors.hpp"
#include "eprnet/matching.hpp"
#include "eprnet/util.hpp"

namespace eprnet::alloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_inputs(std::span<const double> lambda, std::span<const double> rates) {
  if (lambda.empty()) throw ConfigError("no node pairs");
  if (rates.size() < lambda.size()) {
    throw ConfigError("fewer channels (" + std::to_string(rates.size()) +
                      ") than node pairs (" + std::to_string(lambda.size()) +
                      ")");
  }
  for (double l : lambda) {
    if (!(l > 0.0) || l > 1.0) {
      throw ConfigError("transmittances must lie in (0, 1]");
    }
  }
  for (double r : rates) {
    if (!(r > 0.0)) throw ConfigError("channel rates must be positive");
  }
}

// Pair indices by ascending transmittance (worst loss first), stable.
std::vector<std::size_t> pairs_ascending(std::span<const double> lambda) {
  std::vector<std::size_t> order(lambda.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return lambda[a] < lambda[b];
                   });
  return order;
}

// Channel indices by descending rate, stable.
std::vector<std::size_t> channels_descending(std::span<const double> rates) {
  std::vector<std::size_t> order(rates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return rates[a] > rates[b];
                   });
  return order;
}

Allocation make_allocation(std::vector<std::uint32_t> channel_pair,
                           std::span<const double> lambda,
                           std::span<const double> rates) {
  Allocation a;
  a.m = rates.size();
  a.kappa = lambda.size();
  a.received = compute_received(channel_pair, lambda, rates);
  a.channel_pair = std::move(channel_pair);
  return a;
}

double min_of(const std::vector<double>& v) {
  return *std::min_element(v.begin(), v.end());
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::vector<double> compute_received(
    const std::vector<std::uint32_t>& channel_pair,
    std::span<const double> lambda, std::span<const double> rates) {
  std::vector<double> received(lambda.size(), 0.0);
  for (std::size_t x = 0; x < channel_pair.size(); ++x) {
    received[channel_pair[x]] += lambda[channel_pair[x]] * rates[x];
  }
  return received;
}

Allocation round_robin(std::span<const double> lambda,
                       std::span<const double> rates) {
  check_inputs(lambda, rates);
  const auto pair_order = pairs_ascending(lambda);
  const auto chan_order = channels_descending(rates);
  std::vector<std::uint32_t> assign(rates.size());
  for (std::size_t t = 0; t < chan_order.size(); ++t) {
    assign[chan_order[t]] =
        static_cast<std::uint32_t>(pair_order[t % lambda.size()]);
  }
  return make_allocation(std::move(assign), lambda, rates);
}

StrategyResult first_fit(std::span<const double> lambda,
                         std::span<const double> rates, int search_scale) {
  Stopwatch timer;
  check_inputs(lambda, rates);
  if (search_scale < 1) throw ConfigError("search_scale must be >= 1");
  const std::size_t kappa = lambda.size();
  const std::size_t m = rates.size();
  const auto pair_order = pairs_ascending(lambda);

  auto attempt = [&](double threshold) {
    std::vector<std::uint32_t> assign(m);
    std::vector<double> acc(kappa, 0.0);
    std::size_t j = 0;
    for (std::size_t x = 0; x < m; ++x) {
      const std::size_t p = pair_order[j < kappa ? j : kappa - 1];
      assign[x] = static_cast<std::uint32_t>(p);
      acc[p] += lambda[p] * rates[x];
      if (j < kappa && acc[p] >= threshold) ++j;
    }
    const bool feasible =
        *std::min_element(acc.begin(), acc.end()) >= threshold;
    return std::make_pair(std::move(assign), feasible);
  };

  double total = 0.0;
  for (double r : rates) total += r;
  const std::uint64_t hi = static_cast<std::uint64_t>(
                               std::ceil(total / static_cast<double>(kappa))) *
                           search_scale;
  std::uint64_t lo = 0;  // threshold 0 is always feasible
  std::uint64_t high = hi;
  while (lo < high) {
    const std::uint64_t mid = lo + (high - lo + 1) / 2;
    if (attempt(static_cast<double>(mid) / search_scale).second) {
      lo = mid;
    } else {
      high = mid - 1;
    }
  }
  const double t_star = static_cast<double>(lo) / search_scale;

  StrategyResult result;
  result.strategy = "first_fit";
  result.allocation =
      make_allocation(attempt(t_star).first, lambda, rates);
  result.objective = min_of(result.allocation.received);
  result.threshold = t_star;
  result.upper_bound = result.objective;
  result.seconds = timer.seconds();
  return result;
}

StrategyResult modified_lpt(std::span<const double> lambda,
                            std::span<const double> rates) {
  Stopwatch timer;
  check_inputs(lambda, rates);
  const std::size_t kappa = lambda.size();
  const std::size_t m = rates.size();
  const auto pair_order = pairs_ascending(lambda);
  const auto chan_order = channels_descending(rates);

  std::vector<std::uint32_t> assign(m);
  std::vector<double> acc(kappa, 0.0);
  // Seed round: t-th strongest channel to the t-th worst pair.
  for (std::size_t t = 0; t < kappa; ++t) {
    const std::size_t p = pair_order[t];
    assign[chan_order[t]] = static_cast<std::uint32_t>(p);
    acc[p] += lambda[p] * rates[chan_order[t]];
  }
  // Each remaining channel goes to the currently worst-off pair.
  for (std::size_t t = kappa; t < m; ++t) {
    std::size_t p = 0;
    for (std::size_t q = 1; q < kappa; ++q) {
      if (acc[q] < acc[p]) p = q;
    }
    assign[chan_order[t]] = static_cast<std::uint32_t>(p);
    acc[p] += lambda[p] * rates[chan_order[t]];
  }

  StrategyResult result;
  result.strategy = "modified_lpt";
  result.allocation = make_allocation(std::move(assign), lambda, rates);
  result.objective = min_of(result.allocation.received);
  result.threshold = result.objective;
  result.upper_bound = result.objective;
  result.seconds = timer.seconds();
  return result;
}

namespace {

// Channels a pair can accept at threshold t form a prefix of the
// rate-descending channel order, so a perfect matching of the unsatisfied
// pairs exists iff the ascending prefix lengths dominate 1..|S|.
class BdRound {
 public:
  BdRound(std::span<const double> lambda, std::span<const double> rates,
          const std::vector<double>& acc,
          const std::vector<std::uint32_t>& remaining)
      : lambda_(lambda), rates_(rates), acc_(acc), remaining_(remaining) {
    sorted_ = remaining;
    std::stable_sort(sorted_.begin(), sorted_.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return rates[a] > rates[b];
                     });
  }

  std::size_t prefix_len(std::size_t p, double threshold) const {
    // First position whose channel no longer satisfies the pair.
    auto it = std::partition_point(
        sorted_.begin(), sorted_.end(), [&](std::uint32_t c) {
          return acc_[p] + lambda_[p] * rates_[c] >= threshold;
        });
    return static_cast<std::size_t>(it - sorted_.begin());
  }

  bool feasible(double threshold) const {
    std::vector<std::size_t> prefixes;
    for (std::size_t p = 0; p < lambda_.size(); ++p) {
      if (acc_[p] < threshold) {
        prefixes.push_back(prefix_len(p, threshold));
      }
    }
    if (prefixes.size() > remaining_.size()) return false;
    std::sort(prefixes.begin(), prefixes.end());
    for (std::size_t i = 0; i < prefixes.size(); ++i) {
      if (prefixes[i] < i + 1) return false;
    }
    return true;
  }

 private:
  std::span<const double> lambda_;
  std::span<const double> rates_;
  const std::vector<double>& acc_;
  const std::vector<std::uint32_t>& remaining_;
  std::vector<std::uint32_t> sorted_;
};

}  // namespace

StrategyResult modified_bd(std::span<const double> lambda,
                           std::span<const double> rates) {
  Stopwatch timer;
  check_inputs(lambda, rates);
  const std::size_t kappa = lambda.size();
  const std::size_t m = rates.size();

  std::vector<std::uint32_t> assign(m, 0);
  std::vector<bool> assigned(m, false);
  std::vector<double> acc(kappa, 0.0);
  std::vector<std::uint32_t> remaining(m);
  std::iota(remaining.begin(), remaining.end(), 0);
  double t_star = 0.0;

  // Rounds continue while the still-unsatisfied pairs can all be matched;
  // the feasibility check enforces that, so the loop runs until no
  // threshold increase is possible (first round: every pair, later
  // rounds: zero or one channel per pair).
  while (!remaining.empty()) {
    BdRound round(lambda, rates, acc, remaining);

    // Feasibility changes only at accumulated rates and at the values a
    // single additional channel can reach, so the largest feasible
    // threshold is found by searching that grid.
    std::vector<double> candidates;
    candidates.reserve(kappa * (remaining.size() + 1));
    for (std::size_t p = 0; p < kappa; ++p) {
      if (acc[p] > t_star) candidates.push_back(acc[p]);
      for (std::uint32_t c : remaining) {
        const double v = acc[p] + lambda[p] * rates[c];
        if (v > t_star) candidates.push_back(v);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());
    if (candidates.empty()) break;

    std::size_t lo = 0;
    std::size_t hi = candidates.size();  // exclusive; all below lo feasible
    if (!round.feasible(candidates[0])) {
      hi = 0;
    } else {
      while (lo + 1 < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (round.feasible(candidates[mid])) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
    }
    if (hi == 0) break;  // no improvement possible this round
    t_star = candidates[lo];

    std::vector<std::size_t> unsatisfied;
    for (std::size_t p = 0; p < kappa; ++p) {
      if (acc[p] < t_star) unsatisfied.push_back(p);
    }
    if (unsatisfied.empty()) break;

    // Minimum-total-rate perfect matching of the unsatisfied pairs over
    // the remaining channels, restricted to assignments reaching t_star.
    std::vector<std::vector<double>> cost(
        unsatisfied.size(), std::vector<double>(remaining.size()));
    for (std::size_t r = 0; r < unsatisfied.size(); ++r) {
      const std::size_t p = unsatisfied[r];
      for (std::size_t c = 0; c < remaining.size(); ++c) {
        const double v = acc[p] + lambda[p] * rates[remaining[c]];
        cost[r][c] = v >= t_star ? v : matching::kForbidden;
      }
    }
    const auto match = matching::min_cost_assignment(cost);
    if (match.empty()) {
      throw Error("internal: matching vanished at a feasible threshold");
    }
    for (std::size_t r = 0; r < unsatisfied.size(); ++r) {
      const std::uint32_t c = remaining[match[r]];
      const std::size_t p = unsatisfied[r];
      assign[c] = static_cast<std::uint32_t>(p);
      assigned[c] = true;
      acc[p] += lambda[p] * rates[c];
    }
    std::erase_if(remaining, [&](std::uint32_t c) { return assigned[c]; });
  }

  // Leftover channels cycle over the pairs exactly like round robin.
  if (!remaining.empty()) {
    const auto pair_order = pairs_ascending(lambda);
    std::vector<std::uint32_t> leftovers = remaining;
    std::stable_sort(leftovers.begin(), leftovers.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return rates[a] > rates[b];
                     });
    for (std::size_t t = 0; t < leftovers.size(); ++t) {
      assign[leftovers[t]] =
          static_cast<std::uint32_t>(pair_order[t % kappa]);
    }
  }

  StrategyResult result;
  result.strategy = "modified_bd";
  result.allocation = make_allocation(std::move(assign), lambda, rates);
  result.objective = min_of(result.allocation.received);
  result.threshold = t_star;
  result.upper_bound = result.objective;
  result.seconds = timer.seconds();
  return result;
}

namespace {

// Largest T reachable if the remaining rate mass were divisible: the
// water-filling level with per-pair efficiency lambda.
double waterfill_bound(const std::vector<double>& acc,
                       std::span<const double> lambda, double mass) {
  const std::size_t kappa = acc.size();
  std::vector<std::size_t> order(kappa);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return acc[a] < acc[b];
  });
  double inv_sum = 0.0;
  double ratio_sum = 0.0;
  for (std::size_t k = 0; k < kappa; ++k) {
    const std::size_t p = order[k];
    inv_sum += 1.0 / lambda[p];
    ratio_sum += acc[p] / lambda[p];
    const double level = (mass + ratio_sum) / inv_sum;
    if (k + 1 == kappa || level <= acc[order[k + 1]]) {
      return level;
    }
  }
  return acc[order[0]];  // unreachable
}

struct BnbState {
  std::span<const double> lambda;
  std::vector<std::size_t> chan_order;  // rate-descending
  std::vector<double> chan_rate;        // in chan_order
  std::vector<double> suffix_mass;
  std::vector<double> acc;
  std::vector<std::uint32_t> assign_ordered;  // pair per ordered channel
  std::vector<std::uint32_t> best_ordered;
  double best = -kInf;
  std::vector<std::size_t> pair_rank;
  std::chrono::steady_clock::time_point deadline;
  std::uint64_t nodes = 0;
  bool timed_out = false;

  void search(std::size_t depth) {
    if (timed_out) return;
    if ((++nodes & 1023u) == 0 &&
        std::chrono::steady_clock::now() > deadline) {
      timed_out = true;
      return;
    }
    const std::size_t kappa = lambda.size();
    if (depth == assign_ordered.size()) {
      const double objective = *std::min_element(acc.begin(), acc.end());
      if (objective > best) {
        best = objective;
        best_ordered = assign_ordered;
      }
      return;
    }
    if (waterfill_bound(acc, lambda, suffix_mass[depth]) <= best) {
      return;
    }
    std::vector<std::size_t> order(kappa);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (acc[a] != acc[b]) return acc[a] < acc[b];
      return pair_rank[a] < pair_rank[b];
    });
    for (std::size_t p : order) {
      const double contribution = lambda[p] * chan_rate[depth];
      acc[p] += contribution;
      assign_ordered[depth] = static_cast<std::uint32_t>(p);
      search(depth + 1);
      acc[p] -= contribution;
      if (timed_out) return;
    }
  }
};

}  // namespace

StrategyResult exact_maxmin(std::span<const double> lambda,
                            std::span<const double> rates,
                            const ExactOptions& options) {
  Stopwatch timer;
  check_inputs(lambda, rates);
  const std::size_t kappa = lambda.size();
  const std::size_t m = rates.size();

  BnbState state;
  state.lambda = lambda;
  state.chan_order = channels_descending(rates);
  state.chan_rate.reserve(m);
  for (std::size_t c : state.chan_order) state.chan_rate.push_back(rates[c]);
  state.suffix_mass.assign(m + 1, 0.0);
  for (std::size_t d = m; d-- > 0;) {
    state.suffix_mass[d] = state.suffix_mass[d + 1] + state.chan_rate[d];
  }
  state.acc.assign(kappa, 0.0);
  state.assign_ordered.assign(m, 0);
  state.pair_rank.resize(kappa);
  std::iota(state.pair_rank.begin(), state.pair_rank.end(), 0);
  if (options.shuffle_seed) {
    Rng rng(*options.shuffle_seed);
    rng.shuffle(state.pair_rank);
  } else {
    // A greedy incumbent prunes most of the tree up front.
    StrategyResult seed = modified_lpt(lambda, rates);
    state.best = seed.objective;
    state.best_ordered.resize(m);
    for (std::size_t d = 0; d < m; ++d) {
      state.best_ordered[d] = seed.allocation.channel_pair[state.chan_order[d]];
    }
  }
  const double root_bound =
      waterfill_bound(state.acc, lambda, state.suffix_mass[0]);
  state.deadline = std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(options.time_limit_s));
  state.search(0);

  StrategyResult result;
  result.strategy = "exact";
  result.complete = !state.timed_out;
  if (state.best_ordered.empty()) {
    // Budget ran out before any leaf: fall back to a feasible incumbent.
    StrategyResult seed = modified_lpt(lambda, rates);
    result.allocation = std::move(seed.allocation);
  } else {
    std::vector<std::uint32_t> assign(m, 0);
    for (std::size_t d = 0; d < m; ++d) {
      assign[state.chan_order[d]] = state.best_ordered[d];
    }
    result.allocation = make_allocation(std::move(assign), lambda, rates);
  }
  result.objective = min_of(result.allocation.received);
  result.threshold = result.objective;
  result.upper_bound = result.complete ? result.objective : root_bound;
  result.seconds = timer.seconds();
  return result;
}

void write_csv(const Allocation& a, std::span<const double> lambda,
               std::span<const double> rates,
               const std::vector<std::string>& pair_labels, std::ostream& os) {
  os << "channel_index,pair,rate_contribution\n";
  for (std::size_t x = 0; x < a.channel_pair.size(); ++x) {
    const std::uint32_t p = a.channel_pair[x];
    os << (x + 1) << ',' << pair_labels.at(p) << ','
       << format_double(lambda[p] * rates[x]) << '\n';
  }
}

nlohmann::json result_json(const StrategyResult& r) {
  nlohmann::json j;
  j["strategy"] = r.strategy;
  j["objective"] = r.objective;
  j["threshold"] = r.threshold;
  j["complete"] = r.complete;
  j["upper_bound"] = r.upper_bound;
  j["seconds"] = r.seconds;
  return j;
}

}  // namespace eprnet::alloc
