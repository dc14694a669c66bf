#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "eprnet/allocation.hpp"
#include "eprnet/errors.hpp"
#include "eprnet/util.hpp"
#include "oracles.hpp"

using namespace eprnet;
using doctest::Approx;

namespace {

const std::vector<double> kLambda = {0.1, 0.5};
const std::vector<double> kRates = {5.0, 3.0, 1.0};

struct Instance {
  std::vector<double> lambda;
  std::vector<double> rates;
};

Instance random_instance(Rng& rng, std::size_t max_kappa = 3,
                         std::size_t max_m = 6) {
  Instance inst;
  const std::size_t kappa = 1 + rng.bounded(max_kappa);
  const std::size_t m = kappa + rng.bounded(max_m - kappa + 1);
  inst.lambda.resize(kappa);
  inst.rates.resize(m);
  for (auto& l : inst.lambda) l = 0.05 + 0.95 * rng.unit();
  for (auto& r : inst.rates) r = 1.0 + static_cast<double>(rng.bounded(20));
  return inst;
}

double min_received(const alloc::Allocation& a) {
  return *std::min_element(a.received.begin(), a.received.end());
}

}  // namespace

TEST_SUITE("allocation") {

TEST_CASE("round robin pairs worst transmittance with strongest channels") {
  const auto a = alloc::round_robin(kLambda, kRates);
  CHECK(a.received[0] == Approx(0.6));  // 0.1 * (5 + 1)
  CHECK(a.received[1] == Approx(1.5));  // 0.5 * 3
  CHECK(a.channel_pair == std::vector<std::uint32_t>{0, 1, 0});

  // kappa == m with equal rates: one channel each, received = lambda * r.
  const std::vector<double> lam = {0.3, 0.9, 0.6};
  const std::vector<double> flat = {7.0, 7.0, 7.0};
  const auto b = alloc::round_robin(lam, flat);
  for (std::size_t p = 0; p < 3; ++p) {
    CHECK(b.received[p] == Approx(lam[p] * 7.0));
  }
}

TEST_CASE("first fit: integer search and leftover channels") {
  const auto r = alloc::first_fit(kLambda, kRates);
  // T = 1 is infeasible for the lambda = 0.1 pair, so the search stops at 0
  // and the tail channels stay with the last pair reached.
  CHECK(r.threshold == 0.0);
  CHECK(r.allocation.received[0] == Approx(0.5));
  CHECK(r.allocation.received[1] == Approx(2.0));
  CHECK(r.objective == Approx(0.5));

  const std::vector<double> ones = {1.0, 1.0};
  const std::vector<double> fours = {4.0, 4.0};
  const auto t = alloc::first_fit(ones, fours);
  CHECK(t.threshold == 4.0);
  CHECK(t.objective == Approx(4.0));
}

TEST_CASE("first fit: finer search grids recover fractional thresholds") {
  const auto coarse = alloc::first_fit(kLambda, kRates, 1);
  // The best threshold the sequential assignment can satisfy is 0.5
  // (pair 1 takes channel 1, pair 2 the rest); the integer grid cannot
  // see it but a tenth-step grid can.
  const auto fine = alloc::first_fit(kLambda, kRates, 10);
  CHECK(fine.threshold == Approx(0.5));
  CHECK(fine.objective == Approx(0.5));
  CHECK(fine.objective >= coarse.objective);
  CHECK(fine.threshold > coarse.threshold);
}

TEST_CASE("modified lpt hand trace") {
  const auto r = alloc::modified_lpt(kLambda, kRates);
  CHECK(r.allocation.received[0] == Approx(0.6));
  CHECK(r.allocation.received[1] == Approx(1.5));
  CHECK(r.objective == Approx(0.6));
}

TEST_CASE("modified lpt equals round robin when m == kappa") {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = random_instance(rng);
    inst.rates.resize(inst.lambda.size());
    for (auto& r : inst.rates) r = 1.0 + static_cast<double>(rng.bounded(20));
    const auto rr = alloc::round_robin(inst.lambda, inst.rates);
    const auto lpt = alloc::modified_lpt(inst.lambda, inst.rates);
    CHECK(rr.channel_pair == lpt.allocation.channel_pair);
  }
}

TEST_CASE("modified lpt: the minimum never drops as channels are added") {
  Rng rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> lambda(2 + rng.bounded(2));
    for (auto& l : lambda) l = 0.05 + 0.95 * rng.unit();
    std::vector<double> rates(lambda.size() + 4);
    for (auto& r : rates) r = 1.0 + static_cast<double>(rng.bounded(20));
    std::sort(rates.begin(), rates.end(), std::greater<>());
    double previous = 0.0;
    for (std::size_t m = lambda.size(); m <= rates.size(); ++m) {
      const std::vector<double> prefix(rates.begin(), rates.begin() + m);
      const auto r = alloc::modified_lpt(lambda, prefix);
      CHECK(r.objective >= previous - 1e-12);
      previous = r.objective;
    }
  }
}

TEST_CASE("modified bd hand trace: matching round then round-robin leftover") {
  const auto r = alloc::modified_bd(kLambda, kRates);
  CHECK(r.threshold == Approx(0.5));
  CHECK(r.allocation.received[0] == Approx(0.8));
  CHECK(r.allocation.received[1] == Approx(0.5));
  CHECK(r.objective == Approx(0.5));
}

TEST_CASE("modified bd equals the optimum when the matching is everything") {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> lambda = {0.05 + 0.95 * rng.unit(),
                                  0.05 + 0.95 * rng.unit()};
    std::vector<double> rates = {1.0 + static_cast<double>(rng.bounded(20)),
                                 1.0 + static_cast<double>(rng.bounded(20))};
    const auto bd = alloc::modified_bd(lambda, rates);
    const double opt = oracles::exact_maxmin_enumeration(lambda, rates);
    CHECK(bd.objective == Approx(opt).epsilon(1e-12));
  }
}

TEST_CASE("exact branch and bound agrees with exhaustive enumeration") {
  Rng rng(54);
  for (int trial = 0; trial < 150; ++trial) {
    const auto inst = random_instance(rng);
    const auto exact = alloc::exact_maxmin(inst.lambda, inst.rates);
    REQUIRE(exact.complete);
    const double oracle =
        oracles::exact_maxmin_enumeration(inst.lambda, inst.rates);
    CHECK(exact.objective == Approx(oracle).epsilon(1e-12));
    CHECK(exact.upper_bound == exact.objective);
  }
}

TEST_CASE("exact dominates every approximation; bd keeps its guarantee") {
  Rng rng(55);
  for (int trial = 0; trial < 150; ++trial) {
    const auto inst = random_instance(rng);
    const double opt = oracles::exact_maxmin_enumeration(inst.lambda, inst.rates);
    const auto rr = alloc::round_robin(inst.lambda, inst.rates);
    const auto ff = alloc::first_fit(inst.lambda, inst.rates);
    const auto lpt = alloc::modified_lpt(inst.lambda, inst.rates);
    const auto bd = alloc::modified_bd(inst.lambda, inst.rates);
    for (double objective :
         {min_received(rr), ff.objective, lpt.objective, bd.objective}) {
      CHECK(objective <= opt * (1 + 1e-12) + 1e-12);
    }
    const double guarantee =
        opt / static_cast<double>(inst.rates.size() - inst.lambda.size() + 1);
    CHECK(bd.objective >= guarantee * (1 - 1e-12) - 1e-12);
  }
}

TEST_CASE("every strategy yields a partition with recomputable rates") {
  Rng rng(56);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = random_instance(rng);
    const auto results = {
        alloc::round_robin(inst.lambda, inst.rates),
        alloc::first_fit(inst.lambda, inst.rates).allocation,
        alloc::modified_lpt(inst.lambda, inst.rates).allocation,
        alloc::modified_bd(inst.lambda, inst.rates).allocation,
        alloc::exact_maxmin(inst.lambda, inst.rates).allocation,
    };
    for (const auto& a : results) {
      REQUIRE(a.channel_pair.size() == inst.rates.size());
      for (auto p : a.channel_pair) CHECK(p < inst.lambda.size());
      CHECK(a.received ==
            alloc::compute_received(a.channel_pair, inst.lambda, inst.rates));
    }
  }
}

TEST_CASE("scaling every rate by a power of two scales received rates") {
  Rng rng(57);
  const double c = 4.0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = random_instance(rng);
    std::vector<double> scaled = inst.rates;
    for (auto& r : scaled) r *= c;

    const auto rr = alloc::round_robin(inst.lambda, inst.rates);
    const auto rr_scaled = alloc::round_robin(inst.lambda, scaled);
    CHECK(rr.channel_pair == rr_scaled.channel_pair);
    for (std::size_t p = 0; p < rr.received.size(); ++p) {
      CHECK(rr_scaled.received[p] == c * rr.received[p]);
    }

    const auto lpt = alloc::modified_lpt(inst.lambda, inst.rates);
    const auto lpt_scaled = alloc::modified_lpt(inst.lambda, scaled);
    CHECK(lpt.allocation.channel_pair == lpt_scaled.allocation.channel_pair);

    // First fit: matching threshold grids give identical assignments.
    const auto ff = alloc::first_fit(inst.lambda, inst.rates, 8);
    const auto ff_scaled = alloc::first_fit(inst.lambda, scaled, 2);
    CHECK(ff.allocation.channel_pair == ff_scaled.allocation.channel_pair);

    const auto exact = alloc::exact_maxmin(inst.lambda, inst.rates);
    const auto exact_scaled = alloc::exact_maxmin(inst.lambda, scaled);
    CHECK(exact_scaled.objective == Approx(c * exact.objective).epsilon(1e-12));
  }
}

TEST_CASE("permuting pairs permutes the received vector") {
  Rng rng(58);
  for (int trial = 0; trial < 30; ++trial) {
    // Distinct transmittances and rates keep every sort order unambiguous.
    std::vector<double> lambda = {0.11, 0.47, 0.82};
    std::vector<double> rates = {9.0, 6.5, 4.0, 2.25, 1.0};
    std::vector<std::size_t> perm = {0, 1, 2};
    rng.shuffle(perm);
    std::vector<double> permuted(3);
    for (std::size_t p = 0; p < 3; ++p) permuted[perm[p]] = lambda[p];

    const auto base_rr = alloc::round_robin(lambda, rates);
    const auto perm_rr = alloc::round_robin(permuted, rates);
    const auto base_lpt = alloc::modified_lpt(lambda, rates);
    const auto perm_lpt = alloc::modified_lpt(permuted, rates);
    const auto base_bd = alloc::modified_bd(lambda, rates);
    const auto perm_bd = alloc::modified_bd(permuted, rates);
    for (std::size_t p = 0; p < 3; ++p) {
      CHECK(perm_rr.received[perm[p]] == base_rr.received[p]);
      CHECK(perm_lpt.allocation.received[perm[p]] ==
            base_lpt.allocation.received[p]);
      CHECK(perm_bd.allocation.received[perm[p]] ==
            base_bd.allocation.received[p]);
    }
  }
}

TEST_CASE("exact with a spent budget reports an incomplete result") {
  std::vector<double> lambda(4);
  std::vector<double> rates(14);
  Rng rng(59);
  for (auto& l : lambda) l = 0.05 + 0.95 * rng.unit();
  for (auto& r : rates) r = 1.0 + static_cast<double>(rng.bounded(20));
  alloc::ExactOptions opts;
  opts.time_limit_s = 0.0;
  const auto r = alloc::exact_maxmin(lambda, rates, opts);
  CHECK_FALSE(r.complete);
  CHECK(r.objective > 0.0);                    // carries a feasible incumbent
  CHECK(r.upper_bound >= r.objective - 1e-12); // and an admissible bound
}

TEST_CASE("randomized tie order varies assignments but not the objective") {
  const std::vector<double> lambda = {0.5, 0.5};
  const std::vector<double> rates = {4.0, 4.0, 2.0, 2.0};
  alloc::ExactOptions a;
  a.shuffle_seed = 1;
  alloc::ExactOptions b;
  b.shuffle_seed = 2;
  const auto ra = alloc::exact_maxmin(lambda, rates, a);
  const auto rb = alloc::exact_maxmin(lambda, rates, b);
  CHECK(ra.objective == Approx(rb.objective));
  CHECK(ra.objective == Approx(3.0));  // (4+2)/2 each
}

TEST_CASE("fewer channels than pairs is rejected") {
  const std::vector<double> lambda = {0.5, 0.5, 0.5};
  const std::vector<double> rates = {1.0, 1.0};
  CHECK_THROWS_AS(alloc::round_robin(lambda, rates), ConfigError);
  CHECK_THROWS_AS(alloc::first_fit(lambda, rates), ConfigError);
  CHECK_THROWS_AS(alloc::modified_lpt(lambda, rates), ConfigError);
  CHECK_THROWS_AS(alloc::modified_bd(lambda, rates), ConfigError);
  CHECK_THROWS_AS(alloc::exact_maxmin(lambda, rates), ConfigError);
  const std::vector<double> bad_lambda = {0.5, 1.5};
  const std::vector<double> ok_rates = {1.0, 1.0};
  CHECK_THROWS_AS(alloc::round_robin(bad_lambda, ok_rates), ConfigError);
  const std::vector<double> ok_lambda = {0.5, 0.5};
  const std::vector<double> bad_rates = {1.0, -1.0};
  CHECK_THROWS_AS(alloc::round_robin(ok_lambda, bad_rates), ConfigError);
}

TEST_CASE("allocation CSV rows carry the pair contribution") {
  const auto a = alloc::round_robin(kLambda, kRates);
  std::ostringstream os;
  alloc::write_csv(a, kLambda, kRates, {"A-B", "A-C"}, os);
  const auto text = os.str();
  CHECK(text.starts_with("channel_index,pair,rate_contribution\n"));
  CHECK(text.find("1,A-B,0.5\n") != std::string::npos);
  CHECK(text.find("2,A-C,1.5\n") != std::string::npos);
}

}  // TEST_SUITE
