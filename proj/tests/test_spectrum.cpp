#include <doctest.h>

#include <cmath>
#include <sstream>

#include "eprnet/errors.hpp"
#include "eprnet/spectrum.hpp"
#include "eprnet/util.hpp"
#include "oracles.hpp"

using namespace eprnet;
using doctest::Approx;

namespace {

// Frozen from the 2-D tensor quadrature oracle at 1e-10 relative
// tolerance (oracles::efficiency_2d on the tabulated parameters).
constexpr double kOracleEff93 = 2.430397839281916e-03;
constexpr double kOracleEff1 = 7.683198312482015e-04;
// Total of the calibrated 185-channel rate vector, same oracle run.
constexpr double kGoldenRateSum = 477304.8334993910;

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("heralding efficiency matches the 2-D quadrature oracle") {
  const auto params = spectrum::table_params();
  const auto geom = spectrum::default_geometry();
  for (int channel : {1, 30, 93, 150, 185}) {
    const double eff = spectrum::heralding_efficiency(params, geom, channel);
    const double oracle = oracles::efficiency_2d(params, geom, channel);
    CHECK(eff == Approx(oracle).epsilon(1e-9));
  }
  CHECK(spectrum::heralding_efficiency(params, geom, 93) ==
        Approx(kOracleEff93).epsilon(1e-9));
  CHECK(spectrum::heralding_efficiency(params, geom, 1) ==
        Approx(kOracleEff1).epsilon(1e-9));
}

TEST_CASE("middle channel is the efficiency maximum and mirrors are equal") {
  const auto params = spectrum::table_params();
  const auto geom = spectrum::default_geometry();
  const double center = spectrum::heralding_efficiency(params, geom, 93);
  for (int channel : {1, 20, 92, 94, 185}) {
    CHECK(center >= spectrum::heralding_efficiency(params, geom, channel));
  }
  for (int x : {1, 10, 57, 92}) {
    const double a = spectrum::heralding_efficiency(params, geom, x);
    const double b = spectrum::heralding_efficiency(params, geom, 186 - x);
    CHECK(a == Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("channel index range is enforced") {
  const auto params = spectrum::table_params();
  const auto geom = spectrum::default_geometry();
  CHECK_THROWS_AS(spectrum::heralding_efficiency(params, geom, 0), ConfigError);
  CHECK_THROWS_AS(spectrum::heralding_efficiency(params, geom, 186),
                  ConfigError);
}

TEST_CASE("calibrated default plan reproduces the published profile") {
  const auto plan = spectrum::channel_rates(spectrum::calibrated_params(),
                                            spectrum::default_geometry());
  REQUIRE(plan.rates.size() == 185);
  // Peak on the middle channel, calibrated to 4584 pairs/s.
  CHECK(plan.rates[92] == Approx(4584.0).epsilon(1e-9));
  // Peak-to-edge ratio close to 4584/458; calibration-free.
  CHECK(plan.rates[92] / plan.rates[0] ==
        Approx(4584.0 / 458.0).epsilon(0.05));
  double sum = 0.0;
  for (double r : plan.rates) sum += r;
  CHECK(sum == Approx(kGoldenRateSum).epsilon(1e-6));
  // Center frequency of the middle channel sits on the 1550 nm band center.
  CHECK(plan.center_freqs[92] == Approx(kSpeedOfLight / 1550e-9));
  CHECK(plan.center_freqs[93] - plan.center_freqs[92] ==
        Approx(13.135e9).epsilon(1e-12));
}

TEST_CASE("rate vector is mirror-symmetric and unimodal") {
  const auto plan = spectrum::channel_rates(spectrum::calibrated_params(),
                                            spectrum::default_geometry());
  const std::size_t m = plan.rates.size();
  for (std::size_t x = 0; x < m; ++x) {
    CHECK(plan.rates[x] ==
          Approx(plan.rates[m - 1 - x]).epsilon(1e-6));
  }
  for (std::size_t x = 0; x + 1 <= 92; ++x) {
    CHECK(plan.rates[x] <= plan.rates[x + 1] * (1 + 1e-12));
  }
  for (std::size_t x = 92; x + 1 < m; ++x) {
    CHECK(plan.rates[x] * (1 + 1e-12) >= plan.rates[x + 1]);
  }
}

TEST_CASE("rates scale linearly with the repetition rate") {
  auto params = spectrum::table_params();
  const auto geom = spectrum::default_geometry();
  const auto base = spectrum::channel_rates(params, geom);
  params.rep_rate *= 2.0;
  const auto doubled = spectrum::channel_rates(params, geom);
  for (std::size_t x = 0; x < base.rates.size(); ++x) {
    CHECK(doubled.rates[x] == 2.0 * base.rates[x]);
  }
}

TEST_CASE("doubling fixed quadrature resolution moves rates by < 1e-6") {
  const auto params = spectrum::table_params();
  const auto geom = spectrum::default_geometry();
  QuadratureOptions coarse;
  coarse.fixed_panels = 4;
  QuadratureOptions fine;
  fine.fixed_panels = 8;
  for (int channel : {1, 47, 93, 140, 185}) {
    const double a =
        spectrum::heralding_efficiency(params, geom, channel, coarse);
    const double b =
        spectrum::heralding_efficiency(params, geom, channel, fine);
    CHECK(std::abs(a - b) / b < 1e-6);
  }
}

TEST_CASE("quadrature non-convergence is reported") {
  QuadratureOptions strangled;
  strangled.rel_tol = 1e-16;
  strangled.max_segments = 2;
  CHECK_THROWS_AS(spectrum::heralding_efficiency(spectrum::table_params(),
                                                 spectrum::default_geometry(),
                                                 93, strangled),
                  QuadratureError);
}

TEST_CASE("single-channel geometry holds the global peak") {
  auto params = spectrum::table_params();
  spectrum::ChannelGeometry one;
  one.m = 1;
  one.b_c = 11e9;
  one.b_delta = 13.135e9;
  const auto plan = spectrum::channel_rates(params, one);
  REQUIRE(plan.rates.size() == 1);
  const auto full = spectrum::channel_rates(params, spectrum::default_geometry());
  CHECK(plan.rates[0] == Approx(full.rates[92]).epsilon(1e-9));
}

TEST_CASE("parameter invariants") {
  auto params = spectrum::table_params();
  params.sigma_p = 0.0;
  CHECK_THROWS_AS(params.validate(), InvariantError);
  params = spectrum::table_params();
  params.band_total = 7.0e12;  // beyond the phase-matching band
  CHECK_THROWS_AS(params.validate(), InvariantError);
  spectrum::ChannelGeometry geom = spectrum::default_geometry();
  geom.b_c = 14e9;  // wider than the spacing
  CHECK_THROWS_AS(geom.validate(2.43e12), InvariantError);
  geom = spectrum::default_geometry();
  geom.m = 500;  // does not fit the band
  CHECK_THROWS_AS(geom.validate(2.43e12), InvariantError);
}

TEST_CASE("scaled plans reproduce the published channel constants") {
  const auto params = spectrum::calibrated_params();
  const auto reference =
      spectrum::channel_rates(params, spectrum::default_geometry());

  const auto plan10 =
      spectrum::scaled_plan(params, reference, 136, 10, params.band_total);
  CHECK(plan10.geometry.m == 61);
  CHECK(plan10.geometry.b_c == Approx(33.361e9).epsilon(0.001e9 / 33.361e9));

  const auto plan40 =
      spectrum::scaled_plan(params, reference, 136, 40, params.band_total);
  CHECK(plan40.geometry.m == 1060);
  CHECK(plan40.geometry.b_c == Approx(1.920e9).epsilon(0.001e9 / 1.920e9));
}

TEST_CASE("rescaling keeps the per-pair mean rate exactly") {
  const auto params = spectrum::calibrated_params();
  const auto reference =
      spectrum::channel_rates(params, spectrum::default_geometry());
  double ref_sum = 0.0;
  for (double r : reference.rates) ref_sum += r;
  for (int n : {5, 10, 23, 40}) {
    const auto plan =
        spectrum::scaled_plan(params, reference, 136, n, params.band_total);
    const double kappa = n * (n - 1) / 2.0;
    double sum = 0.0;
    for (double r : plan.rates) sum += r;
    CHECK(sum / kappa == Approx(ref_sum / 136.0).epsilon(1e-12));
  }
}

TEST_CASE("rescaling to the reference itself is the identity") {
  // A reference whose spacing tiles the band exactly, so the scaled
  // geometry reproduces it bit-for-bit.
  const auto params = spectrum::calibrated_params();
  spectrum::ChannelGeometry geom;
  geom.m = 185;
  geom.b_delta = params.band_total / 185;
  geom.b_c = geom.b_delta * (11.0 / 13.135);
  const auto reference = spectrum::channel_rates(params, geom);
  const auto again = spectrum::scaled_plan(params, reference, 136, 17,
                                           params.band_total, 185.0 / 136.0);
  REQUIRE(again.rates.size() == reference.rates.size());
  CHECK(again.geometry.b_delta == reference.geometry.b_delta);
  for (std::size_t x = 0; x < reference.rates.size(); ++x) {
    CHECK(again.rates[x] == Approx(reference.rates[x]).epsilon(1e-9));
  }
}

TEST_CASE("scaled plan rejects configurations without a channel per pair") {
  const auto params = spectrum::calibrated_params();
  const auto reference =
      spectrum::channel_rates(params, spectrum::default_geometry());
  CHECK_THROWS_AS(spectrum::scaled_plan(params, reference, 136, 10,
                                        params.band_total, 0.9),
                  ConfigError);
}

TEST_CASE("plan CSV has one row per channel") {
  const auto plan = spectrum::channel_rates(spectrum::calibrated_params(),
                                            spectrum::default_geometry());
  std::ostringstream os;
  spectrum::write_csv(plan, os);
  const std::string text = os.str();
  CHECK(text.starts_with(
      "channel_index,center_freq_hz,center_wavelength_nm,rate_pairs_per_s\n"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 186);
}

}  // TEST_SUITE
