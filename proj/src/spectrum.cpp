#include "eprnet/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "eprnet/errors.hpp"
#include "eprnet/util.hpp"

namespace eprnet::spectrum {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDefaultPeakRate = 4584.0;  // pairs/s on the center channel
}  // namespace

void SourceParams::validate() const {
  if (!(sigma_p > 0.0)) throw InvariantError("sigma_p must be positive");
  if (!(omega_pm > 0.0)) throw InvariantError("omega_pm must be positive");
  if (!(rep_rate > 0.0)) throw InvariantError("rep_rate must be positive");
  if (!(band_total > 0.0)) throw InvariantError("band_total must be positive");
  if (!(center_wavelength > 0.0)) {
    throw InvariantError("center_wavelength must be positive");
  }
  if (band_total > omega_pm / (2.0 * kPi) * (1.0 + 1e-12)) {
    throw InvariantError(
        "band_total exceeds the phase-matching bandwidth omega_pm/(2*pi)");
  }
}

void ChannelGeometry::validate(double band_total) const {
  if (m < 1) throw InvariantError("channel count m must be positive");
  if (!(b_c > 0.0)) throw InvariantError("channel width b_c must be positive");
  if (!(b_delta > 0.0)) {
    throw InvariantError("channel spacing b_delta must be positive");
  }
  if (b_c > b_delta * (1.0 + 1e-12)) {
    throw InvariantError("channels overlap: b_c exceeds b_delta");
  }
  if (static_cast<double>(m) * b_delta > band_total + b_delta * (1.0 + 1e-12)) {
    throw InvariantError("channels do not fit the band: m*b_delta too large");
  }
}

SourceParams table_params() {
  SourceParams p;
  p.sigma_p = 36e-12;
  p.omega_pm = 2.0 * kPi * 6.37e12;
  p.rep_rate = 2.77e12;
  p.band_total = 2.430e12;
  p.center_wavelength = 1550e-9;
  return p;
}

ChannelGeometry default_geometry() {
  ChannelGeometry g;
  g.m = 185;
  g.b_c = 11e9;
  g.b_delta = 13.135e9;
  return g;
}

SourceParams calibrated_params() {
  static const SourceParams calibrated = [] {
    SourceParams p = table_params();
    p.rep_rate = calibrate_rep_rate(p, default_geometry(), kDefaultPeakRate);
    return p;
  }();
  return calibrated;
}

double heralding_efficiency(const SourceParams& params,
                            const ChannelGeometry& geometry, int channel,
                            const QuadratureOptions& quad) {
  params.validate();
  geometry.validate(params.band_total);
  if (channel < 1 || channel > geometry.m) {
    throw ConfigError("channel index " + std::to_string(channel) +
                      " out of range 1.." + std::to_string(geometry.m));
  }

  // |Psi|^2 factors into Gaussians in u = dw_S + dw_I and v = dw_S - dw_I.
  // Over the square passband (half-width w) of channel x the u-range is a
  // diamond slice, so the v-integral is an erf difference and only the
  // u-integral needs quadrature. delta is the channel's filter offset.
  const double w = kPi * geometry.b_c;
  const double delta =
      2.0 * kPi * (channel - 0.5 * (geometry.m + 1)) * geometry.b_delta;
  const double sigma = params.sigma_p;
  const double omega = params.omega_pm;
  const double sq8 = 2.0 * std::numbers::sqrt2;
  const double v_scale = omega / sq8 * std::sqrt(kPi) / 2.0;

  auto integrand = [&](double u) {
    const double half = 2.0 * w - std::abs(u);
    const double t_hi = sq8 * (half - 2.0 * delta) / omega;
    const double t_lo = sq8 * (-half - 2.0 * delta) / omega;
    const double v_part = v_scale * (std::erf(t_hi) - std::erf(t_lo));
    return std::exp(-u * u * sigma * sigma / 8.0) * v_part;
  };

  // Even in u; the |u| kink sits at the left endpoint of [0, 2w].
  const double prefactor = 2.0 * sigma / (kPi * omega);
  return prefactor * integrate(integrand, 0.0, 2.0 * w, quad);
}

ChannelPlan channel_rates(const SourceParams& params,
                          const ChannelGeometry& geometry,
                          const QuadratureOptions& quad) {
  params.validate();
  geometry.validate(params.band_total);

  ChannelPlan plan;
  plan.geometry = geometry;
  plan.rates.resize(geometry.m);
  plan.center_freqs.resize(geometry.m);
  const double f0 = kSpeedOfLight / params.center_wavelength;
  for (int x = 1; x <= geometry.m; ++x) {
    double eff;
    try {
      eff = heralding_efficiency(params, geometry, x, quad);
    } catch (const QuadratureError& e) {
      throw QuadratureError("channel " + std::to_string(x) + ": " + e.what());
    }
    const double rate = 0.25 * eff * eff * params.rep_rate;
    if (!(rate > 0.0)) {
      throw InvariantError("channel " + std::to_string(x) +
                           " has non-positive rate; band extends too far "
                           "into the phase-matching tails");
    }
    plan.rates[x - 1] = rate;
    plan.center_freqs[x - 1] =
        f0 + (x - 0.5 * (geometry.m + 1)) * geometry.b_delta;
  }
  return plan;
}

double calibrate_rep_rate(const SourceParams& params,
                          const ChannelGeometry& geometry, double peak_rate,
                          const QuadratureOptions& quad) {
  if (!(peak_rate > 0.0)) throw ConfigError("peak_rate must be positive");
  // The rate profile is unimodal with its maximum on the middle channel.
  const int center = (geometry.m + 1) / 2;
  const double eff = heralding_efficiency(params, geometry, center, quad);
  return peak_rate / (0.25 * eff * eff);
}

ChannelPlan scaled_plan(const SourceParams& params, const ChannelPlan& reference,
                        int kappa_ref, int n_nodes, double band_total,
                        double channels_per_pair, const QuadratureOptions& quad) {
  if (n_nodes < 3) throw ConfigError("scaled_plan requires n_nodes >= 3");
  if (kappa_ref < 1) throw ConfigError("kappa_ref must be positive");
  if (!(channels_per_pair > 0.0)) {
    throw ConfigError("channels_per_pair must be positive");
  }
  if (reference.rates.empty()) throw ConfigError("reference plan is empty");

  const long kappa = static_cast<long>(n_nodes) * (n_nodes - 1) / 2;
  const int m = static_cast<int>(std::floor(channels_per_pair * kappa));
  if (m < kappa) {
    throw ConfigError("scaled plan for n=" + std::to_string(n_nodes) +
                      " yields m=" + std::to_string(m) + " channels for " +
                      std::to_string(kappa) + " node pairs");
  }

  ChannelGeometry geometry;
  geometry.m = m;
  geometry.b_delta = band_total / m;
  geometry.b_c =
      geometry.b_delta * (reference.geometry.b_c / reference.geometry.b_delta);

  SourceParams scaled_params = params;
  scaled_params.band_total = band_total;
  ChannelPlan plan = channel_rates(scaled_params, geometry, quad);

  double ref_sum = 0.0;
  for (double r : reference.rates) ref_sum += r;
  double new_sum = 0.0;
  for (double r : plan.rates) new_sum += r;
  const double scale = (ref_sum / kappa_ref) / (new_sum / kappa);
  for (double& r : plan.rates) r *= scale;
  return plan;
}

void write_csv(const ChannelPlan& plan, std::ostream& os) {
  os << "channel_index,center_freq_hz,center_wavelength_nm,rate_pairs_per_s\n";
  for (std::size_t i = 0; i < plan.rates.size(); ++i) {
    const double f = plan.center_freqs[i];
    os << (i + 1) << ',' << format_double(f) << ','
       << format_double(kSpeedOfLight / f * 1e9) << ','
       << format_double(plan.rates[i]) << '\n';
  }
}

}  // namespace eprnet::spectrum
