#pragma once

#include <iosfwd>
#include <vector>

#include "eprnet/quadrature.hpp"

namespace eprnet::spectrum {

// Broadband degenerate EPR-pair source parameters. The usable band is a
// segment of the phase-matching band centered on the pump-degenerate
// wavelength.
struct SourceParams {
  double sigma_p = 0.0;            // pump-pulse duration, s
  double omega_pm = 0.0;           // phase-matching bandwidth, rad/s
  double rep_rate = 0.0;           // pump repetition rate, pulses/s
  double band_total = 0.0;         // usable bandwidth B_s, Hz
  double center_wavelength = 0.0;  // m

  void validate() const;  // throws InvariantError
};

// WDM channelization of the usable band: m channels of width b_c whose
// center frequencies are spaced b_delta apart, symmetric about the band
// center (channel (m+1)/2 sits exactly on it when m is odd).
struct ChannelGeometry {
  int m = 0;
  double b_c = 0.0;      // channel width, Hz
  double b_delta = 0.0;  // channel spacing, Hz

  void validate(double band_total) const;  // throws InvariantError
};

struct ChannelPlan {
  ChannelGeometry geometry;
  std::vector<double> rates;         // EPR pairs/s per channel; [0] is channel 1
  std::vector<double> center_freqs;  // Hz, ascending with channel index
};

// Tabulated source values: sigma_P = 36 ps, Omega_PM/2pi = 6.37 THz,
// r_P = 2.77e12 pulses/s, B_s = 2.430 THz, 1550 nm center.
SourceParams table_params();

// Same source, but with the repetition rate calibrated so the default
// channelization peaks at 4584 pairs/s. Relative rates are unaffected by
// this choice; see calibrate_rep_rate.
SourceParams calibrated_params();

// m = 185, B_c = 11 GHz, B_delta = 13.135 GHz.
ChannelGeometry default_geometry();

// Probability that both photons of a generated pair pass channel x of
// their respective WDM filters (x is 1-based). Evaluated by reducing the
// biphoton double integral to an error-function factor integrated by
// adaptive quadrature.
double heralding_efficiency(const SourceParams& params,
                            const ChannelGeometry& geometry, int channel,
                            const QuadratureOptions& quad = {});

// Per-channel EPR-pair generation rates: rate_x = (1/4) eff_x^2 r_P.
ChannelPlan channel_rates(const SourceParams& params,
                          const ChannelGeometry& geometry,
                          const QuadratureOptions& quad = {});

// Repetition rate that makes the peak channel of the given geometry
// generate peak_rate pairs/s.
double calibrate_rep_rate(const SourceParams& params,
                          const ChannelGeometry& geometry, double peak_rate,
                          const QuadratureOptions& quad = {});

// Re-channelize for an n-node network: m' = floor(channels_per_pair * kappa')
// channels spread over band_total, keeping the reference plan's width-to-
// spacing ratio, then rescale all rates by one scalar so the per-pair mean
// rate sum(rates)/kappa matches the reference plan's.
ChannelPlan scaled_plan(const SourceParams& params, const ChannelPlan& reference,
                        int kappa_ref, int n_nodes, double band_total,
                        double channels_per_pair = 1.36,
                        const QuadratureOptions& quad = {});

// Columns: channel_index, center_freq_hz, center_wavelength_nm,
// rate_pairs_per_s.
void write_csv(const ChannelPlan& plan, std::ostream& os);

}  // namespace eprnet::spectrum
