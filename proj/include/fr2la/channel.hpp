// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "fr2la/rng.hpp"

namespace fr2la {

// Propagation constant used consistently for the breakpoint distance and the
// Doppler frequency (TR 38.901 uses c = 3.0e8 m/s).
inline constexpr double speed_of_light_mps = 3.0e8;

inline constexpr double pi = 3.14159265358979323846;

// Downlink link budget and carrier geometry. Defaults describe a single
// FR2 carrier: 100 MHz at 24.8 GHz, SCS 120 kHz, 66 PRBs.
struct link_budget {
  double eirp_dbm = 67.0;          // base-station EIRP over the carrier
  double ue_rx_gain_db = 1.0;      // UE receive antenna gain
  double noise_figure_db = 10.0;   // UE receiver noise figure
  double carrier_freq_ghz = 24.8;
  int n_prb = 66;
  double scs_khz = 120.0;
  double h_bs_m = 10.0;            // base-station antenna height
  double h_ut_m = 1.5;             // terminal antenna height
  // Optional cap on post-budget SINR, modeling front-end EVM limits.
  std::optional<double> sinr_ceiling_db{};
  // Base-station receive gain: part of the uplink budget only; carried for
  // config completeness, unused in the downlink computations here.
  double gnb_rx_gain_db = 29.5;

  double occupied_bandwidth_hz() const { return n_prb * 12.0 * scs_khz * 1e3; }
};

inline void validate_budget(const link_budget& b) {
  if (!(b.carrier_freq_ghz >= 0.5 && b.carrier_freq_ghz <= 100.0))
    throw std::domain_error("link budget: carrier frequency must be in 0.5..100 GHz");
  if (b.n_prb < 1) throw std::domain_error("link budget: n_prb must be >= 1");
  if (!(b.scs_khz > 0.0)) throw std::domain_error("link budget: subcarrier spacing must be > 0");
  if (!(b.h_ut_m >= 1.0)) throw std::domain_error("link budget: terminal height must be >= 1 m");
  if (!(b.h_bs_m > b.h_ut_m))
    throw std::domain_error("link budget: base-station height must exceed terminal height");
}

// TR 38.901 UMi street-canyon LOS breakpoint distance with effective antenna
// heights (1.0 m environment height subtracted from both ends).
inline double breakpoint_distance_m(const link_budget& b) {
  const double h_bs_eff = b.h_bs_m - 1.0;
  const double h_ut_eff = b.h_ut_m - 1.0;
  if (h_bs_eff <= 0.0 || h_ut_eff <= 0.0) return 0.0;
  return 4.0 * h_bs_eff * h_ut_eff * (b.carrier_freq_ghz * 1e9) / speed_of_light_mps;
}

// TR 38.901 UMi street-canyon LOS path loss in dB. The 2D distance is clamped
// to the model's validity range [10 m, 5 km]; the two branches are continuous
// at the breakpoint.
inline double umi_los_path_loss_db(double d2d_m, const link_budget& b) {
  const double d2d = std::clamp(d2d_m, 10.0, 5000.0);
  const double dh = b.h_bs_m - b.h_ut_m;
  const double d3d = std::hypot(d2d, dh);
  const double fc_term = 20.0 * std::log10(b.carrier_freq_ghz);
  const double d_bp = breakpoint_distance_m(b);
  if (d2d <= d_bp) return 32.4 + 21.0 * std::log10(d3d) + fc_term;
  return 32.4 + 40.0 * std::log10(d3d) + fc_term -
         9.5 * std::log10(d_bp * d_bp + dh * dh);
}

// Maximum Doppler shift for a terminal moving at the given speed.
inline double doppler_frequency_hz(double speed_mps, const link_budget& b) {
  return speed_mps * (b.carrier_freq_ghz * 1e9) / speed_of_light_mps;
}

// Statistical parameters of the two fading processes layered on the path
// loss: spatially correlated lognormal shadowing and Rician fast fading with
// a time-correlated diffuse component.
struct channel_fading_params {
  double sigma_sf_db = 4.0;   // shadow fading std deviation (LOS)
  double decorr_m = 10.0;     // shadow decorrelation distance
  double k_factor_db = 10.0;  // Rician K (LOS-to-diffuse power ratio)
  bool shadow_enabled = true;
  bool fading_enabled = true;
};

// Evolving channel randomness. One instance per run; both processes consume
// their own labeled RNG substreams so they can be toggled independently
// without disturbing each other's draws.
struct channel_state {
  double shadow_db = 0.0;       // current shadow fading value
  double diffuse_re = 0.0;      // Rician diffuse component (per-axis var 1/2)
  double diffuse_im = 0.0;
  double fading_db = 0.0;       // current fast-fading power gain
  double last_position_m = 0.0; // route position at the last shadow update
  bool shadow_enabled = true;
  bool fading_enabled = true;
  rng_stream shadow_rng;
  rng_stream fading_rng;
};

namespace detail {

// Fading power gain of the current Rician sample: unit-power LOS ray plus
// the diffuse component, normalized so the long-run mean power is one.
inline double rician_gain_db(const channel_state& st, double k_factor_db) {
  const double k = std::pow(10.0, k_factor_db / 10.0);
  const double los = std::sqrt(k / (k + 1.0));
  const double w = std::sqrt(1.0 / (k + 1.0));
  const double re = los + w * st.diffuse_re;
  const double im = w * st.diffuse_im;
  return 10.0 * std::log10(re * re + im * im);
}

}  // namespace detail

inline channel_state make_channel_state(std::uint64_t master_seed,
                                        const channel_fading_params& p,
                                        double initial_position_m) {
  channel_state st;
  st.shadow_enabled = p.shadow_enabled;
  st.fading_enabled = p.fading_enabled;
  st.last_position_m = initial_position_m;
  st.shadow_rng = rng_stream(substream_seed(master_seed, rng_label::shadow));
  st.fading_rng = rng_stream(substream_seed(master_seed, rng_label::fading));
  if (p.shadow_enabled) st.shadow_db = p.sigma_sf_db * st.shadow_rng.normal();
  if (p.fading_enabled) {
    constexpr double per_axis_sigma = 0.70710678118654752440;  // sqrt(1/2)
    st.diffuse_re = per_axis_sigma * st.fading_rng.normal();
    st.diffuse_im = per_axis_sigma * st.fading_rng.normal();
    st.fading_db = detail::rician_gain_db(st, p.k_factor_db);
  }
  return st;
}

// Advances the shadow fading to a new route position using the exponential
// spatial autocorrelation rho = exp(-|delta_d| / decorr). A zero displacement
// leaves the value (and the RNG stream) untouched, so a stationary terminal
// keeps a frozen shadow draw.
inline double advance_shadow(channel_state& st, double new_position_m,
                             double sigma_sf_db, double decorr_m) {
  if (!st.shadow_enabled) return st.shadow_db;
  if (!(decorr_m > 0.0)) throw std::domain_error("shadow fading: decorr must be > 0");
  if (!(sigma_sf_db >= 0.0)) throw std::domain_error("shadow fading: sigma must be >= 0");
  const double dd = std::abs(new_position_m - st.last_position_m);
  if (dd > 0.0) {
    const double rho = std::exp(-dd / decorr_m);
    st.shadow_db = rho * st.shadow_db +
                   std::sqrt(1.0 - rho * rho) * sigma_sf_db * st.shadow_rng.normal();
  }
  st.last_position_m = new_position_m;
  return st.shadow_db;
}

// Advances the Rician fast fading by one time step. The diffuse component
// follows a Gauss-Markov recursion whose coefficient is the Jakes temporal
// autocorrelation J0(2 pi f_d dt) at the terminal's Doppler frequency, so the
// fading rate is tied to physical speed. Zero speed (or zero dt) freezes the
// sample without consuming randomness.
inline double advance_fading(channel_state& st, double dt_s, double speed_mps,
                             const link_budget& b, double k_factor_db) {
  if (!st.fading_enabled) return st.fading_db;
  if (dt_s < 0.0) throw std::domain_error("fast fading: negative time step");
  const double f_d = doppler_frequency_hz(speed_mps, b);
  const double x = 2.0 * pi * f_d * dt_s;
  const double rho = (x == 0.0) ? 1.0 : std::cyl_bessel_j(0.0, x);
  if (rho != 1.0) {
    // Innovation keeps the per-axis marginal variance at 1/2.
    const double s = std::sqrt(std::max(0.0, 1.0 - rho * rho) * 0.5);
    st.diffuse_re = rho * st.diffuse_re + s * st.fading_rng.normal();
    st.diffuse_im = rho * st.diffuse_im + s * st.fading_rng.normal();
  }
  st.fading_db = detail::rician_gain_db(st, k_factor_db);
  return st.fading_db;
}

// One sampled downlink: wideband SINR, RSRP and the path loss that produced
// them. Thermal-noise-limited (single cell, no interference term).
struct link_sample {
  double sinr_db = 0.0;
  double rsrp_dbm = 0.0;
  double path_loss_db = 0.0;
};

inline link_sample sample_link(double d2d_m, const channel_state& st, const link_budget& b) {
  const double pl = umi_los_path_loss_db(d2d_m, b);
  const double rx_total_dbm =
      b.eirp_dbm - pl - st.shadow_db + st.fading_db + b.ue_rx_gain_db;
  const double noise_dbm =
      -174.0 + 10.0 * std::log10(b.occupied_bandwidth_hz()) + b.noise_figure_db;
  double sinr = rx_total_dbm - noise_dbm;
  if (b.sinr_ceiling_db) sinr = std::min(sinr, *b.sinr_ceiling_db);
  // RSRP is per-resource-element power: total received power spread over the
  // occupied subcarriers.
  const double rsrp = rx_total_dbm - 10.0 * std::log10(b.n_prb * 12.0);
  return {sinr, rsrp, pl};
}

}  // namespace fr2la
