// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fr2la/nr_tables.hpp"
#include "fr2la/rng.hpp"

namespace fr2la {

// Abstracted link-to-system error model. An MCS with spectral efficiency SE
// needs roughly the Shannon SNR for SE plus a fixed implementation gap to
// decode at the waterfall midpoint; around that midpoint the block error
// rate follows a logistic curve. Retransmissions get a flat combining gain
// per prior attempt (Chase-style).
struct bler_model {
  double shannon_gap_db = 1.5;        // implementation gap over capacity
  double waterfall_slope_per_db = 2.0; // logistic steepness
  double harq_combining_gain_db = 3.0; // effective SINR gain per prior tx
};

// CQI selection target: highest CQI whose estimated BLER does not exceed 10%
// (the standard's CQI definition).
inline constexpr double cqi_bler_target = 0.1;

// SNR (dB) at which a code with the given spectral efficiency reaches 50%
// block error rate: Shannon inverse plus the model's implementation gap.
inline double snr_at_bler50_db(double spectral_efficiency, const bler_model& m) {
  if (!(spectral_efficiency > 0.0))
    throw std::domain_error("snr_at_bler50_db: spectral efficiency must be > 0");
  return 10.0 * std::log10(std::exp2(spectral_efficiency) - 1.0) + m.shannon_gap_db;
}

namespace detail {

inline double bler_for_se(double sinr_db, double spectral_efficiency, int tx_count,
                          const bler_model& m) {
  const double g50 = snr_at_bler50_db(spectral_efficiency, m);
  const double eff_sinr = sinr_db + (tx_count - 1) * m.harq_combining_gain_db;
  // Clamp the exponent so the result stays strictly inside (0, 1) even for
  // extreme SINR values.
  double a = m.waterfall_slope_per_db * (eff_sinr - g50);
  a = std::clamp(a, -700.0, 700.0);
  return 1.0 / (1.0 + std::exp(a));
}

}  // namespace detail

// Block error probability for one transmission attempt of the given MCS at
// the given SINR. tx_count = 1 is the initial transmission; later attempts
// add the HARQ combining gain.
inline double bler(double sinr_db, const mcs_entry& mcs, int tx_count, const bler_model& m) {
  if (mcs.reserved) throw std::domain_error("bler: reserved MCS row");
  if (tx_count < 1) throw std::domain_error("bler: tx_count must be >= 1");
  return detail::bler_for_se(sinr_db, mcs.spectral_efficiency, tx_count, m);
}

enum class crc_result { ack, nack };

// Bernoulli CRC outcome for a transport block with the given error
// probability. With p = 0 the result is always ACK; with p = 1 always NACK.
inline crc_result draw_crc(double bler_value, rng_stream& rng) {
  if (!(bler_value >= 0.0 && bler_value <= 1.0))
    throw std::domain_error("draw_crc: BLER outside [0, 1]");
  return rng.uniform01() < bler_value ? crc_result::nack : crc_result::ack;
}

// CQI report for a measured SINR: the highest CQI in the table whose
// first-transmission BLER estimate is at or below 10%. Returns 0
// (out of range) when even CQI 1 would be too error-prone.
inline int select_cqi(double sinr_db, const cqi_table& table, const bler_model& m) {
  for (int cqi = 15; cqi >= 1; --cqi) {
    const cqi_entry& e = table.rows[static_cast<std::size_t>(cqi)];
    if (detail::bler_for_se(sinr_db, e.spectral_efficiency, 1, m) <= cqi_bler_target)
      return cqi;
  }
  return 0;
}

}  // namespace fr2la
