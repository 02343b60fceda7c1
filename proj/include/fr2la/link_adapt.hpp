// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fr2la/nr_tables.hpp"
#include "fr2la/phy.hpp"

namespace fr2la {

// Outer-loop link adaptation: a running SINR offset nudged by HARQ feedback.
// The asymmetric steps make the NACK rate converge to the configured target:
// at equilibrium, nack_rate * step_down = (1 - nack_rate) * step_up.
struct olla_state {
  double offset_db = 0.0;
  double step_down_db = 0.5;
  double step_up_db = 0.5 * 0.1 / 0.9;
  double target_bler = 0.1;

  static olla_state from_target(double target_bler, double step_down_db) {
    if (!(target_bler > 0.0 && target_bler < 1.0))
      throw std::domain_error("OLLA target BLER must be in (0, 1)");
    if (!(step_down_db > 0.0))
      throw std::domain_error("OLLA step must be > 0");
    olla_state s;
    s.target_bler = target_bler;
    s.step_down_db = step_down_db;
    s.step_up_db = step_down_db * target_bler / (1.0 - target_bler);
    s.offset_db = 0.0;
    return s;
  }
};

inline constexpr double olla_offset_min_db = -15.0;
inline constexpr double olla_offset_max_db = 15.0;

// One feedback update. NACK lowers the offset (more conservative), ACK raises
// it by the smaller step; the offset is clamped to a sane window.
inline olla_state olla_update(olla_state s, crc_result feedback) {
  if (feedback == crc_result::nack)
    s.offset_db -= s.step_down_db;
  else
    s.offset_db += s.step_up_db;
  s.offset_db = std::clamp(s.offset_db, olla_offset_min_db, olla_offset_max_db);
  return s;
}

// Inner-loop link adaptation: map a CQI report plus the OLLA offset to an MCS
// row. The CQI's spectral efficiency is converted back to an SINR estimate,
// offset-corrected, and the highest MCS whose waterfall midpoint is at or
// below that estimate is picked. Falls back to the most robust row when even
// index 0 is above the estimate.
inline const mcs_entry& illa_select_mcs(int cqi, const cqi_table& ct, const mcs_table& mt,
                                        const olla_state& olla, const bler_model& m) {
  if (cqi < 1 || cqi > 15)
    throw std::domain_error("illa_select_mcs: CQI must be in 1..15");
  const cqi_entry& report = ct.rows[static_cast<std::size_t>(cqi)];
  const double sinr_est = snr_at_bler50_db(report.spectral_efficiency, m) + olla.offset_db;
  const mcs_entry* best = &mt.rows[0];
  for (const auto& e : mt.rows) {
    if (e.reserved) continue;
    if (snr_at_bler50_db(e.spectral_efficiency, m) <= sinr_est) best = &e;
  }
  return *best;
}

// MCS table selection policy: either pinned to one table or switching on a
// filtered SINR with hysteresis.
enum class table_mode_kind { fixed1, fixed2, fixed4, adaptive };

struct table_mode {
  table_mode_kind kind = table_mode_kind::fixed2;
  // Adaptive thresholds; NaN means "derive from the error model at startup".
  double switch_up_sinr_db = std::numeric_limits<double>::quiet_NaN();
  double switch_down_sinr_db = std::numeric_limits<double>::quiet_NaN();
  // Smoothing factor for the SINR estimate driving the switch decision.
  double sinr_filter_alpha = 0.05;
};

inline mcs_table_id fixed_table_of(table_mode_kind k) {
  switch (k) {
    case table_mode_kind::fixed1: return mcs_table_id::table1;
    case table_mode_kind::fixed2: return mcs_table_id::table2;
    case table_mode_kind::fixed4: return mcs_table_id::table4;
    case table_mode_kind::adaptive: break;
  }
  throw std::logic_error("fixed_table_of: not a fixed mode");
}

// Step the table choice. Fixed modes always return their table. Adaptive mode
// switches between table 1 and table 2 with hysteresis: table 2 at or above
// the upper threshold, table 1 at or below the lower one, otherwise unchanged.
inline mcs_table_id select_table(const table_mode& mode, double filtered_sinr_db,
                                 mcs_table_id current) {
  if (mode.kind != table_mode_kind::adaptive) return fixed_table_of(mode.kind);
  if (!(mode.switch_up_sinr_db > mode.switch_down_sinr_db))
    throw std::domain_error("adaptive table mode: switch-up must exceed switch-down");
  if (filtered_sinr_db >= mode.switch_up_sinr_db) return mcs_table_id::table2;
  if (filtered_sinr_db <= mode.switch_down_sinr_db) return mcs_table_id::table1;
  return current;
}

struct adaptive_thresholds {
  double crossover_sinr_db = 0.0;
  double switch_up_sinr_db = 0.0;
  double switch_down_sinr_db = 0.0;
};

// Derives default switching thresholds from the error model: the SINR where
// the 256QAM rows of table 2 start to beat everything table 1 offers in
// expected goodput (SE * (1 - BLER)), widened by a hysteresis margin.
inline adaptive_thresholds derive_adaptive_thresholds(const bler_model& m,
                                                      double hysteresis_db = 3.0) {
  const auto& t1 = get_mcs_table(mcs_table_id::table1);
  const auto& t2 = get_mcs_table(mcs_table_id::table2);
  const auto goodput = [&](const mcs_table& t, int min_qm, double sinr) {
    double best = 0.0;
    for (const auto& e : t.rows) {
      if (e.reserved || e.qm < min_qm) continue;
      const double g = e.spectral_efficiency *
                       (1.0 - detail::bler_for_se(sinr, e.spectral_efficiency, 1, m));
      best = std::max(best, g);
    }
    return best;
  };
  for (double sinr = -10.0; sinr <= 40.0; sinr += 0.01) {
    if (goodput(t2, 8, sinr) > goodput(t1, 0, sinr)) {
      return {sinr, sinr + hysteresis_db, sinr - hysteresis_db};
    }
  }
  throw std::logic_error("derive_adaptive_thresholds: no crossover found");
}

}  // namespace fr2la
