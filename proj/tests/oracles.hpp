// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT
//
// Reference implementations used only by tests. Each one recomputes a main-
// path result by a deliberately direct route (floating-point step-by-step
// procedure, textbook formula, exhaustive scan) so agreement is meaningful.

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "fr2la/channel.hpp"
#include "fr2la/mac.hpp"
#include "fr2la/nr_tables.hpp"
#include "fr2la/phy.hpp"
#include "fr2la/util.hpp"

namespace fr2la::oracle {

// One compared case. Reports are recorded for every case, pass or fail.
struct oracle_report {
  std::string case_id;
  double main_value = 0.0;
  double oracle_value = 0.0;

  double abs_diff() const { return std::abs(main_value - oracle_value); }
  double rel_diff() const {
    const double denom = std::max(std::abs(main_value), std::abs(oracle_value));
    return denom == 0.0 ? 0.0 : abs_diff() / denom;
  }
};

class oracle_log {
 public:
  explicit oracle_log(std::string name) : name_(std::move(name)) {}

  void add(std::string case_id, double main_value, double oracle_value) {
    reports_.push_back({std::move(case_id), main_value, oracle_value});
  }

  std::size_t size() const { return reports_.size(); }

  std::size_t mismatches(double tolerance = 0.0) const {
    std::size_t n = 0;
    for (const auto& r : reports_)
      if (r.abs_diff() > tolerance) ++n;
    return n;
  }

  const oracle_report* worst() const {
    const oracle_report* w = nullptr;
    for (const auto& r : reports_)
      if (!w || r.abs_diff() > w->abs_diff()) w = &r;
    return w;
  }

  // Full per-case report (passes included) written next to the test binary.
  void write_file() const {
    std::ofstream f(name_ + "_oracle_report.csv");
    f << "case,main,oracle,abs_diff,rel_diff\n";
    for (const auto& r : reports_)
      f << r.case_id << ',' << fmt_shortest(r.main_value) << ','
        << fmt_shortest(r.oracle_value) << ',' << fmt_shortest(r.abs_diff()) << ','
        << fmt_shortest(r.rel_diff()) << '\n';
  }

 private:
  std::string name_;
  std::vector<oracle_report> reports_;
};

// ---------------------------------------------------------------------------
// Transport block size, floating-point transcription of the TS 38.214
// 5.1.3.2 procedure. The main path carries N_info as an exact scaled integer;
// this one follows the printed text with doubles and log2/floor/round calls.
// ---------------------------------------------------------------------------

inline long tbs_oracle(const tbs_input& in) {
  if (in.mcs.reserved) throw std::domain_error("tbs_oracle: reserved MCS row");
  if (in.n_prb < 1 || in.n_symbols_data < 1 || in.n_symbols_data > 14)
    throw std::domain_error("tbs_oracle: bad allocation");

  // Step 1: resource elements.
  const double re_prime =
      12.0 * in.n_symbols_data - in.n_dmrs_re_per_prb - in.x_overhead;
  const double n_re = std::min(156.0, re_prime) * in.n_prb;

  // Step 2: unquantized information bits.
  const double rate = in.mcs.code_rate_x1024 / 1024.0;
  const double ninfo = n_re * rate * in.mcs.qm * in.n_layers;

  if (ninfo <= 3824.0) {
    // Step 3: quantize, then read the lookup table.
    const int n = std::max(3, static_cast<int>(std::floor(std::log2(ninfo))) - 6);
    const double pow2n = std::exp2(n);
    const double ninfo_q = std::max(24.0, pow2n * std::floor(ninfo / pow2n));
    for (const long tbs : get_tbs_small_table())
      if (static_cast<double>(tbs) >= ninfo_q) return tbs;
    throw std::logic_error("tbs_oracle: quantized N_info above the lookup table");
  }

  // Step 4: N_info > 3824.
  const int n = static_cast<int>(std::floor(std::log2(ninfo - 24.0))) - 5;
  const double pow2n = std::exp2(n);
  const double ninfo_q = std::max(3840.0, pow2n * std::round((ninfo - 24.0) / pow2n));
  const auto ceil_div = [](double a, double b) { return std::ceil(a / b); };
  if (rate <= 0.25) {
    const double c = ceil_div(ninfo_q + 24.0, 3816.0);
    return static_cast<long>(8.0 * c * ceil_div(ninfo_q + 24.0, 8.0 * c) - 24.0);
  }
  if (ninfo_q > 8424.0) {
    const double c = ceil_div(ninfo_q + 24.0, 8424.0);
    return static_cast<long>(8.0 * c * ceil_div(ninfo_q + 24.0, 8.0 * c) - 24.0);
  }
  return static_cast<long>(8.0 * ceil_div(ninfo_q + 24.0, 8.0) - 24.0);
}

// ---------------------------------------------------------------------------
// Urban-micro LOS path loss, direct formula evaluation (TR 38.901
// Table 7.4.1-1) with pow/sqrt instead of the main path's hypot.
// ---------------------------------------------------------------------------

inline double path_loss_oracle(double d2d_m, const link_budget& b) {
  const double d2d = std::min(5000.0, std::max(10.0, d2d_m));
  const double dh = b.h_bs_m - b.h_ut_m;
  const double d3d = std::sqrt(d2d * d2d + dh * dh);
  const double fc = b.carrier_freq_ghz;
  const double d_bp =
      4.0 * (b.h_bs_m - 1.0) * (b.h_ut_m - 1.0) * (fc * 1e9) / 3.0e8;
  if (d2d <= d_bp) return 32.4 + 21.0 * std::log10(d3d) + 20.0 * std::log10(fc);
  return 32.4 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc) -
         9.5 * std::log10(d_bp * d_bp + dh * dh);
}

// ---------------------------------------------------------------------------
// MCS selection by exhaustive scan: recompute the SINR estimate from the CQI
// row and test every row of the MCS table against the waterfall-midpoint
// formula, keeping the highest qualifying index (0 when none qualifies).
// ---------------------------------------------------------------------------

inline int illa_scan_oracle(int cqi, cqi_table_id ct_id, mcs_table_id mt_id,
                            double offset_db, const bler_model& m) {
  if (cqi < 1 || cqi > 15) throw std::domain_error("illa_scan_oracle: CQI must be in 1..15");
  const auto mid_snr = [&](double se) {
    return 10.0 * std::log10(std::exp2(se) - 1.0) + m.shannon_gap_db;
  };
  const cqi_entry& report = get_cqi_table(ct_id).rows[static_cast<std::size_t>(cqi)];
  const double sinr_est = mid_snr(report.spectral_efficiency) + offset_db;
  int best = 0;
  for (const auto& row : get_mcs_table(mt_id).rows) {
    if (row.reserved) continue;
    if (mid_snr(row.spectral_efficiency) <= sinr_est) best = row.index;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Closed-form peak throughput: slots-per-second times the airtime-weighted
// transport block size at the table's top MCS. With control overhead
// included, each DL slot loses the PDCCH symbols before the TBS computation.
// ---------------------------------------------------------------------------

struct peak_tbs_params {
  int n_prb = 66;
  int dmrs_re_per_prb = 12;
  int x_overhead = 0;
  int n_layers = 2;
  int coreset_symbols = 1;
};

inline double peak_throughput_closed_form(mcs_table_id id, const tdd_pattern& pattern,
                                          const peak_tbs_params& p = {},
                                          bool include_control_overhead = true) {
  const mcs_entry& top = get_mcs_table(id).top();
  double bits_per_period = 0.0;
  for (int s = 0; s < pattern.period_slots; ++s) {
    const int dl = dl_symbols_in_slot(pattern, s);
    if (dl == 0) continue;
    const int data = dl - (include_control_overhead ? p.coreset_symbols : 0);
    if (data < 1) continue;
    tbs_input in;
    in.n_prb = p.n_prb;
    in.n_symbols_data = data;
    in.n_dmrs_re_per_prb = p.dmrs_re_per_prb;
    in.x_overhead = p.x_overhead;
    in.n_layers = p.n_layers;
    in.mcs = top;
    bits_per_period += static_cast<double>(tbs_oracle(in));
  }
  return bits_per_period / (pattern.period_slots * pattern.slot_duration_s);
}

}  // namespace fr2la::oracle
