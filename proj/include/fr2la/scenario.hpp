// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <vector>

#include "fr2la/channel.hpp"
#include "fr2la/link_adapt.hpp"
#include "fr2la/mac.hpp"

namespace fr2la {

// Mobility templates. fixed_distance holds the terminal at one spot while
// keeping the configured speed for the fading process, so distance sweeps see
// fading dynamics that match the mobility pattern under study.
enum class scenario_kind { stationary, walking, biking, fixed_distance };

struct scenario_config {
  scenario_kind kind = scenario_kind::stationary;
  double initial_distance_m = 10.0;  // route start (2D distance to the site)
  double fixed_distance_m = 10.0;    // position for fixed_distance runs
  double duration_s = 10.0;
  double speed_mps = 0.0;
  double walking_leg_m = 45.0;       // out-and-back leg length for walking
  std::uint64_t seed = 1;

  link_budget budget;
  channel_fading_params fading;
  bler_model bler;
  olla_state olla;
  table_mode mode;
  mac_config mac;

  int cqi_period_slots = 40;  // 5 ms at 120 kHz numerology
  int cqi_delay_slots = 8;    // reporting latency: report reflects SINR 1 ms ago

  bool keep_slot_records = false;
};

inline void validate_scenario(const scenario_config& cfg) {
  validate_budget(cfg.budget);
  validate_mac_config(cfg.mac);
  if (!(cfg.duration_s > 0.0)) throw std::domain_error("scenario: duration must be > 0");
  if (cfg.speed_mps < 0.0) throw std::domain_error("scenario: speed must be >= 0");
  if (cfg.kind == scenario_kind::stationary && cfg.speed_mps != 0.0)
    throw std::domain_error("scenario: stationary runs must have zero speed");
  if ((cfg.kind == scenario_kind::walking || cfg.kind == scenario_kind::biking) &&
      !(cfg.speed_mps > 0.0))
    throw std::domain_error("scenario: mobile runs need a positive speed");
  if (cfg.kind == scenario_kind::walking && !(cfg.walking_leg_m > 0.0))
    throw std::domain_error("scenario: walking leg must be > 0");
  if (cfg.initial_distance_m < 0.0 || cfg.fixed_distance_m < 0.0)
    throw std::domain_error("scenario: distances must be >= 0");
  if (cfg.cqi_period_slots < 1) throw std::domain_error("scenario: CQI period must be >= 1");
  if (cfg.cqi_delay_slots < 0) throw std::domain_error("scenario: CQI delay must be >= 0");
  if (!(cfg.mode.sinr_filter_alpha > 0.0 && cfg.mode.sinr_filter_alpha <= 1.0))
    throw std::domain_error("scenario: SINR filter alpha must be in (0, 1]");
}

// Route position (2D distance from the site) at elapsed time t. Walking is a
// periodic out-and-back along a straight street; biking walks away one-way.
inline double trajectory_distance(const scenario_config& cfg, double t_s) {
  if (t_s < 0.0 || t_s > cfg.duration_s + 1e-9)
    throw std::domain_error("trajectory_distance: time outside the run");
  switch (cfg.kind) {
    case scenario_kind::stationary:
      return cfg.initial_distance_m;
    case scenario_kind::fixed_distance:
      return cfg.fixed_distance_m;
    case scenario_kind::walking: {
      const double leg_time = cfg.walking_leg_m / cfg.speed_mps;
      const double phase = std::fmod(t_s, 2.0 * leg_time);
      const double offset =
          phase <= leg_time ? cfg.speed_mps * phase
                            : 2.0 * cfg.walking_leg_m - cfg.speed_mps * phase;
      return cfg.initial_distance_m + offset;
    }
    case scenario_kind::biking:
      return cfg.initial_distance_m + cfg.speed_mps * t_s;
  }
  throw std::logic_error("trajectory_distance: bad scenario kind");
}

// Runs one downlink session slot by slot. Everything is driven by the master
// seed through labeled substreams; equal configs give identical results.
inline run_metrics run(const scenario_config& cfg_in) {
  scenario_config cfg = cfg_in;
  if (cfg.mode.kind == table_mode_kind::adaptive &&
      (std::isnan(cfg.mode.switch_up_sinr_db) || std::isnan(cfg.mode.switch_down_sinr_db))) {
    const adaptive_thresholds th = derive_adaptive_thresholds(cfg.bler);
    cfg.mode.switch_up_sinr_db = th.switch_up_sinr_db;
    cfg.mode.switch_down_sinr_db = th.switch_down_sinr_db;
  }
  validate_scenario(cfg);

  const tdd_pattern& pat = cfg.mac.pattern;
  const double dt = pat.slot_duration_s;
  const long n_slots =
      std::max<long>(pat.period_slots, std::llround(cfg.duration_s / dt));

  channel_state chan =
      make_channel_state(cfg.seed, cfg.fading, trajectory_distance(cfg, 0.0));
  rng_stream crc_rng(substream_seed(cfg.seed, rng_label::crc));
  scheduler sched(cfg.mac, cfg.mode, cfg.olla, cfg.bler);

  std::vector<double> sinr_history;
  sinr_history.reserve(static_cast<std::size_t>(n_slots));
  metrics_accumulator acc(pat);
  std::vector<slot_record> records;
  if (cfg.keep_slot_records) records.reserve(static_cast<std::size_t>(n_slots));

  for (long s = 0; s < n_slots; ++s) {
    const double t = std::min(static_cast<double>(s) * dt, cfg.duration_s);
    const double d = trajectory_distance(cfg, t);
    advance_shadow(chan, d, cfg.fading.sigma_sf_db, cfg.fading.decorr_m);
    advance_fading(chan, dt, cfg.speed_mps, cfg.budget, cfg.fading.k_factor_db);
    const link_sample link = sample_link(d, chan, cfg.budget);
    sinr_history.push_back(link.sinr_db);

    if (s % cfg.cqi_period_slots == 0) {
      const long ref = std::max<long>(0, s - cfg.cqi_delay_slots);
      sched.on_cqi_report(sinr_history[static_cast<std::size_t>(ref)]);
    }

    if (const auto rec = sched.advance(s, d, link, crc_rng)) {
      acc.add(*rec);
      if (cfg.keep_slot_records) records.push_back(*rec);
    }
  }

  run_metrics m = acc.finalize(n_slots, sched.dropped_blocks());
  m.slot_records = std::move(records);
  return m;
}

// ---------------------------------------------------------------------------
// Distance sweep: a grid of (distance, MCS table, seed) runs for
// throughput-versus-distance comparisons. Runs share channel randomness per
// seed, so table comparisons at a grid point are paired.
// ---------------------------------------------------------------------------

struct sweep_point {
  double distance_m = 0.0;
  mcs_table_id table = mcs_table_id::table1;
  std::uint64_t seed = 0;
  run_metrics metrics;
};

struct sweep_result {
  std::vector<double> distances_m;
  std::vector<mcs_table_id> tables;
  std::vector<std::uint64_t> seeds;
  // Ordered distance-major, then table, then seed.
  std::vector<sweep_point> points;
};

inline table_mode_kind fixed_mode_of(mcs_table_id id) {
  switch (id) {
    case mcs_table_id::table1: return table_mode_kind::fixed1;
    case mcs_table_id::table2: return table_mode_kind::fixed2;
    case mcs_table_id::table4: return table_mode_kind::fixed4;
  }
  throw std::logic_error("fixed_mode_of: bad mcs_table_id");
}

inline sweep_result sweep(const scenario_config& base, std::span<const double> distances_m,
                          std::span<const mcs_table_id> tables,
                          std::span<const std::uint64_t> seeds, int jobs = 0) {
  if (distances_m.empty() || tables.empty() || seeds.empty())
    throw std::domain_error("sweep: distances, tables and seeds must be non-empty");
  for (std::size_t i = 0; i + 1 < distances_m.size(); ++i)
    if (!(distances_m[i] < distances_m[i + 1]))
      throw std::domain_error("sweep: distances must be strictly ascending");
  for (const double d : distances_m)
    if (!(d > 0.0)) throw std::domain_error("sweep: distances must be positive");

  sweep_result out;
  out.distances_m.assign(distances_m.begin(), distances_m.end());
  out.tables.assign(tables.begin(), tables.end());
  out.seeds.assign(seeds.begin(), seeds.end());
  out.points.resize(distances_m.size() * tables.size() * seeds.size());

  const auto point_config = [&](std::size_t flat) {
    const std::size_t per_d = tables.size() * seeds.size();
    const std::size_t di = flat / per_d;
    const std::size_t ti = (flat % per_d) / seeds.size();
    const std::size_t si = flat % seeds.size();
    scenario_config cfg = base;
    cfg.kind = scenario_kind::fixed_distance;
    cfg.fixed_distance_m = distances_m[di];
    cfg.initial_distance_m = distances_m[di];
    cfg.mode.kind = fixed_mode_of(tables[ti]);
    cfg.seed = seeds[si];
    cfg.keep_slot_records = false;
    return std::tuple(cfg, distances_m[di], tables[ti], seeds[si]);
  };

  const std::size_t total = out.points.size();
  unsigned n_threads = jobs > 0 ? static_cast<unsigned>(jobs)
                                : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(total));

  if (n_threads <= 1) {
    for (std::size_t i = 0; i < total; ++i) {
      auto [cfg, d, t, s] = point_config(i);
      out.points[i] = {d, t, s, run(cfg)};
    }
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total || failed.load()) return;
      try {
        auto [cfg, d, t, s] = point_config(i);
        out.points[i] = {d, t, s, run(cfg)};
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failed.load()) std::rethrow_exception(first_error);
  return out;
}

// Seed statistics of MAC throughput (Mbps) at one grid point.
struct seed_stats {
  double mean_mbps = 0.0;
  double stddev_mbps = 0.0;  // sample standard deviation over seeds
  long n = 0;
};

inline seed_stats sweep_stats(const sweep_result& r, double distance_m, mcs_table_id table) {
  double sum = 0.0, sum_sq = 0.0;
  long n = 0;
  for (const auto& p : r.points) {
    if (p.distance_m == distance_m && p.table == table) {
      const double v = p.metrics.mac_throughput_bps / 1e6;
      sum += v;
      sum_sq += v * v;
      ++n;
    }
  }
  if (n == 0) throw std::domain_error("sweep_stats: no such grid point");
  seed_stats s;
  s.n = n;
  s.mean_mbps = sum / static_cast<double>(n);
  if (n > 1)
    s.stddev_mbps = std::sqrt(
        std::max(0.0, (sum_sq - static_cast<double>(n) * s.mean_mbps * s.mean_mbps) /
                          static_cast<double>(n - 1)));
  return s;
}

inline double mean_mac_mbps(const sweep_result& r, double distance_m, mcs_table_id table) {
  return sweep_stats(r, distance_m, table).mean_mbps;
}

}  // namespace fr2la
