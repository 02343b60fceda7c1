// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "fr2la/link_adapt.hpp"
#include "oracles.hpp"

using namespace fr2la;
using Catch::Matchers::WithinAbs;

TEST_CASE("outer-loop step asymmetry encodes the BLER target", "[link_adapt]") {
  const olla_state s = olla_state::from_target(0.1, 0.5);
  CHECK(s.offset_db == 0.0);
  CHECK(s.step_down_db == 0.5);
  CHECK_THAT(s.step_up_db, WithinAbs(1.0 / 18.0, 1e-12));
  // Equilibrium condition: p * down == (1 - p) * up at p == target.
  CHECK_THAT(0.1 * s.step_down_db, WithinAbs(0.9 * s.step_up_db, 1e-12));

  CHECK_THROWS_AS(olla_state::from_target(0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(olla_state::from_target(1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(olla_state::from_target(0.1, 0.0), std::domain_error);
  CHECK_THROWS_AS(olla_state::from_target(0.1, -0.5), std::domain_error);
}

TEST_CASE("outer-loop updates step and clamp as specified", "[link_adapt]") {
  olla_state s = olla_state::from_target(0.1, 0.5);
  s = olla_update(s, crc_result::nack);
  CHECK_THAT(s.offset_db, WithinAbs(-0.5, 1e-12));
  s = olla_update(s, crc_result::ack);
  CHECK_THAT(s.offset_db, WithinAbs(-0.5 + 1.0 / 18.0, 1e-12));

  // NACKs pin the offset at the lower clamp.
  for (int i = 0; i < 100; ++i) s = olla_update(s, crc_result::nack);
  CHECK(s.offset_db == olla_offset_min_db);
  s = olla_update(s, crc_result::nack);
  CHECK(s.offset_db == olla_offset_min_db);

  // A long ACK run walks it all the way to the upper clamp and no further.
  double prev = s.offset_db;
  for (int i = 0; i < 1000; ++i) {
    s = olla_update(s, crc_result::ack);
    CHECK(s.offset_db >= prev);
    CHECK(s.offset_db <= olla_offset_max_db);
    prev = s.offset_db;
  }
  CHECK(s.offset_db == olla_offset_max_db);

  // Alternating feedback has negative drift at a 10% target.
  olla_state alt = olla_state::from_target(0.1, 0.5);
  for (int i = 0; i < 100; ++i) {
    alt = olla_update(alt, crc_result::ack);
    alt = olla_update(alt, crc_result::nack);
  }
  CHECK(alt.offset_db == olla_offset_min_db);
}

TEST_CASE("outer-loop offsets scale exactly with the step size", "[link_adapt]") {
  olla_state big = olla_state::from_target(0.1, 0.5);
  olla_state half = olla_state::from_target(0.1, 0.25);
  rng_stream rng(17);
  for (int i = 0; i < 200; ++i) {
    const crc_result fb = rng.uniform01() < 0.1 ? crc_result::nack : crc_result::ack;
    big = olla_update(big, fb);
    half = olla_update(half, fb);
    REQUIRE(std::abs(big.offset_db) < olla_offset_max_db);  // clamp would break scaling
    CHECK(half.offset_db == big.offset_db / 2.0);
  }
}

TEST_CASE("closed loop settles at the first-transmission error target", "[link_adapt]") {
  const bler_model m;
  const cqi_table& ct = get_cqi_table(cqi_table_id::table3);
  const mcs_table& mt = get_mcs_table(mcs_table_id::table2);
  const double true_sinr = 15.0;
  const int cqi = select_cqi(true_sinr, ct, m);
  REQUIRE(cqi >= 1);

  olla_state olla = olla_state::from_target(0.1, 0.5);
  rng_stream rng(1001);
  const auto step = [&]() {
    const mcs_entry& mcs = illa_select_mcs(cqi, ct, mt, olla, m);
    const crc_result fb = draw_crc(bler(true_sinr, mcs, 1, m), rng);
    olla = olla_update(olla, fb);
    return fb;
  };
  for (int i = 0; i < 2000; ++i) step();  // warm-up
  int nacks = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    if (step() == crc_result::nack) ++nacks;
  const double rate = static_cast<double>(nacks) / n;
  CHECK(rate >= 0.08);
  CHECK(rate <= 0.12);
}

TEST_CASE("inner-loop selection worked examples", "[link_adapt]") {
  const bler_model m;
  const olla_state neutral;
  const cqi_table& c3 = get_cqi_table(cqi_table_id::table3);
  const mcs_table& t2 = get_mcs_table(mcs_table_id::table2);

  // Top CQI with no offset maps to the top MCS row.
  CHECK(illa_select_mcs(15, c3, t2, neutral, m).index == 27);
  // The lowest CQI's SINR estimate sits below every table-2 midpoint:
  // fall back to the most robust row.
  CHECK(illa_select_mcs(1, c3, t2, neutral, m).index == 0);

  // A -15 dB offset floors low and mid reports at index 0.
  olla_state floor = neutral;
  floor.offset_db = -15.0;
  for (int cqi : {1, 3, 5}) CHECK(illa_select_mcs(cqi, c3, t2, floor, m).index == 0);

  CHECK_THROWS_AS(illa_select_mcs(0, c3, t2, neutral, m), std::domain_error);
  CHECK_THROWS_AS(illa_select_mcs(16, c3, t2, neutral, m), std::domain_error);
}

TEST_CASE("inner-loop selection is monotone and never picks reserved rows",
          "[link_adapt]") {
  const bler_model m;
  const std::vector<std::pair<cqi_table_id, mcs_table_id>> pairs = {
      {cqi_table_id::table2, mcs_table_id::table1},
      {cqi_table_id::table3, mcs_table_id::table2},
      {cqi_table_id::table5, mcs_table_id::table4},
  };
  for (const auto& [ct_id, mt_id] : pairs) {
    const cqi_table& ct = get_cqi_table(ct_id);
    const mcs_table& mt = get_mcs_table(mt_id);
    for (int cqi = 1; cqi <= 15; ++cqi) {
      int prev = 0;
      for (double off = -15.0; off <= 15.0; off += 0.25) {
        olla_state s;
        s.offset_db = off;
        const mcs_entry& e = illa_select_mcs(cqi, ct, mt, s, m);
        CHECK_FALSE(e.reserved);
        CHECK(e.index >= prev);  // a larger offset never lowers the index
        prev = e.index;
      }
    }
    // And at fixed offset, a better CQI report never lowers the index.
    olla_state s;
    int prev = 0;
    for (int cqi = 1; cqi <= 15; ++cqi) {
      const int idx = illa_select_mcs(cqi, ct, mt, s, m).index;
      CHECK(idx >= prev);
      prev = idx;
    }
  }
}

TEST_CASE("inner-loop selection matches the exhaustive scan on the full grid",
          "[link_adapt]") {
  const bler_model m;
  oracle::oracle_log log("illa_grid");
  const std::vector<std::pair<cqi_table_id, mcs_table_id>> pairs = {
      {cqi_table_id::table2, mcs_table_id::table1},
      {cqi_table_id::table3, mcs_table_id::table2},
      {cqi_table_id::table5, mcs_table_id::table4},
  };
  for (const auto& [ct_id, mt_id] : pairs) {
    const cqi_table& ct = get_cqi_table(ct_id);
    const mcs_table& mt = get_mcs_table(mt_id);
    for (int cqi = 1; cqi <= 15; ++cqi) {
      for (int k = -60; k <= 60; ++k) {
        const double off = 0.25 * k;
        olla_state s;
        s.offset_db = off;
        const int got = illa_select_mcs(cqi, ct, mt, s, m).index;
        const int want = oracle::illa_scan_oracle(cqi, ct_id, mt_id, off, m);
        log.add("c" + std::to_string(static_cast<int>(ct_id)) + "/cqi" +
                    std::to_string(cqi) + "/off" + std::to_string(off),
                got, want);
      }
    }
  }
  CHECK(log.size() == 5445);
  log.write_file();
  REQUIRE(log.mismatches(0.0) == 0);
}

TEST_CASE("table selection policy: fixed modes and hysteresis switching",
          "[link_adapt]") {
  for (double sinr : {-50.0, 0.0, 50.0}) {
    for (mcs_table_id cur : {mcs_table_id::table1, mcs_table_id::table2}) {
      CHECK(select_table({table_mode_kind::fixed1}, sinr, cur) == mcs_table_id::table1);
      CHECK(select_table({table_mode_kind::fixed2}, sinr, cur) == mcs_table_id::table2);
      CHECK(select_table({table_mode_kind::fixed4}, sinr, cur) == mcs_table_id::table4);
    }
  }

  table_mode adaptive;
  adaptive.kind = table_mode_kind::adaptive;
  adaptive.switch_up_sinr_db = 22.0;
  adaptive.switch_down_sinr_db = 16.0;
  CHECK(select_table(adaptive, 25.0, mcs_table_id::table1) == mcs_table_id::table2);
  CHECK(select_table(adaptive, 22.0, mcs_table_id::table1) == mcs_table_id::table2);
  CHECK(select_table(adaptive, 19.0, mcs_table_id::table2) == mcs_table_id::table2);
  CHECK(select_table(adaptive, 19.0, mcs_table_id::table1) == mcs_table_id::table1);
  CHECK(select_table(adaptive, 16.0, mcs_table_id::table2) == mcs_table_id::table1);
  CHECK(select_table(adaptive, 10.0, mcs_table_id::table2) == mcs_table_id::table1);

  table_mode bad = adaptive;
  bad.switch_up_sinr_db = 16.0;
  CHECK_THROWS_AS(select_table(bad, 19.0, mcs_table_id::table1), std::domain_error);

  // Inside the deadband the choice never chatters.
  rng_stream rng(3);
  mcs_table_id cur = mcs_table_id::table1;
  for (int i = 0; i < 1000; ++i) {
    const double sinr = 16.01 + rng.uniform01() * 5.98;
    cur = select_table(adaptive, sinr, cur);
    CHECK(cur == mcs_table_id::table1);
  }
}

TEST_CASE("derived switching thresholds sit at the goodput crossover",
          "[link_adapt]") {
  const bler_model m;
  const adaptive_thresholds th = derive_adaptive_thresholds(m);
  CHECK_THAT(th.switch_up_sinr_db - th.switch_down_sinr_db, WithinAbs(6.0, 1e-9));
  CHECK_THAT(th.switch_up_sinr_db - th.crossover_sinr_db, WithinAbs(3.0, 1e-9));
  CHECK(th.crossover_sinr_db > 15.0);
  CHECK(th.crossover_sinr_db < 25.0);

  const adaptive_thresholds narrow = derive_adaptive_thresholds(m, 2.0);
  CHECK_THAT(narrow.switch_up_sinr_db - narrow.switch_down_sinr_db, WithinAbs(4.0, 1e-9));
  CHECK_THAT(narrow.crossover_sinr_db, WithinAbs(th.crossover_sinr_db, 1e-12));

  // Replicate the goodput comparison: below the crossover the 64QAM table
  // still wins (or ties); at the crossover the 256QAM rows take over.
  const auto best_goodput = [&](mcs_table_id id, int min_qm, double sinr) {
    double best = 0.0;
    for (const auto& e : get_mcs_table(id).rows) {
      if (e.reserved || e.qm < min_qm) continue;
      best = std::max(best, e.spectral_efficiency *
                                (1.0 - detail::bler_for_se(sinr, e.spectral_efficiency,
                                                           1, m)));
    }
    return best;
  };
  const double x = th.crossover_sinr_db;
  CHECK(best_goodput(mcs_table_id::table2, 8, x) > best_goodput(mcs_table_id::table1, 0, x));
  CHECK(best_goodput(mcs_table_id::table2, 8, x - 0.01) <=
        best_goodput(mcs_table_id::table1, 0, x - 0.01));
}
