// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT
//
// End-to-end acceptance suite. Each criterion prints one [PASS]/[FAIL] line
// with its runtime; the exit status is the number of failed criteria.
// Usage: fr2la_acceptance <path-to-fr2la-cli>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fr2la/csv.hpp"
#include "fr2la/fieldstats.hpp"
#include "../oracles.hpp"

namespace {

using namespace fr2la;

std::string g_cli_path;

struct check_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw check_failure(what);
}

template <typename T>
std::string str(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// --- criterion 1: table content ---------------------------------------------

void check_tables() {
  const std::map<mcs_table_id, std::string> mcs_sums{
      {mcs_table_id::table1, "fa3964974edfd16f"},
      {mcs_table_id::table2, "1e745d492eadad92"},
      {mcs_table_id::table4, "f6a71eec3721506c"},
  };
  for (const auto& [id, sum] : mcs_sums) {
    const std::string got = to_hex(table_checksum(get_mcs_table(id)));
    expect(got == sum, "MCS table " + str(table_number(id)) + " checksum " + got +
                           " != " + sum);
  }
  const std::map<cqi_table_id, std::string> cqi_sums{
      {cqi_table_id::table2, "ca799bc8a0c679e5"},
      {cqi_table_id::table3, "d2b980df05a0ae69"},
      {cqi_table_id::table5, "394f846ac2a05a87"},
  };
  for (const auto& [id, sum] : cqi_sums) {
    const std::string got = to_hex(table_checksum(get_cqi_table(id)));
    expect(got == sum, "CQI table " + str(table_number(id)) + " checksum " + got +
                           " != " + sum);
  }

  expect(get_mcs_table(mcs_table_id::table1).top_index == 28, "table 1 top index");
  expect(get_mcs_table(mcs_table_id::table2).top_index == 27, "table 2 top index");
  expect(get_mcs_table(mcs_table_id::table4).top_index == 26, "table 4 top index");

  const double ratio = peak_spectral_ratio(mcs_table_id::table2, mcs_table_id::table1);
  expect(std::abs(ratio - 1.3333) <= 0.0001,
         "peak spectral efficiency ratio " + str(ratio) + " not within 1.3333 +/- 0.0001");
}

// --- criterion 2: TBS vs independent reimplementation -----------------------

void check_tbs_oracle() {
  oracle::oracle_log log("acceptance_tbs");
  for (const mcs_table_id id :
       {mcs_table_id::table1, mcs_table_id::table2, mcs_table_id::table4}) {
    const mcs_table& t = get_mcs_table(id);
    for (const mcs_entry& e : t.rows) {
      if (e.reserved) continue;
      for (int prb = 1; prb <= 66; ++prb) {
        for (int layers : {1, 2, 4}) {
          tbs_input in;
          in.n_prb = prb;
          in.n_symbols_data = 13;
          in.n_dmrs_re_per_prb = 12;
          in.x_overhead = 0;
          in.n_layers = layers;
          in.mcs = e;
          log.add("t" + str(table_number(id)) + "/i" + str(e.index) + "/p" + str(prb) +
                      "/l" + str(layers),
                  static_cast<double>(compute_tbs(in)),
                  static_cast<double>(oracle::tbs_oracle(in)));
        }
      }
    }
  }
  expect(log.size() == (29 + 28 + 27) * 66 * 3, "unexpected grid size " + str(log.size()));
  const std::size_t bad = log.mismatches(0.0);
  const auto* worst = log.worst();
  expect(bad == 0, str(bad) + " of " + str(log.size()) + " TBS values disagree (worst: " +
                       (worst ? worst->case_id : std::string("none")) + ")");

  tbs_input peak;
  peak.n_prb = 66;
  peak.n_symbols_data = 13;
  peak.n_dmrs_re_per_prb = 12;
  peak.x_overhead = 0;
  peak.n_layers = 2;
  peak.mcs = get_mcs_table(mcs_table_id::table2).top();
  expect(compute_tbs(peak) == 139376, "peak table-2 TBS != 139376");
}

// --- criterion 3: path loss vs closed form ----------------------------------

void check_path_loss() {
  link_budget b;
  b.eirp_dbm = 30.0;
  b.noise_figure_db = 10.0;

  const struct {
    double d, pl;
  } examples[] = {{10.0, 83.77}, {100.0, 102.32}, {250.0, 110.65}};
  for (const auto& ex : examples) {
    const double got = umi_los_path_loss_db(ex.d, b);
    expect(std::abs(got - ex.pl) <= 0.01,
           "path loss at " + str(ex.d) + " m: " + str(got) + " != " + str(ex.pl));
  }

  rng_stream rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double d = std::pow(10.0, 1.0 + 2.7 * rng.uniform01());  // 10 m .. 5 km
    const double got = umi_los_path_loss_db(d, b);
    const double want = oracle::path_loss_oracle(d, b);
    worst = std::max(worst, std::abs(got - want));
  }
  expect(worst < 1e-9, "path loss differs from the closed form by " + str(worst));

  const double bp = breakpoint_distance_m(b);
  const double below = umi_los_path_loss_db(bp * (1.0 - 1e-9), b);
  const double above = umi_los_path_loss_db(bp * (1.0 + 1e-9), b);
  expect(std::abs(above - below) < 0.01,
         "discontinuity at the breakpoint: " + str(std::abs(above - below)) + " dB");
}

// --- criterion 4: OLLA holds its BLER target --------------------------------

void check_olla_convergence() {
  const bler_model model;
  const cqi_table& c3 = get_cqi_table(cqi_table_id::table3);
  const mcs_table& t2 = get_mcs_table(mcs_table_id::table2);
  const double true_sinr_db = 15.0;
  const int cqi = select_cqi(true_sinr_db, c3, model);
  expect(cqi >= 1 && cqi <= 15, "CQI out of range");

  olla_state olla = olla_state::from_target(0.1, 0.5);
  rng_stream rng(1001);
  long nacks = 0, total = 0;
  for (int i = 0; i < 12000; ++i) {
    const mcs_entry& e = illa_select_mcs(cqi, c3, t2, olla, model);
    const double p = bler(true_sinr_db, e, 1, model);
    const crc_result crc = draw_crc(p, rng);
    olla = olla_update(olla, crc);
    if (i >= 2000) {  // warm-up excluded from the measurement
      ++total;
      if (crc == crc_result::nack) ++nacks;
    }
  }
  const double rate = static_cast<double>(nacks) / static_cast<double>(total);
  expect(rate >= 0.08 && rate <= 0.12,
         "first-transmission NACK rate " + str(rate) + " outside [0.08, 0.12]");
}

// --- criterion 5: throughput-vs-distance reproduction -----------------------

void check_distance_sweep() {
  const resolved_config rc = resolve_config("paper-fig5", std::nullopt, {});
  scenario_config base = rc.cfg.scn;
  base.duration_s = rc.cfg.sweep_duration_s;

  std::vector<double> distances;
  for (double d = 10.0; d <= 400.0 + 1e-9; d += 10.0) distances.push_back(d);
  const std::vector<mcs_table_id> tables{mcs_table_id::table1, mcs_table_id::table2,
                                         mcs_table_id::table4};
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  const sweep_result r = sweep(base, distances, tables, seeds, 0);

  // (a) mean throughput decays with distance, up to rare local noise.
  for (const mcs_table_id t : tables) {
    int violations = 0;
    for (std::size_t i = 0; i + 1 < distances.size(); ++i) {
      const double here = mean_mac_mbps(r, distances[i], t);
      const double next = mean_mac_mbps(r, distances[i + 1], t);
      if (next > here * 1.001 + 0.5) ++violations;
    }
    expect(violations <= 2, "table " + str(table_number(t)) + " throughput rises at " +
                                str(violations) + " of 39 distance steps");
  }

  // (b) near the site the higher-order tables win, in order.
  const double near1 = mean_mac_mbps(r, 10.0, mcs_table_id::table1);
  const double near2 = mean_mac_mbps(r, 10.0, mcs_table_id::table2);
  const double near4 = mean_mac_mbps(r, 10.0, mcs_table_id::table4);
  expect(near4 >= near2 * 0.999 && near2 >= near1 * 0.999,
         "10 m ordering violated: t1=" + str(near1) + " t2=" + str(near2) +
             " t4=" + str(near4));

  // (c) far out all tables converge onto the same low-order rows.
  double far1 = 0.0, far2 = 0.0, far4 = 0.0;
  int far_n = 0;
  for (double d = 300.0; d <= 400.0 + 1e-9; d += 10.0) {
    far1 += mean_mac_mbps(r, d, mcs_table_id::table1);
    far2 += mean_mac_mbps(r, d, mcs_table_id::table2);
    far4 += mean_mac_mbps(r, d, mcs_table_id::table4);
    ++far_n;
  }
  far1 /= far_n;
  far2 /= far_n;
  far4 /= far_n;
  expect(far1 > 0.0, "no far-field throughput at all");
  expect(std::abs(far2 - far1) <= 0.10 * far1,
         "far-field t2 vs t1 differ by more than 10%: " + str(far1) + " vs " + str(far2));
  expect(std::abs(far4 - far2) <= 0.10 * far2,
         "far-field t4 vs t2 differ by more than 10%: " + str(far2) + " vs " + str(far4));

  // (d) the realized near-site gain of 256QAM over 64QAM.
  const double gain = near2 / near1;
  expect(gain >= 1.25 && gain <= 1.34,
         "10 m t2/t1 throughput ratio " + str(gain) + " outside [1.25, 1.34]");
}

// --- criterion 6: mobility effects ------------------------------------------

void check_mobility_effects() {
  scenario_config base;
  base.budget.eirp_dbm = 30.0;
  base.budget.noise_figure_db = 10.0;
  base.initial_distance_m = 10.0;
  base.mode.kind = table_mode_kind::fixed2;

  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

  // Walking reduces the share of PRBs carrying 256QAM versus standing still.
  double walk_qm8 = 0.0, still_qm8 = 0.0;
  for (const std::uint64_t s : seeds) {
    scenario_config walk = base;
    walk.kind = scenario_kind::walking;
    walk.speed_mps = 1.375;
    walk.duration_s = 60.0;
    walk.seed = s;
    walk_qm8 += util_share(run(walk).modulation_utilization, 8);

    scenario_config still = base;
    still.kind = scenario_kind::stationary;
    still.speed_mps = 0.0;
    still.duration_s = 60.0;
    still.seed = s;
    still_qm8 += util_share(run(still).modulation_utilization, 8);
  }
  expect(walk_qm8 < still_qm8, "walking 256QAM share " + str(walk_qm8 / 5.0) +
                                   " not below stationary " + str(still_qm8 / 5.0));

  // Biking retransmits more often on the aggressive table.
  double retx_t1 = 0.0, retx_t2 = 0.0;
  for (const std::uint64_t s : seeds) {
    scenario_config bike = base;
    bike.kind = scenario_kind::biking;
    bike.speed_mps = 6.7;
    bike.duration_s = 30.0;
    bike.seed = s;
    bike.mode.kind = table_mode_kind::fixed1;
    retx_t1 += run(bike).retx_rate;
    bike.mode.kind = table_mode_kind::fixed2;
    retx_t2 += run(bike).retx_rate;
  }
  expect(retx_t2 > retx_t1, "biking retransmission rate with table 2 (" +
                                str(retx_t2 / 5.0) + ") not above table 1 (" +
                                str(retx_t1 / 5.0) + ")");
}

// --- criterion 7: CLI determinism across thread counts ----------------------

std::string read_all(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void check_cli_determinism() {
  expect(!g_cli_path.empty(), "no CLI path given on the command line");
  expect(std::filesystem::exists(g_cli_path), "CLI binary not found: " + g_cli_path);

  const auto dir = std::filesystem::temp_directory_path() / "fr2la_acceptance";
  std::filesystem::create_directories(dir);
  const auto out1 = dir / "sweep_jobs1.csv";
  const auto out4 = dir / "sweep_jobs4.csv";

  const auto run_cli = [&](int jobs, const std::filesystem::path& out) {
    const std::string cmd = "\"" + g_cli_path +
                            "\" sweep --preset paper-fig5 --tables 1,2 --min-d 10"
                            " --max-d 60 --step 25 --seeds 2 --jobs " +
                            str(jobs) + " --out \"" + out.string() + "\"";
    const int rc = std::system(cmd.c_str());
    expect(rc == 0, "CLI exited with status " + str(rc) + ": " + cmd);
  };
  run_cli(1, out1);
  run_cli(4, out4);

  const std::string a = read_all(out1);
  const std::string b = read_all(out4);
  std::filesystem::remove_all(dir);

  expect(!a.empty(), "CLI produced an empty sweep file");
  expect(a.find(metrics_csv_header) != std::string::npos, "sweep output lacks the schema header");
  // 3 distances x 2 tables x 2 seeds.
  long rows = 0;
  std::istringstream is(a);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#' && line.find("distance_m") == std::string::npos) ++rows;
  expect(rows == 12, "expected 12 sweep rows, got " + str(rows));
  expect(a == b, "sweep output differs between --jobs 1 and --jobs 4");
}

// --- criterion 8: field-log analytics fixtures ------------------------------

field_record fixture_rec(int table, int qm, int n_prb, long tbs, bool ack, bool new_tx,
                         double rsrp) {
  field_record r;
  r.slot = 0;
  r.time_s = 0.0;
  r.distance_m = 10.0;
  r.rsrp_dbm = rsrp;
  r.sinr_db = 10.0;
  r.table = table;
  r.mcs = 5;
  r.qm = qm;
  r.n_prb = n_prb;
  r.tbs_bits = tbs;
  r.new_tx = new_tx;
  r.ack = ack;
  return r;
}

void check_field_analytics() {
  // Utilization: a 35 / 65 mix of 256QAM and 64QAM allocations.
  std::vector<field_record> mix;
  for (int i = 0; i < 350; ++i) mix.push_back(fixture_rec(2, 8, 66, 9000, true, true, -85.0));
  for (int i = 0; i < 650; ++i) mix.push_back(fixture_rec(2, 6, 66, 7000, true, true, -85.0));
  const auto util = modulation_utilization(mix);
  expect(std::abs(util.at(8) - 0.35) <= 0.001,
         "256QAM share " + str(util.at(8)) + " != 0.35");

  // Retransmission rate: none, and one retx per block.
  std::vector<field_record> clean(40, fixture_rec(2, 8, 66, 9000, true, true, -85.0));
  expect(retransmission_rate(clean) == 0.0, "clean log shows retransmissions");
  std::vector<field_record> paired;
  for (int i = 0; i < 20; ++i) {
    paired.push_back(fixture_rec(2, 8, 66, 9000, false, true, -85.0));
    paired.push_back(fixture_rec(2, 8, 66, 9000, true, false, -85.0));
  }
  expect(std::abs(retransmission_rate(paired) - 0.5) < 1e-12,
         "one-retx-per-block log not at rate 0.5");

  // Table gains of 5.8% and 30% over table 1.
  std::vector<field_record> gains;
  for (int i = 0; i < 10; ++i) {
    gains.push_back(fixture_rec(1, 6, 66, 1000, true, true, -85.0));
    gains.push_back(fixture_rec(2, 8, 66, 1058, true, true, -85.0));
  }
  const gain_summary g1 = table_gain_summary(gains);
  expect(std::abs(g1.overall.gain - 0.058) <= 1e-9,
         "gain " + str(g1.overall.gain) + " != 0.058");
  for (auto& rec : gains)
    if (rec.table == 2) rec.tbs_bits = 1300;
  const gain_summary g2 = table_gain_summary(gains);
  expect(std::abs(g2.overall.gain - 0.30) <= 1e-9, "gain " + str(g2.overall.gain) + " != 0.30");

  // Binned curves engineered to cross exactly once.
  std::vector<field_record> curves;
  const auto add_bin = [&](int table, double rsrp, long bits) {
    for (int i = 0; i < 30; ++i) curves.push_back(fixture_rec(table, 6, 66, bits, true, true, rsrp));
  };
  add_bin(1, -95.0, 4000);
  add_bin(1, -85.0, 4200);
  add_bin(1, -75.0, 4400);
  add_bin(2, -95.0, 2000);
  add_bin(2, -85.0, 4300);
  add_bin(2, -75.0, 8000);
  const auto pts = binned_throughput(curves);
  expect(pts.size() == 6, "expected 6 curve points, got " + str(pts.size()));
  std::vector<double> diff;
  for (double center : {-95.0, -85.0, -75.0}) {
    double m1 = 0.0, m2 = 0.0;
    for (const auto& p : pts) {
      if (p.bin_center_dbm == center && p.table == 1) m1 = p.mean_mbps;
      if (p.bin_center_dbm == center && p.table == 2) m2 = p.mean_mbps;
    }
    diff.push_back(m2 - m1);
  }
  int changes = 0;
  for (std::size_t i = 0; i + 1 < diff.size(); ++i)
    if ((diff[i] < 0.0) != (diff[i + 1] < 0.0)) ++changes;
  expect(changes == 1, "curves cross " + str(changes) + " times, expected exactly 1");

  // Round trip through the on-disk format preserves the analytics input.
  const std::string text = serialize_records(mix);
  std::istringstream in(text);
  const auto back = parse_records(in);
  expect(back.size() == mix.size(), "round trip changed the record count");
  const auto util2 = modulation_utilization(back);
  expect(util2.at(8) == util.at(8), "round trip changed the utilization");
}

// --- criterion 9: TDD airtime share -----------------------------------------

void check_airtime() {
  scenario_config cfg;
  cfg.kind = scenario_kind::stationary;
  cfg.initial_distance_m = 10.0;
  cfg.speed_mps = 0.0;
  cfg.duration_s = 10.0;
  cfg.seed = 1;
  cfg.budget.eirp_dbm = 30.0;
  cfg.budget.noise_figure_db = 10.0;
  cfg.mode.kind = table_mode_kind::fixed2;
  const run_metrics m = run(cfg);
  // DDDSU at 120 kHz: 3*14 + 10 of 5*14 symbols carry downlink.
  const double want = 52.0 / 70.0;
  expect(std::abs(m.dl_airtime_fraction - want) <= 0.002,
         "downlink airtime " + str(m.dl_airtime_fraction) + " != " + str(want));
  expect(m.total_slots == 80000, "unexpected slot count " + str(m.total_slots));
}

struct criterion {
  std::string name;
  double time_cap_s;
  std::function<void()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];

  const std::vector<criterion> criteria{
      {"modulation and coding tables match the 3GPP definitions", 1.0, check_tables},
      {"transport block sizes match an independent reimplementation", 10.0, check_tbs_oracle},
      {"path loss matches the closed form", 1.0, check_path_loss},
      {"outer-loop link adaptation holds the BLER target", 5.0, check_olla_convergence},
      {"throughput-distance sweep: ordering, convergence, peak ratio", 300.0,
       check_distance_sweep},
      {"mobility lowers modulation order and raises retransmissions", 120.0,
       check_mobility_effects},
      {"CLI sweep is deterministic across thread counts", 60.0, check_cli_determinism},
      {"field-log analytics reproduce reference fixtures", 5.0, check_field_analytics},
      {"TDD airtime share matches the frame pattern", 10.0, check_airtime},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.fn();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (error.empty() && elapsed > c.time_cap_s)
      error = "exceeded the " + str(c.time_cap_s) + " s budget";
    if (error.empty()) {
      std::printf("[PASS] criterion %zu: %s (%.2f s)\n", i + 1, c.name.c_str(), elapsed);
    } else {
      std::printf("[FAIL] criterion %zu: %s (%.2f s): %s\n", i + 1, c.name.c_str(), elapsed,
                  error.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures == 0)
    std::printf("all %zu acceptance criteria hold\n", criteria.size());
  else
    std::printf("%d of %zu acceptance criteria failed\n", failures, criteria.size());
  return failures;
}
