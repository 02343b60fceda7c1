// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT
//
// fr2la command-line front end: table dumps, single simulation runs, distance
// sweeps and slot-log analysis. Exit codes: 0 success, 1 usage error, 2 input
// or parse error, 3 internal invariant violation.

#include <algorithm>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fr2la/fr2la.hpp"
#include "svg_chart.hpp"

namespace {

using namespace fr2la;

// Usage problems detected after argv parsing (exit 1), as opposed to bad
// input data (exit 2).
class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File-system level failures on user-supplied paths (exit 2).
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw io_error("write failed for '" + path + "'");
}

void emit(const std::optional<std::string>& path, std::string_view content) {
  if (path)
    write_file(*path, content);
  else
    std::cout << content;
}

std::string iso_utc_now() {
  const std::time_t tt = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Options shared by `sim` and `sweep`: configuration sources and overrides.
struct config_opts {
  std::optional<std::string> preset;
  std::optional<std::string> config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
};

void add_config_opts(CLI::App* cmd, config_opts& o) {
  cmd->add_option("--preset", o.preset, "start from a named preset (see --help footer)");
  cmd->add_option("--config", o.config_path, "key=value configuration file");
  cmd->add_option("--set", o.sets, "override one key, e.g. --set budget.eirp_dbm=30")
      ->type_name("KEY=VALUE");
  cmd->add_option("--seed", o.seed, "master RNG seed (overrides preset/config)");
}

resolved_config resolve(const config_opts& o, std::vector<std::string> extra_overrides) {
  std::vector<std::string> overrides = o.sets;
  for (auto& kv : extra_overrides) overrides.push_back(std::move(kv));
  if (o.seed) overrides.push_back("seed=" + std::to_string(*o.seed));
  std::string file_text;
  std::optional<std::string_view> file_view;
  if (o.config_path) {
    file_text = read_file(*o.config_path);
    file_view = file_text;
  }
  std::optional<std::string_view> preset_view;
  if (o.preset) preset_view = *o.preset;
  return resolve_config(preset_view, file_view, overrides);
}

std::string table_label(const table_mode& m) {
  return m.kind == table_mode_kind::adaptive
             ? std::string("adaptive")
             : std::to_string(table_number(fixed_table_of(m.kind)));
}

// ---------------------------------------------------------------------------
// tables dump
// ---------------------------------------------------------------------------

struct tables_opts {
  std::optional<int> mcs_table;
  std::optional<int> cqi_table;
  std::optional<std::string> out;
};

int cmd_tables_dump(const tables_opts& o) {
  if (!o.mcs_table && !o.cqi_table)
    throw usage_error("tables dump: give one of --mcs-table or --cqi-table");
  std::string body;
  std::string name;
  std::uint64_t checksum = 0;
  if (o.mcs_table) {
    const auto id = mcs_table_from_number(*o.mcs_table);
    if (!id) throw usage_error("--mcs-table: no table " + std::to_string(*o.mcs_table));
    const mcs_table& t = get_mcs_table(*id);
    body = mcs_table_csv(t);
    name = "mcs_table" + std::to_string(*o.mcs_table);
    checksum = table_checksum(t);
  } else {
    const auto id = cqi_table_from_number(*o.cqi_table);
    if (!id) throw usage_error("--cqi-table: no table " + std::to_string(*o.cqi_table));
    const cqi_table& t = get_cqi_table(*id);
    body = cqi_table_csv(t);
    name = "cqi_table" + std::to_string(*o.cqi_table);
    checksum = table_checksum(t);
  }
  std::string out = "# fr2la " + std::string(tool_version) + " tables dump\n";
  out += "# table=" + name + "\n";
  out += "# checksum=" + to_hex(checksum) + "\n";
  out += body;
  emit(o.out, out);
  return 0;
}

// ---------------------------------------------------------------------------
// sim
// ---------------------------------------------------------------------------

struct sim_opts {
  config_opts cfg;
  std::optional<std::string> scenario;
  std::optional<double> distance;
  std::optional<double> duration;
  std::optional<std::string> table;
  bool strict_duration = false;
  std::optional<std::string> export_slots;
  std::optional<std::string> out;
  bool timestamp = false;
};

int cmd_sim(const sim_opts& o) {
  std::vector<std::string> extra;
  if (o.scenario) extra.push_back("scenario.kind=" + *o.scenario);
  if (o.distance) {
    extra.push_back("scenario.initial_distance_m=" + fmt_shortest(*o.distance));
    extra.push_back("scenario.fixed_distance_m=" + fmt_shortest(*o.distance));
  }
  if (o.duration) extra.push_back("scenario.duration_s=" + fmt_shortest(*o.duration));
  if (o.table)
    extra.push_back("table.mode=" +
                    (*o.table == "adaptive" ? std::string("adaptive") : "fixed" + *o.table));
  if (o.strict_duration) extra.push_back("scenario.strict_durations=true");
  const resolved_config rc = resolve(o.cfg, std::move(extra));

  scenario_config scn = rc.cfg.scn;
  scn.keep_slot_records = o.export_slots.has_value();
  const run_metrics m = run(scn);

  std::vector<std::string> comments = reproducibility_header(rc, "sim");
  if (o.timestamp) comments.push_back("generated_at=" + iso_utc_now());

  std::string csv = csv_comment_block(comments);
  csv += metrics_csv_header;
  csv += '\n';
  csv += metrics_csv_row(trajectory_distance(scn, 0.0), table_label(scn.mode), scn.seed, m);
  emit(o.out, csv);

  if (o.export_slots)
    write_file(*o.export_slots, slot_records_csv(m.slot_records, comments));
  return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct sweep_opts {
  config_opts cfg;
  std::string tables = "1,2,4";
  double min_d = 10.0;
  double max_d = 400.0;
  double step = 10.0;
  int seeds = 5;
  int jobs = 0;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  bool timestamp = false;
};

std::vector<mcs_table_id> parse_table_list(const std::string& list) {
  std::vector<mcs_table_id> out;
  for (const std::string_view tok : split(list, ',')) {
    const std::string_view t = trim(tok);
    long long n = 0;
    if (!parse_long(t, n) || (n != 1 && n != 2 && n != 4))
      throw usage_error("--tables: expected a comma list drawn from 1,2,4, got '" +
                        std::string(t) + "'");
    const mcs_table_id id = *mcs_table_from_number(static_cast<int>(n));
    if (std::find(out.begin(), out.end(), id) != out.end())
      throw usage_error("--tables: table " + std::string(t) + " listed twice");
    out.push_back(id);
  }
  if (out.empty()) throw usage_error("--tables: empty list");
  return out;
}

int cmd_sweep(const sweep_opts& o) {
  if (!(o.step > 0.0)) throw usage_error("--step must be > 0");
  if (!(o.min_d > 0.0)) throw usage_error("--min-d must be > 0");
  if (o.max_d < o.min_d) throw usage_error("--max-d must be >= --min-d");
  if (o.seeds < 1) throw usage_error("--seeds must be >= 1");
  if (o.jobs < 0) throw usage_error("--jobs must be >= 0");

  const resolved_config rc = resolve(o.cfg, {});
  const std::vector<mcs_table_id> tables = parse_table_list(o.tables);
  std::vector<double> distances;
  for (double d = o.min_d; d <= o.max_d + 1e-9; d += o.step) distances.push_back(d);
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < o.seeds; ++i)
    seeds.push_back(rc.cfg.scn.seed + static_cast<std::uint64_t>(i));

  scenario_config base = rc.cfg.scn;
  base.duration_s = rc.cfg.sweep_duration_s;
  const sweep_result result = sweep(base, distances, tables, seeds, o.jobs);

  std::vector<std::string> comments = reproducibility_header(rc, "sweep");
  comments.push_back("sweep distances=" + fmt_shortest(o.min_d) + ".." + fmt_shortest(o.max_d) +
                     " step=" + fmt_shortest(o.step));
  comments.push_back("sweep tables=" + o.tables);
  comments.push_back("sweep seeds=" + std::to_string(seeds.front()) + ".." +
                     std::to_string(seeds.back()));
  if (o.timestamp) comments.push_back("generated_at=" + iso_utc_now());
  emit(o.out, sweep_csv(result, comments));

  if (o.svg) {
    std::vector<svg_series> series;
    for (const mcs_table_id t : tables) {
      svg_series s;
      s.name = "MCS table " + std::to_string(table_number(t));
      for (const double d : distances) s.points.emplace_back(d, mean_mac_mbps(result, d, t));
      series.push_back(std::move(s));
    }
    write_file(*o.svg, svg_line_chart("Downlink MAC throughput vs distance", "distance (m)",
                                      "throughput (Mbps)", series));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct analyze_opts {
  std::string input;
  double bin_width = 2.0;
  long min_n = 30;
  std::string weight = "prb";
  double slot_rate = 8000.0;
  std::string out_dir = ".";
  bool timestamp = false;
};

int cmd_analyze(const analyze_opts& o) {
  if (!(o.bin_width > 0.0)) throw usage_error("--bin-width must be > 0");
  if (o.min_n < 1) throw usage_error("--min-n must be >= 1");
  if (!(o.slot_rate > 0.0)) throw usage_error("--slot-rate must be > 0");

  std::ifstream in(o.input, std::ios::binary);
  if (!in) throw io_error("cannot read '" + o.input + "'");
  const std::vector<field_record> records = parse_records(in);

  std::error_code ec;
  std::filesystem::create_directories(o.out_dir, ec);
  if (ec) throw io_error("cannot create output directory '" + o.out_dir + "': " + ec.message());
  const auto out_path = [&](std::string_view name) {
    return (std::filesystem::path(o.out_dir) / name).string();
  };

  std::vector<std::string> comments;
  comments.push_back("fr2la " + std::string(tool_version) + " analyze");
  comments.push_back("input=" + o.input);
  comments.push_back("records=" + std::to_string(records.size()));
  comments.push_back("bin_width=" + fmt_shortest(o.bin_width) +
                     " min_n=" + std::to_string(o.min_n) + " weight=" + o.weight +
                     " slot_rate=" + fmt_shortest(o.slot_rate));
  if (o.timestamp) comments.push_back("generated_at=" + iso_utc_now());
  const std::string header = csv_comment_block(comments);

  // Modulation utilization.
  const utilization_weight w =
      o.weight == "tb" ? utilization_weight::by_tb : utilization_weight::by_prb;
  const std::map<int, double> util = modulation_utilization(records, w);
  {
    std::string csv = header + "qm,modulation,share\n";
    for (const auto& [qm, share] : util) {
      csv += std::to_string(qm);
      csv += ',';
      csv += modulation_name(qm);
      csv += ',';
      csv += fmt_fixed(share, 6);
      csv += '\n';
    }
    write_file(out_path("utilization.csv"), csv);
  }

  // Retransmission rate.
  const double retx = retransmission_rate(records);
  long n_retx = 0;
  for (const auto& r : records)
    if (!r.new_tx) ++n_retx;
  if (records.empty())
    std::cerr << "warning: no transmissions in input; retransmission rate defined as 0\n";
  {
    std::string csv = header + "n_transmissions,n_retransmissions,retx_rate\n";
    csv += std::to_string(records.size());
    csv += ',';
    csv += std::to_string(n_retx);
    csv += ',';
    csv += fmt_fixed(retx, 6);
    csv += '\n';
    write_file(out_path("retx.csv"), csv);
  }

  // RSRP-binned throughput curves per table.
  const std::vector<binned_curve_point> curve =
      binned_throughput(records, o.bin_width, o.min_n, o.slot_rate);
  {
    std::string csv = header + "table,bin_center_dbm,mean_mbps,ci95_halfwidth_mbps,n\n";
    for (const auto& p : curve) {
      csv += std::to_string(p.table);
      csv += ',';
      csv += fmt_fixed(p.bin_center_dbm, 3);
      csv += ',';
      csv += fmt_fixed(p.mean_mbps, 3);
      csv += ',';
      csv += fmt_fixed(p.ci95_mbps, 3);
      csv += ',';
      csv += std::to_string(p.n);
      csv += '\n';
    }
    write_file(out_path("binned_curves.csv"), csv);
  }

  // Narrative summary.
  {
    const gain_summary gains = table_gain_summary(records, 1, 2, o.slot_rate);
    std::string txt;
    for (const auto& c : comments) txt += "# " + c + "\n";
    txt += "\nrecords: " + std::to_string(records.size()) + "\n";
    txt += "retransmission rate: " + fmt_fixed(retx * 100.0, 2) + "%";
    if (records.empty()) txt += " (no transmissions; defined as 0)";
    txt += "\n\nmodulation utilization (" + o.weight + "-weighted):\n";
    for (const auto& [qm, share] : util)
      txt += "  " + std::string(modulation_name(qm)) + ": " + fmt_fixed(share * 100.0, 2) +
             "%\n";
    if (util.empty()) txt += "  (no scheduled records)\n";
    txt += "\nthroughput gain, table " + std::to_string(gains.table_b) + " over table " +
           std::to_string(gains.table_a) + ":\n";
    const auto gain_line = [](const table_gain& g, std::string_view label) {
      std::string line = "  " + std::string(label) + ": ";
      if (g.has_a && g.has_b) {
        line += fmt_fixed(g.gain * 100.0, 2) + "% (" + fmt_fixed(g.mean_a_mbps, 3) + " -> " +
                fmt_fixed(g.mean_b_mbps, 3) + " Mbps)";
      } else {
        line += "partial data (table ";
        line += g.has_a ? std::to_string(2) : std::to_string(1);
        line += " absent)";
      }
      return line + "\n";
    };
    for (const auto& g : gains.per_group)
      txt += gain_line(g, "carrier " + std::to_string(g.group));
    txt += gain_line(gains.overall, "overall");
    txt += "\nbinned curve points emitted: " + std::to_string(curve.size()) + "\n";
    write_file(out_path("summary.txt"), txt);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fr2la: FR2 downlink link-adaptation simulator and slot-log analyzer.\n"
      "Compares PDSCH MCS tables (64/256/1024QAM) across mobility patterns."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fr2la::tool_version));

  std::string footer =
      "Configuration keys (config file lines or --set key=value):\n" +
      fr2la::config_keys_help() + "\nPresets (--preset):\n";
  for (const auto& p : fr2la::presets())
    footer += "  " + std::string(p.name) + ": " + std::string(p.summary) + "\n";
  app.footer(footer);

  // tables
  auto* tables_cmd = app.add_subcommand("tables", "inspect the built-in MCS/CQI tables");
  tables_cmd->require_subcommand(1);
  tables_opts t_opts;
  auto* dump_cmd = tables_cmd->add_subcommand("dump", "write one table as CSV");
  auto* opt_mcs = dump_cmd->add_option("--mcs-table", t_opts.mcs_table, "MCS table number")
                      ->check(CLI::IsMember({1, 2, 4}));
  auto* opt_cqi = dump_cmd->add_option("--cqi-table", t_opts.cqi_table, "CQI table number")
                      ->check(CLI::IsMember({2, 3, 5}));
  opt_mcs->excludes(opt_cqi);
  opt_cqi->excludes(opt_mcs);
  dump_cmd->add_option("--out", t_opts.out, "output path (default: stdout)");

  // sim
  auto* sim_cmd = app.add_subcommand("sim", "run one scenario and emit a metrics row");
  sim_opts s_opts;
  add_config_opts(sim_cmd, s_opts.cfg);
  sim_cmd->add_option("--scenario", s_opts.scenario, "mobility pattern")
      ->check(CLI::IsMember({"stationary", "walking", "biking", "fixed"}));
  sim_cmd->add_option("--distance", s_opts.distance, "start/fixed 2D distance (m)");
  sim_cmd->add_option("--duration", s_opts.duration, "run length (s)");
  sim_cmd->add_option("--table", s_opts.table, "MCS table policy")
      ->check(CLI::IsMember({"1", "2", "4", "adaptive"}));
  sim_cmd->add_flag("--strict-durations", s_opts.strict_duration,
                    "force the published 60 s walking / 30 s biking run times");
  sim_cmd->add_option("--export-slots", s_opts.export_slots,
                      "also write the per-slot transmission log to this path");
  sim_cmd->add_option("--out", s_opts.out, "metrics CSV path (default: stdout)");
  sim_cmd->add_flag("--timestamp", s_opts.timestamp, "add a generated_at comment line");

  // sweep
  auto* sweep_cmd =
      app.add_subcommand("sweep", "throughput-vs-distance grid over tables and seeds");
  sweep_opts w_opts;
  add_config_opts(sweep_cmd, w_opts.cfg);
  sweep_cmd->add_option("--tables", w_opts.tables, "comma list of MCS tables (from 1,2,4)");
  sweep_cmd->add_option("--min-d", w_opts.min_d, "first distance (m)");
  sweep_cmd->add_option("--max-d", w_opts.max_d, "last distance (m)");
  sweep_cmd->add_option("--step", w_opts.step, "distance step (m)");
  sweep_cmd->add_option("--seeds", w_opts.seeds, "seeds per grid point (base seed upward)");
  sweep_cmd->add_option("--jobs", w_opts.jobs, "worker threads (default: all processors)");
  sweep_cmd->add_option("--out", w_opts.out, "sweep CSV path (default: stdout)");
  sweep_cmd->add_option("--svg", w_opts.svg, "also render a line chart to this path");
  sweep_cmd->add_flag("--timestamp", w_opts.timestamp, "add a generated_at comment line");

  // analyze
  auto* an_cmd = app.add_subcommand("analyze", "aggregate a slot-log CSV into report files");
  analyze_opts a_opts;
  an_cmd->add_option("--input", a_opts.input, "slot-log CSV to analyze")->required();
  an_cmd->add_option("--bin-width", a_opts.bin_width, "RSRP bin width (dB)");
  an_cmd->add_option("--min-n", a_opts.min_n, "suppress bins with fewer samples");
  an_cmd->add_option("--weight", a_opts.weight, "utilization weighting")
      ->check(CLI::IsMember({"prb", "tb"}));
  an_cmd->add_option("--slot-rate", a_opts.slot_rate, "slots per second for Mbps conversion");
  an_cmd->add_option("--out", a_opts.out_dir, "report directory (default: current)");
  an_cmd->add_flag("--timestamp", a_opts.timestamp, "add a generated_at comment line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (tables_cmd->parsed()) return cmd_tables_dump(t_opts);
    if (sim_cmd->parsed()) return cmd_sim(s_opts);
    if (sweep_cmd->parsed()) return cmd_sweep(w_opts);
    if (an_cmd->parsed()) return cmd_analyze(a_opts);
    std::cerr << "error: no subcommand given\n";
    return 1;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fr2la::config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fr2la::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fr2la::table_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
