// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fr2la/config.hpp"
#include "fr2la/fieldstats.hpp"
#include "fr2la/scenario.hpp"
#include "fr2la/util.hpp"

namespace fr2la {

inline constexpr std::string_view tool_version = "0.1.0";

// Comment lines prepended to every emitted CSV: tool version, seed and a
// hash of the fully resolved configuration, plus the non-default settings.
// Deliberately no timestamp, so identical runs emit identical bytes; callers
// append one explicitly when asked to.
inline std::vector<std::string> reproducibility_header(const resolved_config& rc,
                                                       std::string_view command) {
  std::vector<std::string> lines;
  lines.push_back("fr2la " + std::string(tool_version) + " " + std::string(command));
  lines.push_back("seed=" + rc.values.at("seed"));
  lines.push_back("config_hash=" + rc.config_hash);
  for (const auto& [key, value] : rc.values) {
    const cfg_source src = rc.sources.at(key);
    if (src == cfg_source::fallback) continue;
    lines.push_back("cfg " + key + "=" + value + " [" + std::string(cfg_source_name(src)) + "]");
  }
  return lines;
}

inline std::string csv_comment_block(std::span<const std::string> lines) {
  std::string out;
  for (const auto& l : lines) {
    out += "# ";
    out += l;
    out += '\n';
  }
  return out;
}

// Utilization share for one modulation order, absent orders as 0.
inline double util_share(const std::map<int, double>& util, int qm) {
  const auto it = util.find(qm);
  return it == util.end() ? 0.0 : it->second;
}

inline constexpr std::string_view metrics_csv_header =
    "distance_m,table,seed,mac_mbps,phy_mbps,retx_rate,util_qpsk,util_16qam,util_64qam,"
    "util_256qam,util_1024qam,mean_rsrp_dbm";

// One metrics row of the sweep/sim schema. `table_label` is the MCS table
// number for fixed-table runs or "adaptive".
inline std::string metrics_csv_row(double distance_m, std::string_view table_label,
                                   std::uint64_t seed, const run_metrics& m) {
  const auto& u = m.modulation_utilization;
  std::string out;
  out += fmt_fixed(distance_m, 3);
  out += ',';
  out += table_label;
  out += ',';
  out += std::to_string(seed);
  out += ',';
  out += fmt_fixed(m.mac_throughput_bps / 1e6, 3);
  out += ',';
  out += fmt_fixed(m.phy_throughput_bps / 1e6, 3);
  out += ',';
  out += fmt_fixed(m.retx_rate, 6);
  out += ',';
  out += fmt_fixed(util_share(u, 2), 6);
  out += ',';
  out += fmt_fixed(util_share(u, 4), 6);
  out += ',';
  out += fmt_fixed(util_share(u, 6), 6);
  out += ',';
  out += fmt_fixed(util_share(u, 8), 6);
  out += ',';
  out += fmt_fixed(util_share(u, 10), 6);
  out += ',';
  out += fmt_fixed(m.mean_rsrp_dbm, 3);
  out += '\n';
  return out;
}

inline std::string sweep_csv(const sweep_result& r, std::span<const std::string> comments) {
  std::string out = csv_comment_block(comments);
  out += metrics_csv_header;
  out += '\n';
  for (const auto& p : r.points)
    out += metrics_csv_row(p.distance_m, std::to_string(table_number(p.table)), p.seed,
                           p.metrics);
  return out;
}

// Slot records in the shared slot-log schema (parse_records reads this back).
inline std::string slot_records_csv(std::span<const slot_record> records,
                                    std::span<const std::string> comments) {
  std::string out = csv_comment_block(comments);
  out += slot_csv_header;
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.slot_index);
    out += ',';
    out += fmt_fixed(r.time_s, 6);
    out += ',';
    out += fmt_fixed(r.distance_m, 3);
    out += ',';
    out += fmt_fixed(r.rsrp_dbm, 3);
    out += ',';
    out += fmt_fixed(r.sinr_db, 3);
    out += ',';
    out += std::to_string(table_number(r.table));
    out += ',';
    out += std::to_string(r.mcs_index);
    out += ',';
    out += std::to_string(r.qm);
    out += ',';
    out += std::to_string(r.n_prb);
    out += ',';
    out += std::to_string(r.tbs_bits);
    out += ',';
    out += r.new_tx ? '1' : '0';
    out += ',';
    out += r.ack ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace fr2la
