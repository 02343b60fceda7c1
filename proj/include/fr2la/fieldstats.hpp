// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fr2la/nr_tables.hpp"
#include "fr2la/util.hpp"

namespace fr2la {

// Slot-log schema shared by simulator exports and field captures. One row per
// scheduled PDSCH transmission.
inline constexpr std::string_view slot_csv_header =
    "slot,time_s,distance_m,rsrp_dbm,sinr_db,table,mcs,qm,n_prb,tbs_bits,new_tx,ack";

// Valid RSRP reporting range (3GPP measurement range, dBm).
inline constexpr double rsrp_min_dbm = -156.0;
inline constexpr double rsrp_max_dbm = -31.0;

// One logged transmission. `table` is the MCS table number (1, 2 or 4);
// carrier_id distinguishes merged captures and is optional in the file.
struct field_record {
  long slot = 0;
  double time_s = 0.0;
  double distance_m = 0.0;
  double rsrp_dbm = 0.0;
  double sinr_db = 0.0;
  int table = 1;
  int mcs = 0;
  int qm = 2;
  int n_prb = 0;
  long tbs_bits = 0;
  bool new_tx = true;
  bool ack = false;
  std::optional<int> carrier_id{};
};

// Parse failure with enough context to fix the file: 1-based line number and
// the offending column.
class parse_error : public std::runtime_error {
 public:
  parse_error(int line, std::string_view column, std::string_view what)
      : std::runtime_error("line " + std::to_string(line) + ", column '" +
                           std::string(column) + "': " + std::string(what)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  const std::string& column() const { return column_; }

 private:
  int line_;
  std::string column_;
};

namespace detail {

inline double field_double(std::string_view tok, int line, std::string_view col) {
  double v = 0.0;
  if (!parse_double(trim(tok), v))
    throw parse_error(line, col, "expected a number, got '" + std::string(trim(tok)) + "'");
  return v;
}

inline long long field_int(std::string_view tok, int line, std::string_view col) {
  long long v = 0;
  if (!parse_long(trim(tok), v))
    throw parse_error(line, col, "expected an integer, got '" + std::string(trim(tok)) + "'");
  return v;
}

inline bool field_bool(std::string_view tok, int line, std::string_view col) {
  const std::string_view t = trim(tok);
  if (t == "0") return false;
  if (t == "1") return true;
  throw parse_error(line, col, "expected 0 or 1, got '" + std::string(t) + "'");
}

}  // namespace detail

// Reads a slot log. Leading '#' comment lines are skipped; the header row
// must match the schema exactly (optionally extended with ",carrier_id").
// Every value is validated: malformed files fail with the line and column.
inline std::vector<field_record> parse_records(std::istream& in) {
  std::vector<field_record> out;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  bool has_carrier = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!header_seen) {
      if (body == slot_csv_header) {
        has_carrier = false;
      } else if (body == std::string(slot_csv_header) + ",carrier_id") {
        has_carrier = true;
      } else {
        throw parse_error(line_no, "header",
                          "header row does not match the slot-log schema");
      }
      header_seen = true;
      continue;
    }
    const auto tok = split(body, ',');
    const std::size_t expected = has_carrier ? 13 : 12;
    if (tok.size() != expected)
      throw parse_error(line_no, "row",
                        "expected " + std::to_string(expected) + " fields, got " +
                            std::to_string(tok.size()));
    field_record r;
    r.slot = static_cast<long>(detail::field_int(tok[0], line_no, "slot"));
    if (r.slot < 0) throw parse_error(line_no, "slot", "slot must be >= 0");
    r.time_s = detail::field_double(tok[1], line_no, "time_s");
    if (r.time_s < 0.0) throw parse_error(line_no, "time_s", "time must be >= 0");
    r.distance_m = detail::field_double(tok[2], line_no, "distance_m");
    if (r.distance_m < 0.0) throw parse_error(line_no, "distance_m", "distance must be >= 0");
    r.rsrp_dbm = detail::field_double(tok[3], line_no, "rsrp_dbm");
    if (r.rsrp_dbm < rsrp_min_dbm || r.rsrp_dbm > rsrp_max_dbm)
      throw parse_error(line_no, "rsrp_dbm", "RSRP outside the reporting range");
    r.sinr_db = detail::field_double(tok[4], line_no, "sinr_db");
    r.table = static_cast<int>(detail::field_int(tok[5], line_no, "table"));
    if (!mcs_table_from_number(r.table))
      throw parse_error(line_no, "table", "MCS table must be 1, 2 or 4");
    r.mcs = static_cast<int>(detail::field_int(tok[6], line_no, "mcs"));
    if (r.mcs < 0 || r.mcs > 31) throw parse_error(line_no, "mcs", "MCS index outside 0..31");
    r.qm = static_cast<int>(detail::field_int(tok[7], line_no, "qm"));
    if (modulation_name(r.qm) == "unknown")
      throw parse_error(line_no, "qm", "modulation order must be 2, 4, 6, 8 or 10");
    r.n_prb = static_cast<int>(detail::field_int(tok[8], line_no, "n_prb"));
    if (r.n_prb < 1) throw parse_error(line_no, "n_prb", "n_prb must be >= 1");
    r.tbs_bits = static_cast<long>(detail::field_int(tok[9], line_no, "tbs_bits"));
    if (r.tbs_bits < 1) throw parse_error(line_no, "tbs_bits", "TBS must be >= 1 bit");
    r.new_tx = detail::field_bool(tok[10], line_no, "new_tx");
    r.ack = detail::field_bool(tok[11], line_no, "ack");
    if (has_carrier) {
      const std::string_view t = trim(tok[12]);
      if (!t.empty())
        r.carrier_id = static_cast<int>(detail::field_int(t, line_no, "carrier_id"));
    }
    out.push_back(r);
  }
  if (!header_seen && !out.empty())
    throw parse_error(1, "header", "missing header row");
  if (!header_seen)
    throw parse_error(1, "header", "empty input: missing header row");
  return out;
}

// Serializes records back to the same schema. The carrier_id column is
// emitted only when at least one record carries it, so a parse/serialize
// round trip reproduces the logical content.
inline std::string serialize_records(std::span<const field_record> records) {
  const bool has_carrier =
      std::any_of(records.begin(), records.end(),
                  [](const field_record& r) { return r.carrier_id.has_value(); });
  std::string out{slot_csv_header};
  if (has_carrier) out += ",carrier_id";
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.slot);
    out += ',';
    out += fmt_fixed(r.time_s, 6);
    out += ',';
    out += fmt_fixed(r.distance_m, 3);
    out += ',';
    out += fmt_fixed(r.rsrp_dbm, 3);
    out += ',';
    out += fmt_fixed(r.sinr_db, 3);
    out += ',';
    out += std::to_string(r.table);
    out += ',';
    out += std::to_string(r.mcs);
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
    if (has_carrier) {
      out += ',';
      if (r.carrier_id) out += std::to_string(*r.carrier_id);
    }
    out += '\n';
  }
  return out;
}

// Weighting for modulation utilization: by scheduled PRBs (airtime-like) or
// by transport block count.
enum class utilization_weight { by_prb, by_tb };

// Share of scheduled resources per modulation order. Shares sum to 1 for
// non-empty input; empty input yields an empty map.
inline std::map<int, double> modulation_utilization(
    std::span<const field_record> records,
    utilization_weight w = utilization_weight::by_prb) {
  std::map<int, long long> weight;
  long long total = 0;
  for (const auto& r : records) {
    const long long v = w == utilization_weight::by_prb ? r.n_prb : 1;
    weight[r.qm] += v;
    total += v;
  }
  std::map<int, double> out;
  if (total == 0) return out;
  for (const auto& [qm, v] : weight)
    out[qm] = static_cast<double>(v) / static_cast<double>(total);
  return out;
}

// Fraction of transmissions that are retransmissions. Empty input gives 0.
inline double retransmission_rate(std::span<const field_record> records) {
  long long retx = 0;
  for (const auto& r : records)
    if (!r.new_tx) ++retx;
  return records.empty() ? 0.0
                         : static_cast<double>(retx) / static_cast<double>(records.size());
}

// Mean per-slot MAC throughput within RSRP bins, per MCS table. The sample
// for one row is the acknowledged TBS scaled to a rate (tbs * slot_rate);
// NACKed slots contribute zero. Accumulation uses integer sums of TBS bits,
// so results are exactly independent of input row order.
struct binned_curve_point {
  int table = 0;              // MCS table number
  double bin_center_dbm = 0.0;
  double mean_mbps = 0.0;
  double ci95_mbps = 0.0;     // half-width of the normal-approx 95% interval
  long n = 0;                 // samples in the bin
};

inline std::vector<binned_curve_point> binned_throughput(
    std::span<const field_record> records, double bin_width_db = 2.0, long min_n = 30,
    double slot_rate_hz = 8000.0) {
  if (!(bin_width_db > 0.0))
    throw std::domain_error("binned_throughput: bin width must be > 0");
  if (min_n < 1) throw std::domain_error("binned_throughput: min_n must be >= 1");
  struct bin_acc {
    long long sum_bits = 0;    // sum of acknowledged TBS
    long long sum_bits_sq = 0; // sum of squared acknowledged TBS
    long n = 0;
  };
  std::map<std::pair<int, long>, bin_acc> bins;
  for (const auto& r : records) {
    const long idx = static_cast<long>(std::floor(r.rsrp_dbm / bin_width_db));
    bin_acc& b = bins[{r.table, idx}];
    const long long bits = r.ack ? r.tbs_bits : 0;
    b.sum_bits += bits;
    b.sum_bits_sq += bits * bits;
    ++b.n;
  }
  const double scale = slot_rate_hz / 1e6;  // bits/slot -> Mbps
  std::vector<binned_curve_point> out;
  for (const auto& [key, b] : bins) {
    if (b.n < min_n) continue;
    binned_curve_point p;
    p.table = key.first;
    p.bin_center_dbm = (static_cast<double>(key.second) + 0.5) * bin_width_db;
    p.n = b.n;
    const double n = static_cast<double>(b.n);
    const double mean_bits = static_cast<double>(b.sum_bits) / n;
    p.mean_mbps = mean_bits * scale;
    if (b.n > 1) {
      const double var_bits =
          (static_cast<double>(b.sum_bits_sq) - n * mean_bits * mean_bits) / (n - 1.0);
      const double sd = std::sqrt(std::max(0.0, var_bits));
      p.ci95_mbps = 1.96 * sd / std::sqrt(n) * scale;
    }
    out.push_back(p);
  }
  // Map order is already (table, bin); keep it explicit for clarity.
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.table != b.table ? a.table < b.table : a.bin_center_dbm < b.bin_center_dbm;
  });
  return out;
}

// Throughput comparison between two MCS tables over matched captures.
// Records are grouped by carrier (absent carrier_id = group 0); the gain is
// (mean_b - mean_a) / mean_a on per-slot MAC throughput.
struct table_gain {
  int group = 0;
  bool has_a = false;
  bool has_b = false;
  double mean_a_mbps = 0.0;
  double mean_b_mbps = 0.0;
  double gain = 0.0;  // meaningful only when both sides are present
};

struct gain_summary {
  int table_a = 1;
  int table_b = 2;
  std::vector<table_gain> per_group;
  table_gain overall;  // pooled over all groups
};

inline gain_summary table_gain_summary(std::span<const field_record> records,
                                       int table_a = 1, int table_b = 2,
                                       double slot_rate_hz = 8000.0) {
  struct acc {
    long long bits_a = 0, bits_b = 0;
    long n_a = 0, n_b = 0;
  };
  std::map<int, acc> groups;
  acc total;
  for (const auto& r : records) {
    if (r.table != table_a && r.table != table_b) continue;
    acc& g = groups[r.carrier_id.value_or(0)];
    const long long bits = r.ack ? r.tbs_bits : 0;
    if (r.table == table_a) {
      g.bits_a += bits;
      ++g.n_a;
      total.bits_a += bits;
      ++total.n_a;
    } else {
      g.bits_b += bits;
      ++g.n_b;
      total.bits_b += bits;
      ++total.n_b;
    }
  }
  const double scale = slot_rate_hz / 1e6;
  const auto to_gain = [&](int group, const acc& a) {
    table_gain g;
    g.group = group;
    g.has_a = a.n_a > 0;
    g.has_b = a.n_b > 0;
    if (g.has_a) g.mean_a_mbps = static_cast<double>(a.bits_a) / static_cast<double>(a.n_a) * scale;
    if (g.has_b) g.mean_b_mbps = static_cast<double>(a.bits_b) / static_cast<double>(a.n_b) * scale;
    if (g.has_a && g.has_b && g.mean_a_mbps > 0.0)
      g.gain = (g.mean_b_mbps - g.mean_a_mbps) / g.mean_a_mbps;
    return g;
  };
  gain_summary out;
  out.table_a = table_a;
  out.table_b = table_b;
  for (const auto& [group, a] : groups) out.per_group.push_back(to_gain(group, a));
  out.overall = to_gain(-1, total);
  return out;
}

}  // namespace fr2la
