// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fr2la/table_data.hpp"
#include "fr2la/util.hpp"

namespace fr2la {

// PDSCH MCS index tables (TS 38.214 clause 5.1.3.1). The numeric suffix is
// the standard's table number: 1 = up to 64QAM, 2 = up to 256QAM,
// 4 = up to 1024QAM.
enum class mcs_table_id { table1, table2, table4 };

// CQI tables (TS 38.214 clause 5.2.2.1): 2 = up to 64QAM, 3 = up to 256QAM,
// 5 = up to 1024QAM.
enum class cqi_table_id { table2, table3, table5 };

inline int table_number(mcs_table_id id) {
  switch (id) {
    case mcs_table_id::table1: return 1;
    case mcs_table_id::table2: return 2;
    case mcs_table_id::table4: return 4;
  }
  throw std::logic_error("table_number: bad mcs_table_id");
}

inline int table_number(cqi_table_id id) {
  switch (id) {
    case cqi_table_id::table2: return 2;
    case cqi_table_id::table3: return 3;
    case cqi_table_id::table5: return 5;
  }
  throw std::logic_error("table_number: bad cqi_table_id");
}

inline std::optional<mcs_table_id> mcs_table_from_number(int n) {
  switch (n) {
    case 1: return mcs_table_id::table1;
    case 2: return mcs_table_id::table2;
    case 4: return mcs_table_id::table4;
    default: return std::nullopt;
  }
}

inline std::optional<cqi_table_id> cqi_table_from_number(int n) {
  switch (n) {
    case 2: return cqi_table_id::table2;
    case 3: return cqi_table_id::table3;
    case 5: return cqi_table_id::table5;
    default: return std::nullopt;
  }
}

// CQI table whose peak modulation matches the given MCS table. A UE reporting
// against a 1024QAM-capable CQI table is assumed scheduled from the
// 1024QAM MCS table, and so on down.
inline cqi_table_id cqi_table_for(mcs_table_id id) {
  switch (id) {
    case mcs_table_id::table1: return cqi_table_id::table2;
    case mcs_table_id::table2: return cqi_table_id::table3;
    case mcs_table_id::table4: return cqi_table_id::table5;
  }
  throw std::logic_error("cqi_table_for: bad mcs_table_id");
}

struct mcs_entry {
  mcs_table_id table_id{};
  int index = 0;                    // I_MCS, 0..31
  int qm = 0;                       // modulation order (bits/symbol)
  double code_rate_x1024 = 0.0;     // target code rate R x 1024
  double spectral_efficiency = 0.0; // standard's printed value (4 decimals)
  bool reserved = false;            // retransmission-only row
};

struct cqi_entry {
  cqi_table_id table_id{};
  int cqi = 0;                      // 0..15
  int qm = 0;
  double code_rate_x1024 = 0.0;
  double spectral_efficiency = 0.0;
  bool out_of_range = false;        // CQI 0
};

struct mcs_table {
  mcs_table_id id{};
  std::array<mcs_entry, 32> rows{};
  int top_index = 0;  // highest non-reserved index

  const mcs_entry& top() const { return rows[static_cast<std::size_t>(top_index)]; }
  double max_spectral_efficiency() const { return top().spectral_efficiency; }
};

struct cqi_table {
  cqi_table_id id{};
  std::array<cqi_entry, 16> rows{};
};

// Thrown when a table source (embedded or user-supplied) violates the format
// or the structural properties every 38.214 table of its kind satisfies.
class table_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const std::vector<int>& allowed_qm(mcs_table_id id) {
  static const std::vector<int> t1{2, 4, 6};
  static const std::vector<int> t2{2, 4, 6, 8};
  static const std::vector<int> t4{2, 4, 6, 8, 10};
  switch (id) {
    case mcs_table_id::table1: return t1;
    case mcs_table_id::table2: return t2;
    case mcs_table_id::table4: return t4;
  }
  throw std::logic_error("allowed_qm: bad mcs_table_id");
}

inline const std::vector<int>& allowed_qm(cqi_table_id id) {
  static const std::vector<int> t2{2, 4, 6};
  static const std::vector<int> t3{2, 4, 6, 8};
  static const std::vector<int> t5{2, 4, 6, 8, 10};
  switch (id) {
    case cqi_table_id::table2: return t2;
    case cqi_table_id::table3: return t3;
    case cqi_table_id::table5: return t5;
  }
  throw std::logic_error("allowed_qm: bad cqi_table_id");
}

[[noreturn]] inline void fail_row(std::string_view what, int line_no,
                                  std::string_view line) {
  throw table_error("table source line " + std::to_string(line_no) + ": " +
                    std::string(what) + " in '" + std::string(trim(line)) + "'");
}

// Both SE and Qm*R/1024 are exact multiples of 2^-11, so comparing the
// round-half-up 4-decimal renderings is an exact integer check.
inline bool se_matches(double se, int qm, double rate_x1024) {
  const double derived = static_cast<double>(qm) * rate_x1024 / 1024.0;
  return std::llround(se * 1e4) == std::llround(derived * 1e4);
}

}  // namespace detail

// Parses the one-row-per-line MCS table format and validates the structural
// invariants: 32 rows indexed 0..31 in order, reserved rows only at the tail,
// modulation orders restricted to the table's set, spectral efficiency equal
// to Qm * R, and strictly increasing efficiency over the non-reserved rows.
inline mcs_table parse_mcs_table(std::string_view text, mcs_table_id id) {
  mcs_table out;
  out.id = id;
  int next_index = 0;
  bool seen_reserved = false;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    const std::string_view body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto tok = split_ws(body);
    long long idx = -1;
    if (!parse_long(tok[0], idx) || idx != next_index)
      detail::fail_row("expected row index " + std::to_string(next_index), line_no, line);
    if (idx > 31) detail::fail_row("row index beyond 31", line_no, line);
    mcs_entry e;
    e.table_id = id;
    e.index = static_cast<int>(idx);
    long long qm = 0;
    if (tok.size() < 2 || !parse_long(tok[1], qm))
      detail::fail_row("missing/invalid modulation order", line_no, line);
    e.qm = static_cast<int>(qm);
    const auto& qset = detail::allowed_qm(id);
    if (std::find(qset.begin(), qset.end(), e.qm) == qset.end())
      detail::fail_row("modulation order not allowed for this table", line_no, line);
    if (tok.size() == 3 && tok[2] == "reserved") {
      e.reserved = true;
      seen_reserved = true;
    } else if (tok.size() == 4) {
      if (seen_reserved)
        detail::fail_row("data row after reserved rows", line_no, line);
      if (!parse_double(tok[2], e.code_rate_x1024) || e.code_rate_x1024 <= 0.0)
        detail::fail_row("invalid code rate", line_no, line);
      if (!parse_double(tok[3], e.spectral_efficiency))
        detail::fail_row("invalid spectral efficiency", line_no, line);
      if (!detail::se_matches(e.spectral_efficiency, e.qm, e.code_rate_x1024))
        detail::fail_row("spectral efficiency does not equal Qm * R", line_no, line);
    } else {
      detail::fail_row("expected 'index qm rate se' or 'index qm reserved'", line_no, line);
    }
    out.rows[static_cast<std::size_t>(e.index)] = e;
    if (!e.reserved) out.top_index = e.index;
    ++next_index;
  }
  if (next_index != 32)
    throw table_error("MCS table must have 32 rows, got " + std::to_string(next_index));
  // No monotonicity check on SE: the standard's table 1 genuinely dips at the
  // Qm transition (index 16 -> 17: 2.5703 -> 2.5664). Qm must be nondecreasing
  // over data rows, which every 38.214 MCS table satisfies.
  int prev_qm = 0;
  for (const auto& e : out.rows) {
    if (e.reserved) continue;
    if (e.qm < prev_qm)
      throw table_error("modulation order decreases at index " + std::to_string(e.index));
    prev_qm = e.qm;
  }
  return out;
}

inline cqi_table parse_cqi_table(std::string_view text, cqi_table_id id) {
  cqi_table out;
  out.id = id;
  int next_index = 0;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    const std::string_view body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto tok = split_ws(body);
    long long idx = -1;
    if (!parse_long(tok[0], idx) || idx != next_index)
      detail::fail_row("expected CQI index " + std::to_string(next_index), line_no, line);
    cqi_entry e;
    e.table_id = id;
    e.cqi = static_cast<int>(idx);
    if (idx == 0) {
      if (tok.size() != 2 || tok[1] != "out_of_range")
        detail::fail_row("CQI 0 must be '0 out_of_range'", line_no, line);
      e.out_of_range = true;
    } else {
      long long qm = 0;
      if (tok.size() != 4 || !parse_long(tok[1], qm))
        detail::fail_row("expected 'cqi qm rate se'", line_no, line);
      e.qm = static_cast<int>(qm);
      const auto& qset = detail::allowed_qm(id);
      if (std::find(qset.begin(), qset.end(), e.qm) == qset.end())
        detail::fail_row("modulation order not allowed for this table", line_no, line);
      if (!parse_double(tok[2], e.code_rate_x1024) || e.code_rate_x1024 <= 0.0)
        detail::fail_row("invalid code rate", line_no, line);
      if (!parse_double(tok[3], e.spectral_efficiency))
        detail::fail_row("invalid spectral efficiency", line_no, line);
      if (!detail::se_matches(e.spectral_efficiency, e.qm, e.code_rate_x1024))
        detail::fail_row("spectral efficiency does not equal Qm * R", line_no, line);
    }
    out.rows[static_cast<std::size_t>(e.cqi)] = e;
    ++next_index;
  }
  if (next_index != 16)
    throw table_error("CQI table must have 16 rows, got " + std::to_string(next_index));
  double prev_se = 0.0;
  for (const auto& e : out.rows) {
    if (e.out_of_range) continue;
    if (e.spectral_efficiency <= prev_se)
      throw table_error("spectral efficiency not strictly increasing at CQI " +
                        std::to_string(e.cqi));
    prev_se = e.spectral_efficiency;
  }
  return out;
}

inline std::vector<long> parse_tbs_small_table(std::string_view text) {
  // The list is whitespace-separated across lines; collapse newlines first.
  std::string joined(text);
  std::replace(joined.begin(), joined.end(), '\n', ' ');
  std::vector<long> out;
  for (std::string_view tok : split_ws(joined)) {
    long long v = 0;
    if (!parse_long(tok, v)) throw table_error("invalid TBS entry '" + std::string(tok) + "'");
    out.push_back(static_cast<long>(v));
  }
  if (out.size() != 93)
    throw table_error("TBS table must have 93 entries, got " + std::to_string(out.size()));
  for (std::size_t i = 0; i + 1 < out.size(); ++i)
    if (out[i] >= out[i + 1]) throw table_error("TBS table not strictly increasing");
  if (out.front() != 24 || out.back() != 3824)
    throw table_error("TBS table must span 24..3824");
  for (const long v : out)
    if (v % 8 != 0) throw table_error("TBS entries must be byte-aligned");
  return out;
}

inline const mcs_table& get_mcs_table(mcs_table_id id) {
  static const mcs_table t1 = parse_mcs_table(table_data::mcs_table1, mcs_table_id::table1);
  static const mcs_table t2 = parse_mcs_table(table_data::mcs_table2, mcs_table_id::table2);
  static const mcs_table t4 = parse_mcs_table(table_data::mcs_table4, mcs_table_id::table4);
  switch (id) {
    case mcs_table_id::table1: return t1;
    case mcs_table_id::table2: return t2;
    case mcs_table_id::table4: return t4;
  }
  throw std::logic_error("get_mcs_table: bad mcs_table_id");
}

inline const cqi_table& get_cqi_table(cqi_table_id id) {
  static const cqi_table t2 = parse_cqi_table(table_data::cqi_table2, cqi_table_id::table2);
  static const cqi_table t3 = parse_cqi_table(table_data::cqi_table3, cqi_table_id::table3);
  static const cqi_table t5 = parse_cqi_table(table_data::cqi_table5, cqi_table_id::table5);
  switch (id) {
    case cqi_table_id::table2: return t2;
    case cqi_table_id::table3: return t3;
    case cqi_table_id::table5: return t5;
  }
  throw std::logic_error("get_cqi_table: bad cqi_table_id");
}

inline const std::vector<long>& get_tbs_small_table() {
  static const std::vector<long> t = parse_tbs_small_table(table_data::tbs_small);
  return t;
}

inline const mcs_entry& lookup_mcs(mcs_table_id id, int index) {
  if (index < 0 || index > 31)
    throw std::out_of_range("MCS index " + std::to_string(index) + " outside 0..31");
  return get_mcs_table(id).rows[static_cast<std::size_t>(index)];
}

inline const cqi_entry& lookup_cqi(cqi_table_id id, int cqi) {
  if (cqi < 0 || cqi > 15)
    throw std::out_of_range("CQI " + std::to_string(cqi) + " outside 0..15");
  return get_cqi_table(id).rows[static_cast<std::size_t>(cqi)];
}

// Ratio of the peak spectral efficiencies of two MCS tables (e.g. the
// headline 256QAM-over-64QAM capacity factor).
inline double peak_spectral_ratio(mcs_table_id a, mcs_table_id b) {
  return get_mcs_table(a).max_spectral_efficiency() /
         get_mcs_table(b).max_spectral_efficiency();
}

// ---------------------------------------------------------------------------
// Transport block size determination (TS 38.214 clause 5.1.3.2).
// ---------------------------------------------------------------------------

struct tbs_input {
  int n_prb = 0;             // allocated PRBs
  int n_symbols_data = 0;    // OFDM symbols carrying PDSCH (after control)
  int n_dmrs_re_per_prb = 0; // DMRS REs per PRB over the allocation
  int x_overhead = 0;        // configured overhead: 0, 6, 12 or 18 RE/PRB
  int n_layers = 1;          // MIMO layers, 1..4
  mcs_entry mcs;
};

// Computes the transport block size in bits. All arithmetic below is exact
// integer arithmetic: N_info scaled by 2048 (code rates are multiples of 1/2
// of 1/1024) so every floor/round in the procedure is free of float error.
inline long compute_tbs(const tbs_input& in) {
  if (in.mcs.reserved)
    throw std::domain_error("compute_tbs: reserved MCS row has no code rate");
  if (in.n_prb < 1) throw std::domain_error("compute_tbs: n_prb must be >= 1");
  if (in.n_symbols_data < 1 || in.n_symbols_data > 14)
    throw std::domain_error("compute_tbs: n_symbols_data must be in 1..14");
  if (in.n_dmrs_re_per_prb < 0)
    throw std::domain_error("compute_tbs: negative DMRS overhead");
  if (in.x_overhead != 0 && in.x_overhead != 6 && in.x_overhead != 12 && in.x_overhead != 18)
    throw std::domain_error("compute_tbs: x_overhead must be 0, 6, 12 or 18");
  if (in.n_layers < 1 || in.n_layers > 4)
    throw std::domain_error("compute_tbs: n_layers must be in 1..4");

  // Step 1: resource elements. Per-PRB REs are capped at 156 before scaling
  // by the allocation size.
  const long re_per_prb = 12L * in.n_symbols_data - in.n_dmrs_re_per_prb - in.x_overhead;
  if (re_per_prb <= 0)
    throw std::domain_error("compute_tbs: overhead leaves no usable REs");
  const long n_re = std::min<long>(156, re_per_prb) * in.n_prb;

  // Step 2: N_info = n_re * R * Qm * v, carried as N_info * 2048.
  const long long rate_x2048 = std::llround(in.mcs.code_rate_x1024 * 2.0);
  const long long ninfo_x2048 =
      static_cast<long long>(n_re) * in.mcs.qm * in.n_layers * rate_x2048;
  if (ninfo_x2048 <= 0) throw std::domain_error("compute_tbs: empty transport block");

  const auto floor_div_pow2 = [](long long v, int shift) { return v >> shift; };

  if (ninfo_x2048 <= 3824LL * 2048) {
    // Step 3: quantize and read the small-TBS table.
    const long long ninfo_floor = floor_div_pow2(ninfo_x2048, 11);
    const int n = std::max(
        3, static_cast<int>(std::bit_width(static_cast<unsigned long long>(ninfo_floor))) - 1 - 6);
    const long long quantized = floor_div_pow2(ninfo_x2048, 11 + n) << n;
    const long long ninfo_q = std::max<long long>(24, quantized);
    const auto& table = get_tbs_small_table();
    const auto it = std::lower_bound(table.begin(), table.end(), static_cast<long>(ninfo_q));
    if (it == table.end()) throw std::logic_error("compute_tbs: quantized N_info above table");
    return *it;
  }

  // Step 4: N_info > 3824.
  const long long m_x2048 = ninfo_x2048 - 24LL * 2048;  // N_info - 24, scaled
  const int n =
      static_cast<int>(std::bit_width(static_cast<unsigned long long>(floor_div_pow2(m_x2048, 11)))) -
      1 - 5;
  // round((N_info - 24) / 2^n), round half up, done as (m + half) >> shift.
  const long long rounded = (m_x2048 + (1LL << (10 + n))) >> (11 + n);
  const long long ninfo_q = std::max<long long>(3840, rounded << n);

  const auto ceil_div = [](long long a, long long b) { return (a + b - 1) / b; };
  long long c;
  if (rate_x2048 <= 512) {  // R <= 1/4
    c = ceil_div(ninfo_q + 24, 3816);
  } else if (ninfo_q > 8424) {
    c = ceil_div(ninfo_q + 24, 8424);
  } else {
    return static_cast<long>(8 * ceil_div(ninfo_q + 24, 8) - 24);
  }
  return static_cast<long>(8 * c * ceil_div(ninfo_q + 24, 8 * c) - 24);
}

// ---------------------------------------------------------------------------
// Canonical serialization: stable text used for checksums and CSV dumps.
// ---------------------------------------------------------------------------

inline std::string canonical_text(const mcs_table& t) {
  std::string out;
  for (const auto& e : t.rows) {
    out += std::to_string(e.index);
    out += ' ';
    out += std::to_string(e.qm);
    if (e.reserved) {
      out += " reserved";
    } else {
      out += ' ';
      out += fmt_shortest(e.code_rate_x1024);
      out += ' ';
      out += fmt_fixed(e.spectral_efficiency, 4);
    }
    out += '\n';
  }
  return out;
}

inline std::string canonical_text(const cqi_table& t) {
  std::string out;
  for (const auto& e : t.rows) {
    out += std::to_string(e.cqi);
    if (e.out_of_range) {
      out += " out_of_range";
    } else {
      out += ' ';
      out += std::to_string(e.qm);
      out += ' ';
      out += fmt_shortest(e.code_rate_x1024);
      out += ' ';
      out += fmt_fixed(e.spectral_efficiency, 4);
    }
    out += '\n';
  }
  return out;
}

inline std::uint64_t table_checksum(const mcs_table& t) { return fnv1a64(canonical_text(t)); }
inline std::uint64_t table_checksum(const cqi_table& t) { return fnv1a64(canonical_text(t)); }

inline std::string mcs_table_csv(const mcs_table& t) {
  std::string out = "index,qm,code_rate_x1024,spectral_efficiency,reserved\n";
  for (const auto& e : t.rows) {
    out += std::to_string(e.index);
    out += ',';
    out += std::to_string(e.qm);
    if (e.reserved) {
      out += ",,,1\n";
    } else {
      out += ',';
      out += fmt_shortest(e.code_rate_x1024);
      out += ',';
      out += fmt_fixed(e.spectral_efficiency, 4);
      out += ",0\n";
    }
  }
  return out;
}

inline std::string cqi_table_csv(const cqi_table& t) {
  std::string out = "cqi,qm,code_rate_x1024,spectral_efficiency,out_of_range\n";
  for (const auto& e : t.rows) {
    out += std::to_string(e.cqi);
    if (e.out_of_range) {
      out += ",,,,1\n";
    } else {
      out += ',';
      out += std::to_string(e.qm);
      out += ',';
      out += fmt_shortest(e.code_rate_x1024);
      out += ',';
      out += fmt_fixed(e.spectral_efficiency, 4);
      out += ",0\n";
    }
  }
  return out;
}

// Human-readable modulation name for a modulation order.
inline std::string_view modulation_name(int qm) {
  switch (qm) {
    case 2: return "qpsk";
    case 4: return "16qam";
    case 6: return "64qam";
    case 8: return "256qam";
    case 10: return "1024qam";
    default: return "unknown";
  }
}

}  // namespace fr2la
