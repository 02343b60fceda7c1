// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT

#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fr2la/channel.hpp"
#include "fr2la/link_adapt.hpp"
#include "fr2la/nr_tables.hpp"
#include "fr2la/phy.hpp"

namespace fr2la {

// TDD frame pattern, described per period as a run of full-DL slots, one
// special slot with a DL part and a UL part, and a run of full-UL slots
// (e.g. DDDSU). Slot duration follows the numerology (0.125 ms at 120 kHz).
struct tdd_pattern {
  int period_slots = 5;
  int dl_slots = 3;             // leading full-DL slots
  int special_dl_symbols = 10;  // DL symbols in the special slot
  int special_ul_symbols = 1;   // UL symbols in the special slot
  int ul_slots = 1;             // trailing full-UL slots
  double slot_duration_s = 1.0 / 8000.0;
};

inline void validate_pattern(const tdd_pattern& p) {
  if (p.period_slots < 1) throw std::domain_error("TDD pattern: period must be >= 1");
  if (p.dl_slots < 0 || p.ul_slots < 0)
    throw std::domain_error("TDD pattern: negative slot counts");
  if (p.dl_slots + p.ul_slots + 1 != p.period_slots)
    throw std::domain_error("TDD pattern: DL + UL + special must equal the period");
  if (p.special_dl_symbols < 0 || p.special_ul_symbols < 0 ||
      p.special_dl_symbols + p.special_ul_symbols > 14)
    throw std::domain_error("TDD pattern: special-slot symbols exceed 14");
  if (!(p.slot_duration_s > 0.0))
    throw std::domain_error("TDD pattern: slot duration must be > 0");
  if (p.ul_slots == 0 && p.special_ul_symbols == 0)
    throw std::domain_error("TDD pattern: no uplink opportunity for HARQ feedback");
}

// Number of downlink OFDM symbols usable in the given absolute slot: 14 in a
// full-DL slot, the DL portion in the special slot, 0 in UL slots.
inline int dl_symbols_in_slot(const tdd_pattern& p, long slot) {
  const long pos = slot % p.period_slots;
  if (pos < p.dl_slots) return 14;
  if (pos == p.dl_slots) return p.special_dl_symbols;
  return 0;
}

// Whether the slot offers any uplink symbols (full-UL slot or the UL part of
// the special slot) and can therefore carry HARQ feedback.
inline bool slot_has_ul(const tdd_pattern& p, long slot) {
  const long pos = slot % p.period_slots;
  if (pos > p.dl_slots) return true;
  return pos == p.dl_slots && p.special_ul_symbols > 0;
}

// One stop-and-wait HARQ process. tx_count counts transmissions performed,
// so a process NACKed at tx_count == max_tx has exhausted its attempts.
struct harq_process {
  int id = 0;
  long tb_bits = 0;
  mcs_entry mcs;
  int tx_count = 0;
  int max_tx = 4;
  bool active = false;
  long first_tx_slot = 0;
};

enum class harq_outcome { completed, retransmit, dropped };

// Applies one CRC feedback to a process. ACK completes it; NACK schedules a
// retransmission until the attempt budget is spent, then drops the block.
inline harq_outcome process_feedback(harq_process& p, crc_result fb) {
  if (!p.active) throw std::domain_error("process_feedback: inactive HARQ process");
  if (fb == crc_result::ack) {
    p.active = false;
    return harq_outcome::completed;
  }
  if (p.tx_count < p.max_tx) {
    ++p.tx_count;
    return harq_outcome::retransmit;
  }
  p.active = false;
  return harq_outcome::dropped;
}

// One scheduled PDSCH transmission, as written to slot exports.
struct slot_record {
  long slot_index = 0;
  double time_s = 0.0;
  double distance_m = 0.0;
  double rsrp_dbm = 0.0;
  double sinr_db = 0.0;
  mcs_table_id table = mcs_table_id::table1;
  int mcs_index = 0;
  int qm = 0;
  int n_prb = 0;
  long tbs_bits = 0;
  bool new_tx = true;
  bool ack = false;
};

// Aggregate results of one run.
struct run_metrics {
  double duration_s = 0.0;
  long total_slots = 0;
  double mac_throughput_bps = 0.0;  // acknowledged bits / duration
  double phy_throughput_bps = 0.0;  // all transmitted bits / duration
  double retx_rate = 0.0;           // retransmissions / transmissions
  double first_tx_nack_rate = 0.0;  // NACKs on initial transmissions
  std::map<int, double> modulation_utilization;  // Qm -> share of scheduled PRBs
  double mean_rsrp_dbm = 0.0;
  double dl_airtime_fraction = 0.0; // scheduled DL symbols / all slot symbols
  long n_transmissions = 0;
  long n_retransmissions = 0;
  long n_first_tx = 0;
  long n_first_tx_nacked = 0;
  long n_dropped_blocks = 0;
  std::vector<slot_record> slot_records;  // retained only on request
};

// Streaming accumulator so long runs don't have to retain per-slot records.
class metrics_accumulator {
 public:
  explicit metrics_accumulator(const tdd_pattern& p) : pattern_(p) {}

  void add(const slot_record& r) {
    ++n_tx_;
    if (r.new_tx) {
      ++n_first_;
      if (!r.ack) ++n_first_nack_;
    } else {
      ++n_retx_;
    }
    phy_bits_ += r.tbs_bits;
    if (r.ack) mac_bits_ += r.tbs_bits;
    prb_by_qm_[r.qm] += static_cast<double>(r.n_prb);
    rsrp_sum_ += r.rsrp_dbm;
    dl_symbols_ += dl_symbols_in_slot(pattern_, r.slot_index);
  }

  run_metrics finalize(long total_slots, long n_dropped = 0) const {
    run_metrics m;
    m.total_slots = total_slots;
    m.duration_s = total_slots * pattern_.slot_duration_s;
    if (m.duration_s > 0.0) {
      m.mac_throughput_bps = static_cast<double>(mac_bits_) / m.duration_s;
      m.phy_throughput_bps = static_cast<double>(phy_bits_) / m.duration_s;
    }
    m.n_transmissions = n_tx_;
    m.n_retransmissions = n_retx_;
    m.n_first_tx = n_first_;
    m.n_first_tx_nacked = n_first_nack_;
    m.n_dropped_blocks = n_dropped;
    m.retx_rate = n_tx_ > 0 ? static_cast<double>(n_retx_) / static_cast<double>(n_tx_) : 0.0;
    m.first_tx_nack_rate =
        n_first_ > 0 ? static_cast<double>(n_first_nack_) / static_cast<double>(n_first_) : 0.0;
    double prb_total = 0.0;
    for (const auto& [qm, prbs] : prb_by_qm_) prb_total += prbs;
    if (prb_total > 0.0)
      for (const auto& [qm, prbs] : prb_by_qm_) m.modulation_utilization[qm] = prbs / prb_total;
    m.mean_rsrp_dbm = n_tx_ > 0 ? rsrp_sum_ / static_cast<double>(n_tx_) : 0.0;
    if (total_slots > 0)
      m.dl_airtime_fraction =
          static_cast<double>(dl_symbols_) / (static_cast<double>(total_slots) * 14.0);
    return m;
  }

 private:
  tdd_pattern pattern_;
  long n_tx_ = 0;
  long n_retx_ = 0;
  long n_first_ = 0;
  long n_first_nack_ = 0;
  long long phy_bits_ = 0;
  long long mac_bits_ = 0;
  std::map<int, double> prb_by_qm_;
  double rsrp_sum_ = 0.0;
  long long dl_symbols_ = 0;
};

// Convenience for tests and offline use: metrics from a record list. An empty
// list yields well-defined zero metrics.
inline run_metrics accumulate_metrics(std::span<const slot_record> records,
                                      const tdd_pattern& pattern, long total_slots) {
  metrics_accumulator acc(pattern);
  for (const auto& r : records) acc.add(r);
  return acc.finalize(total_slots);
}

// MAC-layer configuration: HARQ dimensioning and per-slot overhead geometry.
struct mac_config {
  tdd_pattern pattern;
  int max_tx = 4;             // 1 initial + 3 retransmissions
  int harq_processes = 16;
  int coreset_symbols = 1;    // PDCCH symbols stolen from each DL slot
  int dmrs_re_per_prb = 12;   // one full DMRS symbol
  int x_overhead = 0;
  int n_layers = 2;
  int n_prb = 66;
};

inline void validate_mac_config(const mac_config& c) {
  validate_pattern(c.pattern);
  if (c.max_tx < 1) throw std::domain_error("MAC: max_tx must be >= 1");
  if (c.harq_processes < 1) throw std::domain_error("MAC: need at least one HARQ process");
  if (c.coreset_symbols < 0 || c.coreset_symbols > 3)
    throw std::domain_error("MAC: coreset_symbols must be in 0..3");
  if (c.n_prb < 1) throw std::domain_error("MAC: n_prb must be >= 1");
  if (c.n_layers < 1 || c.n_layers > 4) throw std::domain_error("MAC: n_layers must be in 1..4");
}

// Single-user downlink scheduler with stop-and-wait HARQ processes, OLLA
// feedback, CQI-driven MCS selection and optional adaptive table switching.
//
// Feedback timing: a transmission in slot n is acknowledged in the first slot
// >= n + 2 offering UL symbols, and the gNB acts on it from the next slot on.
// Retransmissions take priority over new data and reuse the stored MCS and
// TBS of their process.
class scheduler {
 public:
  scheduler(const mac_config& cfg, const table_mode& mode, const olla_state& olla,
            const bler_model& bler)
      : cfg_(cfg), mode_(mode), olla_(olla), bler_(bler) {
    validate_mac_config(cfg_);
    if (mode_.kind == table_mode_kind::adaptive &&
        !(mode_.switch_up_sinr_db > mode_.switch_down_sinr_db))
      throw std::domain_error("scheduler: adaptive mode needs valid thresholds");
    current_table_ = mode_.kind == table_mode_kind::adaptive ? mcs_table_id::table1
                                                             : fixed_table_of(mode_.kind);
    processes_.resize(static_cast<std::size_t>(cfg_.harq_processes));
    for (int i = 0; i < cfg_.harq_processes; ++i) processes_[static_cast<std::size_t>(i)].id = i;
  }

  // Stores a (possibly stale) wideband SINR report and updates the filtered
  // estimate used by adaptive table switching.
  void on_cqi_report(double sinr_db) {
    report_sinr_db_ = sinr_db;
    filtered_sinr_db_ = have_report_
                            ? (1.0 - mode_.sinr_filter_alpha) * filtered_sinr_db_ +
                                  mode_.sinr_filter_alpha * sinr_db
                            : sinr_db;
    have_report_ = true;
  }

  // Picks what to send in this slot, without drawing the channel outcome.
  // Returns nothing on UL slots, when no CQI has arrived yet, when the UE
  // reports out-of-range, or when all HARQ processes are busy.
  std::optional<slot_record> schedule_slot(long slot, double distance_m,
                                           const link_sample& link) {
    const int dl_syms = dl_symbols_in_slot(cfg_.pattern, slot);
    if (dl_syms == 0) return std::nullopt;

    slot_record rec;
    rec.slot_index = slot;
    rec.time_s = static_cast<double>(slot) * cfg_.pattern.slot_duration_s;
    rec.distance_m = distance_m;
    rec.rsrp_dbm = link.rsrp_dbm;
    rec.sinr_db = link.sinr_db;
    rec.n_prb = cfg_.n_prb;

    // Pending retransmissions first, oldest transport block first.
    if (const int pid = pop_oldest_ready(); pid >= 0) {
      const harq_process& p = processes_[static_cast<std::size_t>(pid)];
      rec.table = p.mcs.table_id;
      rec.mcs_index = p.mcs.index;
      rec.qm = p.mcs.qm;
      rec.tbs_bits = p.tb_bits;
      rec.new_tx = false;
      last_scheduled_ = pid;
      return rec;
    }

    if (!have_report_) return std::nullopt;

    current_table_ = select_table(mode_, filtered_sinr_db_, current_table_);
    const cqi_table& ct = get_cqi_table(cqi_table_for(current_table_));
    const int cqi = select_cqi(report_sinr_db_, ct, bler_);
    if (cqi == 0) return std::nullopt;

    const int pid = find_free_process();
    if (pid < 0) return std::nullopt;

    const int data_syms = dl_syms - cfg_.coreset_symbols;
    if (data_syms < 1 ||
        12 * data_syms - cfg_.dmrs_re_per_prb - cfg_.x_overhead <= 0)
      return std::nullopt;

    const mcs_table& mt = get_mcs_table(current_table_);
    const mcs_entry& mcs = illa_select_mcs(cqi, ct, mt, olla_, bler_);
    harq_process& p = processes_[static_cast<std::size_t>(pid)];
    p.tb_bits = tbs_for(mcs, data_syms);
    p.mcs = mcs;
    p.tx_count = 1;
    p.max_tx = cfg_.max_tx;
    p.active = true;
    p.first_tx_slot = slot;

    rec.table = mcs.table_id;
    rec.mcs_index = mcs.index;
    rec.qm = mcs.qm;
    rec.tbs_bits = p.tb_bits;
    rec.new_tx = true;
    last_scheduled_ = pid;
    return rec;
  }

  // Full per-slot step: deliver due feedback, schedule, draw the CRC outcome
  // against the true link SINR, and enqueue the resulting feedback.
  std::optional<slot_record> advance(long slot, double distance_m, const link_sample& link,
                                     rng_stream& crc_rng) {
    deliver_feedback_before(slot);
    auto rec = schedule_slot(slot, distance_m, link);
    if (!rec) return rec;
    harq_process& p = processes_[static_cast<std::size_t>(last_scheduled_)];
    const double p_err = bler(link.sinr_db, p.mcs, p.tx_count, bler_);
    const crc_result fb = draw_crc(p_err, crc_rng);
    rec->ack = (fb == crc_result::ack);
    pending_.push_back({last_scheduled_, rec->new_tx, fb, feedback_slot(slot)});
    return rec;
  }

  // First slot >= tx_slot + 2 with UL symbols available for the ACK/NACK.
  long feedback_slot(long tx_slot) const {
    long f = tx_slot + 2;
    while (!slot_has_ul(cfg_.pattern, f)) ++f;
    return f;
  }

  const olla_state& olla() const { return olla_; }
  mcs_table_id current_table() const { return current_table_; }
  double filtered_sinr_db() const { return filtered_sinr_db_; }
  long dropped_blocks() const { return dropped_; }
  const harq_process& process(int id) const {
    return processes_.at(static_cast<std::size_t>(id));
  }

 private:
  struct pending_feedback {
    int pid;
    bool first_tx;
    crc_result fb;
    long deliver_slot;
  };

  // Feedback sent in slot f is usable from slot f + 1 on.
  void deliver_feedback_before(long slot) {
    while (!pending_.empty() && pending_.front().deliver_slot < slot) {
      const pending_feedback e = pending_.front();
      pending_.pop_front();
      if (e.first_tx) olla_ = olla_update(olla_, e.fb);
      harq_process& p = processes_[static_cast<std::size_t>(e.pid)];
      switch (process_feedback(p, e.fb)) {
        case harq_outcome::completed:
          break;
        case harq_outcome::retransmit:
          ready_.push_back(e.pid);
          break;
        case harq_outcome::dropped:
          ++dropped_;
          break;
      }
    }
  }

  int pop_oldest_ready() {
    if (ready_.empty()) return -1;
    std::size_t best = 0;
    for (std::size_t i = 1; i < ready_.size(); ++i) {
      const auto& a = processes_[static_cast<std::size_t>(ready_[i])];
      const auto& b = processes_[static_cast<std::size_t>(ready_[best])];
      if (a.first_tx_slot < b.first_tx_slot) best = i;
    }
    const int pid = ready_[best];
    ready_.erase(ready_.begin() + static_cast<std::ptrdiff_t>(best));
    return pid;
  }

  int find_free_process() const {
    for (const auto& p : processes_)
      if (!p.active) return p.id;
    return -1;
  }

  long tbs_for(const mcs_entry& mcs, int data_syms) {
    const std::size_t key =
        (static_cast<std::size_t>(table_number(mcs.table_id)) * 100 +
         static_cast<std::size_t>(mcs.index)) *
            15 +
        static_cast<std::size_t>(data_syms);
    if (const auto it = tbs_cache_.find(key); it != tbs_cache_.end()) return it->second;
    tbs_input in;
    in.n_prb = cfg_.n_prb;
    in.n_symbols_data = data_syms;
    in.n_dmrs_re_per_prb = cfg_.dmrs_re_per_prb;
    in.x_overhead = cfg_.x_overhead;
    in.n_layers = cfg_.n_layers;
    in.mcs = mcs;
    const long tbs = compute_tbs(in);
    tbs_cache_.emplace(key, tbs);
    return tbs;
  }

  mac_config cfg_;
  table_mode mode_;
  olla_state olla_;
  bler_model bler_;
  mcs_table_id current_table_;
  std::vector<harq_process> processes_;
  std::vector<int> ready_;
  std::deque<pending_feedback> pending_;
  std::map<std::size_t, long> tbs_cache_;
  bool have_report_ = false;
  double report_sinr_db_ = 0.0;
  double filtered_sinr_db_ = 0.0;
  int last_scheduled_ = -1;
  long dropped_ = 0;
};

}  // namespace fr2la
