#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "piseq/common.hpp"
#include "piseq/recurrence.hpp"

namespace piseq {

/// First index n with a_n = k, plus the observed (reported, never asserted)
/// primality facts about that index.
struct FirstHit {
  u64 k = 0;
  u64 n = 0;
  bool index_prime = false;
  bool twin = false;  // n and n-2 both prime
  friend bool operator==(const FirstHit&, const FirstHit&) = default;
};

struct RunRecord {
  u64 k = 0;
  u64 start = 0;
  u64 len = 0;
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct HighWater {
  u64 n = 0;
  u64 h = 0;
  friend bool operator==(const HighWater&, const HighWater&) = default;
};

struct RatioRecord {
  u64 n = 0;
  double value = 0.0;
  bool set = false;
  friend bool operator==(const RatioRecord&, const RatioRecord&) = default;
};

/// One maximal-gap pair (p, q) with the observed max of h_m over p <= m < q.
/// checked is false when the interval started before this fold was attached
/// (resumed run), in which case the bound is not asserted.
struct GapPairObs {
  u64 p = 0;
  u64 q = 0;
  u64 h_max = 0;
  bool checked = false;
  friend bool operator==(const GapPairObs&, const GapPairObs&) = default;
};

struct SnapshotRow {
  u64 x = 0;
  std::map<u64, u64> counts;  // sparse census at x
  u64 s = 0;
  u64 h = 0;
  u64 max_h = 0;
  u64 sum_sq = 0;
  friend bool operator==(const SnapshotRow&, const SnapshotRow&) = default;
};

/// Serializable snapshot of the fold; everything needed so a resumed run
/// reports identically to an unbroken one.
struct AnalyticsState {
  u64 next_n = 1;  // next index this fold expects
  std::map<u64, u64> census;
  std::vector<FirstHit> firsts;  // sorted by k
  std::map<u64, RunRecord> best_runs;
  RunRecord current_run;  // len == 0 means none open
  u64 sum_sq = 0;
  HighWater max_h;
  HighWater min_h;  // over n >= 9; h = 0 means unset
  RatioRecord min_ratio;  // min of h_n / log n over n >= 9
  u64 h2_count = 0;
  u64 h2_last = 0;
  RatioRecord step_ratio;  // max of a^2 * log(max(a,2)) / g(n)
  u64 step_ratio_k = 0;
  std::vector<SnapshotRow> snapshots;
  std::vector<GapPairObs> gap_pairs;
  friend bool operator==(const AnalyticsState&, const AnalyticsState&) = default;
};

/// Single-pass fold over the emitted stream: decade censuses, first
/// occurrences, deficit records, constant-run lengths, second moment, and
/// the maximal-gap-pair deficit bound.  Census identities are checked at
/// every power-of-10 snapshot; the gap-pair bound at every completed pair.
class Analytics {
 public:
  Analytics();
  explicit Analytics(const AnalyticsState& restored);

  void observe(const Stream& st);

  /// Serializable state (syncs the dense census counters first).
  const AnalyticsState& state() const;

  /// Census row (N_0..N_5) at x, which must be a snapshotted power of 10 or
  /// the current horizon.
  std::array<u64, 6> census_row(u64 x) const;

  std::optional<u64> first_occurrence(u64 k) const;
  const FirstHit* first_hit(u64 k) const;

  /// Observed interval max for the maximal-gap pair starting at p.
  std::optional<GapPairObs> gap_pair(u64 p) const;

  u64 horizon() const { return next_n_ - 1; }

 private:
  void snapshot(const Stream& st);
  void sync_census() const;
  void bump(u64 k);

  mutable AnalyticsState st_;
  u64 next_n_ = 1;
  // dense census mirror for the hot path; k >= kDense spills to st_.census
  static constexpr u64 kDense = 256;
  mutable std::vector<u64> dense_;
  u64 next_snap_ = 10;
  // lazy min-ratio gate: exact log only when h < bar_, bar_ refreshed at
  // doublings of n and on record improvement
  double bar_ = 0.0;
  u64 bar_n_ = 0;
  // gap-pair interval accumulator: max h since the last prime
  u64 h_seg_ = 0;
  u64 valid_from_ = 1;
};

/// Per-step checks that are not armed inside Stream itself: the two-sided
/// step bound a_{n+1} in [a_n - max(1, 2 pi(a_n)), a_n + 1], the cursor
/// delta identity, and the hardcoded prefix for n < 9.
class StrictChecks {
 public:
  void observe(const Stream& st);

  const HighWater& max_a() const { return max_a_; }
  u64 checked_steps() const { return steps_; }

 private:
  u64 pi_small(u64 x);

  std::vector<u64> pi_table_{0, 0};  // pi_table_[x] = pi(x), grown on demand
  u64 prev_a_ = 0;
  u64 prev_ds_ = 0;
  bool have_prev_ = false;
  HighWater max_a_;  // (n, a) running maximum
  u64 steps_ = 0;
};

struct ApHit {
  u64 n = 0;  // start index
  u64 d = 0;
  friend bool operator==(const ApHit&, const ApHit&) = default;
};

struct ApConfig {
  u64 retention = 2048;  // ring size cap; needs k*dmax+1 slots
  EngineConfig engine;
};

/// All (n, d) with d <= dmax, n + k*d <= limit and a_{n+j*d} = j for
/// j = 0..k, found by streaming with a ring of the last k*dmax+1 terms.
std::vector<ApHit> ap_search(u64 k, u64 dmax, u64 limit, ApConfig cfg = {});

}  // namespace piseq
