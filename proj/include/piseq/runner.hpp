#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "piseq/analytics.hpp"
#include "piseq/recurrence.hpp"
#include "piseq/state_store.hpp"

namespace piseq {

/// Checkpoint cadence: at every power of ten, every `every` steps, and at
/// the final index.  An empty path disables saving.
struct SaveSpec {
  std::string path;
  u64 every = 100'000'000;
};

bool checkpoint_due(u64 n, u64 limit, const SaveSpec& save);

/// The gen/resume pipeline: rows to `out`, checkpoints per `save`.  The
/// analytics fold rides along so saved checkpoints are complete; pass the
/// fold that matches the stream (fresh or restored).
void emit_rows(Stream& st, Analytics& an, u64 limit, RowFormat fmt,
               std::ostream& out, const SaveSpec& save = {});

Analytics run_census(u64 limit);

struct FirstSearch {
  std::vector<FirstHit> hits;  // one per found k in [0, max_k], ascending k
  bool complete = false;       // every k in [0, max_k] was found
  u64 scanned = 0;             // last index visited
};

/// Streams until every k <= max_k has a first occurrence or `limit` is hit,
/// whichever comes sooner.
FirstSearch find_firsts(u64 max_k, u64 limit);

struct VerifySummary {
  u64 limit = 0;
  u64 checked_steps = 0;
  HighWater max_a;
  HighWater max_h;
  HighWater min_h;  // over n >= 9
  RatioRecord min_ratio;
  u64 snapshots = 0;
  u64 gap_pairs = 0;
};

/// Streams to `limit` with every invariant armed (strict step checks,
/// deficit window, census identities, gap-pair bound).  Throws
/// InvariantViolation on the first failure.  `inject_flip` > 0 corrupts
/// that primality flag once the window reaches it; used to prove the
/// checks can fail.
VerifySummary run_verify(u64 limit, u64 inject_flip = 0);

/// Batch of shifted-seed runs from n0 with s0 drawn uniformly from
/// [n0 - g(n0), n0]; deterministic for a fixed rng_seed.
std::vector<ShiftRun> run_shift_batch(u64 n0, u64 seeds, u64 rng_seed,
                                      u64 limit);

struct VariantSummary {
  VariantSpec spec;
  u64 limit = 0;
  SeqState last;
  i64 max_deficit = 0;  // sup of f(n) - s_f(n); provably >= 0 when c = 0
  double ratio = 0.0;   // s_f(limit) / (t * limit)
};

VariantSummary run_variant(VariantSpec spec, u64 limit);

/// JSON report of every table the fold maintains: census rows with
/// densities, first occurrences, deficit records, run lengths, gap pairs.
std::string build_report(const Analytics& an,
                         const std::vector<FirstHit>* firsts = nullptr);

/// Snapshot-row CSV header shared by the census emitters.
inline constexpr const char* kCensusHeader =
    "x,N0,N1,N2,N3,N4,N5,s,h,max_h,sum_sq";

void write_census_row(std::ostream& out, const Analytics& an, u64 x);

}  // namespace piseq
