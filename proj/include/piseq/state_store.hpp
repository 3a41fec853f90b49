#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "piseq/analytics.hpp"
#include "piseq/recurrence.hpp"

namespace piseq {

inline constexpr u64 kCheckpointVersion = 1;

/// Everything needed to resume a run and keep all downstream output
/// byte-identical to an unbroken run.  The primality window is not stored;
/// it is rebuilt by sieving [s, n+1].
struct CheckpointData {
  u64 version = kCheckpointVersion;
  SeqState state;
  u64 last_prime = 0;
  u64 max_gap = 0;
  std::vector<GapPairRecord> gap_records;
  AnalyticsState analytics;
  friend bool operator==(const CheckpointData&, const CheckpointData&) = default;
};

CheckpointData make_checkpoint(const Stream& st, const Analytics& an);
ResumePoint resume_point(const CheckpointData& c);

/// Canonical serialization (sorted keys, integers as decimal strings) with
/// a crc32 integrity field, written atomically: temp file, fsync, rename.
void save_checkpoint(const CheckpointData& c, const std::string& path);

/// Throws CheckpointVersionError on a version mismatch and
/// CheckpointIntegrityError on torn, truncated, or corrupted content.
CheckpointData load_checkpoint(const std::string& path);

enum class RowFormat { csv, jsonl };

/// Emits (n, a, s, h) rows; CSV has the header `n,a,s,h`, JSON lines carry
/// the same fields as decimal strings.  LF line endings, no locale.
class RowWriter {
 public:
  RowWriter(std::ostream& out, RowFormat fmt);

  void observe(const Stream& st) {
    write_row(st.state().n, st.state().a, st.state().s);
  }
  void write_row(u64 n, u64 a, u64 s);

 private:
  std::ostream* out_;
  RowFormat fmt_;
};

struct Row {
  u64 n, a, s, h;
  friend bool operator==(const Row&, const Row&) = default;
};

/// Parses rows back (either format); used by round-trip tests and resume
/// verification.
std::vector<Row> parse_rows(std::istream& in, RowFormat fmt);

}  // namespace piseq
