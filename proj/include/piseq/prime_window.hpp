#pragma once

#include <algorithm>
#include <bit>
#include <optional>
#include <string>
#include <vector>

#include "piseq/common.hpp"

namespace piseq {

struct WindowConfig {
  u64 segment_size = u64{1} << 20;  // integers sieved per chunk
  u64 capacity = u64{1} << 24;      // max covered span hi-lo+1
};

class PrimeCursor;

/// Primality flags over a trailing window [lo, hi] of the integers, filled by
/// a segmented sieve.  Both bounds only move forward; flags are exact
/// primality (0 and 1 are not prime).
class PrimalityWindow {
 public:
  explicit PrimalityWindow(WindowConfig cfg = {});
  /// Window starting at lo0 (covers [lo0, lo0] initially); for resuming a
  /// run without sieving the dropped prefix.
  PrimalityWindow(WindowConfig cfg, u64 lo0);

  u64 lo() const { return lo_; }
  u64 hi() const { return hi_; }

  bool test(u64 x) const {
    // pre: lo <= x <= hi
    const u64 i = x - phys_lo_;
    return (bits_[i >> 6] >> (i & 63)) & 1u;
  }

  /// Extend coverage to [lo, m], sieving (hi, m].  m < hi is an error;
  /// m == hi is a no-op.  Throws CapacityError if the span would exceed
  /// the configured capacity.
  void extend_to(u64 m);

  /// Drop coverage below m.  Any registered cursor sitting below m is a
  /// logic bug and aborts via std::logic_error.
  void advance_low(u64 m);

  /// Number of primes in [a, b] (0 if a > b).  pre: lo <= a, b <= hi.
  u64 count_in(u64 a, u64 b) const;

  /// Hex dump of the flag bits, LSB-first: nibble i covers integers
  /// lo+4i .. lo+4i+3.
  std::string hex_bitmap() const;

  /// Fault-injection hook: flips the primality flag of x.  Test use only.
  void debug_flip(u64 x);

 private:
  friend class PrimeCursor;

  void sieve_range(u64 a, u64 b);
  void ensure_base_primes(u64 limit);
  void compact();

  WindowConfig cfg_;
  u64 lo_ = 0;
  u64 hi_ = 1;
  u64 phys_lo_ = 0;  // bit 0 of bits_, always even and <= lo
  std::vector<u64> bits_;
  std::vector<u32> base_primes_;
  u64 base_limit_ = 2;
  std::vector<PrimeCursor*> cursors_;
};

/// A forward-only counting cursor: count == pi(pos) at all times.  Cursors
/// register with their window so advance_low can detect orphaning.
class PrimeCursor {
 public:
  PrimeCursor(PrimalityWindow& w, u64 pos, u64 count);
  ~PrimeCursor();

  PrimeCursor(const PrimeCursor&) = delete;
  PrimeCursor& operator=(const PrimeCursor&) = delete;
  PrimeCursor(PrimeCursor&& other) noexcept;
  PrimeCursor& operator=(PrimeCursor&&) = delete;

  u64 pos() const { return pos_; }
  u64 count() const { return count_; }

  /// Move to target >= pos, adding the primes in (pos, target] to count.
  void advance_to(u64 target);

  /// Single-step advance; returns whether pos+1 is prime.
  bool advance_one() {
    const bool p = w_->test(pos_ + 1);
    ++pos_;
    count_ += p;
    return p;
  }

 private:
  PrimalityWindow* w_;
  u64 pos_;
  u64 count_;
};

/// Exact pi(x) by trial division.  Independent of the sieve path; intended
/// as a test oracle and for tiny arguments (step-bound checks).
u64 reference_pi(u64 x);

/// Trial-division primality test.
bool is_prime_u64(u64 x);

/// A completed maximal-gap pair: consecutive primes p < q whose gap q-p
/// exceeded every earlier gap (prev_max).
struct GapPairRecord {
  u64 p;
  u64 q;
  u64 prev_max;
  u64 gap() const { return q - p; }
  friend bool operator==(const GapPairRecord&, const GapPairRecord&) = default;
};

/// Tracks the largest prime seen and the maximal consecutive-prime gaps as
/// the horizon advances one integer at a time.  Evaluates g(n), the largest
/// distance from any y <= n back to the prime at or below y, for any
/// 2 <= n <= horizon.
class GapLedger {
 public:
  GapLedger() = default;
  GapLedger(u64 horizon, u64 last_prime, u64 max_gap,
            std::vector<GapPairRecord> records);

  /// Feed the next integer.  n must be horizon+1.
  void observe(u64 n, bool n_is_prime) {
    horizon_ = n;
    if (!n_is_prime) {
      has_event_ = false;
      return;
    }
    has_event_ = false;
    if (last_prime_ >= 2) {
      const u64 gap = n - last_prime_;
      if (gap > max_gap_) {
        records_.push_back({last_prime_, n, max_gap_});
        max_gap_ = gap;
        has_event_ = true;
      }
    }
    last_prime_ = n;
  }

  u64 horizon() const { return horizon_; }
  u64 last_prime() const { return last_prime_; }
  u64 max_gap() const { return max_gap_; }

  /// g at the current horizon.  pre: horizon >= 2.
  u64 g_at_horizon() const {
    return std::max(max_gap_, horizon_ - last_prime_);
  }

  /// g(n) for any 2 <= n <= horizon, reconstructed from the record list.
  u64 g_of(u64 n) const;

  const std::vector<GapPairRecord>& records() const { return records_; }

  /// True iff the last observe() completed a new maximal-gap pair, which is
  /// then records().back().
  bool record_completed() const { return has_event_; }

 private:
  u64 horizon_ = 0;
  u64 last_prime_ = 0;
  u64 max_gap_ = 0;
  bool has_event_ = false;
  std::vector<GapPairRecord> records_;
};

/// Standalone evaluation of g(n) (streams a fresh ledger up to n).
u64 compute_g(u64 n);

}  // namespace piseq
