#pragma once

#include <optional>

#include "piseq/common.hpp"
#include "piseq/prime_window.hpp"

namespace piseq {

/// Full state of the stream at index n.  a = pi(n) - pi(s_{n-1}) and
/// s = a_1 + ... + a_n; the deficit h() = n - s counts the non-prime
/// integers in (s_{n-1}, n].
struct SeqState {
  u64 n = 1;
  u64 a = 0;
  u64 s = 0;
  u64 pi_n = 0;  // pi(n)
  u64 pi_s = 0;  // pi(s)

  u64 h() const { return n - s; }

  friend bool operator==(const SeqState&, const SeqState&) = default;
};

struct EngineConfig {
  WindowConfig window;
  u64 max_n = 1'000'000'000'000ull;  // run cap, well under u64 overflow
};

/// Resumable snapshot of the stream core (window is rebuilt by sieving).
struct ResumePoint {
  SeqState state;
  u64 last_prime = 0;
  u64 max_gap = 0;
  std::vector<GapPairRecord> gap_records;
};

/// The streaming engine for a(n+1) = pi(n+1) - pi(s_n).  Keeps two counting
/// cursors over one shared window: one at n, one at s_n.  The window span
/// stays near g(n)+2 because n - g(n) <= s_n (checked every step for n >= 9,
/// together with s_n <= n-2).
class Stream {
 public:
  explicit Stream(EngineConfig cfg = {});
  Stream(EngineConfig cfg, const ResumePoint& resume);

  const SeqState& state() const { return st_; }
  const EngineConfig& config() const { return cfg_; }
  const GapLedger& ledger() const { return ledger_; }

  /// g at the current horizon n; valid for n >= 2.
  u64 g() const { return ledger_.g_at_horizon(); }

  /// pi(n) - pi(n-1) of the last step, i.e. whether n is prime.
  bool last_step_n_prime() const { return dn_; }
  /// pi(s_n) - pi(s_{n-1}) of the last step.
  u64 last_step_ds() const { return ds_; }

  /// True once the initial state has been emitted or a step taken; used by
  /// run_to to decide whether observers see n=1.
  bool started() const { return started_; }
  void mark_started() { started_ = true; }

  void step() {
    const u64 next = st_.n + 1;
    if (next > w_.hi()) grow_window(next);
    const bool isp = cn_.advance_one();
    ledger_.observe(next, isp);
    st_.pi_n = cn_.count();
    if (st_.pi_n < st_.pi_s) throw InvariantViolation(next, "a_n >= 0");
    const u64 a = st_.pi_n - st_.pi_s;
    const u64 s_new = st_.s + a;
    cs_.advance_to(s_new);
    ds_ = cs_.count() - st_.pi_s;
    st_.pi_s = cs_.count();
    st_.n = next;
    st_.a = a;
    st_.s = s_new;
    dn_ = isp;
    started_ = true;
    if (next >= 9) {
      const u64 h = next - s_new;
      if (h < 2) throw InvariantViolation(next, "s_n <= n-2");
      if (h > ledger_.g_at_horizon()) {
        throw InvariantViolation(next, "s_n >= n-g(n)");
      }
    }
  }

  /// Debug/fault-injection access.
  PrimalityWindow& window() { return w_; }

 private:
  void grow_window(u64 need);

  EngineConfig cfg_;
  PrimalityWindow w_;
  PrimeCursor cn_;
  PrimeCursor cs_;
  GapLedger ledger_;
  SeqState st_;
  bool dn_ = false;
  u64 ds_ = 0;
  bool started_ = false;
};

/// Generalized driver f(n) = t*n + c.
struct VariantSpec {
  u64 t = 1;
  i64 c = 0;

  u64 f(u64 n) const;
  void validate() const;
};

/// Streaming engine for a_f(n) = pi(f(n)) - pi(s_f(n-1)).  For f(n) = t*n
/// the deficit t*n - s_f(n) is checked non-negative every step; no a priori
/// bound on it is known for t >= 2, so the window grows on demand and a
/// capacity breach aborts with the observed deficit.
class VariantStream {
 public:
  explicit VariantStream(VariantSpec spec, EngineConfig cfg = {});

  const SeqState& state() const { return st_; }
  const VariantSpec& spec() const { return spec_; }
  const EngineConfig& config() const { return cfg_; }

  /// f(n) - s_f(n) at the current index.
  i64 deficit() const {
    return static_cast<i64>(spec_.f(st_.n)) - static_cast<i64>(st_.s);
  }
  i64 max_deficit() const { return max_deficit_; }

  bool started() const { return started_; }
  void mark_started() { started_ = true; }

  void step();

 private:
  void grow_window(u64 need);

  VariantSpec spec_;
  EngineConfig cfg_;
  PrimalityWindow w_;
  PrimeCursor cn_;
  PrimeCursor cs_;
  SeqState st_;
  i64 max_deficit_ = 0;
  bool started_ = false;
};

namespace detail {
template <class S, class Ob>
void notify(S& stream, Ob& ob) {
  if constexpr (requires { ob.observe(stream); }) {
    ob.observe(stream);
  } else {
    ob(stream);
  }
}
}  // namespace detail

/// Drives any stream to n = limit, invoking each observer once per index in
/// order (including the initial index for a fresh stream).  Observers are
/// objects with an observe(stream) method or plain callables; they may
/// throw to abort the run.
template <class S, class... Obs>
void run_to(S& stream, u64 limit, Obs&&... obs) {
  if (limit < 1) throw std::invalid_argument("limit must be >= 1");
  if (limit > stream.config().max_n) {
    throw std::invalid_argument("limit exceeds configured max_n");
  }
  if (limit < stream.state().n) {
    throw std::invalid_argument("limit below current stream index");
  }
  try {
    if (!stream.started()) {
      (detail::notify(stream, obs), ...);
      stream.mark_started();
    }
    while (stream.state().n < limit) {
      stream.step();
      (detail::notify(stream, obs), ...);
    }
  } catch (const InvariantViolation&) {
    throw;
  } catch (const CapacityError&) {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error("run aborted at n=" +
                             std::to_string(stream.state().n) + ": " +
                             e.what());
  }
}

/// Outcome of running the recurrence from an alternate summatory seed
/// (n0, s0) alongside the reference stream.  d is the oriented difference
/// between the two summatory sequences; it is non-negative and
/// non-increasing, hence eventually constant, after which the two term
/// streams agree.
struct ShiftRun {
  u64 n0 = 0;
  u64 s0 = 0;
  u64 limit = 0;
  bool alt_leads = false;  // orientation: alternate seed was the larger
  u64 d0 = 0;
  u64 d_final = 0;
  bool merged = false;
  u64 merged_at = 0;  // meaningful iff merged
};

/// Runs the recurrence from (n0, s0) against the reference stream up to
/// `limit`.  Merge is declared once the term streams agree for g(n)+2
/// consecutive indices (reported as empirical detection, not proof).
ShiftRun run_shifted(u64 n0, u64 s0, u64 limit, EngineConfig cfg = {});

}  // namespace piseq
