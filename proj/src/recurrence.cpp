#include "piseq/recurrence.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace piseq {

Stream::Stream(EngineConfig cfg)
    : cfg_(cfg), w_(cfg.window), cn_(w_, 1, 0), cs_(w_, 0, 0) {}

static PrimalityWindow make_resume_window(const WindowConfig& wc,
                                          const SeqState& st) {
  PrimalityWindow w(wc, st.s);
  w.extend_to(st.n + 1);
  return w;
}

Stream::Stream(EngineConfig cfg, const ResumePoint& r)
    : cfg_(cfg),
      w_(make_resume_window(cfg.window, r.state)),
      cn_(w_, r.state.n, r.state.pi_n),
      cs_(w_, r.state.s, r.state.pi_s),
      ledger_(r.state.n, r.last_prime, r.max_gap, r.gap_records),
      st_(r.state),
      started_(true) {
  dn_ = w_.test(st_.n);
}

void Stream::grow_window(u64 need) {
  if (st_.s > w_.lo()) w_.advance_low(st_.s);
  const u64 cap_end = w_.lo() + cfg_.window.capacity - 1;
  u64 target = need + cfg_.window.segment_size - 1;
  if (target > cap_end) target = std::max(need, cap_end);
  w_.extend_to(target);
}

u64 VariantSpec::f(u64 n) const {
  return static_cast<u64>(static_cast<i64>(t * n) + c);
}

void VariantSpec::validate() const {
  if (t < 1) throw std::invalid_argument("variant slope t must be >= 1");
  if (static_cast<i64>(t) + c < 0) {
    throw std::invalid_argument("variant requires f(1) = t + c >= 0");
  }
}

static PrimalityWindow make_variant_window(VariantSpec spec,
                                           const WindowConfig& wc) {
  spec.validate();
  PrimalityWindow w(wc);
  w.extend_to(std::max<u64>(spec.f(1), 1) + 1);
  return w;
}

VariantStream::VariantStream(VariantSpec spec, EngineConfig cfg)
    : spec_(spec),
      cfg_(cfg),
      w_(make_variant_window(spec, cfg.window)),
      cn_(w_, spec.f(1), w_.count_in(0, spec.f(1))),
      cs_(w_, 0, 0) {
  st_.n = 1;
  st_.pi_n = cn_.count();
  st_.a = st_.pi_n;  // a_f(1) = pi(f(1)), empty-sum seed s_0 = 0
  st_.s = st_.a;
  cs_.advance_to(st_.s);
  st_.pi_s = cs_.count();
  max_deficit_ = deficit();
  if (spec_.c == 0 && max_deficit_ < 0) {
    throw InvariantViolation(1, "t*n >= s_f(n)");
  }
}

void VariantStream::step() {
  const u64 next = st_.n + 1;
  const u64 fn = spec_.f(next);
  if (fn > w_.hi()) grow_window(fn);
  cn_.advance_to(fn);
  st_.pi_n = cn_.count();
  if (st_.pi_n < st_.pi_s) throw InvariantViolation(next, "a_f(n) >= 0");
  const u64 a = st_.pi_n - st_.pi_s;
  const u64 s_new = st_.s + a;
  cs_.advance_to(s_new);
  st_.pi_s = cs_.count();
  st_.n = next;
  st_.a = a;
  st_.s = s_new;
  started_ = true;
  const i64 d = static_cast<i64>(fn) - static_cast<i64>(s_new);
  if (d > max_deficit_) max_deficit_ = d;
  if (spec_.c == 0 && d < 0) throw InvariantViolation(next, "t*n >= s_f(n)");
}

void VariantStream::grow_window(u64 need) {
  if (st_.s > w_.lo()) w_.advance_low(st_.s);
  const u64 cap_end = w_.lo() + cfg_.window.capacity - 1;
  u64 target = need + cfg_.window.segment_size - 1;
  if (target > cap_end) target = std::max(need, cap_end);
  try {
    w_.extend_to(target);
  } catch (const CapacityError&) {
    throw CapacityError("window capacity exhausted for variant t=" +
                        std::to_string(spec_.t) +
                        " c=" + std::to_string(spec_.c) +
                        " at n=" + std::to_string(st_.n) +
                        ", deficit f(n)-s=" + std::to_string(deficit()));
  }
}

namespace {

/// Recurrence run from an arbitrary summatory seed (n0, s0).  The term can
/// be negative while s > n, and s can retreat, so the s side uses raw
/// window counting instead of a forward-only cursor.  s never drops below
/// min(s_prev, n+1), so flags at or above min(n, s) always suffice.
class SeededStream {
 public:
  SeededStream(u64 n0, u64 s0, const EngineConfig& cfg)
      : cfg_(cfg), w_(cfg.window), n_(n0), s_(s0) {
    const u64 lo_keep = std::min(n0, s0);
    const u64 hi_need = std::max(n0 + 1, s0);
    u64 cnt = 0;
    u64 pos = 0;
    while (pos < lo_keep) {
      const u64 t = std::min(lo_keep, pos + cfg_.window.segment_size);
      w_.extend_to(t);
      cnt += w_.count_in(pos == 0 ? 0 : pos + 1, t);
      pos = t;
      w_.advance_low(pos);
    }
    w_.extend_to(hi_need);
    pi_n_ = cnt + (n0 > lo_keep ? w_.count_in(lo_keep + 1, n0) : 0);
    pi_s_ = cnt + (s0 > lo_keep ? w_.count_in(lo_keep + 1, s0) : 0);
  }

  u64 n() const { return n_; }
  u64 s() const { return s_; }
  i64 a() const { return a_; }

  void step() {
    const u64 next = n_ + 1;
    if (next > w_.hi()) grow(next);
    pi_n_ += w_.test(next) ? 1 : 0;
    a_ = static_cast<i64>(pi_n_) - static_cast<i64>(pi_s_);
    const i64 s_next = static_cast<i64>(s_) + a_;
    if (s_next < 0) throw InvariantViolation(next, "s stays non-negative");
    const u64 s_new = static_cast<u64>(s_next);
    if (s_new > s_) {
      pi_s_ += w_.count_in(s_ + 1, s_new);
    } else if (s_new < s_) {
      pi_s_ -= w_.count_in(s_new + 1, s_);
    }
    n_ = next;
    s_ = s_new;
  }

 private:
  void grow(u64 need) {
    const u64 keep = std::min(n_, s_);
    if (keep > w_.lo()) w_.advance_low(keep);
    const u64 cap_end = w_.lo() + cfg_.window.capacity - 1;
    u64 target = need + cfg_.window.segment_size - 1;
    if (target > cap_end) target = std::max(need, cap_end);
    w_.extend_to(target);
  }

  EngineConfig cfg_;
  PrimalityWindow w_;
  u64 n_;
  u64 s_;
  u64 pi_n_ = 0;
  u64 pi_s_ = 0;
  i64 a_ = 0;
};

}  // namespace

ShiftRun run_shifted(u64 n0, u64 s0, u64 limit, EngineConfig cfg) {
  if (n0 < 1) throw std::invalid_argument("seed index n0 must be >= 1");
  if (limit < n0) throw std::invalid_argument("limit below seed index");
  if (limit > cfg.max_n) {
    throw std::invalid_argument("limit exceeds configured max_n");
  }

  Stream ref(cfg);
  while (ref.state().n < n0) ref.step();
  SeededStream alt(n0, s0, cfg);

  ShiftRun out;
  out.n0 = n0;
  out.s0 = s0;
  out.limit = limit;
  out.alt_leads = s0 > ref.state().s;
  out.d0 = out.alt_leads ? s0 - ref.state().s : ref.state().s - s0;

  u64 d = out.d0;
  u64 last_change = n0;
  bool any_change = false;
  for (u64 next = n0 + 1; next <= limit; ++next) {
    ref.step();
    alt.step();
    const i64 d_signed =
        out.alt_leads
            ? static_cast<i64>(alt.s()) - static_cast<i64>(ref.state().s)
            : static_cast<i64>(ref.state().s) - static_cast<i64>(alt.s());
    if (d_signed < 0 || static_cast<u64>(d_signed) > d) {
      throw InvariantViolation(
          next, "summatory difference is non-negative and non-increasing");
    }
    const u64 d_new = static_cast<u64>(d_signed);
    if (d_new != d) {
      last_change = next;
      any_change = true;
      out.merged = false;
    }
    d = d_new;
    if (!out.merged && next - last_change >= ref.g() + 2) {
      out.merged = true;
      // first index from which d holds its final value
      out.merged_at = any_change ? last_change : n0;
    }
  }
  out.d_final = d;
  return out;
}

}  // namespace piseq
