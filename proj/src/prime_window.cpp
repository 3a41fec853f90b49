#include "piseq/prime_window.hpp"

#include <cassert>
#include <cmath>

namespace piseq {

namespace {

constexpr u64 kOddPattern = 0xAAAAAAAAAAAAAAAAull;  // bit i set iff i odd

u64 isqrt_u64(u64 x) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(x)));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

}  // namespace

PrimalityWindow::PrimalityWindow(WindowConfig cfg) : cfg_(cfg) {
  bits_.assign(1, 0);  // covers [0,1]; neither 0 nor 1 is prime
}

PrimalityWindow::PrimalityWindow(WindowConfig cfg, u64 lo0) : cfg_(cfg) {
  phys_lo_ = lo0 & ~u64{63};
  lo_ = lo0;
  hi_ = lo0;
  bits_.assign(1, 0);
  sieve_range(lo0, lo0);
}

void PrimalityWindow::ensure_base_primes(u64 limit) {
  if (limit <= base_limit_) return;
  u64 new_limit = std::max<u64>(limit, base_limit_ * 2);
  std::vector<bool> sieve(new_limit + 1, true);
  sieve[0] = false;
  if (new_limit >= 1) sieve[1] = false;
  for (u64 p = 2; p * p <= new_limit; ++p) {
    if (!sieve[p]) continue;
    for (u64 q = p * p; q <= new_limit; q += p) sieve[q] = false;
  }
  base_primes_.clear();
  for (u64 p = 3; p <= new_limit; p += 2) {
    if (sieve[p]) base_primes_.push_back(static_cast<u32>(p));
  }
  base_limit_ = new_limit;
}

void PrimalityWindow::sieve_range(u64 a, u64 b) {
  // Fill [a,b] with the odd-integer pattern, preserving bits outside the
  // range, then clear odd composites.  phys_lo_ is even, so bit parity
  // equals integer parity.
  const u64 ia = a - phys_lo_;
  const u64 ib = b - phys_lo_;
  for (u64 w = ia >> 6; w <= (ib >> 6); ++w) {
    const u64 wbase = w << 6;
    const u64 first = std::max(ia, wbase);
    const u64 last = std::min(ib, wbase + 63);
    u64 mask = ~u64{0} << (first - wbase);
    if (last - wbase < 63) mask &= (u64{1} << (last - wbase + 1)) - 1;
    bits_[w] = (bits_[w] & ~mask) | (kOddPattern & mask);
  }
  auto clear_bit = [&](u64 x) {
    const u64 i = x - phys_lo_;
    bits_[i >> 6] &= ~(u64{1} << (i & 63));
  };
  auto set_bit = [&](u64 x) {
    const u64 i = x - phys_lo_;
    bits_[i >> 6] |= u64{1} << (i & 63);
  };
  if (a <= 1) {
    if (a == 0) clear_bit(0);
    clear_bit(1);
  }
  if (a <= 2 && 2 <= b) set_bit(2);

  ensure_base_primes(isqrt_u64(b));
  for (u32 p : base_primes_) {
    const u64 pp = u64{p} * p;
    if (pp > b) break;
    u64 q = std::max(pp, ((a + p - 1) / p) * u64{p});
    if ((q & 1) == 0) q += p;  // odd multiples only
    for (; q <= b; q += 2 * u64{p}) clear_bit(q);
  }
}

void PrimalityWindow::extend_to(u64 m) {
  if (m < hi_) throw std::invalid_argument("extend_to: target below hi");
  if (m == hi_) return;
  if (m - lo_ + 1 > cfg_.capacity) {
    throw CapacityError("primality window capacity exceeded: need [" +
                        std::to_string(lo_) + "," + std::to_string(m) +
                        "] span " + std::to_string(m - lo_ + 1) +
                        " > capacity " + std::to_string(cfg_.capacity));
  }
  const u64 need_words = ((m - phys_lo_) >> 6) + 1;
  if (bits_.size() < need_words) bits_.resize(need_words, 0);
  for (u64 a = hi_ + 1; a <= m;) {
    const u64 b = std::min(m, a + cfg_.segment_size - 1);
    sieve_range(a, b);
    a = b + 1;
  }
  hi_ = m;
}

void PrimalityWindow::advance_low(u64 m) {
  if (m < lo_ || m > hi_) {
    throw std::invalid_argument("advance_low: target outside [lo, hi]");
  }
  for (const PrimeCursor* c : cursors_) {
    // a cursor may sit at lo-1 (count known, flag no longer needed)
    if (c->pos() + 1 < m) {
      throw std::logic_error("advance_low would orphan a cursor at pos " +
                             std::to_string(c->pos()));
    }
  }
  lo_ = m;
  if (lo_ - phys_lo_ >= cfg_.segment_size) compact();
}

void PrimalityWindow::compact() {
  const u64 drop_words = (lo_ - phys_lo_) >> 6;
  if (drop_words == 0) return;
  bits_.erase(bits_.begin(), bits_.begin() + static_cast<i64>(drop_words));
  phys_lo_ += drop_words << 6;  // stays even
}

u64 PrimalityWindow::count_in(u64 a, u64 b) const {
  if (a > b) return 0;
  assert(a >= lo_ && b <= hi_);
  const u64 ia = a - phys_lo_;
  const u64 ib = b - phys_lo_;
  const u64 wa = ia >> 6;
  const u64 wb = ib >> 6;
  if (wa == wb) {
    u64 word = bits_[wa] >> (ia & 63);
    const u64 nbits = ib - ia + 1;
    if (nbits < 64) word &= (u64{1} << nbits) - 1;
    return static_cast<u64>(std::popcount(word));
  }
  u64 total = static_cast<u64>(std::popcount(bits_[wa] >> (ia & 63)));
  for (u64 w = wa + 1; w < wb; ++w) {
    total += static_cast<u64>(std::popcount(bits_[w]));
  }
  u64 last = bits_[wb];
  const u64 keep = (ib & 63) + 1;
  if (keep < 64) last &= (u64{1} << keep) - 1;
  total += static_cast<u64>(std::popcount(last));
  return total;
}

std::string PrimalityWindow::hex_bitmap() const {
  static const char* kHex = "0123456789abcdef";
  std::string out;
  const u64 n = hi_ - lo_ + 1;
  out.reserve((n + 3) / 4);
  for (u64 i = 0; i < n; i += 4) {
    unsigned nib = 0;
    for (unsigned j = 0; j < 4 && i + j < n; ++j) {
      if (test(lo_ + i + j)) nib |= 1u << j;
    }
    out.push_back(kHex[nib]);
  }
  return out;
}

void PrimalityWindow::debug_flip(u64 x) {
  const u64 i = x - phys_lo_;
  bits_[i >> 6] ^= u64{1} << (i & 63);
}

PrimeCursor::PrimeCursor(PrimalityWindow& w, u64 pos, u64 count)
    : w_(&w), pos_(pos), count_(count) {
  if (pos_ + 1 < w.lo_ || pos_ > w.hi_) {
    throw std::invalid_argument("cursor position outside window coverage");
  }
  w.cursors_.push_back(this);
}

PrimeCursor::~PrimeCursor() {
  if (!w_) return;
  auto& v = w_->cursors_;
  v.erase(std::find(v.begin(), v.end(), this));
}

PrimeCursor::PrimeCursor(PrimeCursor&& other) noexcept
    : w_(other.w_), pos_(other.pos_), count_(other.count_) {
  auto& v = w_->cursors_;
  *std::find(v.begin(), v.end(), &other) = this;
  other.w_ = nullptr;
}

void PrimeCursor::advance_to(u64 target) {
  if (target < pos_) throw std::logic_error("cursor may only move forward");
  if (target > w_->hi()) {
    throw std::out_of_range("cursor target beyond window coverage");
  }
  count_ += w_->count_in(pos_ + 1, target);
  pos_ = target;
}

bool is_prime_u64(u64 x) {
  if (x < 2) return false;
  if (x < 4) return true;
  if (x % 2 == 0) return false;
  for (u64 d = 3; d * d <= x; d += 2) {
    if (x % d == 0) return false;
  }
  return true;
}

u64 reference_pi(u64 x) {
  u64 count = 0;
  for (u64 v = 2; v <= x; ++v) {
    if (is_prime_u64(v)) ++count;
  }
  return count;
}

GapLedger::GapLedger(u64 horizon, u64 last_prime, u64 max_gap,
                     std::vector<GapPairRecord> records)
    : horizon_(horizon),
      last_prime_(last_prime),
      max_gap_(max_gap),
      records_(std::move(records)) {}

u64 GapLedger::g_of(u64 n) const {
  if (n < 2) throw std::domain_error("g(n) requires n >= 2");
  if (n > horizon_) throw std::out_of_range("g(n) beyond ledger horizon");
  if (n >= last_prime_) return std::max(max_gap_, n - last_prime_);
  // Find the last record completed at or before n; gaps in the record list
  // are strictly increasing, so that record's gap is the interior maximum.
  auto it = std::upper_bound(
      records_.begin(), records_.end(), n,
      [](u64 v, const GapPairRecord& r) { return v < r.q; });
  const u64 envelope = (it == records_.begin()) ? 0 : std::prev(it)->gap();
  // n may lie inside the next record's gap interval [p, q); only there can
  // the trailing distance exceed the interior maximum.
  if (it != records_.end() && it->p <= n) {
    return std::max(it->prev_max, n - it->p);
  }
  return envelope;
}

u64 compute_g(u64 n) {
  if (n < 2) throw std::domain_error("g(n) requires n >= 2");
  PrimalityWindow w;
  GapLedger ledger;
  PrimeCursor cursor(w, 1, 0);
  const u64 chunk = u64{1} << 20;
  while (cursor.pos() < n) {
    const u64 target = std::min(n, cursor.pos() + chunk);
    w.extend_to(target);
    while (cursor.pos() < target) {
      const bool p = cursor.advance_one();
      ledger.observe(cursor.pos(), p);
    }
    if (cursor.pos() < n) w.advance_low(cursor.pos());
  }
  return ledger.g_at_horizon();
}

}  // namespace piseq
