#include "piseq/radix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace piseq {

BigUnsigned::BigUnsigned(u64 v) {
  if (v != 0) limbs_.push_back(v);
}

void BigUnsigned::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

void BigUnsigned::mul_add(u64 mul, u64 add) {
  unsigned __int128 carry = add;
  for (u64& limb : limbs_) {
    const unsigned __int128 cur =
        static_cast<unsigned __int128>(limb) * mul + carry;
    limb = static_cast<u64>(cur);
    carry = cur >> 64;
  }
  while (carry != 0) {
    limbs_.push_back(static_cast<u64>(carry));
    carry >>= 64;
  }
  trim();
}

void BigUnsigned::mul_pow(u64 base, u64 exp) {
  for (u64 i = 0; i < exp; ++i) mul_add(base, 0);
}

u64 BigUnsigned::divmod(u64 div) {
  unsigned __int128 rem = 0;
  for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
    const unsigned __int128 cur = (rem << 64) | *it;
    *it = static_cast<u64>(cur / div);
    rem = cur % div;
  }
  trim();
  return static_cast<u64>(rem);
}

void BigUnsigned::sub(const BigUnsigned& other) {
  if (compare(*this, other) < 0) {
    throw std::underflow_error("BigUnsigned::sub would go negative");
  }
  u64 borrow = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const u64 take = (i < other.limbs_.size() ? other.limbs_[i] : 0);
    const u64 before = limbs_[i];
    limbs_[i] = before - take - borrow;
    borrow = (before < take + borrow || (take == ~u64{0} && borrow)) ? 1 : 0;
    // the only case take + borrow overflows is take = 2^64-1, borrow = 1
  }
  trim();
}

void BigUnsigned::add(const BigUnsigned& other) {
  if (limbs_.size() < other.limbs_.size()) {
    limbs_.resize(other.limbs_.size(), 0);
  }
  unsigned __int128 carry = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const unsigned __int128 cur =
        static_cast<unsigned __int128>(limbs_[i]) +
        (i < other.limbs_.size() ? other.limbs_[i] : 0) + carry;
    limbs_[i] = static_cast<u64>(cur);
    carry = cur >> 64;
  }
  if (carry != 0) limbs_.push_back(static_cast<u64>(carry));
}

int BigUnsigned::compare(const BigUnsigned& a, const BigUnsigned& b) {
  if (a.limbs_.size() != b.limbs_.size()) {
    return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
  }
  for (std::size_t i = a.limbs_.size(); i-- > 0;) {
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
  }
  return 0;
}

std::vector<u32> BigUnsigned::digits(u64 base, std::size_t width) const {
  BigUnsigned v = *this;
  std::vector<u32> out;
  while (!v.is_zero()) {
    out.push_back(static_cast<u32>(v.divmod(base)));
    if (out.size() > width) {
      throw std::overflow_error("value does not fit in " +
                                std::to_string(width) + " digits");
    }
  }
  while (out.size() < width) out.push_back(0);
  std::reverse(out.begin(), out.end());
  return out;
}

std::string BigUnsigned::to_decimal() const {
  if (is_zero()) return "0";
  BigUnsigned v = *this;
  std::string out;
  while (!v.is_zero()) out.push_back(static_cast<char>('0' + v.divmod(10)));
  std::reverse(out.begin(), out.end());
  return out;
}

PartialSum accumulate(u64 base, u64 N, EngineConfig cfg) {
  if (base < 2) throw std::invalid_argument("base must be >= 2");
  if (N < 1) throw std::invalid_argument("horizon must be >= 1");
  PartialSum out;
  out.base = base;
  out.horizon = N;
  Stream st(cfg);
  out.num.mul_add(base, st.state().a);
  while (st.state().n < N) {
    st.step();
    out.num.mul_add(base, st.state().a);
  }
  out.a_last = st.state().a;
  return out;
}

PartialSum accumulate_terms(u64 base, const std::vector<u64>& terms) {
  if (base < 2) throw std::invalid_argument("base must be >= 2");
  if (terms.empty()) throw std::invalid_argument("horizon must be >= 1");
  PartialSum out;
  out.base = base;
  out.horizon = terms.size();
  for (u64 a : terms) out.num.mul_add(base, a);
  out.a_last = terms.back();
  return out;
}

TailBound tail_bound(u64 aN, u64 base, u64 N) {
  if (base < 2) throw std::invalid_argument("base must be >= 2");
  TailBound t;
  t.num = aN * (base - 1) + base;
  t.den0 = (base - 1) * (base - 1);
  t.base = base;
  t.N = N;
  return t;
}

std::string tail_to_string(const TailBound& t) {
  // num/den0 * base^-N as a decimal, mantissa rounded up
  const long double l10 = std::log10(static_cast<long double>(t.num)) -
                          std::log10(static_cast<long double>(t.den0)) -
                          static_cast<long double>(t.N) *
                              std::log10(static_cast<long double>(t.base));
  long long e10 = static_cast<long long>(std::floor(l10));
  long double mant = std::pow(10.0L, l10 - static_cast<long double>(e10));
  mant = std::ceil(mant * 100.0L) / 100.0L;
  if (mant >= 10.0L) {
    mant /= 10.0L;
    ++e10;
  }
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2Lfe%lld", mant, e10);
  return buf;
}

DigitCert certify_from(const BigUnsigned& num, u64 t_num, u64 den0, u64 base,
                       u64 N) {
  DigitCert cert;
  cert.base = base;
  cert.horizon = N;
  cert.digits = num.digits(base, N);
  // first N digits of the upper end are the digits of num + floor(t/den0)
  BigUnsigned up = num;
  up.mul_add(1, t_num / den0);
  std::vector<u32> updig;
  try {
    updig = up.digits(base, N);
  } catch (const std::overflow_error&) {
    cert.certified = 0;  // upper end reaches 1; nothing is certain
    return cert;
  }
  u64 m = 0;
  while (m < N && cert.digits[m] == updig[m]) ++m;
  cert.certified = m;
  return cert;
}

DigitCert certify_digits(const PartialSum& lower, const TailBound& tail) {
  if (lower.base != tail.base || lower.horizon != tail.N) {
    throw std::invalid_argument("partial sum and tail bound disagree");
  }
  return certify_from(lower.num, tail.num, tail.den0, lower.base,
                      lower.horizon);
}

std::optional<std::pair<u64, u64>> period_probe(const std::vector<u32>& d,
                                                u64 max_period) {
  const u64 len = d.size();
  for (u64 p = 1; p <= max_period; ++p) {
    if (2 * p > len) break;
    u64 r = 0;
    for (u64 i = len - p; i-- > 0;) {
      if (d[i] != d[i + p]) {
        r = i + 1;
        break;
      }
    }
    if (r + 2 * p <= len && r <= len / 2) return std::make_pair(r, p);
  }
  return std::nullopt;
}

}  // namespace piseq
