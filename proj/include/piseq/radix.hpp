#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "piseq/common.hpp"
#include "piseq/recurrence.hpp"

namespace piseq {

/// School-book big unsigned integer (little-endian 64-bit limbs).  Only what
/// exact digit extraction needs: multiply-add and divmod by a machine word,
/// subtraction, comparison, base conversion.
class BigUnsigned {
 public:
  BigUnsigned() = default;
  explicit BigUnsigned(u64 v);

  void mul_add(u64 mul, u64 add);  // *this = *this * mul + add
  void mul_pow(u64 base, u64 exp);
  u64 divmod(u64 div);  // *this /= div, returns the remainder
  void sub(const BigUnsigned& other);  // pre: *this >= other
  void add(const BigUnsigned& other);
  bool is_zero() const { return limbs_.empty(); }

  static int compare(const BigUnsigned& a, const BigUnsigned& b);
  friend bool operator==(const BigUnsigned&, const BigUnsigned&) = default;

  /// Base-b digits, most significant first, left-padded with zeros to
  /// width.  Throws std::overflow_error if the value needs more digits.
  std::vector<u32> digits(u64 base, std::size_t width) const;

  std::string to_decimal() const;

 private:
  void trim();
  std::vector<u64> limbs_;  // little endian, no high zero limbs
};

/// Exact numerator of sum_{n<=N} a_n * b^(N-n); the partial sum of
/// A(b) = sum a_n b^(-n) over denominator b^N.
struct PartialSum {
  BigUnsigned num;
  u64 base = 0;
  u64 horizon = 0;  // N
  u64 a_last = 0;   // a_N, input to the tail bound
};

PartialSum accumulate(u64 base, u64 N, EngineConfig cfg = {});
PartialSum accumulate_terms(u64 base, const std::vector<u64>& terms);

/// Upper bound num / (den0 * base^N) on the tail sum_{n>N} a_n b^(-n),
/// from a_{N+m} <= a_N + m: num = a_N*(b-1) + b, den0 = (b-1)^2.
struct TailBound {
  u64 num = 0;
  u64 den0 = 0;
  u64 base = 0;
  u64 N = 0;
};

TailBound tail_bound(u64 aN, u64 base, u64 N);

/// Decimal scientific string of the bound, rounded up (stays an upper
/// bound).
std::string tail_to_string(const TailBound& t);

struct DigitCert {
  u64 base = 0;
  u64 horizon = 0;
  std::vector<u32> digits;  // first N fractional digits of the partial sum
  u64 certified = 0;        // leading digits guaranteed final
};

/// Certify from raw parts: lower = num/b^N, upper = lower + t_num/(den0 b^N).
/// A digit is certified iff lower and upper agree on it and every position
/// before it.
DigitCert certify_from(const BigUnsigned& num, u64 t_num, u64 den0, u64 base,
                       u64 N);
DigitCert certify_digits(const PartialSum& lower, const TailBound& tail);

/// Smallest (period <= max_period, then preperiod) consistent with the
/// digits, requiring at least two full periods of evidence after the
/// preperiod and a preperiod no longer than half the digits; absent
/// otherwise.
std::optional<std::pair<u64, u64>> period_probe(const std::vector<u32>& digits,
                                                u64 max_period);

}  // namespace piseq
