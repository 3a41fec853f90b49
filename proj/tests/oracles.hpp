// Test-side reference implementations, kept deliberately naive and separate
// from the library under test.
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// flags[i] == 1 iff i is prime
inline std::vector<char> sieve_flags(u64 n) {
  std::vector<char> f(n + 1, 1);
  f[0] = 0;
  if (n >= 1) f[1] = 0;
  for (u64 p = 2; p * p <= n; ++p) {
    if (!f[p]) continue;
    for (u64 q = p * p; q <= n; q += p) f[q] = 0;
  }
  return f;
}

// pi[i] = number of primes <= i, for 0 <= i <= n
inline std::vector<u64> pi_table(u64 n) {
  auto f = sieve_flags(n);
  std::vector<u64> pi(n + 1, 0);
  for (u64 i = 1; i <= n; ++i) pi[i] = pi[i - 1] + (f[i] ? 1 : 0);
  return pi;
}

// a[n], s[n] for 1 <= n <= N (index 0 unused)
struct Seq {
  std::vector<u64> a, s;
};

inline Seq run_recurrence(u64 N) {
  auto pi = pi_table(N);
  Seq out;
  out.a.assign(N + 1, 0);
  out.s.assign(N + 1, 0);
  for (u64 n = 2; n <= N; ++n) {
    out.a[n] = pi[n] - pi[out.s[n - 1]];
    out.s[n] = out.s[n - 1] + out.a[n];
  }
  return out;
}

// Largest prime gap ending at or before n, or the trailing distance to the
// largest prime <= n, whichever is bigger.
inline u64 g_brute(u64 n) {
  auto f = sieve_flags(n);
  u64 best = 0, last = 0;
  for (u64 i = 2; i <= n; ++i) {
    if (!f[i]) continue;
    if (last >= 2) best = std::max(best, i - last);
    last = i;
  }
  return std::max(best, n - last);
}

}  // namespace oracle
