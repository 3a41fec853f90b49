#include <doctest.h>

#include <vector>

#include "oracles.hpp"
#include "piseq/prime_window.hpp"

using namespace piseq;

TEST_CASE("extend_to marks primes exactly") {
  PrimalityWindow w;
  w.extend_to(10);
  CHECK(w.lo() == 0);
  CHECK(w.hi() == 10);
  w.extend_to(20);
  std::vector<u64> got;
  for (u64 x = 11; x <= 20; ++x) {
    if (w.test(x)) got.push_back(x);
  }
  CHECK(got == std::vector<u64>{11, 13, 17, 19});
}

TEST_CASE("extend_to current hi is a no-op") {
  PrimalityWindow w;
  w.extend_to(10);
  w.extend_to(10);
  CHECK(w.hi() == 10);
  CHECK_THROWS_AS(w.extend_to(5), std::invalid_argument);
}

TEST_CASE("flags agree with an independent sieve across a large extension") {
  PrimalityWindow w;
  const u64 n1 = 100'000, n2 = 110'000;
  w.extend_to(n1);
  w.extend_to(n2);
  auto f = oracle::sieve_flags(n2);
  for (u64 x = 0; x <= n2; ++x) {
    if (w.test(x) != static_cast<bool>(f[x])) {
      CAPTURE(x);
      CHECK(w.test(x) == static_cast<bool>(f[x]));
    }
  }
}

TEST_CASE("advance_low preserves surviving flags") {
  PrimalityWindow w;
  w.extend_to(100);
  std::vector<bool> before;
  for (u64 x = 50; x <= 100; ++x) before.push_back(w.test(x));
  w.advance_low(50);
  CHECK(w.lo() == 50);
  CHECK(w.hi() == 100);
  for (u64 x = 50; x <= 100; ++x) CHECK(w.test(x) == before[x - 50]);
  w.advance_low(50);  // no-op at lo
  CHECK(w.lo() == 50);
}

TEST_CASE("advance_low refuses to orphan a cursor") {
  PrimalityWindow w;
  w.extend_to(100);
  PrimeCursor c(w, 40, reference_pi(40));
  CHECK_THROWS_AS(w.advance_low(50), std::logic_error);
  // pos = lo-1 is allowed: count is known, the flag is no longer needed
  w.advance_low(41);
  CHECK(w.lo() == 41);
}

TEST_CASE("compaction keeps flags exact") {
  WindowConfig cfg;
  cfg.segment_size = 256;
  cfg.capacity = 1 << 16;
  PrimalityWindow w(cfg);
  w.extend_to(5000);
  w.advance_low(3000);  // crosses several segments, triggers compaction
  auto f = oracle::sieve_flags(8000);
  for (u64 x = 3000; x <= 5000; ++x) CHECK(w.test(x) == static_cast<bool>(f[x]));
  w.extend_to(8000);
  for (u64 x = 3000; x <= 8000; ++x) CHECK(w.test(x) == static_cast<bool>(f[x]));
}

TEST_CASE("capacity breach raises CapacityError") {
  WindowConfig cfg;
  cfg.segment_size = 1 << 12;
  cfg.capacity = 1 << 14;
  PrimalityWindow w(cfg);
  CHECK_THROWS_AS(w.extend_to(cfg.capacity + 10), CapacityError);
}

TEST_CASE("window can start at an offset") {
  WindowConfig cfg;
  PrimalityWindow w(cfg, 997);
  CHECK(w.lo() == 997);
  w.extend_to(1100);
  auto f = oracle::sieve_flags(1100);
  for (u64 x = 997; x <= 1100; ++x) CHECK(w.test(x) == static_cast<bool>(f[x]));
}

TEST_CASE("cursor counts are exact pi values") {
  PrimalityWindow w;
  w.extend_to(200);
  PrimeCursor c1(w, 1, 0);
  c1.advance_to(10);
  CHECK(c1.count() == 4);
  PrimeCursor c2(w, 0, 0);
  c2.advance_to(1);
  CHECK(c2.count() == 0);
  c2.advance_to(100);
  CHECK(c2.count() == 25);
  CHECK_THROWS_AS(c2.advance_to(50), std::logic_error);
  CHECK_THROWS_AS(c2.advance_to(1000), std::out_of_range);
}

TEST_CASE("cursor advancement is path independent") {
  PrimalityWindow w;
  w.extend_to(10'000);
  for (u64 t1 : {7ull, 100ull, 4096ull, 9999ull}) {
    PrimeCursor direct(w, 1, 0);
    direct.advance_to(10'000);
    PrimeCursor split(w, 1, 0);
    split.advance_to(t1);
    split.advance_to(10'000);
    CHECK(direct.count() == split.count());
    CHECK(direct.count() == 1229);
  }
}

TEST_CASE("unit advances change the count by at most one") {
  PrimalityWindow w;
  w.extend_to(2000);
  PrimeCursor c(w, 0, 0);
  u64 prev = 0;
  while (c.pos() < 2000) {
    const bool p = c.advance_one();
    CHECK(c.count() - prev == (p ? 1 : 0));
    prev = c.count();
  }
  CHECK(c.count() == 303);
}

TEST_CASE("reference_pi matches enumeration anchors") {
  CHECK(reference_pi(0) == 0);
  CHECK(reference_pi(1) == 0);
  CHECK(reference_pi(2) == 1);
  CHECK(reference_pi(1000) == 168);
}

TEST_CASE("gap ledger records maximal gap pairs") {
  GapLedger ledger;
  auto f = oracle::sieve_flags(12);
  for (u64 n = 2; n <= 12; ++n) ledger.observe(n, f[n]);
  REQUIRE(ledger.records().size() == 3);
  CHECK(ledger.records()[0].p == 2);
  CHECK(ledger.records()[0].q == 3);
  CHECK(ledger.records()[0].prev_max == 0);
  CHECK(ledger.records()[1].p == 3);
  CHECK(ledger.records()[1].q == 5);
  CHECK(ledger.records()[1].prev_max == 1);
  CHECK(ledger.records()[2].p == 7);
  CHECK(ledger.records()[2].q == 11);
  CHECK(ledger.records()[2].prev_max == 2);
  CHECK(ledger.max_gap() == 4);
  CHECK(ledger.last_prime() == 11);
}

TEST_CASE("g anchors") {
  CHECK(compute_g(2) == 0);
  CHECK(compute_g(10) == 3);
  CHECK(compute_g(30) == 6);
  CHECK_THROWS_AS(compute_g(1), std::domain_error);
}

TEST_CASE("g matches brute force everywhere up to 1e5") {
  const u64 N = 100'000;
  // incremental brute-force evaluation alongside the ledger
  auto f = oracle::sieve_flags(N);
  GapLedger ledger;
  std::vector<u64> brute(N + 1, 0);
  u64 best = 0, last = 0;
  for (u64 n = 2; n <= N; ++n) {
    if (f[n]) {
      if (last >= 2) best = std::max(best, n - last);
      last = n;
    }
    brute[n] = std::max(best, n - last);
    ledger.observe(n, f[n]);
  }
  CHECK(ledger.g_at_horizon() == brute[N]);
  for (u64 n = 2; n <= N; ++n) {
    if (ledger.g_of(n) != brute[n]) {
      CAPTURE(n);
      CHECK(ledger.g_of(n) == brute[n]);
    }
  }
  CHECK_THROWS_AS(ledger.g_of(1), std::domain_error);
  CHECK_THROWS_AS(ledger.g_of(N + 1), std::out_of_range);

  SUBCASE("g is non-decreasing with unit steps") {
    for (u64 n = 3; n <= N; ++n) {
      const u64 d = brute[n] - brute[n - 1];
      if (d > 1) {
        CAPTURE(n);
        CHECK(d <= 1);
      }
    }
  }
  SUBCASE("every (n-g(n)-1, n] block contains a prime") {
    auto pi = oracle::pi_table(N);
    for (u64 n = 2; n <= N; ++n) {
      const u64 lo = n - brute[n] - 1;
      if (pi[n] - pi[lo] < 1) {
        CAPTURE(n);
        CHECK(pi[n] - pi[lo] >= 1);
      }
    }
  }
}

TEST_CASE("hex bitmap is least-significant-bit first") {
  PrimalityWindow w;
  w.extend_to(15);
  // flags 0..15: primes 2,3,5,7,11,13
  CHECK(w.hex_bitmap() == "ca82");
}

TEST_CASE("debug flag flip changes primality of one integer") {
  PrimalityWindow w;
  w.extend_to(20);
  CHECK_FALSE(w.test(12));
  w.debug_flip(12);
  CHECK(w.test(12));
  PrimeCursor c(w, 0, 0);
  c.advance_to(20);
  CHECK(c.count() == 9);  // 8 real primes plus the injected 12
}
