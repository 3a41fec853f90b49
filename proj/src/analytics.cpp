#include "piseq/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "piseq/prime_window.hpp"

namespace piseq {

Analytics::Analytics() : dense_(kDense, 0) {
  bar_ = std::numeric_limits<double>::infinity();
}

Analytics::Analytics(const AnalyticsState& restored)
    : st_(restored), next_n_(restored.next_n), dense_(kDense, 0) {
  for (auto it = st_.census.begin(); it != st_.census.end();) {
    if (it->first < kDense) {
      dense_[it->first] = it->second;
      it = st_.census.erase(it);
    } else {
      ++it;
    }
  }
  next_snap_ = 10;
  while (next_snap_ < next_n_) next_snap_ *= 10;
  bar_ = std::numeric_limits<double>::infinity();
  valid_from_ = next_n_;
}

void Analytics::bump(u64 k) {
  if (k < kDense) {
    ++dense_[k];
  } else {
    ++st_.census[k];
  }
}

void Analytics::sync_census() const {
  for (u64 k = 0; k < kDense; ++k) {
    if (dense_[k] != 0) st_.census[k] = dense_[k];
  }
}

const AnalyticsState& Analytics::state() const {
  sync_census();
  st_.next_n = next_n_;
  return st_;
}

void Analytics::observe(const Stream& stream) {
  const SeqState& s = stream.state();
  if (s.n != next_n_) {
    throw std::logic_error("analytics fold fed out of order: expected n=" +
                           std::to_string(next_n_) + ", got " +
                           std::to_string(s.n));
  }
  ++next_n_;
  const u64 n = s.n;
  const u64 a = s.a;
  const u64 h = s.n - s.s;

  bump(a);
  st_.sum_sq += a * a;

  const u64 count_now = a < kDense ? dense_[a] : st_.census[a];
  if (count_now == 1) {
    FirstHit hit;
    hit.k = a;
    hit.n = n;
    hit.index_prime = is_prime_u64(n);
    hit.twin = hit.index_prime && n >= 4 && is_prime_u64(n - 2);
    auto pos = std::lower_bound(
        st_.firsts.begin(), st_.firsts.end(), a,
        [](const FirstHit& f, u64 k) { return f.k < k; });
    st_.firsts.insert(pos, hit);
    // a new value at its first (hence smallest-g) index is the only
    // candidate for the step-ratio record
    if (n >= 3) {
      const u64 g = stream.ledger().g_of(n);
      if (g >= 1) {
        const double num = static_cast<double>(a) * static_cast<double>(a) *
                           std::log(static_cast<double>(std::max<u64>(a, 2)));
        const double ratio = num / static_cast<double>(g);
        if (!st_.step_ratio.set || ratio > st_.step_ratio.value) {
          st_.step_ratio = {n, ratio, true};
          st_.step_ratio_k = a;
        }
      }
    }
  }

  if (st_.current_run.len > 0 && st_.current_run.k == a) {
    ++st_.current_run.len;
  } else {
    if (st_.current_run.len > 0) {
      auto& best = st_.best_runs[st_.current_run.k];
      if (st_.current_run.len > best.len) best = st_.current_run;
    }
    st_.current_run = {a, n, 1};
  }

  if (h > st_.max_h.h) st_.max_h = {n, h};
  if (n >= 9) {
    if (st_.min_h.h == 0 || h < st_.min_h.h) st_.min_h = {n, h};
    if (h == 2) {
      ++st_.h2_count;
      st_.h2_last = n;
    }
    if (!st_.min_ratio.set || static_cast<double>(h) < bar_ || n >= bar_n_) {
      const double r =
          static_cast<double>(h) / std::log(static_cast<double>(n));
      if (!st_.min_ratio.set || r < st_.min_ratio.value) {
        st_.min_ratio = {n, r, true};
      }
      bar_n_ = 2 * n;
      bar_ = st_.min_ratio.value * std::log(static_cast<double>(bar_n_));
    }
  }

  const bool isp = n >= 2 && stream.last_step_n_prime();
  if (isp && stream.ledger().record_completed()) {
    const GapPairRecord& rec = stream.ledger().records().back();
    const bool checked = rec.p >= valid_from_;
    if (checked && 2 * h_seg_ < rec.gap()) {
      throw InvariantViolation(n, "2*max h over [p,q) >= q-p");
    }
    st_.gap_pairs.push_back({rec.p, rec.q, h_seg_, checked});
  }
  if (isp) {
    h_seg_ = h;
  } else {
    h_seg_ = std::max(h_seg_, h);
  }

  if (n == next_snap_) {
    snapshot(stream);
    next_snap_ *= 10;
  }
}

void Analytics::snapshot(const Stream& stream) {
  const SeqState& s = stream.state();
  sync_census();
  SnapshotRow row;
  row.x = s.n;
  row.counts = st_.census;
  row.s = s.s;
  row.h = s.n - s.s;
  row.max_h = st_.max_h.h;
  row.sum_sq = st_.sum_sq;

  u64 total = 0, weighted = 0, penalty = 0, n0 = 0, n1 = 0;
  for (const auto& [k, c] : row.counts) {
    total += c;
    weighted += k * c;
    if (k >= 2) penalty += (k - 1) * c;
    if (k == 0) n0 = c;
    if (k == 1) n1 = c;
  }
  if (total != row.x) throw InvariantViolation(row.x, "sum N_k = x");
  if (weighted != row.s) throw InvariantViolation(row.x, "sum k*N_k = s_x");
  if (row.x >= 3) {
    if (n0 <= penalty || n0 - penalty != row.x - row.s) {
      throw InvariantViolation(row.x, "N_0 - sum (k-1)N_k = x - s_x > 0");
    }
  }
  if (3 * std::max(n0, n1) <= row.x) {
    throw InvariantViolation(row.x, "max(N_0, N_1) > x/3");
  }
  st_.snapshots.push_back(std::move(row));
}

std::array<u64, 6> Analytics::census_row(u64 x) const {
  const std::map<u64, u64>* counts = nullptr;
  if (x == horizon()) {
    sync_census();
    counts = &st_.census;
  } else {
    for (const auto& row : st_.snapshots) {
      if (row.x == x) {
        counts = &row.counts;
        break;
      }
    }
  }
  if (!counts) {
    throw std::out_of_range("no census at x=" + std::to_string(x) +
                            " (not a snapshot or beyond horizon)");
  }
  std::array<u64, 6> out{};
  for (u64 k = 0; k < 6; ++k) {
    auto it = counts->find(k);
    out[k] = it == counts->end() ? 0 : it->second;
  }
  return out;
}

std::optional<u64> Analytics::first_occurrence(u64 k) const {
  const FirstHit* hit = first_hit(k);
  if (!hit) return std::nullopt;
  return hit->n;
}

const FirstHit* Analytics::first_hit(u64 k) const {
  auto pos = std::lower_bound(
      st_.firsts.begin(), st_.firsts.end(), k,
      [](const FirstHit& f, u64 v) { return f.k < v; });
  if (pos == st_.firsts.end() || pos->k != k) return nullptr;
  return &*pos;
}

std::optional<GapPairObs> Analytics::gap_pair(u64 p) const {
  for (const auto& obs : st_.gap_pairs) {
    if (obs.p == p) return obs;
  }
  return std::nullopt;
}

u64 StrictChecks::pi_small(u64 x) {
  while (pi_table_.size() <= x) {
    const u64 v = pi_table_.size();
    pi_table_.push_back(pi_table_.back() + (is_prime_u64(v) ? 1 : 0));
  }
  return pi_table_[x];
}

void StrictChecks::observe(const Stream& stream) {
  static constexpr u64 kPrefix[9] = {0, 0, 1, 2, 0, 1, 1, 1, 1};  // a_1..a_8
  const SeqState& s = stream.state();
  const u64 n = s.n;
  if (n <= 8 && s.a != kPrefix[n]) {
    throw InvariantViolation(n, "a_n matches the n < 9 prefix");
  }
  if (have_prev_) {
    if (s.a > prev_a_ + 1) {
      throw InvariantViolation(n, "a_{n+1} <= a_n + 1");
    }
    const u64 drop = std::max<u64>(1, 2 * pi_small(prev_a_));
    if (s.a + drop < prev_a_) {
      throw InvariantViolation(n, "a_{n+1} >= a_n - max(1, 2 pi(a_n))");
    }
    const i64 lhs = static_cast<i64>(s.a) - static_cast<i64>(prev_a_);
    const i64 rhs = (stream.last_step_n_prime() ? 1 : 0) -
                    static_cast<i64>(prev_ds_);
    if (lhs != rhs) {
      throw InvariantViolation(
          n, "a_{n+1} - a_n = (pi(n+1)-pi(n)) - (pi(s_n)-pi(s_{n-1}))");
    }
    ++steps_;
  }
  if (max_a_.n == 0 || s.a > max_a_.h) max_a_ = {n, s.a};
  prev_a_ = s.a;
  prev_ds_ = stream.last_step_ds();
  have_prev_ = true;
}

std::vector<ApHit> ap_search(u64 k, u64 dmax, u64 limit, ApConfig cfg) {
  if (k < 1 || dmax < 1) {
    throw std::invalid_argument("ap_search requires k >= 1 and dmax >= 1");
  }
  const u64 need = k * dmax + 1;
  if (need > cfg.retention) {
    throw CapacityError("ap_search ring needs " + std::to_string(need) +
                        " slots, retention is " +
                        std::to_string(cfg.retention));
  }
  std::vector<u32> ring(need, 0);
  std::vector<ApHit> hits;
  Stream st(cfg.engine);
  ring[1 % need] = 0;  // a_1
  while (st.state().n < limit) {
    st.step();
    const u64 n = st.state().n;
    const u64 a = st.state().a;
    ring[n % need] = static_cast<u32>(a);
    if (a != k) continue;  // pattern ends with value k
    for (u64 d = 1; d <= dmax; ++d) {
      if (k * d >= n) break;
      bool ok = true;
      for (u64 j = 1; j <= k; ++j) {
        if (ring[(n - j * d) % need] != k - j) {
          ok = false;
          break;
        }
      }
      if (ok) hits.push_back({n - k * d, d});
    }
  }
  return hits;
}

}  // namespace piseq
