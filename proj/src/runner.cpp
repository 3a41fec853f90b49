#include "piseq/runner.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace piseq {

namespace {

using json = nlohmann::ordered_json;

bool is_pow10(u64 n) {
  for (u64 p = 1;; p *= 10) {
    if (p == n) return true;
    if (p > n / 10) return false;
  }
}

std::string fmt_double(double v, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

bool checkpoint_due(u64 n, u64 limit, const SaveSpec& save) {
  if (save.path.empty()) return false;
  if (n == limit) return true;
  if (save.every && n % save.every == 0) return true;
  return is_pow10(n);
}

void emit_rows(Stream& st, Analytics& an, u64 limit, RowFormat fmt,
               std::ostream& out, const SaveSpec& save) {
  RowWriter w(out, fmt);
  run_to(st, limit, [&](const Stream& s) {
    w.observe(s);
    an.observe(s);
    if (checkpoint_due(s.state().n, limit, save)) {
      save_checkpoint(make_checkpoint(s, an), save.path);
    }
  });
}

Analytics run_census(u64 limit) {
  Stream st;
  Analytics an;
  run_to(st, limit, an);
  return an;
}

FirstSearch find_firsts(u64 max_k, u64 limit) {
  FirstSearch out;
  Stream st;
  Analytics an;
  u64 next_unfound = 0;
  auto scan = [&](const Stream& s) {
    an.observe(s);
    while (next_unfound <= max_k && an.first_hit(next_unfound)) {
      ++next_unfound;
    }
  };
  scan(st);
  st.mark_started();
  while (next_unfound <= max_k && st.state().n < limit) {
    st.step();
    scan(st);
  }
  out.scanned = st.state().n;
  out.complete = next_unfound > max_k;
  for (u64 k = 0; k <= max_k; ++k) {
    if (auto h = an.first_hit(k)) out.hits.push_back(*h);
  }
  return out;
}

VerifySummary run_verify(u64 limit, u64 inject_flip) {
  Stream st;
  Analytics an;
  StrictChecks strict;
  bool flipped = inject_flip == 0;
  run_to(st, limit, [&](const Stream& s) {
    an.observe(s);
    strict.observe(s);
    if (!flipped && inject_flip >= st.window().lo() &&
        inject_flip <= st.window().hi()) {
      st.window().debug_flip(inject_flip);
      flipped = true;
    }
  });
  const AnalyticsState& a = an.state();
  VerifySummary v;
  v.limit = limit;
  v.checked_steps = strict.checked_steps();
  v.max_a = strict.max_a();
  v.max_h = a.max_h;
  v.min_h = a.min_h;
  v.min_ratio = a.min_ratio;
  v.snapshots = a.snapshots.size();
  for (const auto& gp : a.gap_pairs) {
    if (gp.checked) ++v.gap_pairs;
  }
  return v;
}

std::vector<ShiftRun> run_shift_batch(u64 n0, u64 seeds, u64 rng_seed,
                                      u64 limit) {
  const u64 g0 = compute_g(n0);
  // mt19937_64 output is pinned by the standard; modulo keeps the draw
  // reproducible everywhere, and the slight bias is irrelevant here
  std::mt19937_64 rng(rng_seed);
  std::vector<ShiftRun> runs;
  runs.reserve(seeds);
  for (u64 i = 0; i < seeds; ++i) {
    const u64 s0 = n0 - g0 + rng() % (g0 + 1);
    runs.push_back(run_shifted(n0, s0, limit));
  }
  return runs;
}

VariantSummary run_variant(VariantSpec spec, u64 limit) {
  VariantStream vs(spec);
  run_to(vs, limit, [](const VariantStream&) {});
  VariantSummary out;
  out.spec = spec;
  out.limit = limit;
  out.last = vs.state();
  out.max_deficit = vs.max_deficit();
  out.ratio = static_cast<double>(vs.state().s) /
              (static_cast<double>(spec.t) * static_cast<double>(limit));
  return out;
}

std::string build_report(const Analytics& an,
                         const std::vector<FirstHit>* firsts) {
  const AnalyticsState& a = an.state();
  json root;
  root["horizon"] = std::to_string(an.horizon());

  json census = json::array();
  for (const auto& row : a.snapshots) {
    json r;
    r["x"] = std::to_string(row.x);
    json counts = json::array();
    json density = json::array();
    for (u64 k = 0; k < 6; ++k) {
      auto it = row.counts.find(k);
      const u64 c = it == row.counts.end() ? 0 : it->second;
      counts.push_back(std::to_string(c));
      density.push_back(fmt_double(
          static_cast<double>(c) / static_cast<double>(row.x), "%.8f"));
    }
    r["counts"] = counts;
    r["density"] = density;
    r["s"] = std::to_string(row.s);
    r["h"] = std::to_string(row.h);
    r["max_h"] = std::to_string(row.max_h);
    r["sum_sq"] = std::to_string(row.sum_sq);
    census.push_back(r);
  }
  root["census"] = census;

  json fo = json::array();
  const std::vector<FirstHit>& hits = firsts ? *firsts : a.firsts;
  for (const auto& h : hits) {
    fo.push_back({{"k", std::to_string(h.k)},
                  {"n", std::to_string(h.n)},
                  {"index_prime", h.index_prime},
                  {"twin", h.twin}});
  }
  root["first_occurrences"] = fo;

  json deficit;
  deficit["max_h"] = {{"n", std::to_string(a.max_h.n)},
                      {"h", std::to_string(a.max_h.h)}};
  deficit["min_h"] = {{"n", std::to_string(a.min_h.n)},
                      {"h", std::to_string(a.min_h.h)}};
  deficit["h2_count"] = std::to_string(a.h2_count);
  deficit["h2_last"] = std::to_string(a.h2_last);
  deficit["min_ratio"] = {{"n", std::to_string(a.min_ratio.n)},
                          {"value", fmt_double(a.min_ratio.value, "%.17g")},
                          {"set", a.min_ratio.set}};
  root["deficit"] = deficit;

  json runs = json::array();
  for (const auto& [k, r] : a.best_runs) {
    runs.push_back({{"k", std::to_string(k)},
                    {"start", std::to_string(r.start)},
                    {"len", std::to_string(r.len)}});
  }
  root["runs"] = runs;

  json gaps = json::array();
  for (const auto& gp : a.gap_pairs) {
    gaps.push_back({{"p", std::to_string(gp.p)},
                    {"q", std::to_string(gp.q)},
                    {"h_max", std::to_string(gp.h_max)},
                    {"checked", gp.checked},
                    {"bound_ok", !gp.checked || 2 * gp.h_max >= gp.q - gp.p}});
  }
  root["gap_pairs"] = gaps;

  root["step_ratio"] = {{"n", std::to_string(a.step_ratio.n)},
                        {"k", std::to_string(a.step_ratio_k)},
                        {"value", fmt_double(a.step_ratio.value, "%.17g")},
                        {"set", a.step_ratio.set}};
  root["sum_sq"] = std::to_string(a.sum_sq);
  return root.dump(2) + "\n";
}

void write_census_row(std::ostream& out, const Analytics& an, u64 x) {
  const auto counts = an.census_row(x);
  u64 s = 0, h = 0, max_h = 0, sum_sq = 0;
  if (x == an.horizon()) {
    const AnalyticsState& a = an.state();
    u64 weighted = 0;
    for (const auto& [k, c] : a.census) weighted += k * c;
    s = weighted;
    h = x - s;
    max_h = a.max_h.h;
    sum_sq = a.sum_sq;
  } else {
    for (const auto& row : an.state().snapshots) {
      if (row.x == x) {
        s = row.s;
        h = row.h;
        max_h = row.max_h;
        sum_sq = row.sum_sq;
        break;
      }
    }
  }
  out << x;
  for (u64 k = 0; k < 6; ++k) out << ',' << counts[k];
  out << ',' << s << ',' << h << ',' << max_h << ',' << sum_sq << '\n';
}

}  // namespace piseq
