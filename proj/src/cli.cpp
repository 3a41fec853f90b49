#include "piseq/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "piseq/radix.hpp"
#include "piseq/runner.hpp"

namespace piseq::cli {

namespace {

std::string fmt_double(double v, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

/// Checkpoint paths without a directory component resolve against
/// PISEQ_CKPT_DIR when it is set.
std::string resolve_ckpt(const std::string& path) {
  if (path.empty() || path.find('/') != std::string::npos) return path;
  const char* dir = std::getenv("PISEQ_CKPT_DIR");
  if (!dir || !*dir) return path;
  return std::string(dir) + "/" + path;
}

RowFormat parse_format(const std::string& text) {
  if (text == "csv") return RowFormat::csv;
  if (text == "jsonl") return RowFormat::jsonl;
  throw std::invalid_argument("unknown format: " + text);
}

char digit_char(u32 d) {
  return static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10));
}

std::string digit_string(const std::vector<u32>& digits, u64 count, u64 base) {
  std::string out;
  for (u64 i = 0; i < count; ++i) {
    if (base <= 36) {
      out.push_back(digit_char(digits[i]));
    } else {
      if (i) out.push_back('.');
      out += std::to_string(digits[i]);
    }
  }
  return out;
}

/// Same chunked walk as compute_g, but keeps the ledger so the record
/// pairs can be printed.
GapLedger walk_gap_ledger(u64 n) {
  if (n < 2) throw std::invalid_argument("gap walk requires limit >= 2");
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
  return ledger;
}

/// Opens --out when given, otherwise hands back the default stream.
class OutFile {
 public:
  OutFile(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw std::runtime_error("cannot open output: " + path);
      os_ = &file_;
    }
  }
  std::ostream& get() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

struct GenArgs {
  std::string limit, format = "csv", out, save;
  u64 save_every = 100'000'000;
};

struct CountArgs {
  std::string limit, out, report;
  bool decades = false;
  bool full = false;
};

struct FirstArgs {
  std::string limit;
  u64 max_k = 0;
  u64 ap_k = 0;
  u64 ap_dmax = 0;
  bool max_k_given = false;
  bool ap_given = false;
};

struct GapsArgs {
  std::string limit;
  bool records = false;
};

struct DigitsArgs {
  std::string terms;
  u64 base = 10;
  bool as_json = false;
};

struct VariantArgs {
  std::string limit;
  u64 t = 1;
  i64 c = 0;
};

struct ShiftArgs {
  std::string limit;
  u64 n0 = 0;
  u64 s0 = 0;
  bool s0_given = false;
  u64 seeds = 0;
  u64 rng = 1;
};

struct VerifyArgs {
  std::string limit;
  u64 inject_flip = 0;
};

struct ResumeArgs {
  std::string from, limit, format = "csv", out, save;
  u64 save_every = 100'000'000;
};

struct BitmapArgs {
  u64 lo = 0;
  u64 hi = 0;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const u64 limit = parse_limit(a.limit);
  OutFile sink(a.out, out);
  Stream st;
  Analytics an;
  emit_rows(st, an, limit, parse_format(a.format), sink.get(),
            SaveSpec{resolve_ckpt(a.save), a.save_every});
  return 0;
}

int cmd_count(const CountArgs& a, std::ostream& out) {
  const u64 limit = parse_limit(a.limit);
  Analytics an = run_census(limit);
  OutFile sink(a.out, out);
  if (a.full) {
    sink.get() << "k,count\n";
    for (const auto& [k, c] : an.state().census) {
      sink.get() << k << ',' << c << '\n';
    }
  } else {
    sink.get() << kCensusHeader << '\n';
    if (a.decades) {
      for (const auto& row : an.state().snapshots) {
        write_census_row(sink.get(), an, row.x);
      }
    } else {
      write_census_row(sink.get(), an, limit);
    }
  }
  if (!a.report.empty()) {
    std::ofstream rep(a.report, std::ios::binary | std::ios::trunc);
    if (!rep) throw std::runtime_error("cannot open report: " + a.report);
    rep << build_report(an);
  }
  return 0;
}

int cmd_first(const FirstArgs& a, std::ostream& out, std::ostream& err) {
  const u64 limit = parse_limit(a.limit);
  if (a.max_k_given == a.ap_given) {
    throw std::invalid_argument("give exactly one of --max-k and --k/--dmax");
  }
  if (a.ap_given) {
    out << "n,d\n";
    for (const auto& h : ap_search(a.ap_k, a.ap_dmax, limit)) {
      out << h.n << ',' << h.d << '\n';
    }
    return 0;
  }
  FirstSearch fs = find_firsts(a.max_k, limit);
  out << "k,n,index_prime,twin\n";
  for (const auto& h : fs.hits) {
    out << h.k << ',' << h.n << ',' << (h.index_prime ? 1 : 0) << ','
        << (h.twin ? 1 : 0) << '\n';
  }
  if (!fs.complete) {
    err << "note: not every k <= " << a.max_k << " appeared by n="
        << fs.scanned << "\n";
  }
  return 0;
}

int cmd_gaps(const GapsArgs& a, std::ostream& out) {
  const u64 limit = parse_limit(a.limit);
  GapLedger ledger = walk_gap_ledger(limit);
  if (a.records) {
    out << "p,q,gap\n";
    for (const auto& r : ledger.records()) {
      out << r.p << ',' << r.q << ',' << r.q - r.p << '\n';
    }
  } else {
    out << "x,g\n" << limit << ',' << ledger.g_at_horizon() << '\n';
  }
  return 0;
}

int cmd_digits(const DigitsArgs& a, std::ostream& out) {
  const u64 terms = parse_limit(a.terms);
  if (a.base < 2) throw std::invalid_argument("base must be >= 2");
  PartialSum lower = accumulate(a.base, terms);
  TailBound tail = tail_bound(lower.a_last, a.base, terms);
  DigitCert cert = certify_digits(lower, tail);
  const std::string digits = digit_string(cert.digits, cert.certified, a.base);
  if (a.as_json) {
    out << "{\"base\":\"" << a.base << "\",\"horizon\":\"" << terms
        << "\",\"certified\":\"" << cert.certified << "\",\"digits\":\""
        << digits << "\",\"tail_bound\":\"" << tail_to_string(tail)
        << "\"}\n";
  } else {
    out << "base=" << a.base << "\nhorizon=" << terms
        << "\ncertified=" << cert.certified << "\ndigits=" << digits << "\n";
  }
  return 0;
}

int cmd_variant(const VariantArgs& a, std::ostream& out) {
  const u64 limit = parse_limit(a.limit);
  VariantSummary v = run_variant(VariantSpec{a.t, a.c}, limit);
  out << "t=" << a.t << "\nc=" << a.c << "\nlimit=" << limit
      << "\nn=" << v.last.n << "\na=" << v.last.a << "\ns=" << v.last.s
      << "\nratio=" << fmt_double(v.ratio, "%.6f")
      << "\nmax_deficit=" << v.max_deficit << "\n";
  return 0;
}

void print_shift(std::ostream& out, const ShiftRun& r) {
  out << r.s0 << ',' << r.d0 << ',' << (r.alt_leads ? 1 : 0) << ','
      << (r.merged ? 1 : 0) << ',' << r.merged_at << ',' << r.d_final << '\n';
}

int cmd_shift(const ShiftArgs& a, std::ostream& out) {
  const u64 limit = parse_limit(a.limit);
  if (a.n0 < 9) throw std::invalid_argument("n0 must be >= 9");
  if (a.s0_given == (a.seeds > 0)) {
    throw std::invalid_argument("give exactly one of --s0 and --seeds");
  }
  out << "s0,d0,alt_leads,merged,merged_at,d_final\n";
  if (a.s0_given) {
    print_shift(out, run_shifted(a.n0, a.s0, limit));
  } else {
    for (const auto& r : run_shift_batch(a.n0, a.seeds, a.rng, limit)) {
      print_shift(out, r);
    }
  }
  return 0;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const u64 limit = parse_limit(a.limit);
  if (limit < 9) {
    throw std::invalid_argument("verify needs --limit >= 9 (checks gate in at n=9)");
  }
  VerifySummary v = run_verify(limit, a.inject_flip);
  out << "verified n=1.." << v.limit << "\nstrict step checks: " << v.checked_steps
      << "\nmax_a=" << v.max_a.h << " at n=" << v.max_a.n
      << "\nmax_h=" << v.max_h.h << " at n=" << v.max_h.n
      << "\nmin_h=" << v.min_h.h << " at n=" << v.min_h.n << " (n >= 9)"
      << "\nmin_ratio=" << fmt_double(v.min_ratio.value, "%.6f") << " at n="
      << v.min_ratio.n << "\ncensus identities: ok (" << v.snapshots
      << " snapshots)\ngap pairs: ok (" << v.gap_pairs << " pairs)\n";
  return 0;
}

int cmd_resume(const ResumeArgs& a, std::ostream& out) {
  const u64 limit = parse_limit(a.limit);
  CheckpointData c = load_checkpoint(resolve_ckpt(a.from));
  Stream st(EngineConfig{}, resume_point(c));
  Analytics an(c.analytics);
  OutFile sink(a.out, out);
  emit_rows(st, an, limit, parse_format(a.format), sink.get(),
            SaveSpec{resolve_ckpt(a.save), a.save_every});
  return 0;
}

int cmd_bitmap(const BitmapArgs& a, std::ostream& out) {
  if (a.hi < a.lo) throw std::invalid_argument("need lo <= hi");
  PrimalityWindow w;
  w.extend_to(a.hi);
  if (a.lo > 0) w.advance_low(a.lo);
  out << w.hex_bitmap() << "\n";
  return 0;
}

}  // namespace

u64 parse_limit(const std::string& text) {
  const auto bad = [&] {
    return std::invalid_argument("not a positive integer: " + text);
  };
  std::string digits;
  i64 exp10 = 0;
  size_t i = 0;
  bool seen_dot = false;
  for (; i < text.size() && text[i] != 'e' && text[i] != 'E'; ++i) {
    const char ch = text[i];
    if (ch == '.') {
      if (seen_dot) throw bad();
      seen_dot = true;
    } else if (ch >= '0' && ch <= '9') {
      digits.push_back(ch);
      if (seen_dot) --exp10;
    } else {
      throw bad();
    }
  }
  if (digits.empty()) throw bad();
  if (i < text.size()) {
    size_t j = i + 1;
    if (j < text.size() && text[j] == '+') ++j;
    if (j == text.size()) throw bad();
    i64 e = 0;
    for (; j < text.size(); ++j) {
      if (text[j] < '0' || text[j] > '9') throw bad();
      e = e * 10 + (text[j] - '0');
      if (e > 40) throw bad();
    }
    exp10 += e;
  }
  while (exp10 < 0 && !digits.empty() && digits.back() == '0') {
    digits.pop_back();
    ++exp10;
  }
  if (exp10 < 0 || digits.empty()) throw bad();
  u64 value = 0;
  for (char ch : digits) {
    const u64 d = static_cast<u64>(ch - '0');
    if (value > (UINT64_MAX - d) / 10) throw bad();
    value = value * 10 + d;
  }
  for (; exp10 > 0; --exp10) {
    if (value > UINT64_MAX / 10) throw bad();
    value *= 10;
  }
  if (value == 0) throw bad();
  return value;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"streaming engine for the prime-counting recurrence"};
  app.name("piseq");
  app.require_subcommand(1);

  GenArgs gen_a;
  auto* gen = app.add_subcommand("gen", "emit (n, a, s, h) rows");
  gen->add_option("--limit", gen_a.limit, "last index, e.g. 97 or 1e6")
      ->required();
  gen->add_option("--format", gen_a.format, "csv or jsonl");
  gen->add_option("--out", gen_a.out, "write rows to this file");
  gen->add_option("--save", gen_a.save, "checkpoint path");
  gen->add_option("--save-every", gen_a.save_every, "extra save cadence");

  CountArgs count_a;
  auto* count = app.add_subcommand("count", "census of a-values");
  count->add_option("--limit", count_a.limit)->required();
  count->add_flag("--decades", count_a.decades,
                  "rows at every power of ten");
  count->add_flag("--full", count_a.full, "sparse k -> count map");
  count->add_option("--out", count_a.out, "write rows to this file");
  count->add_option("--report", count_a.report, "also write a JSON report");

  FirstArgs first_a;
  auto* first = app.add_subcommand("first", "first index with a_n = k");
  auto* maxk_opt = first->add_option("--max-k", first_a.max_k);
  auto* apk_opt =
      first->add_option("--k", first_a.ap_k, "find n with a_{n+jd} = j, j = 0..k");
  auto* dmax_opt = first->add_option("--dmax", first_a.ap_dmax, "max step d");
  first->add_option("--limit", first_a.limit)->required();

  GapsArgs gaps_a;
  auto* gaps = app.add_subcommand("gaps", "prime-gap envelope g");
  gaps->add_option("--limit", gaps_a.limit)->required();
  gaps->add_flag("--records", gaps_a.records, "list record gap pairs");

  DigitsArgs digits_a;
  auto* digits = app.add_subcommand("digits", "certified digits of A(b)");
  digits->add_option("--base", digits_a.base);
  digits->add_option("--terms", digits_a.terms)->required();
  digits->add_flag("--json", digits_a.as_json);

  VariantArgs variant_a;
  auto* variant = app.add_subcommand("variant", "run with f(n) = t*n + c");
  variant->add_option("--t", variant_a.t);
  variant->add_option("--c", variant_a.c);
  variant->add_option("--limit", variant_a.limit)->required();

  ShiftArgs shift_a;
  auto* shift = app.add_subcommand("shift", "alternate summatory seed runs");
  shift->add_option("--n0", shift_a.n0)->required();
  auto* s0_opt = shift->add_option("--s0", shift_a.s0);
  shift->add_option("--seeds", shift_a.seeds, "batch size (s0 drawn)");
  shift->add_option("--rng", shift_a.rng, "batch seed");
  shift->add_option("--limit", shift_a.limit)->required();

  VerifyArgs verify_a;
  auto* verify = app.add_subcommand("verify", "run the full invariant suite");
  verify->add_option("--limit", verify_a.limit)->required();
  verify->add_option("--inject-flip", verify_a.inject_flip)
      ->group("");  // debug: corrupt one primality flag

  ResumeArgs resume_a;
  auto* resume = app.add_subcommand("resume", "continue from a checkpoint");
  resume->add_option("--from", resume_a.from)->required();
  resume->add_option("--limit", resume_a.limit)->required();
  resume->add_option("--format", resume_a.format, "csv or jsonl");
  resume->add_option("--out", resume_a.out, "write rows to this file");
  resume->add_option("--save", resume_a.save, "checkpoint path");
  resume->add_option("--save-every", resume_a.save_every);

  BitmapArgs bitmap_a;
  auto* bitmap = app.add_subcommand("bitmap", "");
  bitmap->group("");  // debug: dump window flags as hex
  bitmap->add_option("--lo", bitmap_a.lo);
  bitmap->add_option("--hi", bitmap_a.hi)->required();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("piseq");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }
  shift_a.s0_given = s0_opt->count() > 0;
  first_a.max_k_given = maxk_opt->count() > 0;
  first_a.ap_given = apk_opt->count() > 0 || dmax_opt->count() > 0;

  try {
    if (gen->parsed()) return cmd_gen(gen_a, out);
    if (count->parsed()) return cmd_count(count_a, out);
    if (first->parsed()) return cmd_first(first_a, out, err);
    if (gaps->parsed()) return cmd_gaps(gaps_a, out);
    if (digits->parsed()) return cmd_digits(digits_a, out);
    if (variant->parsed()) return cmd_variant(variant_a, out);
    if (shift->parsed()) return cmd_shift(shift_a, out);
    if (verify->parsed()) return cmd_verify(verify_a, out);
    if (resume->parsed()) return cmd_resume(resume_a, out);
    if (bitmap->parsed()) return cmd_bitmap(bitmap_a, out);
  } catch (const InvariantViolation& e) {
    err << "invariant violation at n=" << e.n() << ": " << e.clause() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace piseq::cli
