#include "piseq/state_store.hpp"

#include <fcntl.h>
#include <unistd.h>
#include <zlib.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace piseq {

using json = nlohmann::json;

namespace {

std::string u2s(u64 v) { return std::to_string(v); }

u64 s2u(const json& j) {
  const std::string& s = j.get_ref<const std::string&>();
  std::size_t used = 0;
  const u64 v = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing junk: " + s);
  return v;
}

std::string d2s(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double s2d(const json& j) { return std::stod(j.get_ref<const std::string&>()); }

json counts_json(const std::map<u64, u64>& m) {
  json arr = json::array();
  for (const auto& [k, c] : m) arr.push_back({u2s(k), u2s(c)});
  return arr;
}

std::map<u64, u64> counts_from(const json& arr) {
  std::map<u64, u64> m;
  for (const auto& pair : arr) m[s2u(pair.at(0))] = s2u(pair.at(1));
  return m;
}

json ratio_json(const RatioRecord& r) {
  return {{"n", u2s(r.n)}, {"set", r.set}, {"value", d2s(r.value)}};
}

RatioRecord ratio_from(const json& j) {
  return {s2u(j.at("n")), s2d(j.at("value")), j.at("set").get<bool>()};
}

json hw_json(const HighWater& h) { return {{"h", u2s(h.h)}, {"n", u2s(h.n)}}; }

HighWater hw_from(const json& j) { return {s2u(j.at("n")), s2u(j.at("h"))}; }

json run_json(const RunRecord& r) {
  return {{"k", u2s(r.k)}, {"len", u2s(r.len)}, {"start", u2s(r.start)}};
}

RunRecord run_from(const json& j) {
  return {s2u(j.at("k")), s2u(j.at("start")), s2u(j.at("len"))};
}

json encode(const CheckpointData& c) {
  json a;
  a["next_n"] = u2s(c.analytics.next_n);
  a["census"] = counts_json(c.analytics.census);
  json firsts = json::array();
  for (const auto& f : c.analytics.firsts) {
    firsts.push_back({{"index_prime", f.index_prime},
                      {"k", u2s(f.k)},
                      {"n", u2s(f.n)},
                      {"twin", f.twin}});
  }
  a["firsts"] = firsts;
  json runs = json::array();
  for (const auto& [k, r] : c.analytics.best_runs) runs.push_back(run_json(r));
  a["best_runs"] = runs;
  a["current_run"] = run_json(c.analytics.current_run);
  a["sum_sq"] = u2s(c.analytics.sum_sq);
  a["max_h"] = hw_json(c.analytics.max_h);
  a["min_h"] = hw_json(c.analytics.min_h);
  a["min_ratio"] = ratio_json(c.analytics.min_ratio);
  a["h2_count"] = u2s(c.analytics.h2_count);
  a["h2_last"] = u2s(c.analytics.h2_last);
  a["step_ratio"] = ratio_json(c.analytics.step_ratio);
  a["step_ratio_k"] = u2s(c.analytics.step_ratio_k);
  json snaps = json::array();
  for (const auto& s : c.analytics.snapshots) {
    snaps.push_back({{"counts", counts_json(s.counts)},
                     {"h", u2s(s.h)},
                     {"max_h", u2s(s.max_h)},
                     {"s", u2s(s.s)},
                     {"sum_sq", u2s(s.sum_sq)},
                     {"x", u2s(s.x)}});
  }
  a["snapshots"] = snaps;
  json pairs = json::array();
  for (const auto& g : c.analytics.gap_pairs) {
    pairs.push_back({{"checked", g.checked},
                     {"h_max", u2s(g.h_max)},
                     {"p", u2s(g.p)},
                     {"q", u2s(g.q)}});
  }
  a["gap_pairs"] = pairs;

  json records = json::array();
  for (const auto& r : c.gap_records) {
    records.push_back(
        {{"p", u2s(r.p)}, {"prev_max", u2s(r.prev_max)}, {"q", u2s(r.q)}});
  }

  json root;
  root["version"] = u2s(c.version);
  root["state"] = {{"a", u2s(c.state.a)},
                   {"n", u2s(c.state.n)},
                   {"pi_n", u2s(c.state.pi_n)},
                   {"pi_s", u2s(c.state.pi_s)},
                   {"s", u2s(c.state.s)}};
  root["gap_ledger"] = {{"last_prime", u2s(c.last_prime)},
                        {"max_gap", u2s(c.max_gap)},
                        {"records", records}};
  root["analytics"] = a;
  return root;
}

CheckpointData decode(const json& root) {
  CheckpointData c;
  c.version = s2u(root.at("version"));
  const json& st = root.at("state");
  c.state = {s2u(st.at("n")), s2u(st.at("a")), s2u(st.at("s")),
             s2u(st.at("pi_n")), s2u(st.at("pi_s"))};
  const json& gl = root.at("gap_ledger");
  c.last_prime = s2u(gl.at("last_prime"));
  c.max_gap = s2u(gl.at("max_gap"));
  for (const auto& r : gl.at("records")) {
    c.gap_records.push_back(
        {s2u(r.at("p")), s2u(r.at("q")), s2u(r.at("prev_max"))});
  }
  const json& a = root.at("analytics");
  c.analytics.next_n = s2u(a.at("next_n"));
  c.analytics.census = counts_from(a.at("census"));
  for (const auto& f : a.at("firsts")) {
    c.analytics.firsts.push_back({s2u(f.at("k")), s2u(f.at("n")),
                                  f.at("index_prime").get<bool>(),
                                  f.at("twin").get<bool>()});
  }
  for (const auto& r : a.at("best_runs")) {
    const RunRecord rec = run_from(r);
    c.analytics.best_runs[rec.k] = rec;
  }
  c.analytics.current_run = run_from(a.at("current_run"));
  c.analytics.sum_sq = s2u(a.at("sum_sq"));
  c.analytics.max_h = hw_from(a.at("max_h"));
  c.analytics.min_h = hw_from(a.at("min_h"));
  c.analytics.min_ratio = ratio_from(a.at("min_ratio"));
  c.analytics.h2_count = s2u(a.at("h2_count"));
  c.analytics.h2_last = s2u(a.at("h2_last"));
  c.analytics.step_ratio = ratio_from(a.at("step_ratio"));
  c.analytics.step_ratio_k = s2u(a.at("step_ratio_k"));
  for (const auto& s : a.at("snapshots")) {
    SnapshotRow row;
    row.x = s2u(s.at("x"));
    row.counts = counts_from(s.at("counts"));
    row.s = s2u(s.at("s"));
    row.h = s2u(s.at("h"));
    row.max_h = s2u(s.at("max_h"));
    row.sum_sq = s2u(s.at("sum_sq"));
    c.analytics.snapshots.push_back(std::move(row));
  }
  for (const auto& g : a.at("gap_pairs")) {
    c.analytics.gap_pairs.push_back({s2u(g.at("p")), s2u(g.at("q")),
                                     s2u(g.at("h_max")),
                                     g.at("checked").get<bool>()});
  }
  return c;
}

std::string crc_hex(const std::string& bytes) {
  const auto crc =
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
            static_cast<uInt>(bytes.size()));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "crc32:%08lx", static_cast<unsigned long>(crc));
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) {
    throw std::runtime_error("cannot open " + tmp + ": " +
                             std::strerror(errno));
  }
  const char* p = content.data();
  std::size_t left = content.size();
  while (left > 0) {
    const ssize_t w = ::write(fd, p, left);
    if (w < 0) {
      ::close(fd);
      throw std::runtime_error("write failed for " + tmp + ": " +
                               std::strerror(errno));
    }
    p += w;
    left -= static_cast<std::size_t>(w);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    throw std::runtime_error("fsync failed for " + tmp + ": " +
                             std::strerror(errno));
  }
  ::close(fd);
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("rename failed for " + path + ": " +
                             std::strerror(errno));
  }
}

}  // namespace

CheckpointData make_checkpoint(const Stream& st, const Analytics& an) {
  CheckpointData c;
  c.state = st.state();
  c.last_prime = st.ledger().last_prime();
  c.max_gap = st.ledger().max_gap();
  c.gap_records = st.ledger().records();
  c.analytics = an.state();
  return c;
}

ResumePoint resume_point(const CheckpointData& c) {
  return {c.state, c.last_prime, c.max_gap, c.gap_records};
}

void save_checkpoint(const CheckpointData& c, const std::string& path) {
  json root = encode(c);
  root["integrity"] = crc_hex(root.dump());
  write_atomic(path, root.dump() + "\n");
}

CheckpointData load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointIntegrityError("cannot open checkpoint: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  json root = json::parse(buf.str(), nullptr, false);
  if (root.is_discarded() || !root.is_object()) {
    throw CheckpointIntegrityError("checkpoint is not valid JSON: " + path);
  }
  if (!root.contains("version") || !root.at("version").is_string()) {
    throw CheckpointIntegrityError("checkpoint missing version: " + path);
  }
  if (root.at("version").get<std::string>() !=
      std::to_string(kCheckpointVersion)) {
    throw CheckpointVersionError(
        "checkpoint version " + root.at("version").dump() +
        ", supported version " + std::to_string(kCheckpointVersion));
  }
  if (!root.contains("integrity")) {
    throw CheckpointIntegrityError("checkpoint missing integrity: " + path);
  }
  const std::string stored = root.at("integrity").get<std::string>();
  root.erase("integrity");
  if (crc_hex(root.dump()) != stored) {
    throw CheckpointIntegrityError("checkpoint checksum mismatch: " + path);
  }
  try {
    return decode(root);
  } catch (const json::exception& e) {
    throw CheckpointIntegrityError("checkpoint malformed: " +
                                   std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw CheckpointIntegrityError("checkpoint malformed: " +
                                   std::string(e.what()));
  }
}

RowWriter::RowWriter(std::ostream& out, RowFormat fmt)
    : out_(&out), fmt_(fmt) {
  if (fmt_ == RowFormat::csv) *out_ << "n,a,s,h\n";
}

void RowWriter::write_row(u64 n, u64 a, u64 s) {
  const u64 h = n - s;
  if (fmt_ == RowFormat::csv) {
    *out_ << n << ',' << a << ',' << s << ',' << h << '\n';
  } else {
    *out_ << "{\"a\":\"" << a << "\",\"h\":\"" << h << "\",\"n\":\"" << n
          << "\",\"s\":\"" << s << "\"}\n";
  }
}

std::vector<Row> parse_rows(std::istream& in, RowFormat fmt) {
  std::vector<Row> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (fmt == RowFormat::csv) {
      if (first) {
        first = false;
        if (line != "n,a,s,h") {
          throw std::invalid_argument("bad csv header: " + line);
        }
        continue;
      }
      Row r{};
      if (std::sscanf(line.c_str(), "%lu,%lu,%lu,%lu", &r.n, &r.a, &r.s,
                      &r.h) != 4) {
        throw std::invalid_argument("bad csv row: " + line);
      }
      rows.push_back(r);
    } else {
      const json j = json::parse(line);
      rows.push_back(
          {s2u(j.at("n")), s2u(j.at("a")), s2u(j.at("s")), s2u(j.at("h"))});
    }
  }
  return rows;
}

}  // namespace piseq
