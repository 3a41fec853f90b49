#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "piseq/runner.hpp"

using namespace piseq;
using json = nlohmann::json;

namespace {

struct TempFile {
  std::string path;
  TempFile() {
    path = (std::filesystem::temp_directory_path() /
            ("piseq-runner-" + std::to_string(std::rand()) + ".tmp"))
               .string();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

Analytics fold_to(u64 limit) {
  Stream st;
  Analytics an;
  run_to(st, limit, an);
  return an;
}

}  // namespace

TEST_CASE("checkpoint cadence") {
  SaveSpec off;  // empty path
  CHECK_FALSE(checkpoint_due(100, 1000, off));
  CHECK_FALSE(checkpoint_due(1000, 1000, off));

  SaveSpec save{"ck.json", 300};
  CHECK(checkpoint_due(10, 1000, save));
  CHECK(checkpoint_due(100, 1000, save));
  CHECK(checkpoint_due(300, 1000, save));
  CHECK(checkpoint_due(600, 1000, save));
  CHECK(checkpoint_due(1000, 1000, save));  // final index
  CHECK_FALSE(checkpoint_due(299, 1000, save));
  CHECK_FALSE(checkpoint_due(999, 1000, save));
  CHECK_FALSE(checkpoint_due(2, 1000, save));
}

TEST_CASE("emit_rows leaves a loadable checkpoint at the final index") {
  TempFile ck;
  Stream st;
  Analytics an;
  std::ostringstream rows;
  emit_rows(st, an, 1000, RowFormat::csv, rows, SaveSpec{ck.path, 300});

  CheckpointData c = load_checkpoint(ck.path);
  CHECK(c.state.n == 1000);
  CHECK(c.state.s == 994);
  CHECK(c.analytics == an.state());
}

TEST_CASE("first-occurrence search stops at the last missing k") {
  FirstSearch fs = find_firsts(2, 1'000'000);
  CHECK(fs.complete);
  CHECK(fs.scanned == 3);
  REQUIRE(fs.hits.size() == 3);
  CHECK(fs.hits[2] == FirstHit{2, 3, true, false});

  FirstSearch partial = find_firsts(7, 1000);
  CHECK_FALSE(partial.complete);
  CHECK(partial.scanned == 1000);
  CHECK(partial.hits.size() == 4);  // k = 0..3 appear by 229
}

TEST_CASE("report covers every table the fold maintains") {
  Analytics an = fold_to(1000);
  const json r = json::parse(build_report(an));

  CHECK(r.at("horizon") == "1000");

  REQUIRE(r.at("census").size() == 3);
  const json& row = r.at("census").at(2);
  CHECK(row.at("x") == "1000");
  CHECK(row.at("counts") == json({"219", "577", "195", "9", "0", "0"}));
  CHECK(row.at("density").at(0) == "0.21900000");
  CHECK(row.at("s") == "994");

  CHECK(r.at("first_occurrences").size() == 4);
  CHECK(r.at("first_occurrences").at(3).at("n") == "229");
  CHECK(r.at("first_occurrences").at(3).at("index_prime") == true);

  CHECK(r.at("deficit").at("min_h").at("h") == "2");
  for (const auto& gp : r.at("gap_pairs")) CHECK(gp.at("bound_ok") == true);

  // An explicit hit list replaces the fold's own.
  std::vector<FirstHit> firsts{{4, 3259, true, true}};
  const json r2 = json::parse(build_report(an, &firsts));
  REQUIRE(r2.at("first_occurrences").size() == 1);
  CHECK(r2.at("first_occurrences").at(0).at("k") == "4");
}

TEST_CASE("census row text agrees between live horizon and stored snapshot") {
  Analytics live = fold_to(1000);
  Analytics later = fold_to(2000);

  std::ostringstream a, b;
  write_census_row(a, live, 1000);
  write_census_row(b, later, 1000);
  CHECK(a.str() == b.str());
  CHECK(a.str().substr(0, 16) == "1000,219,577,195");
}
