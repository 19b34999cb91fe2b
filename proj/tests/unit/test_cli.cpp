#include <filesystem>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "checks.hpp"
#include "commands.hpp"
#include "dense_oracle.hpp"
#include "report.hpp"
#include "support.hpp"

using namespace khtool;
using testsupport::named;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path fresh_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("khtool-test-" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("compute poincare for the reduced unknot") {
  const auto r = run_cli({"compute", "--pd", "U", "--invariant", "kh", "--reduced", "--format",
                          "poincare"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "q\n");
}

TEST_CASE("compute table for the left trefoil") {
  const auto r = run_cli({"compute", "--name", "trefoil_L", "--invariant", "bn2", "--reduced",
                          "--format", "table"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("-u-> (0,-3)") != std::string::npos);
  CHECK(r.out.find("total dimension 4, u-rank 1") != std::string::npos);
}

TEST_CASE("figure-eight BN3 JSON matches the dense oracle") {
  const auto r = run_cli({"compute", "--name", "figure8", "--invariant", "bn3", "--reduced",
                          "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const auto j = Json::parse(r.out);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(module_from_json(j["module"]) == oracle::dense_homology(named("figure8"), 3, true, 1));
}

TEST_CASE("JSON output is deterministic and round-trips") {
  const std::vector<std::string> args{"compute", "--name", "L4a1", "--invariant", "bn2",
                                      "--format", "json"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);

  const auto report = report_from_json(Json::parse(a.out));
  CHECK(to_json(report).dump(2) + "\n" == a.out);
  InvariantSpec spec;
  spec.kind = "bn2";
  spec.normalize(named("L4a1"));
  CHECK(report == compute_report(named("L4a1"), spec));
}

TEST_CASE("module JSON round trip over several invariants") {
  for (const char* kind : {"kh", "bn2", "bn3", "brcover-e2"})
    for (bool reduced : {false, true}) {
      InvariantSpec spec;
      spec.kind = kind;
      spec.reduced = reduced;
      spec.normalize(named("hopf"));
      const auto m = compute_module(named("hopf"), spec);
      const auto back = module_from_json(module_to_json(m));
      CHECK(back == m);
      CHECK(back.filtration_dims == m.filtration_dims);
    }
}

TEST_CASE("hash ignores arc relabeling") {
  const auto a = run_cli({"compute", "--pd", "PD[X(3,2,4,1), X(1,4,2,3)]", "--format", "json"});
  const auto b = run_cli({"compute", "--pd", "PD[X(13,12,14,11), X(11,14,12,13)]", "--format",
                          "json"});
  REQUIRE(a.code == kExitOk);
  REQUIRE(b.code == kExitOk);
  CHECK(Json::parse(a.out)["diagram"]["hash"] == Json::parse(b.out)["diagram"]["hash"]);
}

TEST_CASE("cache returns identical reports") {
  const auto dir = fresh_dir("cache");
  const std::vector<std::string> args{"compute",  "--name",      "figure8",   "--invariant",
                                      "bn3",      "--reduced",   "--format",  "json",
                                      "--cache-dir", dir.string()};
  const auto first = run_cli(args);
  REQUIRE(first.code == kExitOk);
  CHECK(std::distance(std::filesystem::directory_iterator(dir),
                      std::filesystem::directory_iterator()) == 1);
  const auto second = run_cli(args);
  CHECK(second.out == first.out);

  InvariantSpec spec;
  spec.kind = "bn3";
  spec.reduced = true;
  spec.normalize(named("figure8"));
  const auto cached = ReportCache(dir).load(named("figure8"), spec);
  REQUIRE(cached);
  CHECK(*cached == compute_report(named("figure8"), spec));
  std::filesystem::remove_all(dir);
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"compute", "--pd", "PD[X(1,4,2,3)]"}).code == kExitUsage);
  CHECK(run_cli({"compute", "--pd", "PD[X(1,4,2,3), X(3,6,4,5), X(5,2,6,1)]"}).code == kExitUsage);
  CHECK(run_cli({"compute", "--name", "no_such_link"}).code == kExitUsage);
  CHECK(run_cli({"compute", "--pd", "U", "--invariant", "bn7"}).code == kExitUsage);
  CHECK(run_cli({"compute", "--pd", "U", "--invariant", "bnk"}).code == kExitUsage);
  CHECK(run_cli({"compute", "--pd", "U", "--k", "3"}).code == kExitUsage);
  CHECK(run_cli({"compute", "--name", "hopf", "--reduced", "--basepoint", "9"}).code == kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == kExitUsage);
  CHECK(run_cli({"verify", "nonsense", "--pd", "U"}).code == kExitUsage);

  const auto bad_braid = run_cli({"compute", "--braid", "1 x 1", "--strands", "2"});
  CHECK(bad_braid.code == kExitUsage);
  CHECK(bad_braid.err.find("'x'") != std::string::npos);

  std::string word;
  for (int i = 0; i < 15; ++i) word += "1 ";
  CHECK(run_cli({"compute", "--braid", word, "--strands", "2"}).code == kExitResourceLimit);

  CHECK(run_cli({"compute", "--braid", "1 1 1", "--strands", "2", "--format", "poincare"}).code ==
        kExitOk);
  CHECK(run_cli({"compute", "--pd", "U", "--invariant", "bnk", "--k", "4"}).code == kExitOk);
}

TEST_CASE("braid word parsing") {
  CHECK(parse_braid_word("1 -2 1") == std::vector<int>{1, -2, 1});
  CHECK(parse_braid_word("1,-2,1") == std::vector<int>{1, -2, 1});
  CHECK(parse_braid_word("") == std::vector<int>{});
  CHECK_THROWS_AS(parse_braid_word("1 0"), khbn::Error);
  CHECK_THROWS_AS(parse_braid_word("1 - 2"), khbn::Error);
}

TEST_CASE("verify subcommand") {
  const auto tri = run_cli({"verify", "triangle", "--pd", "U"});
  CHECK(tri.code == kExitOk);
  CHECK(Json::parse(tri.out)["ok"] == true);

  const auto br = run_cli({"verify", "brcover", "--name", "hopf"});
  CHECK(br.code == kExitOk);

  const auto some = run_cli({"verify", "euler", "--all-table", "--max-crossings", "4", "--jobs", "2"});
  CHECK(some.code == kExitOk);
  const auto j = Json::parse(some.out);
  CHECK(j["checks"][0]["failed"] == 0);
  CHECK(j["checks"][0]["passed"].get<int>() > 5);

  CHECK(run_cli({"verify", "euler"}).code == kExitUsage);
}

TEST_CASE("every check passes on the trefoil") {
  const auto* e = khbn::find_entry(testsupport::table(), "3_1@r1");
  REQUIRE(e);
  for (const auto& check : check_names()) {
    INFO(check);
    const auto r = run_check(check, *e, testsupport::table());
    CHECK(r.ok);
  }
}

TEST_CASE("sseq subcommand") {
  const auto u = run_cli({"sseq", "--pd", "U", "--k", "2"});
  CHECK(u.code == kExitOk);
  CHECK(u.out.find("stabilizes at E_0") != std::string::npos);

  const auto t = run_cli({"sseq", "--name", "trefoil_L", "--k", "2", "--reduced", "--format",
                          "json"});
  REQUIRE(t.code == kExitOk);
  const auto j = Json::parse(t.out);
  CHECK(j["einfty_matches_gr"] == true);

  const auto faulty = run_cli({"sseq", "--name", "trefoil_L", "--k", "2", "--inject-fault"});
  CHECK(faulty.code == kExitCheckFailed);
}
