#include "doctest.h"

#include "rzlab/report.hpp"
#include "rzlab/verify.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace rzlab;

namespace {

struct Run {
  int status;
  std::string out;
};

/// Runs the CLI with stderr folded into stdout.
Run cli(const std::string& args) {
  const std::string cmd = std::string(RZLAB_CLI) + " " + args + " 2>&1";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  REQUIRE(pipe);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe.get())) out += buf.data();
  const int raw = pclose(pipe.release());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::string without_runtime(const std::string& csv) {
  std::string out;
  for (const auto& l : lines(csv)) out += l.substr(0, l.rfind(',')) + "\n";
  return out;
}

const Measurement& find(const CheckReport& r, const std::string& prefix) {
  for (const auto& m : r.measurements)
    if (m.name.rfind(prefix, 0) == 0) return m;
  FAIL("no measurement starting with " << prefix);
  return r.measurements.front();
}

}  // namespace

TEST_CASE("measurement comparisons") {
  Measurement m{"x", 0.0, 1.0 + 5e-7, 1.0, 1e-6, Comparison::AtMost, Slack::Relative};
  CHECK(m.passes());
  m.value = 1.0 + 2e-6;
  CHECK(!m.passes());
  Measurement exact{"y", 0.0, 0.0, 0.0, 0.0, Comparison::AtMost, Slack::Absolute};
  CHECK(exact.passes());
  exact.value = 1e-300;
  CHECK(!exact.passes());
  Measurement lo{"z", 0.0, 0.98, 0.99, 0.0, Comparison::AtLeast, Slack::Absolute};
  CHECK(!lo.passes());
  Measurement within{"w", 0.0, 1.0 + 1e-11, 1.0, 1e-10, Comparison::Within, Slack::Absolute};
  CHECK(within.passes());
  within.value = 1.0 - 2e-10;
  CHECK(!within.passes());
  Measurement info{"i", 0.0, 1e9, 0.0, 0.0, Comparison::Info, Slack::Absolute};
  CHECK(info.passes());
}

TEST_CASE("verdicts and headline") {
  CheckReport r;
  r.id = "T";
  r.measurements.push_back({"a", 0.0, 0.5, 1.0, 0.0, Comparison::AtMost, Slack::Absolute});
  r.measurements.push_back({"b", 0.0, 0.9, 1.0, 0.0, Comparison::AtMost, Slack::Absolute});
  r.measurements.push_back({"c", 0.0, 99.0, 0.0, 0.0, Comparison::Info, Slack::Absolute});
  r.finalize();
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.headline().name == "b");
  r.inconclusive = true;
  r.finalize();
  CHECK(r.verdict == Verdict::Inconclusive);
  r.measurements.push_back({"d", 0.0, 2.0, 1.0, 0.5, Comparison::AtMost, Slack::Absolute});
  r.finalize();
  CHECK(r.verdict == Verdict::Fail);
  CHECK(r.headline().name == "d");
}

TEST_CASE("suites and registry") {
  CHECK(suite_checks("core").size() == 10);
  CHECK(suite_checks("counterexamples") == std::vector<std::string>{"CE1", "CE2", "CE3"});
  CHECK(suite_checks("oracles") == std::vector<std::string>{"FK_ORACLE", "QUAD_DENSE"});
  CHECK(suite_checks("all").size() == 15);
  CHECK_THROWS_AS(suite_checks("nightly"), std::invalid_argument);
  RunConfig c;
  c.checks = {"NOPE"};
  CHECK_THROWS_AS(run_suite(c), std::invalid_argument);
  CHECK(catalog(1).size() == 5);
  CHECK(catalog(3).size() == 6);
}

TEST_CASE("derived seeds are stable and distinct") {
  CHECK(derive_seed(1, "INTERP") == derive_seed(1, "INTERP"));
  std::set<std::uint64_t> seen;
  for (const auto& id : known_checks()) seen.insert(derive_seed(1, id));
  CHECK(seen.size() == known_checks().size());
  CHECK(derive_seed(1, "INTERP") != derive_seed(2, "INTERP"));
}

TEST_CASE("trial family") {
  const GridSpec g(2, 16, 4.0);
  const auto fam = trial_family(g, 7, 64, true);
  CHECK(fam.size() == 72);
  for (const auto& f : fam) CHECK(std::abs(f.mean()) < 1e-12 * f.values().cwiseAbs().maxCoeff());
  const auto again = trial_family(g, 7, 64, true);
  CHECK(again[3].values() == fam[3].values());
  CHECK(trial_family(g, 8, 64, true)[3].values() != fam[3].values());
  const auto raw = trial_family(g, 7, 0, false);
  CHECK(raw.size() == 8);
  CHECK(raw[0].min() >= 0.0);
}

TEST_CASE("dense cache shares operators") {
  clear_dense_cache();
  const GridSpec g(1, 16, 2.0);
  const auto a = cached_dense(g, Potential::harmonic());
  const auto b = cached_dense(g, Potential::harmonic());
  CHECK(a.get() == b.get());
  CHECK(cached_dense(g, Potential::ce3()).get() != a.get());
}

TEST_CASE("INTERP bound constants") {
  RunConfig c;
  c.d = 1;
  c.n = 32;
  c.trials = 8;
  c.p = {1.0, 2.0};
  const auto rep = run_check("INTERP", c);
  REQUIRE(rep.measurements.size() == 2);
  CHECK(rep.measurements[0].bound == doctest::Approx(2.0));
  CHECK(rep.measurements[1].bound == 1.0);
  CHECK(rep.verdict == Verdict::Pass);
}

TEST_CASE("GREEN_MASS with a constant potential is an equality") {
  RunConfig c;
  c.d = 1;
  c.n = 32;
  c.potential = "const:3";
  const auto rep = run_check("GREEN_MASS", c);
  CHECK(rep.verdict == Verdict::Pass);
  const auto& m = find(rep, "green mass farthest from 1");
  CHECK(m.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("core checks pass on a resolved one-dimensional grid") {
  RunConfig c;
  c.d = 1;
  c.n = 32;
  c.trials = 16;
  for (const char* id : {"DOMINATION", "COMPOSITION", "GREEN_MASS", "L2_CONTRACT", "L1_BOUND", "W_KERNEL"}) {
    const auto rep = run_check(id, c);
    CAPTURE(id);
    CHECK(rep.verdict == Verdict::Pass);
  }
}

TEST_CASE("oracles are deterministic") {
  RunConfig c;
  c.fk_paths = 4000;
  c.fk_slices = 64;
  const auto a = run_check("FK_ORACLE", c);
  const auto b = run_check("FK_ORACLE", c);
  REQUIRE(a.measurements.size() == b.measurements.size());
  for (std::size_t i = 0; i < a.measurements.size(); ++i) CHECK(a.measurements[i].value == b.measurements[i].value);
  CHECK(without_runtime(reports_csv({a})) == without_runtime(reports_csv({b})));
}

TEST_CASE("suite errors become failed reports") {
  RunConfig c;
  c.checks = {"INTERP"};
  c.p = {3.0};
  const auto reps = run_suite(c);
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].verdict == Verdict::Fail);
  CHECK(!reps[0].notes.empty());
  CHECK(!all_passed(reps));
}

TEST_CASE("config JSON") {
  RunConfig c;
  c.d = 3;
  c.p = {1.5};
  c.seed = 42;
  c.potential = "ce3";
  const RunConfig back = config_from_json(config_to_json(c));
  CHECK(back.d == 3);
  CHECK(back.p == std::vector<double>{1.5});
  CHECK(back.seed == 42);
  CHECK(back.potential == "ce3");
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK_THROWS_AS(config_from_json(R"({"dimension": 2})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"d": "two"})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json("[1, 2]"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json("{"), std::invalid_argument);
}

TEST_CASE("CSV layout") {
  CheckReport r;
  r.id = "INTERP";
  r.d = 2;
  r.n = 16;
  r.R = 4.0;
  r.potential = "harmonic";
  r.p = {1.0, 2.0};
  r.seed = 1;
  r.measurements.push_back({"m", 2.0, 0.5, 1.0, 1e-3, Comparison::AtMost, Slack::Relative});
  r.runtime_s = 0.25;
  r.finalize();
  CHECK(csv_header() == "check_id,d,n,R,potential,p,measured,bound,tolerance,verdict,seed,runtime_s\n");
  CHECK(csv_row(r) == "INTERP,2,16,4,harmonic,1;2,0.5,1,0.001,pass,1,0.250\n");
}

TEST_CASE("CLI") {
  SUBCASE("check INTERP --p 2 reports bound 1") {
    const auto r = cli("check INTERP --p 2 --d 1 --n 32 --trials 4");
    CHECK(r.status == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() >= 2);
    CHECK(ls[1].rfind("INTERP,1,32,4,harmonic,2,", 0) == 0);
    CHECK(ls[1].find(",1,0.001,pass,") != std::string::npos);
  }
  SUBCASE("field dump of a missing file names the path") {
    const auto r = cli("field dump missing.rzf");
    CHECK(r.status != 0);
    CHECK(r.out.find("missing.rzf") != std::string::npos);
  }
  SUBCASE("unknown flags print usage and fail") {
    const auto r = cli("verify --bogus");
    CHECK(r.status != 0);
  }
  SUBCASE("failing checks exit 1 and are listed") {
    const auto r = cli("check W_KERNEL --d 2 --n 8 --R 4");
    CHECK(r.status == 1);
    CHECK(r.out.find("failing checks: W_KERNEL") != std::string::npos);
  }
  SUBCASE("field dump and load round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "rzlab_cli_test";
    std::filesystem::create_directories(dir);
    const GridSpec g(2, 4, 1.0);
    const Field f = sample(g, [](const Point& x) { return 0.1 + x[0] * x[1]; });
    write_field(dir / "a.rzf", f);
    CHECK(cli("field dump " + (dir / "a.rzf").string() + " --out " + (dir / "a.csv").string()).status == 0);
    CHECK(cli("field load " + (dir / "a.csv").string() + " " + (dir / "b.rzf").string()).status == 0);
    CHECK(read_field(dir / "b.rzf").values() == f.values());
    std::filesystem::remove_all(dir);
  }
  SUBCASE("verify writes reproducible reports") {
    const auto dir = std::filesystem::temp_directory_path() / "rzlab_cli_verify";
    const std::string args = "verify --suite oracles --fk-paths 2000 --fk-slices 32 --out " + dir.string();
    const auto a = cli(args);
    const auto b = cli(args);
    CHECK(a.status == 0);
    CHECK(without_runtime(a.out) == without_runtime(b.out));
    CHECK(std::filesystem::exists(dir / "report.json"));
    const RunConfig c = config_from_file(dir / "config.json");
    CHECK(c.suite == "oracles");
    CHECK(c.fk_paths == 2000);
    std::filesystem::remove_all(dir);
  }
  SUBCASE("scan prints a tidy CSV") {
    const auto r = cli("scan CE2");
    CHECK(r.status == 0);
    const auto ls = lines(r.out);
    CHECK(ls.front() == "which,x,value");
    CHECK(ls.size() == 9);
  }
}
