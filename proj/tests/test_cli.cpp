#include <doctest.h>

#include <json.hpp>

#include "cli_harness.hpp"
#include "sst/core.hpp"
#include "sst/matrix_io.hpp"

using namespace sst;
using namespace sst::testing;
using nlohmann::json;

TEST_SUITE("cli") {

TEST_CASE("generate, sample, project and estimate") {
  const auto dir = scratch_dir("cli_basic");
  const std::string m = (dir / "m.csv").string(), y = (dir / "y.csv").string();

  auto g = run_cli({"generate", "--n", "6", "--sizes", "3,2,1", "--seed", "7", "--out", m});
  REQUIRE(g.code == 0);
  const auto summary = json::parse(g.out);
  CHECK(summary["kmax"] == 3);
  CHECK(g.out.find('\n') == g.out.size() - 1);
  const auto gm = validate_comparison(read_matrix_csv(m), 0.0);
  CHECK(indifference_partition(gm, 1e-9).sizes() == std::vector<int>{3, 2, 1});

  REQUIRE(run_cli({"sample", "--in", m, "--seed", "3", "--out", y}).code == 0);
  const auto obs = ObservationMatrix::from_real(read_matrix_csv(y));
  CHECK(obs.size() == 6);

  const std::string p = (dir / "p.csv").string();
  auto pr = run_cli({"project", "--in", y, "--order", "5,4,3,2,1,0", "--out", p});
  REQUIRE(pr.code == 0);
  CHECK(is_pi_sst(validate_comparison(read_matrix_csv(p), 1e-9),
                  Ranking::from_order({5, 4, 3, 2, 1, 0}), 1e-7));

  for (const std::string method : {"crl", "lse", "reg", "trivial"}) {
    const std::string e = (dir / ("e_" + method + ".csv")).string();
    const auto r = run_cli({"estimate", "--method", method, "--in", y, "--out", e});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j.contains("objective"));
    CHECK(j.contains("converged"));
    CHECK(j.contains("kmax"));
    CHECK(j.contains("iterations"));
    validate_comparison(read_matrix_csv(e), 1e-7);
  }
  const std::string rep = (dir / "report.json").string();
  auto o = run_cli({"estimate", "--method", "oracle", "--labels", "0,1,0,1,2,1", "--in", y,
                    "--out", (dir / "o.csv").string(), "--report", rep});
  REQUIRE(o.code == 0);
  CHECK(json::parse(slurp(rep))["method"] == "oracle");
}

TEST_CASE("demo-lse-failure respects the (n-1)/4 floor") {
  const auto r = run_cli({"demo-lse-failure", "--n", "5", "--trials", "50", "--seed", "1"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["min_distance"].get<double>() >= 1.0);
  CHECK(j["all_hold"] == true);
  CHECK(j["max_pythagorean_residual"].get<double>() <= 1e-6);
}

TEST_CASE("risk and adaptivity outputs") {
  const auto dir = scratch_dir("cli_risk");
  const std::string out = (dir / "r.csv").string();
  auto r = run_cli({"risk", "--n", "8", "--sizes", "4,4", "--method", "crl", "--trials",
                    "10", "--seed", "4", "--out", out});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["trials"] == 10);
  std::istringstream lines(slurp(out));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 11);

  const std::string prof = (dir / "prof.csv").string();
  auto a = run_cli({"adaptivity", "--n", "12", "--method", "trivial", "--kmax-grid",
                    "1,6,11", "--trials", "5", "--seed", "3", "--out", prof});
  REQUIRE(a.code == 0);
  CHECK(json::parse(a.out)["rows"].size() == 3);
}

TEST_CASE("error categories and exit codes") {
  auto missing = run_cli({"estimate", "--in", "/nonexistent/y.csv", "--out", "/tmp/x.csv"});
  CHECK(missing.code == 3);
  CHECK(json::parse(missing.err)["error"] == "IoError");

  auto usage = run_cli({"estimate", "--bogus"});
  CHECK(usage.code == 2);
  CHECK(json::parse(usage.err)["error"] == "UsageError");

  auto nosub = run_cli({});
  CHECK(nosub.code == 2);

  const auto dir = scratch_dir("cli_err");
  const std::string y = (dir / "y.csv").string();
  {
    std::ofstream f(y);
    f << "0,1,1\n0,0,1\n0,0,1\n";
  }
  auto big = run_cli({"estimate", "--method", "lse", "--lse-n-limit", "2", "--in", y, "--out",
                      (dir / "e.csv").string()});
  CHECK(big.code == 4);
  CHECK(json::parse(big.err)["error"] == "TooLarge");

  auto bad_method = run_cli({"estimate", "--method", "nope", "--in", y, "--out",
                             (dir / "e.csv").string()});
  CHECK(bad_method.code == 2);

  auto help = run_cli({"adaptivity", "--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("[1,16,32,48,63]") != std::string::npos);
}

TEST_CASE("config file values apply and flags win") {
  const auto dir = scratch_dir("cli_config");
  const std::string m = (dir / "m.csv").string();
  const std::string cfg = (dir / "c.toml").string();
  {
    std::ofstream f(cfg);
    f << "[generate]\nn = 5\nsizes = \"3,2\"\nseed = 11\nout = \"" << m << "\"\n";
  }
  auto a = run_cli({"--config", cfg, "generate"});
  REQUIRE(a.code == 0);
  CHECK(json::parse(a.out)["sizes"] == json::array({3, 2}));
  auto b = run_cli({"--config", cfg, "generate", "--sizes", "4,1"});
  REQUIRE(b.code == 0);
  CHECK(json::parse(b.out)["sizes"] == json::array({4, 1}));
}

}  // TEST_SUITE
