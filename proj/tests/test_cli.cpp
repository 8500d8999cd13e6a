#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdd/bench.hpp"
#include "gdd/cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "gdd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = gdd::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::vector<std::string> kWorked{"--a1", "0.5", "--b1", "1", "--a2", "8.5", "--b2", "93"};

std::vector<std::string> with_worked(std::vector<std::string> head, std::vector<std::string> tail = {}) {
  head.insert(head.end(), kWorked.begin(), kWorked.end());
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("Laplace density") {
    const auto r = run({"pdf", "--a1", "1", "--b1", "1", "--a2", "1", "--b2", "1", "--x", "0"});
    CHECK(r.code == 0);
    CHECK(r.out == "0.5\n");
  }

  TEST_CASE("stats") {
    const auto r = run(with_worked({"stats"}));
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string key;
    double v = 0;
    std::map<std::string, double> got;
    while (in >> key >> v) got[key] = v;
    CHECK(std::round(got["mean"] * 100) == 41);
    CHECK(std::round(got["variance"] * 100) == 50);
    CHECK(std::round(got["skewness"] * 10) == 28);
    CHECK(std::round(got["kurtosis"]) == 15);
    CHECK(std::abs(got["mode"] + 0.062) < 5e-3);
    CHECK(std::abs(got["six_sigma_lo"] + 3.84) < 5e-3);
    CHECK(std::abs(got["six_sigma_hi"] - 4.66) < 5e-3);
  }

  TEST_CASE("grid csv matches the reference") {
    const auto r = run(with_worked({"grid"}, {"--lo", "-3", "--hi", "4", "--n", "200", "--method", "cf-de", "--eps", "1e-12",
                                              "--format", "csv"}));
    REQUIRE(r.code == 0);
    const auto ref = gdd::bench::build_reference(gdd::GDDParams(0.5, 1, 8.5, 93), gdd::bench::Grid{-3, 4, 200});
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,pdf,pdf_inf");
    int rows = 0;
    while (std::getline(in, line)) {
      const auto c1 = line.find(','), c2 = line.rfind(',');
      const double x = std::stod(line.substr(0, c1));
      const double v = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
      CHECK(x == ref.x[rows]);
      CHECK(std::abs(v - ref.value[rows]) < 1e-11);
      CHECK(line.substr(c2 + 1) == "0");
      ++rows;
    }
    CHECK(rows == 200);
  }

  TEST_CASE("output is deterministic and 17-digit") {
    const auto a = run(with_worked({"cdf"}, {"--x", "0.3", "--format", "json"}));
    const auto b = run(with_worked({"cdf"}, {"--x", "0.3", "--format", "json"}));
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["eps_r"].get<double>() == 1e-12);
    CHECK(a.out.find("9.9999999999999998e-13") != std::string::npos);
  }

  TEST_CASE("infinite density rendering") {
    const std::vector<std::string> p{"--a1", "0.5", "--b1", "1", "--a2", "0.3", "--b2", "1", "--x", "0"};
    std::vector<std::string> args{"pdf"};
    args.insert(args.end(), p.begin(), p.end());
    CHECK(run(args).out == "inf\n");
    auto csv = args;
    csv.insert(csv.end(), {"--format", "csv"});
    CHECK(run(csv).out == "x,pdf,pdf_inf\n0,,1\n");
    auto js = args;
    js.insert(js.end(), {"--format", "json"});
    const auto j = nlohmann::json::parse(run(js).out);
    CHECK(j["points"][0]["value"] == "Infinity");
  }

  TEST_CASE("exit codes") {
    CHECK(run({}).code == 1);
    CHECK(run({"pdf", "--a1", "-1", "--b1", "1", "--a2", "1", "--b2", "1", "--x", "0"}).code == 1);
    CHECK(run(with_worked({"pdf"}, {"--x", "0", "--method", "bogus"})).code == 1);
    CHECK(run(with_worked({"pdf"}, {"--x", "0", "--eps", "2"})).code == 1);
    CHECK(run(with_worked({"pdf"})).code == 1);  // missing --x
    CHECK(run(with_worked({"pdf"}, {"--x", "1e-4", "--method", "closed-2f0"})).code == 2);
    CHECK(run({"--help"}).code == 0);
  }

  TEST_CASE("mode and cdf methods") {
    const auto m = run(with_worked({"mode"}));
    CHECK(m.code == 0);
    CHECK(std::abs(std::stod(m.out) + 0.062) < 5e-3);
    const auto a = run(with_worked({"cdf"}, {"--x", "0", "--method", "cdf-integral-de"}));
    const auto b = run(with_worked({"cdf"}, {"--x", "0", "--method", "cdf:cf-de"}));
    CHECK(std::abs(std::stod(a.out) - std::stod(b.out)) < 1e-10);
  }

  TEST_CASE("bench and sweep reports") {
    const auto r = run(with_worked({"bench"}, {"--n", "20", "--runs", "2", "--format", "json"}));
    REQUIRE(r.code == 0);
    const auto rec = gdd::bench::record_from_json(r.out);
    CHECK(rec.spec.grid.n_points == 20);
    CHECK(rec.max_abs_error < 1e-13);

    const auto s = run(with_worked({"sweep"}, {"--n", "10", "--runs", "1", "--methods", "cf-de", "cdf:cf-de", "--eps-list",
                                              "1e-4", "1e-8", "--format", "csv"}));
    REQUIRE(s.code == 0);
    std::istringstream in(s.out);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) ++n;
    CHECK(n == 5);
  }
}
