#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("magweyl_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Run run(const std::string& args) {
  fs::path o = scratch() / "stdout", e = scratch() / "stderr";
  std::string cmd = std::string(MAGWEYL_CLI_PATH) + " " + args + " >" + o.string() + " 2>" + e.string();
  int st = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.out = slurp(o);
  r.err = slurp(e);
  return r;
}

std::string write_config(const std::string& name, const std::string& text) {
  fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

bool single_line(const std::string& s) {
  return !s.empty() && s.find('\n') == s.size() - 1;
}

}  // namespace

TEST_CASE("verify exact suite passes and reports JSON") {
  Run r = run("verify --suite exact --seed 7");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["suite"] == "exact");
  CHECK(j["seed"] == 7);
  REQUIRE(j["checks"].size() > 50);
  for (const auto& c : j["checks"]) {
    CHECK(c["passed"] == true);
    CHECK(c["max_error"].get<double>() <= 1e-12);
  }
}

TEST_CASE("identical seed gives identical reports") {
  Run a = run("verify --suite exact --seed 11 --threads 1");
  Run b = run("verify --suite exact --seed 11 --threads 2");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  Run c = run("verify --suite exact --seed 12");
  CHECK(c.out != a.out);
}

TEST_CASE("quadrature suite with zero field has zero Stokes error") {
  std::string cfg = write_config("zero.json", R"({"field": {"constant": [[0, 0], [0, 0]]}})");
  Run r = run("verify --suite quadrature --config " + cfg);
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  for (const auto& c : j["checks"])
    if (c["name"].get<std::string>().rfind("stokes/nodes", 0) == 0) CHECK(c["max_error"].get<double>() == 0.0);
}

TEST_CASE("a tolerance nobody can meet is a check failure") {
  Run r = run("verify --suite quadrature --tol 1e-20");
  CHECK(r.code == 1);
}

TEST_CASE("config and usage errors exit 2 with one line") {
  std::string bad = write_config("bad.json", "{\"grid\": ");
  Run a = run("verify --config " + bad);
  CHECK(a.code == 2);
  CHECK(single_line(a.err));
  std::string unk = write_config("unknown.json", R"({"gird": {}})");
  Run b = run("verify --config " + unk);
  CHECK(b.code == 2);
  CHECK(b.err.find("gird") != std::string::npos);
  CHECK(single_line(b.err));
  CHECK(run("verify --config /nonexistent/cfg.json").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("verify --suite nope").code == 2);
  CHECK(run("butterfly --q-max 61").code == 2);
  std::string asym = write_config("asym.json", R"({"field": {"constant": [[0, 1], [1, 0]]}})");
  CHECK(run("verify --config " + asym).code == 2);
}

TEST_CASE("butterfly CSV contract") {
  Run one = run("butterfly --q-max 1 --samples 16");
  REQUIRE(one.code == 0);
  CHECK(one.out == "p,q,alpha,band_index,E_min,E_max\n0,1,0,0,-4,4\n");
  Run two = run("butterfly --q-max 2 --samples 16");
  REQUIRE(two.code == 0);
  std::istringstream in(two.out);
  std::string header, r0, r1, extra;
  std::getline(in, header);
  std::getline(in, r0);
  std::getline(in, r1);
  CHECK_FALSE(std::getline(in, extra));
  CHECK(r0.rfind("0,1,", 0) == 0);
  CHECK(r1.rfind("1,2,0.5,0,", 0) == 0);  // the two q = 2 bands touch and merge
  fs::path f1 = scratch() / "b1.csv", f2 = scratch() / "b2.csv";
  REQUIRE(run("butterfly --q-max 12 --samples 8 --threads 1 --out " + f1.string()).code == 0);
  REQUIRE(run("butterfly --q-max 12 --samples 8 --threads 3 --out " + f2.string()).code == 0);
  CHECK(slurp(f1) == slurp(f2));
  CHECK(run("butterfly --q-max 2 --out /nonexistent/dir/x.csv").code == 2);
}

TEST_CASE("quantize harmonic: binary format and ground state") {
  fs::path m = scratch() / "h.mgw";
  Run r = run("quantize harmonic --out " + m.string());
  REQUIRE(r.code == 0);
  std::string bytes = slurp(m);
  CHECK(bytes.size() == 64u * 64u * 16u + 12u);
  CHECK(bytes.substr(0, 4) == "MGW1");
  std::uint32_t rows = 0, cols = 0;
  for (int i = 3; i >= 0; --i) rows = rows << 8 | static_cast<unsigned char>(bytes[4 + i]);
  for (int i = 3; i >= 0; --i) cols = cols << 8 | static_cast<unsigned char>(bytes[8 + i]);
  CHECK(rows == 64);
  CHECK(cols == 64);
  auto spec = nlohmann::json::parse(slurp(m.string() + ".spectrum.json"));
  REQUIRE(spec.size() == 64);
  CHECK(std::abs(spec[0].get<double>() - 1.0) < 1e-4);
  CHECK(std::abs(spec[1].get<double>() - 3.0) < 1e-4);
}

TEST_CASE("quantize gaussian in a bump field is Hermitian") {
  std::string cfg = write_config("q2.json", R"({"grid": {"dimension": 2, "M": [10, 10], "L": [2.5, 2.5]},
    "field": {"constant": [[0, 1], [-1, 0]],
              "bumps": [{"center": [0.2, 0.1], "width": 0.7, "pair": [0, 1], "amplitude": 0.5}]}})");
  fs::path m = scratch() / "g.mgw";
  Run r = run("quantize gaussian --config " + cfg + " --out " + m.string());
  REQUIRE(r.code == 0);
  CHECK(slurp(m).size() == 100u * 100u * 16u + 12u);
  auto spec = nlohmann::json::parse(slurp(m.string() + ".spectrum.json"));
  REQUIRE(spec.size() == 100);
  for (const auto& v : spec) CHECK(v.is_number());  // real eigenvalues only
  CHECK(run("quantize gaussian --config " + cfg + " --out /nonexistent/dir/g.mgw").code == 2);
  CHECK(run("quantize sawtooth --out " + m.string()).code == 2);
  std::string big = write_config("big.json", R"({"grid": {"dimension": 2, "M": [80, 80], "L": [8, 8]}})");
  CHECK(run("quantize gaussian --config " + big + " --out " + m.string()).code == 2);
}

TEST_CASE("gauge demo on a small grid") {
  const std::string grid = R"("grid": {"dimension": 2, "M": [16, 16], "L": [4, 4]},
    "field": {"constant": [[0, 0.25], [-0.25, 0]],
              "bumps": [{"center": [0.5, -0.5], "width": 1.0, "pair": [0, 1], "amplitude": 0.6}]})";
  SUBCASE("rho = 0") {
    Run r = run("gauge-demo --config " + write_config("g0.json", "{" + grid + R"(, "gauge": {}})"));
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["magnetic_defect"].get<double>() == 0.0);
    CHECK(j["naive_defect"].get<double>() == 0.0);
  }
  SUBCASE("nonlinear rho separates the prescriptions") {
    Run r = run("gauge-demo --config " +
                write_config("g1.json", "{" + grid + R"(, "gauge": {"waves": [{"amplitude": 0.5, "k": [1, 0], "phase": 0}]}})"));
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["regime"] == "nonpolynomial");
    CHECK(j["magnetic_defect"].get<double>() <= 1e-8);
    CHECK(j["naive_defect"].get<double>() > 1e-3);
  }
}
