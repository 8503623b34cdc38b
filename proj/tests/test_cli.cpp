#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "commands.hpp"

namespace fs = std::filesystem;
using ctxgeom::cli::run;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("ctxgeom_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

// data rows, skipping '#' metadata and the header
std::vector<std::vector<std::string>> rows(const fs::path& p, std::string* header = nullptr) {
  std::vector<std::vector<std::string>> out;
  bool seen_header = false;
  for (const auto& line : lines(p)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      seen_header = true;
      if (header) *header = line;
      continue;
    }
    out.push_back(split(line));
  }
  return out;
}

nlohmann::json load_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("kcbs command") {
  TempDir dir("kcbs");
  const auto r = invoke({"kcbs", "--out", dir.path.string()});
  REQUIRE(r.code == 0);
  for (const char* f : {"kcbs_summary.json", "fig1.csv", "fig2a.csv", "fig2b.csv"}) CHECK(fs::exists(dir.path / f));

  const auto fig1 = lines(dir.path / "fig1.csv");
  REQUIRE(fig1.size() >= 3);
  CHECK(fig1[0] == "# p_star=0.585410");
  CHECK(fig1[1] == "# s2_total_bits=2.726565");
  std::string header;
  const auto data = rows(dir.path / "fig1.csv", &header);
  CHECK(header == "p,chi,cf,bc_max_bits");
  REQUIRE(data.size() == 7);
  const std::array<double, 7> table{-2.0000, -1.8898, -1.7242, -1.6529, -1.4907, -1.3094, -1.1667};
  for (std::size_t k = 0; k < 7; ++k) CHECK(std::abs(std::stod(data[k][3]) - table[k]) < 5e-4);
  CHECK(data[3][0] == "0.585410");
  CHECK(std::stod(data[3][1]) == doctest::Approx(-3.0).epsilon(1e-6));

  rows(dir.path / "fig2a.csv", &header);
  CHECK(header == "s,D_total");
  CHECK(rows(dir.path / "fig2a.csv").size() == 91);
  const auto fig2b = rows(dir.path / "fig2b.csv", &header);
  CHECK(header == "state,D_total");
  REQUIRE(fig2b.size() == 6);
  CHECK(fig2b[0][0] == "mixed3");
  CHECK(fig2b[0][1] == "0.000000");
  CHECK(fig2b[3][0] == "+1z");
  CHECK(std::abs(std::stod(fig2b[3][1]) - 6.4984) < 1e-3);

  const auto j = load_json(dir.path / "kcbs_summary.json");
  CHECK(j["configuration"]["s2_total_bits"].get<double>() == 2.726565);
  CHECK(j["exactness"]["duplicate_count"].get<int>() == 5);
}

TEST_CASE("kcbs with a custom grid") {
  TempDir dir("grid");
  REQUIRE(invoke({"kcbs", "--out", dir.path.string(), "--p", "0.2", "--p", "0.8"}).code == 0);
  CHECK(rows(dir.path / "fig1.csv").size() == 2);
  CHECK(invoke({"kcbs", "--out", dir.path.string(), "--p", "1.5"}).code == 3);
}

TEST_CASE("chsh command") {
  TempDir dir("chsh");
  REQUIRE(invoke({"chsh", "--regime", "bell", "--out", dir.path.string()}).code == 0);
  auto j = load_json(dir.path / "chsh_summary.json");
  CHECK(j["witnesses"]["chi"].get<double>() == 2.828427);
  CHECK(j["witnesses"]["cf"].get<double>() == 0.414214);
  for (const auto& ctx : j["configuration"]["contexts"]) CHECK(ctx["saturated"].get<bool>());
  CHECK(j["configuration"]["s2_total_bits"].get<double>() == 4.0);

  REQUIRE(invoke({"chsh", "--regime", "entropic", "--out", dir.path.string()}).code == 0);
  j = load_json(dir.path / "chsh_summary.json");
  CHECK(std::abs(j["witnesses"]["bc_bits"][0].get<double>() - 0.2309) < 5e-4);
  CHECK(j["witnesses"]["cf"].get<double>() == 0.0);
  for (const auto& ctx : j["configuration"]["contexts"]) CHECK_FALSE(ctx["saturated"].get<bool>());

  REQUIRE(invoke({"chsh", "--angles", "0", "0", "0", "0", "--out", dir.path.string()}).code == 0);
  j = load_json(dir.path / "chsh_summary.json");
  CHECK(j["regime"] == "custom");
  CHECK(j["witnesses"]["chi"].get<double>() == 2.0);
  CHECK(j["witnesses"]["cf"].get<double>() == 0.0);

  CHECK(invoke({"chsh", "--regime", "quantum", "--out", dir.path.string()}).code == 3);
  CHECK(invoke({"chsh", "--angles", "0", "1", "--out", dir.path.string()}).code == 3);
}

TEST_CASE("ncycle command") {
  TempDir dir("ncycle");
  REQUIRE(invoke({"ncycle", "--out", dir.path.string()}).code == 0);
  std::string header;
  const auto data = rows(dir.path / "ncycle.csv", &header);
  CHECK(header == "n,theta_deg,E,S2_per_context,S2_total,n2_S2_per_context");
  REQUIRE(data.size() == 6);
  CHECK(data[0][0] == "5");
  CHECK(std::abs(std::stod(data[0][5]) - 13.6328) < 5e-4);
  CHECK(std::abs(std::stod(data[5][4]) - 2.3825) < 5e-4);

  const auto r = invoke({"ncycle", "--n", "6", "--out", dir.path.string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("odd") != std::string::npos);
  CHECK(invoke({"ncycle", "--n", "3", "--out", dir.path.string()}).code == 3);
}

TEST_CASE("verify command") {
  TempDir dir("verify");
  REQUIRE(invoke({"verify", "--trials", "1", "--seed", "0", "--out", dir.path.string()}).code == 0);
  const auto j = load_json(dir.path / "verify.json");
  CHECK(j["monotonicity"]["trials"].get<int>() == 1);
  CHECK(j["monotonicity"]["violations"].get<int>() == 0);
  CHECK(j["exactness"]["kcbs"]["mechanism"] == "cyclic-orthogonality");
  CHECK(j["exactness"]["chsh_bell"]["total_ordered_pairs"].get<int>() == 64);
  CHECK(invoke({"verify", "--trials", "0", "--out", dir.path.string()}).code == 3);
}

TEST_CASE("csv summaries") {
  TempDir dir("csv");
  REQUIRE(invoke({"--format", "csv", "chsh", "--out", dir.path.string()}).code == 0);
  const auto l = lines(dir.path / "chsh_summary.csv");
  REQUIRE(!l.empty());
  CHECK(l[0] == "key,value");
  bool found = false;
  for (const auto& line : l) found = found || line == "witnesses.chi,2.828427";
  CHECK(found);
}

TEST_CASE("precision") {
  TempDir dir("prec");
  REQUIRE(invoke({"--precision", "10", "chsh", "--out", dir.path.string()}).code == 0);
  CHECK(load_json(dir.path / "chsh_summary.json")["witnesses"]["chi"].get<double>() == 2.8284271247);
  CHECK(invoke({"--precision", "3", "chsh", "--out", dir.path.string()}).code == 3);
}

TEST_CASE("reruns are byte-identical") {
  TempDir a("rerun_a");
  TempDir b("rerun_b");
  REQUIRE(invoke({"kcbs", "--out", a.path.string()}).code == 0);
  REQUIRE(invoke({"kcbs", "--out", b.path.string()}).code == 0);
  for (const char* f : {"kcbs_summary.json", "fig1.csv", "fig2a.csv", "fig2b.csv"})
    CHECK(slurp(a.path / f) == slurp(b.path / f));
  REQUIRE(invoke({"verify", "--trials", "50", "--threads", "3", "--out", a.path.string()}).code == 0);
  REQUIRE(invoke({"verify", "--trials", "50", "--out", b.path.string()}).code == 0);
  CHECK(slurp(a.path / "verify.json") == slurp(b.path / "verify.json"));
}

TEST_CASE("output directory resolution") {
  TempDir env_dir("env");
  TempDir flag_dir("flag");
  ::setenv(ctxgeom::cli::kOutputDirEnv, env_dir.path.string().c_str(), 1);
  REQUIRE(invoke({"chsh"}).code == 0);
  CHECK(fs::exists(env_dir.path / "chsh_summary.json"));
  REQUIRE(invoke({"chsh", "--out", flag_dir.path.string()}).code == 0);
  CHECK(fs::exists(flag_dir.path / "chsh_summary.json"));
  ::unsetenv(ctxgeom::cli::kOutputDirEnv);
}

TEST_CASE("unwritable output gives exit code 2") {
  TempDir dir("io");
  const fs::path blocker = dir.path / "file";
  std::ofstream(blocker) << "x";
  const auto r = invoke({"kcbs", "--out", (blocker / "sub").string()});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("argument errors give exit code 3") {
  CHECK(invoke({}).code == 3);
  CHECK(invoke({"bogus"}).code == 3);
  CHECK(invoke({"--format", "xml", "kcbs"}).code == 3);
  CHECK(invoke({"--help"}).code == 0);
}
