#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

// Runs the binary with stderr folded into the captured stream.
RunResult run(const std::string& args) {
  const std::string cmd = std::string(PSIFRAC_CLI_PATH) + " " + args + " 2>&1";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

// Parses one CSV data row into {x, value, err_est}.
std::vector<double> row(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

size_t count(const std::string& text, const std::string& needle) {
  size_t n = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("eval --op bogus --alpha 0.5 --psi identity --a 0 --b 1 "
            "--f 1 --x 1")
            .code == 2);
  CHECK(run("eval --op integral --psi identity --a 0 --b 1 --f 1 --x 1")
            .code == 2);  // missing alpha
  CHECK(run("eval --op integral --alpha 0.5 --psi identity --a 0 --b 1 "
            "--f 1 --x 1 --grid 4")
            .code == 2);  // x and grid together
  CHECK(run("eval --op integral --alpha 0.5 --psi identity --a 0 --b 1 "
            "--f 1 --grid 1")
            .code == 2);  // grid too small
  CHECK(run("eval --op integral --alpha 0.5 --psi identity --a 1 --b 0 "
            "--f 1 --x 0.5")
            .code == 2);  // a >= b
  CHECK(run("eval --op rl --alpha 0.5 --beta 0.5 --psi identity --a 0 --b 1 "
            "--f 1 --x 0.5")
            .code == 2);  // beta only applies to hilfer
  CHECK(run("eval --op integral --alpha 0.5 --psi identity --a 0 --b 1 "
            "--f 1 --x 0.5 --format xml")
            .code == 2);
  CHECK(run("eval --op integral --alpha 0.5 --psi identity --a 0 --b 1 "
            "--f \"1 +\" --x 0.5")
            .code == 2);  // unparseable expression
  CHECK(run("eval --op integral --alpha 0.5 --psi identity --a 0 --b 1 "
            "--f 1 --x 0.5 --bogus 3")
            .code == 2);
  CHECK(run("verify --suite bogus").code == 2);
  CHECK(run("catalog --name bogus --alpha 0.5 --a 0 --b 1 --f 1 --x 0.5")
            .code == 2);
  CHECK(run("catalog --name erdelyi_kober --alpha 0.5 --a 0 --b 1 --f 1 "
            "--x 0.5")
            .code == 2);  // missing required sigma/eta
  const auto r = run("eval --op integral --alpha -1 --psi identity --a 0 "
                     "--b 1 --f 1 --x 0.5");
  CHECK(r.code == 2);
  CHECK(r.out.find("error:") != std::string::npos);
}

TEST_CASE("numeric failures exit 3") {
  // log transform needs a positive interval; caught during evaluation setup
  CHECK(run("eval --op integral --alpha 0.5 --psi log --a -1 --b 1 "
            "--f 1 --x 0.5")
            .code == 3);
}

TEST_CASE("point evaluations match the known values") {
  {
    const auto r = run("eval --op integral --alpha 0.5 --psi identity "
                       "--a 0 --b 1 --f \"1\" --x 1");
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == "x,value,err_est");
    const auto v = row(ls[1]);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == doctest::Approx(1.1283791670955126).epsilon(1e-6));
  }
  {
    const auto r = run("eval --op hilfer --alpha 0.5 --beta 1 --psi identity "
                       "--a 0 --b 1 --f \"1\" --x 0.7");
    REQUIRE(r.code == 0);
    CHECK(std::fabs(row(lines(r.out)[1])[1]) <= 1e-8);
  }
  {
    const auto r = run("eval --op rl --alpha 0.5 --psi identity "
                       "--a 0 --b 4 --f \"1\" --x 4");
    REQUIRE(r.code == 0);
    CHECK(row(lines(r.out)[1])[1] ==
          doctest::Approx(0.2820947917738781).epsilon(1e-7));
  }
}

TEST_CASE("grid is uniform over (a, b], exclusive at a") {
  const auto r = run("eval --op integral --alpha 0.5 --psi identity "
                     "--a 0.5 --b 1 --f \"x\" --grid 5");
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 6);
  CHECK(ls[0] == "x,value,err_est");
  for (int i = 1; i <= 5; ++i) {
    const auto v = row(ls[i]);
    CHECK(v[0] == doctest::Approx(0.5 + 0.5 * i / 5).epsilon(1e-15));
  }
  CHECK(row(ls[1])[0] > 0.5);       // a itself excluded
  CHECK(row(ls[5])[0] == 1.0);      // b included
}

TEST_CASE("json output carries inputs and one result per point") {
  const auto r = run("eval --op integral --alpha 0.5 --psi identity "
                     "--a 0 --b 1 --f \"x^2\" --grid 3 --format json");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"inputs\"") != std::string::npos);
  CHECK(r.out.find("\"results\"") != std::string::npos);
  CHECK(r.out.find("\"f\": \"x^2\"") != std::string::npos);
  CHECK(r.out.find("\"alpha\": 0.5") != std::string::npos);
  CHECK(count(r.out, "\"err_est\"") == 3);
}

TEST_CASE("identical invocations produce byte-identical files") {
  const std::string job =
      "eval --op hilfer --alpha 0.7 --beta 0.5 --psi pow:2 --a 0 --b 1.5 "
      "--f \"sin(x) + 1\" --grid 4 --out ";
  REQUIRE(run(job + "/tmp/psifrac_cli_a.csv").code == 0);
  REQUIRE(run(job + "/tmp/psifrac_cli_b.csv").code == 0);
  const std::string a = slurp("/tmp/psifrac_cli_a.csv");
  CHECK(a == slurp("/tmp/psifrac_cli_b.csv"));
  CHECK(lines(a).size() == 5);
  std::remove("/tmp/psifrac_cli_a.csv");
  std::remove("/tmp/psifrac_cli_b.csv");
}

TEST_CASE("catalog command lists and evaluates") {
  {
    const auto r = run("catalog --list");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("riemann_liouville") != std::string::npos);
    CHECK(r.out.find("prabhakar") != std::string::npos);
    CHECK(r.out.find("hilfer_katugampola") != std::string::npos);
    CHECK(lines(r.out).size() == 36);
  }
  {
    // katugampola at rho = 1 is the plain integral
    const auto direct = run("eval --op integral --alpha 0.6 --psi identity "
                            "--a 0 --b 1 --f \"x^2 + 1\" --x 0.8");
    const auto preset = run("catalog --name katugampola --kind integral "
                            "--param rho=1 --alpha 0.6 --a 0 --b 1 "
                            "--f \"x^2 + 1\" --x 0.8");
    REQUIRE(direct.code == 0);
    REQUIRE(preset.code == 0);
    CHECK(row(lines(preset.out)[1])[1] ==
          doctest::Approx(row(lines(direct.out)[1])[1]).epsilon(1e-12));
  }
}

TEST_CASE("verify command reports cases and exit status") {
  const auto r = run("verify --suite power --tol 1e-6");
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  CHECK(ls.size() == 31);  // 30 cases + suite summary
  for (const auto& l : ls) CHECK(l.compare(0, 4, "pass") == 0);
  CHECK(r.out.find("error=") != std::string::npos);
  CHECK(r.out.find("tol=") != std::string::npos);
}

TEST_CASE("converge reports the observed order") {
  const auto r = run("converge --op integral --alpha 0.5 --psi identity "
                     "--a 0 --b 1 --f \"exp(x)\" --x 0.9");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("nodes=") != std::string::npos);
  const auto pos = r.out.find("order[0->2]=");
  REQUIRE(pos != std::string::npos);
  const double order = std::stod(r.out.substr(pos + 12));
  CHECK(order >= 1.9);
}

TEST_CASE("list summarizes the surface") {
  const auto r = run("list");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("eval") != std::string::npos);
  CHECK(r.out.find("identity log pow:<rho> expr:<text>") != std::string::npos);
  CHECK(r.out.find("semigroup") != std::string::npos);
}
