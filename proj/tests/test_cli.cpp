#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "febb_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs the CLI with stdout and stderr captured; returns the exit status.
int run(const std::string& args, std::string* out = nullptr, std::string* err = nullptr) {
  const auto o = scratch("stdout.txt"), e = scratch("stderr.txt");
  const std::string cmd = std::string("\"") + FEBB_CLI_PATH + "\" " + args + " > \"" +
                          o.string() + "\" 2> \"" + e.string() + "\"";
  const int status = std::system(cmd.c_str());
  if (out) *out = slurp(o);
  if (err) *err = slurp(e);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("solve prints the benchmark profile") {
  std::string out;
  REQUIRE(run("solve", &out) == 0);
  const auto rows = lines(out);
  REQUIRE(rows.size() == 1002);
  CHECK(rows[0] == "x_m,w_m,kappa,M2_Nm,F3_N,sigma_top_Pa");
  CHECK(rows[1].rfind("0.0000000000000000e+00,0.0000000000000000e+00,", 0) == 0);
  double x = 0, w = 0;
  REQUIRE(std::sscanf(rows.back().c_str(), "%lf,%lf", &x, &w) == 2);
  CHECK(x == 1.0);
  CHECK(w == doctest::Approx(-40000.0).epsilon(0.005));
  REQUIRE(std::sscanf(rows[2].c_str(), "%lf,%lf", &x, &w) == 2);
  CHECK(x == doctest::Approx(0.001));
  CHECK(w < 0.0);
}

TEST_CASE("output file and byte-identical reruns") {
  const auto a = scratch("a.csv"), b = scratch("b.csv");
  std::string out;
  REQUIRE(run("solve --alpha 0.8 --ell 0.05 --m 50 --out \"" + a.string() + "\"", &out) == 0);
  CHECK(out.empty());
  REQUIRE(run("solve --alpha 0.8 --ell 0.05 --m 50 --out \"" + b.string() + "\"") == 0);
  CHECK(!slurp(a).empty());
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("config file with flag override") {
  const auto cfg = scratch("c.cfg");
  std::ofstream(cfg) << "alpha = 0.5\nell = 0.06\nm = 15\nlevels = 3\n";
  std::string from_file, overridden;
  REQUIRE(run("convergence --config \"" + cfg.string() + "\"", &from_file) == 0);
  CHECK(lines(from_file).size() == 4);
  REQUIRE(run("convergence --config \"" + cfg.string() + "\" --alpha 1", &overridden) == 0);
  CHECK(from_file != overridden);
  std::string direct;
  REQUIRE(run("convergence --alpha 1 --ell 0.06 --m 15 --levels 3", &direct) == 0);
  CHECK(direct == overridden);
}

TEST_CASE("configuration and data errors exit with 2") {
  std::string err;
  CHECK(run("") == 2);
  CHECK(run("plot") == 2);
  CHECK(run("solve --bogus 1") == 2);
  CHECK(run("solve --alpha abc", nullptr, &err) == 2);
  CHECK(err.find("alpha") != std::string::npos);
  CHECK(run("solve --alpha 1.5") == 2);
  CHECK(run("solve --ell 0.07 --m 3") == 2);
  CHECK(run("convergence --m 15,30,45") == 2);
  CHECK(run("identify") == 2);
  CHECK(run("identify --data /nonexistent/file.csv") == 2);
  const auto bad = scratch("bad.csv");
  std::ofstream(bad) << "L_um,W_um,T_um,E_nl_GPa\n100,82,8.4,9.1\n120,82,oops,9.0\n";
  CHECK(run("identify --data \"" + bad.string() + "\"", nullptr, &err) == 2);
  CHECK(err.find("row 2, column 3") != std::string::npos);
  CHECK(run("solve --config /nonexistent/run.cfg") == 2);
}

TEST_CASE("numerical failure exits with 3") {
  std::string err;
  CHECK(run("solve --E 1e-320", nullptr, &err) == 3);
  CHECK(err.find("numerical failure") != std::string::npos);
}

TEST_CASE("identify writes the report and a summary") {
  const auto data = scratch("exp.csv");
  std::ofstream(data) << "L_um,W_um,T_um,E_nl_GPa\n"
                         "600,82,8.4,6.5\n800,82,8.4,6.7\n1000,82,8.4,6.8\n";
  const auto report = scratch("fit.csv");
  std::string out;
  REQUIRE(run("identify --data \"" + data.string() + "\" --alpha 0.8,1 --ell 6e-5 --out \"" +
                  report.string() + "\"",
              &out) == 0);
  CHECK(out.find("E_GPa = ") != std::string::npos);
  const auto rows = lines(slurp(report));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].rfind("group,W_um", 0) == 0);
}
