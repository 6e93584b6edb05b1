#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dunklpot/cli.hpp"
#include "dunklpot/csv.hpp"
#include "dunklpot/grid_solver.hpp"

using namespace dunklpot;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dunklpot_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

const std::string model = std::string(DUNKLPOT_MODEL_DIR) + "/rank1.cfg";

}  // namespace

TEST_CASE("apply") {
  const Run r = run({"apply", "--model", "rank1.cfg", "--poly", "x1^2"});
  CHECK(r.code == 0);
  CHECK(r.out == "6\n");
  CHECK(run({"apply", "--model", model, "--poly", "x1^3", "--at", "0.5"}).out == "5\n");
  CHECK(run({"apply", "--model", "z2x2.cfg", "--poly", "x1*x2"}).out == "0\n");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"apply", "--poly", "x1"}).code == 2);
  const Run unknown = run({"frobnicate"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"apply", "--model", "/nonexistent.cfg", "--poly", "x1"}).code == 2);
  CHECK(run({"apply", "--model", model, "--poly", "x1 +"}).code == 2);
  CHECK(run({"heat", "--model", model, "--t", "-1", "--x", "0", "--y", "0"}).code == 2);
  CHECK(run({"heat", "--model", model, "--t", "1", "--x", "0,0", "--y", "0"}).code == 2);
  CHECK(run({"verify", "--suite", "nonsense"}).code == 2);
}

TEST_CASE("kernel commands") {
  CHECK(run({"green", "--model", model, "--x", "1", "--y", "0"}).out == "0.5\n");
  const Run h = run({"heat", "--model", model, "--t", "0.5", "--x", "1", "--y", "0.3"});
  CHECK(h.code == 0);
  CHECK(std::stod(h.out) > 0.0);
  CHECK(std::stod(run({"greenop", "--model", model, "--f", "indicator:-1,1", "--x", "0"}).out) ==
        doctest::Approx(0.5).epsilon(1e-8));
  CHECK(std::stod(run({"ek", "--model", model, "--x", "0", "--y", "3"}).out) == doctest::Approx(1.0));
  CHECK(std::stod(run({"mean", "--model", model, "--g", "poly:x1", "--x", "2", "--r", "0.5", "--h", "0.02"}).out) ==
        doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("check subcommands") {
  const auto report = scratch("harmonic.csv");
  const Run ok = run({"check", "harmonic", "--model", model, "--f", "poly:x1", "--domain", "interval:-3,3", "--at",
                      "0.5;-1", "--t", "0.5", "--out", report.string()});
  CHECK(ok.code == 0);
  CHECK(slurp(report).rfind("x1,t,deviation\n", 0) == 0);
  CHECK(run({"check", "harmonic", "--model", model, "--f", "poly:x1^2", "--domain", "interval:-3,3", "--at", "0.5",
             "--t", "0.5"})
            .code == 1);
  CHECK(run({"check", "minprinciple", "--model", model, "--f", "const:0", "--domain", "interval:-2,2", "--grid", "5"})
            .code == 0);
  CHECK(run({"check", "minprinciple", "--model", model, "--f", "const:-1", "--domain", "interval:-2,2", "--grid", "5"})
            .code == 1);
}

TEST_CASE("dirichlet and exits commands write CSV") {
  const auto grid = scratch("grid.csv");
  const Run fd = run({"dirichlet-fd", "--model", model, "--domain", "interval:-2,2", "--data", "poly:x1", "--h", "0.5",
                      "--out", grid.string()});
  CHECK(fd.code == 0);
  std::istringstream rows(slurp(grid));
  std::string line;
  std::getline(rows, line);
  CHECK(line == "x1,u");
  int count = 0;
  while (std::getline(rows, line)) {
    const auto comma = line.find(',');
    const double x = std::stod(line.substr(0, comma));
    CHECK(x == doctest::Approx(-1.5 + 0.5 * count));
    CHECK(std::abs(std::stod(line.substr(comma + 1)) - x) < 1e-12);
    ++count;
  }
  CHECK(count == 7);

  const auto e1 = scratch("exits1.csv");
  const auto e2 = scratch("exits2.csv");
  for (const auto& p : {e1, e2}) {
    CHECK(run({"exits", "--model", model, "--domain", "interval:0.5,1.5", "--x", "1.0", "--paths", "50", "--step",
               "1e-3", "--seed", "3", "--out", p.string()})
              .code == 0);
  }
  const std::string a = slurp(e1);
  CHECK(a.rfind("pathId,x1,exitTime,jumps\n", 0) == 0);
  CHECK(a == slurp(e2));

  const auto est = scratch("mc.csv");
  const Run mc = run({"dirichlet-mc", "--model", model, "--domain", "interval:-2,2", "--data", "const:3", "--query",
                      "0.5", "--paths", "20", "--step", "1e-3", "--out", est.string()});
  CHECK(mc.code == 0);
  CHECK(slurp(est) == "x1,u,stdError,n\n0.5,3,0,20\n");
  CHECK(run({"exits", "--model", model, "--domain", "interval:0.5,1.5", "--x", "1.0", "--paths", "5", "--out",
             "/nonexistent/dir/x.csv"})
            .code == 2);
}

TEST_CASE("verify") {
  const Run r = run({"verify", "--suite", "symbolic"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("PASS criterion 1", 0) == 0);
}

TEST_CASE("csv emission") {
  CsvTable empty;
  empty.header = {"a", "b"};
  CHECK(renderCsv(empty) == "a,b\n");
  CsvTable quoted;
  quoted.header = {"name", "value"};
  quoted.add({"x, y", "say \"hi\""});
  CHECK(renderCsv(quoted) == "name,value\n\"x, y\",\"say \"\"hi\"\"\"\n");
  CHECK(formatNumber(0.1) == "0.1");
  CHECK(formatNumber(-2.5e-7) == "-2.5e-07");
  CHECK(formatNumber(42L) == "42");
  CHECK_THROWS_AS(emitCsv(empty, "/nonexistent/dir/out.csv"), ConfigError);
  ExitRecord e;
  e.pathId = 3;
  e.exitPoint = Point::Constant(2, 0.5);
  e.exitTime = 0.25;
  e.jumps = 1;
  CHECK(renderCsv(exitCloudTable({e}, 2)) == "pathId,x1,x2,exitTime,jumps\n3,0.5,0.5,0.25,1\n");
  CHECK(exitCloudTable({}, 1).header.size() == 4);
}
