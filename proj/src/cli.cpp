#include "dunklpot/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "dunklpot/acceptance.hpp"
#include "dunklpot/csv.hpp"
#include "dunklpot/field.hpp"
#include "dunklpot/grid_solver.hpp"
#include "dunklpot/intertwine.hpp"
#include "dunklpot/kernels.hpp"
#include "dunklpot/means.hpp"
#include "dunklpot/monte_carlo.hpp"
#include "dunklpot/operator.hpp"

#ifndef DUNKLPOT_MODEL_DIR
#define DUNKLPOT_MODEL_DIR "models"
#endif

namespace dunklpot {

namespace {

// A bare file name that does not exist is looked up in the bundled models directory.
DunklModel openModel(const std::string& path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path) && fs::path(path).parent_path().empty()) {
    const fs::path bundled = fs::path(DUNKLPOT_MODEL_DIR) / path;
    if (fs::exists(bundled)) return loadModel(bundled.string());
  }
  return loadModel(path);
}

Point parsePoint(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad coordinate '" + item + "' in point '" + text + "'");
    }
  }
  if (v.empty()) throw ConfigError("empty point");
  return Eigen::Map<Point>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<Point> parsePoints(const std::vector<std::string>& texts) {
  std::vector<Point> out;
  for (const auto& t : texts) {
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ';')) out.push_back(parsePoint(item));
  }
  return out;
}

Point pointFor(const DunklModel& m, const std::string& text, const char* what) {
  const Point p = parsePoint(text);
  if (p.size() != m.dim()) {
    throw ConfigError(std::string(what) + " has " + std::to_string(p.size()) + " coordinates, model has dimension " +
                      std::to_string(m.dim()));
  }
  return p;
}

std::string coords(const Point& p) {
  std::string s;
  for (Eigen::Index i = 0; i < p.size(); ++i) s += (i ? "," : "") + formatNumber(p(i));
  return s;
}

std::vector<std::string> coordHeader(int d) {
  std::vector<std::string> h;
  for (int i = 1; i <= d; ++i) h.push_back("x" + std::to_string(i));
  return h;
}

// Interior grid of omega: n points per axis across its bounding box.
std::vector<Point> interiorGrid(const Domain& omega, int n) {
  const auto [lo, hi] = omega.boundingBox();
  const int d = omega.dim();
  std::vector<Point> out;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    Point p(d);
    for (int i = 0; i < d; ++i) p(i) = lo(i) + (hi(i) - lo(i)) * (idx[static_cast<std::size_t>(i)] + 1) / (n + 1);
    if (omega.contains(p)) out.push_back(p);
    int i = 0;
    while (i < d && ++idx[static_cast<std::size_t>(i)] == n) idx[static_cast<std::size_t>(i++)] = 0;
    if (i == d) break;
  }
  return out;
}

struct Options {
  std::string model;
  std::string poly;
  std::string at;
  std::string x;
  std::string y;
  double t = 0.0;
  double r = 0.0;
  double h = 0.0;
  std::string field;
  std::string domain;
  std::vector<std::string> queries;
  std::string out;
  std::string suite = "all";
  long paths = 100000;
  double step = 1e-4;
  double eps = 1e-4;
  std::uint64_t seed = 42;
  int grid = 21;
  double boundaryTol = 1e-6;
  double tol = kMeansTol;
};

void addMc(CLI::App* sub, Options& o) {
  sub->add_option("--paths", o.paths, "Number of paths")->check(CLI::PositiveNumber);
  sub->add_option("--step", o.step, "Time step delta")->check(CLI::PositiveNumber);
  sub->add_option("--eps", o.eps, "Taming floor for <alpha, x>")->check(CLI::PositiveNumber);
  sub->add_option("--seed", o.seed, "Random seed");
}

McConfig mcConfig(const Options& o) {
  McConfig cfg;
  cfg.paths = o.paths;
  cfg.step = o.step;
  cfg.eps = o.eps;
  cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical potential theory for Dunkl Laplacians", "dunklpot"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print help");  // -h is not free: --h is a spacing
  Options o;
  std::function<int()> action;

  auto model = [&](CLI::App* sub) { sub->add_option("--model", o.model, "Model config file")->required(); };

  auto* apply = app.add_subcommand("apply", "Dunkl Laplacian of a polynomial (exact), or its value at a point");
  model(apply);
  apply->add_option("--poly", o.poly, "Polynomial in x1..xd")->required();
  apply->add_option("--at", o.at, "Evaluation point a,b,...");
  apply->callback([&] {
    action = [&] {
      const DunklModel m = openModel(o.model);
      const RationalPoly result = dunklLaplacianPoly(m, parsePoly(o.poly, m.dim()));
      if (o.at.empty()) {
        out << formatPoly(result) << "\n";
      } else {
        out << formatNumber(result.cast<double>().evaluate(pointFor(m, o.at, "--at"))) << "\n";
      }
      return 0;
    };
  });

  auto* ek = app.add_subcommand("ek", "Dunkl kernel E_k(x, y)");
  model(ek);
  ek->add_option("--x", o.x)->required();
  ek->add_option("--y", o.y)->required();
  ek->callback([&] {
    action = [&] {
      const DunklModel m = openModel(o.model);
      out << formatNumber(dunklKernel(m, pointFor(m, o.x, "--x"), pointFor(m, o.y, "--y"))) << "\n";
      return 0;
    };
  });

  auto* heat = app.add_subcommand("heat", "Heat kernel p_t(x, y)");
  model(heat);
  heat->add_option("--t", o.t)->required()->check(CLI::PositiveNumber);
  heat->add_option("--x", o.x)->required();
  heat->add_option("--y", o.y)->required();
  heat->callback([&] {
    action = [&] {
      const KernelContext ctx(openModel(o.model));
      out << formatNumber(heatKernel(ctx, o.t, pointFor(ctx.model(), o.x, "--x"), pointFor(ctx.model(), o.y, "--y")))
          << "\n";
      return 0;
    };
  });

  auto* green = app.add_subcommand("green", "Green kernel G(x, y)");
  model(green);
  green->add_option("--x", o.x)->required();
  green->add_option("--y", o.y)->required();
  green->callback([&] {
    action = [&] {
      const KernelContext ctx(openModel(o.model));
      out << formatNumber(greenFunction(ctx, pointFor(ctx.model(), o.x, "--x"), pointFor(ctx.model(), o.y, "--y")))
          << "\n";
      return 0;
    };
  });

  auto* greenop = app.add_subcommand("greenop", "Green potential G f(x)");
  model(greenop);
  greenop->add_option("--f", o.field, "Field: const:c, indicator:a,b, bump:c,rho, poly:<expr>")->required();
  greenop->add_option("--x", o.x)->required();
  greenop->callback([&] {
    action = [&] {
      const KernelContext ctx(openModel(o.model));
      const Field f = parseField(o.field, ctx.model().dim());
      out << formatNumber(greenApply(ctx, f, pointFor(ctx.model(), o.x, "--x"))) << "\n";
      return 0;
    };
  });

  auto* mean = app.add_subcommand("mean", "Mollified Dunkl spherical mean M_{x,r}(g)");
  mean->set_help_flag("--help", "Print help");
  model(mean);
  mean->add_option("--g", o.field, "Field to average")->required();
  mean->add_option("--x", o.x)->required();
  mean->add_option("--r", o.r)->required()->check(CLI::PositiveNumber);
  mean->add_option("--h", o.h, "Mollifier width (default r/50)")->check(CLI::PositiveNumber);
  mean->callback([&] {
    action = [&] {
      const KernelContext ctx(openModel(o.model));
      const Field g = parseField(o.field, ctx.model().dim());
      const double h = o.h > 0.0 ? o.h : o.r / 50.0;
      out << formatNumber(sphericalMean(ctx, g.eval, pointFor(ctx.model(), o.x, "--x"), o.r, h)) << "\n";
      return 0;
    };
  });

  auto* check = app.add_subcommand("check", "Harmonicity or minimum-principle harness");
  check->require_subcommand(1);
  auto* harmonic = check->add_subcommand("harmonic", "Compare M_{x,t}(f) with f(x)");
  model(harmonic);
  harmonic->add_option("--f", o.field)->required();
  harmonic->add_option("--domain", o.domain, "W-invariant domain containing the balls")->required();
  harmonic->add_option("--at", o.queries, "Centres a,b;c,d")->required();
  harmonic->add_option("--t", o.t, "Ball radius")->required()->check(CLI::PositiveNumber);
  harmonic->add_option("--tol", o.tol)->check(CLI::PositiveNumber);
  harmonic->add_option("--out", o.out, "CSV report");
  harmonic->callback([&] {
    action = [&] {
      const KernelContext ctx(openModel(o.model));
      const int d = ctx.model().dim();
      const Field f = parseField(o.field, d);
      const Domain v = Domain::parse(o.domain, d);
      std::vector<HarmonicitySample> samples;
      for (const Point& p : parsePoints(o.queries)) samples.push_back({p, o.t});
      const HarmonicityReport rep = harmonicityTest(ctx, f.eval, v, samples, o.tol);
      CsvTable t;
      t.header = coordHeader(d);
      t.header.insert(t.header.end(), {"t", "deviation"});
      for (std::size_t i = 0; i < samples.size(); ++i) {
        std::vector<std::string> row;
        for (int j = 0; j < d; ++j) row.push_back(formatNumber(samples[i].x(j)));
        row.push_back(formatNumber(samples[i].t));
        row.push_back(formatNumber(rep.deviations[i]));
        t.add(std::move(row));
      }
      if (!o.out.empty()) emitCsv(t, o.out);
      out << "max |M(f) - f| = " << formatNumber(rep.maxDeviation) << " over " << samples.size() << " balls: "
          << (rep.consistent ? "consistent with harmonicity" : "not harmonic") << "\n";
      return rep.consistent ? 0 : 1;
    };
  });
  auto* minp = check->add_subcommand("minprinciple", "Minimum principle on a W-invariant domain");
  model(minp);
  minp->add_option("--f", o.field)->required();
  minp->add_option("--domain", o.domain)->required();
  minp->add_option("--grid", o.grid, "Interior grid points per axis")->check(CLI::PositiveNumber);
  minp->add_option("--boundary-tol", o.boundaryTol)->check(CLI::NonNegativeNumber);
  minp->add_option("--tol", o.tol, "Tolerance on M(f) <= f")->check(CLI::PositiveNumber);
  minp->add_option("--out", o.out, "CSV report");
  minp->callback([&] {
    action = [&] {
      const KernelContext ctx(openModel(o.model));
      const int d = ctx.model().dim();
      const Field f = parseField(o.field, d);
      const Domain omega = Domain::parse(o.domain, d);
      const MinimumPrincipleReport rep =
          minimumPrincipleCheck(ctx, f.eval, omega, interiorGrid(omega, o.grid), o.boundaryTol, o.tol);
      CsvTable t;
      t.header = {"boundaryMin", "maxMeanExcess", "interiorMin", "domainInvariant", "boundaryOk", "superMeanOk",
                  "asserted", "holds"};
      t.add({formatNumber(rep.boundaryMin), formatNumber(rep.maxMeanExcess), formatNumber(rep.interiorMin),
             rep.domainInvariant ? "1" : "0", rep.boundaryOk ? "1" : "0", rep.superMeanOk ? "1" : "0",
             rep.conclusionAsserted ? "1" : "0", rep.conclusionHolds ? "1" : "0"});
      if (!o.out.empty()) emitCsv(t, o.out);
      out << rep.summary() << "\n";
      return rep.conclusionAsserted && rep.conclusionHolds ? 0 : 1;
    };
  });

  auto* fd = app.add_subcommand("dirichlet-fd", "Finite-difference Dirichlet solver (product Z2^d models)");
  fd->set_help_flag("--help", "Print help");
  model(fd);
  fd->add_option("--domain", o.domain)->required();
  fd->add_option("--data", o.field, "Boundary data field")->required();
  fd->add_option("--h", o.h, "Lattice spacing")->required()->check(CLI::PositiveNumber);
  fd->add_option("--query", o.queries, "Points a,b;c,d to report");
  fd->add_option("--out", o.out, "CSV of the grid solution");
  fd->callback([&] {
    action = [&] {
      const DunklModel m = openModel(o.model);
      const Field data = parseField(o.field, m.dim());
      const GridSolution sol = solveFd(m, Domain::parse(o.domain, m.dim()), data.eval, o.h);
      if (!o.out.empty()) emitCsv(gridSolutionTable(sol), o.out);
      out << sol.nodes.size() << " nodes, residual " << formatNumber(sol.residual) << ", maximum principle "
          << (sol.maximumPrincipleHolds ? "holds" : "violated") << "\n";
      for (const Point& q : parsePoints(o.queries)) out << "u(" << coords(q) << ") = " << formatNumber(sol.interpolate(q)) << "\n";
      return 0;
    };
  });

  auto* mc = app.add_subcommand("dirichlet-mc", "Monte Carlo Dirichlet solver");
  model(mc);
  mc->add_option("--domain", o.domain)->required();
  mc->add_option("--data", o.field)->required();
  mc->add_option("--query", o.queries, "Points a,b;c,d")->required();
  mc->add_option("--out", o.out, "CSV of the estimates");
  addMc(mc, o);
  mc->callback([&] {
    action = [&] {
      const DunklModel m = openModel(o.model);
      const int d = m.dim();
      const Field data = parseField(o.field, d);
      const std::vector<Point> qs = parsePoints(o.queries);
      for (const Point& q : qs) {
        if (q.size() != d) throw ConfigError("query point dimension differs from model");
      }
      const std::vector<McEstimate> est = solveDirichletMc(m, Domain::parse(o.domain, d), data.eval, qs, mcConfig(o));
      CsvTable t;
      t.header = coordHeader(d);
      t.header.insert(t.header.end(), {"u", "stdError", "n"});
      for (std::size_t i = 0; i < qs.size(); ++i) {
        std::vector<std::string> row;
        for (int j = 0; j < d; ++j) row.push_back(formatNumber(qs[i](j)));
        row.insert(row.end(), {formatNumber(est[i].mean), formatNumber(est[i].stdError), formatNumber(est[i].n)});
        t.add(std::move(row));
        out << "u(" << coords(qs[i]) << ") = " << formatNumber(est[i].mean) << " +- " << formatNumber(est[i].stdError)
            << "\n";
      }
      if (!o.out.empty()) emitCsv(t, o.out);
      return 0;
    };
  });

  auto* exits = app.add_subcommand("exits", "Exit cloud of the jump diffusion from a domain");
  model(exits);
  exits->add_option("--domain", o.domain)->required();
  exits->add_option("--x", o.x, "Start point")->required();
  exits->add_option("--out", o.out, "CSV: pathId, x1..xd, exitTime, jumps");
  addMc(exits, o);
  exits->callback([&] {
    action = [&] {
      const DunklModel m = openModel(o.model);
      const Domain u = Domain::parse(o.domain, m.dim());
      const HarmonicMeasure hm =
          harmonicMeasureEstimate(m, u, pointFor(m, o.x, "--x"), [](const Point&) { return 1.0; }, mcConfig(o));
      if (!o.out.empty()) emitCsv(exitCloudTable(hm.exits, m.dim()), o.out);
      double tau = 0.0;
      long byJump = 0;
      for (const auto& e : hm.exits) {
        tau += e.exitTime;
        byJump += e.byJump ? 1 : 0;
      }
      const double n = static_cast<double>(std::max<std::size_t>(hm.exits.size(), 1));
      out << hm.exits.size() << " exits, mean exit time " << formatNumber(tau / n) << ", exit by jump "
          << formatNumber(byJump / n) << ", outside closure(W U) minus U " << formatNumber(supportAudit(hm.exits, u, m, 1e-8))
          << "\n";
      return 0;
    };
  });

  auto* verify = app.add_subcommand("verify", "Run acceptance criteria");
  verify->add_option("--suite", o.suite, "Suite name or all");
  verify->add_option("--out", o.out, "Directory for CSV outputs");
  verify->callback([&] {
    action = [&] {
      const std::vector<int> ids = suiteCriteria(o.suite);
      int passed = 0;
      runSuite(o.suite, SuiteOptions{o.out}, [&](const CriterionResult& r) {
        out << r.line() << std::endl;
        passed += r.pass() ? 1 : 0;
      });
      out << passed << "/" << ids.size() << " criteria passed\n";
      return passed == static_cast<int>(ids.size()) ? 0 : 1;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  try {
    return action ? action() : 2;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace dunklpot
