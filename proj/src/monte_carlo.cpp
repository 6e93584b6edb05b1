#include "dunklpot/monte_carlo.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

namespace dunklpot {

void McConfig::validate() const {
  if (!(step > 0.0)) throw ConfigError("step must be positive");
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (paths < 1) throw ConfigError("paths must be at least 1");
  if (!(rhoMax > 0.0)) throw ConfigError("rho-max must be positive");
  if (!(snapTol >= 0.0)) throw ConfigError("snap tolerance must be non-negative");
  if (maxSubsteps < 1) throw ConfigError("substep budget must be positive");
}

namespace {

std::mt19937_64 pathEngine(std::uint64_t seed, long pathId) {
  const auto id = static_cast<std::uint64_t>(pathId);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
  return std::mt19937_64(seq);
}

/// State and buffers for one path; no allocation inside the step loop.
class Walker {
 public:
  Walker(const DunklModel& model, const McConfig& cfg, const Point& x0, long pathId)
      : cfg_(cfg), d_(model.dim()), x_(x0), next_(x0.size()), drift_(static_cast<std::size_t>(model.dim())),
        rng_(pathEngine(cfg.seed, pathId)) {
    const auto& roots = model.roots();
    // alpha and -alpha give the same drift, rate and reflection: keep one with the summed k.
    for (std::size_t r = 0; r < roots.size(); ++r) {
      if (roots.multiplicity(r) == 0.0) continue;
      const Point& a = roots.root(r);
      bool merged = false;
      for (std::size_t q = 0; q < k_.size(); ++q) {
        const Eigen::Map<const Point> b(root(q), d_);
        if ((a + b).norm() <= 1e-12 * a.norm()) {
          k_[q] += roots.multiplicity(r);
          merged = true;
          break;
        }
      }
      if (merged) continue;
      roots_.insert(roots_.end(), a.data(), a.data() + a.size());
      k_.push_back(roots.multiplicity(r));
      norm2_.push_back(a.squaredNorm());
      floor_.push_back(cfg.eps * a.norm());
    }
    rates_.resize(k_.size());
    // Off the hyperplanes before the first step.
    for (std::size_t r = 0; r < k_.size(); ++r) {
      if (std::abs(inner(r, x_.data())) < floor_[r]) {
        const double shift = 2.0 * cfg_.eps / std::sqrt(norm2_[r]);
        for (int i = 0; i < d_; ++i) x_(i) += shift * root(r)[i];
      }
    }
    threshold_ = exponential_(rng_);
  }

  const Point& position() const { return x_; }
  double time() const { return time_; }
  long jumps() const { return jumps_; }

  /// Rates and drift at the current point; returns the step length.
  double prepare(double cap) {
    total_ = 0.0;
    std::fill(drift_.begin(), drift_.end(), 0.0);
    const double* x = x_.data();
    for (std::size_t r = 0; r < k_.size(); ++r) {
      const double in = inner(r, x);
      const double inv = 1.0 / std::copysign(std::max(std::abs(in), floor_[r]), in);
      const double c = k_[r] * inv;
      rates_[r] = 0.5 * c * norm2_[r] * inv;
      total_ += rates_[r];
      const double* a = root(r);
      for (int i = 0; i < d_; ++i) drift_[static_cast<std::size_t>(i)] += c * a[i];
    }
    double dt = std::min(cfg_.step, cap);
    if (dt * total_ > cfg_.rhoMax) dt = cfg_.rhoMax / total_;
    return dt;
  }

  /// Advances the jump clock by dt; reflects and returns true when it rings.
  bool maybeJump(double dt) {
    if (k_.empty()) return false;
    hazard_ += total_ * dt;
    if (hazard_ < threshold_) return false;
    hazard_ = 0.0;
    threshold_ = exponential_(rng_);
    double pick = uniform_(rng_) * total_;
    std::size_t r = 0;
    while (r + 1 < k_.size() && pick >= rates_[r]) {
      pick -= rates_[r];
      ++r;
    }
    const double c = 2.0 * inner(r, x_.data()) / norm2_[r];
    const double* a = root(r);
    for (int i = 0; i < d_; ++i) x_(i) -= c * a[i];
    ++jumps_;
    return true;
  }

  /// Proposed diffusion step into next_.
  const Point& propose(double dt) {
    const double sd = std::sqrt(2.0 * dt);
    const double* x = x_.data();
    double* y = next_.data();
    for (int i = 0; i < d_; ++i) y[i] = x[i] + drift_[static_cast<std::size_t>(i)] * dt + sd * normal_(rng_);
    return next_;
  }

  void accept(double dt) {
    x_.swap(next_);
    time_ += dt;
  }

  double uniform() { return uniform_(rng_); }

 private:
  const double* root(std::size_t r) const { return roots_.data() + r * static_cast<std::size_t>(d_); }
  double inner(std::size_t r, const double* x) const {
    const double* a = root(r);
    double s = 0.0;
    for (int i = 0; i < d_; ++i) s += a[i] * x[i];
    return s;
  }

  const McConfig& cfg_;
  int d_;
  Point x_, next_;
  std::vector<double> drift_;
  std::vector<double> roots_, k_, norm2_, floor_, rates_;
  double total_ = 0.0;
  double hazard_ = 0.0;
  double threshold_ = 0.0;
  double time_ = 0.0;
  long jumps_ = 0;
  std::mt19937_64 rng_;
  boost::random::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
  boost::random::exponential_distribution<double> exponential_;
};

Point crossingPoint(const Domain& v, const Point& inside, const Point& outside) {
  double lo = 0.0;
  double hi = 1.0;
  Point p = inside;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    p = inside + mid * (outside - inside);
    if (v.distToBoundary(p) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return inside + hi * (outside - inside);
}

}  // namespace

ExitRecord simulateExit(const DunklModel& model, const Domain& v, const Point& x0, const McConfig& cfg, long pathId) {
  if (x0.size() != model.dim() || v.dim() != model.dim()) throw InvalidArgument("simulateExit: dimension mismatch");
  ExitRecord rec;
  rec.pathId = pathId;
  if (!(v.distToBoundary(x0) > 0.0)) {
    rec.exitPoint = x0;
    return rec;
  }
  Walker walker(model, cfg, x0, pathId);
  if (!(v.distToBoundary(walker.position()) > 0.0)) {
    rec.exitPoint = v.projectToBoundary(walker.position());
    return rec;
  }
  const double inf = std::numeric_limits<double>::infinity();
  for (long n = 0; n < cfg.maxSubsteps; ++n) {
    const double dt = walker.prepare(inf);
    if (walker.maybeJump(dt)) {
      if (!(v.distToBoundary(walker.position()) > 0.0)) {
        rec.exitPoint = walker.position();
        rec.exitTime = walker.time();
        rec.jumps = walker.jumps();
        rec.byJump = true;
        return rec;
      }
      walker.prepare(dt);
    }
    const double d0 = v.distToBoundary(walker.position());
    const Point& next = walker.propose(dt);
    const double d1 = v.distToBoundary(next);
    if (!(d1 > 0.0)) {
      rec.exitPoint = v.projectToBoundary(crossingPoint(v, walker.position(), next));
      rec.exitTime = walker.time() + dt;
      rec.jumps = walker.jumps();
      return rec;
    }
    if (cfg.bridge) {
      // Probability that the bridge touched the (locally flat) boundary.
      const double a = d0 * d1 / dt;
      if (a < 40.0 && walker.uniform() < std::exp(-a)) {
        rec.exitPoint = v.projectToBoundary(d0 < d1 ? walker.position() : next);
        rec.exitTime = walker.time() + dt;
        rec.jumps = walker.jumps();
        return rec;
      }
    }
    walker.accept(dt);
  }
  throw NonTerminationError("simulateExit: substep budget exhausted");
}

Point simulateFree(const DunklModel& model, const Point& x0, double t, const McConfig& cfg, long pathId) {
  if (x0.size() != model.dim()) throw InvalidArgument("simulateFree: dimension mismatch");
  if (!(t >= 0.0)) throw InvalidArgument("simulateFree: t must be non-negative");
  Walker walker(model, cfg, x0, pathId);
  for (long n = 0; n < cfg.maxSubsteps; ++n) {
    const double left = t - walker.time();
    if (left <= 1e-15 * std::max(1.0, t)) return walker.position();
    const double dt = walker.prepare(left);
    if (walker.maybeJump(dt)) walker.prepare(dt);
    walker.propose(dt);
    walker.accept(dt);
  }
  throw NonTerminationError("simulateFree: substep budget exhausted");
}

McEstimate summarize(const std::vector<double>& samples) {
  McEstimate e;
  e.n = static_cast<long>(samples.size());
  if (samples.empty()) return e;
  double sum = 0.0;
  for (double s : samples) sum += s;
  e.mean = sum / static_cast<double>(e.n);
  if (e.n > 1) {
    double sq = 0.0;
    for (double s : samples) sq += (s - e.mean) * (s - e.mean);
    e.stdError = std::sqrt(sq / static_cast<double>(e.n - 1) / static_cast<double>(e.n));
  }
  return e;
}

unsigned workerCount() {
  if (const char* env = std::getenv("DUNKLPOT_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallelFor(long n, const std::function<void(long)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<long>(workerCount(), std::max(n, 1L)));
  if (workers <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  auto run = [&] {
    constexpr long chunk = 64;
    for (;;) {
      const long start = next.fetch_add(chunk);
      if (start >= n) return;
      try {
        for (long i = start; i < std::min(n, start + chunk); ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failureMutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

HarmonicMeasure harmonicMeasureEstimate(const DunklModel& model, const Domain& u, const Point& x0, const PointFn& f,
                                        const McConfig& cfg, long firstPathId) {
  cfg.validate();
  HarmonicMeasure out;
  out.exits.resize(static_cast<std::size_t>(cfg.paths));
  parallelFor(cfg.paths, [&](long i) {
    out.exits[static_cast<std::size_t>(i)] = simulateExit(model, u, x0, cfg, firstPathId + i);
  });
  std::vector<double> values;
  values.reserve(out.exits.size());
  for (const auto& e : out.exits) values.push_back(f(e.exitPoint));
  out.estimate = summarize(values);
  return out;
}

double supportAudit(const std::vector<ExitRecord>& exits, const Domain& u, const DunklModel& model, double snapTol) {
  if (exits.empty()) return 0.0;
  const Domain saturated = wSaturate(model, u);
  long bad = 0;
  for (const auto& e : exits) {
    if (saturated.distToBoundary(e.exitPoint) < -snapTol || u.distToBoundary(e.exitPoint) > snapTol) ++bad;
  }
  return static_cast<double>(bad) / static_cast<double>(exits.size());
}

double boundaryMassFraction(const std::vector<ExitRecord>& exits, const Domain& v, double snapTol) {
  if (exits.empty()) return 0.0;
  long off = 0;
  for (const auto& e : exits) {
    if (std::abs(v.distToBoundary(e.exitPoint)) > snapTol) ++off;
  }
  return static_cast<double>(off) / static_cast<double>(exits.size());
}

namespace {

McEstimate greenAverage(const KernelContext& ctx, const std::vector<ExitRecord>& exits, const Point& pole) {
  std::map<std::vector<double>, double> cache;
  std::vector<double> values;
  values.reserve(exits.size());
  for (const auto& e : exits) {
    std::vector<double> key(e.exitPoint.data(), e.exitPoint.data() + e.exitPoint.size());
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(std::move(key), greenFunction(ctx, e.exitPoint, pole)).first;
    values.push_back(it->second);
  }
  return summarize(values);
}

}  // namespace

SymmetryResult greenSymmetryCheck(const KernelContext& ctx, const Domain& v, const Point& x, const Point& y,
                                  const McConfig& cfg) {
  auto none = [](const Point&) { return 0.0; };
  HarmonicMeasure fromX = harmonicMeasureEstimate(ctx.model(), v, x, none, cfg);
  const HarmonicMeasure fromY = harmonicMeasureEstimate(ctx.model(), v, y, none, cfg);
  const McEstimate a = greenAverage(ctx, fromX.exits, y);
  const McEstimate b = greenAverage(ctx, fromY.exits, x);
  SymmetryResult out;
  out.hxy = a.mean;
  out.hyx = b.mean;
  out.residual = std::abs(a.mean - b.mean);
  out.sigma = std::hypot(a.stdError, b.stdError);
  out.exitsFromX = std::move(fromX.exits);
  return out;
}

std::vector<McEstimate> solveDirichletMc(const DunklModel& model, const Domain& v, const PointFn& boundaryData,
                                         const std::vector<Point>& queries, const McConfig& cfg) {
  if (!v.isWInvariant(model)) throw InvalidArgument("solveDirichletMc: V must be W-invariant");
  std::vector<McEstimate> out;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    out.push_back(
        harmonicMeasureEstimate(model, v, queries[q], boundaryData, cfg, static_cast<long>(q) * cfg.paths).estimate);
  }
  return out;
}

McEstimate semigroupEstimate(const DunklModel& model, const PointFn& f, const Point& x0, double t,
                             const McConfig& cfg) {
  cfg.validate();
  std::vector<double> values(static_cast<std::size_t>(cfg.paths));
  parallelFor(cfg.paths, [&](long i) { values[static_cast<std::size_t>(i)] = f(simulateFree(model, x0, t, cfg, i)); });
  return summarize(values);
}

double angularKsStatistic(const std::vector<ExitRecord>& exits) {
  if (exits.empty()) return 0.0;
  std::vector<double> u;
  u.reserve(exits.size());
  for (const auto& e : exits) {
    if (e.exitPoint.size() != 2) throw InvalidArgument("angularKsStatistic: needs d = 2");
    u.push_back((std::atan2(e.exitPoint(1), e.exitPoint(0)) + std::numbers::pi) / (2.0 * std::numbers::pi));
  }
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double dmax = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dmax = std::max({dmax, (static_cast<double>(i) + 1.0) / n - u[i], u[i] - static_cast<double>(i) / n});
  }
  return dmax;
}

}  // namespace dunklpot
