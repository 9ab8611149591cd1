#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "stvmanip/error.hpp"
#include "stvmanip/rng.hpp"
#include "stvmanip/solver.hpp"
#include "stvmanip/votegen.hpp"

namespace stvm {

inline std::vector<std::size_t> powers_of_two(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t v = lo; v <= hi; v *= 2) out.push_back(v);
  return out;
}

inline constexpr std::uint64_t kDefaultMaxNodes = 10'000'000;

struct GridConfig {
  std::vector<std::size_t> m_values = powers_of_two(1, 128);
  std::vector<std::size_t> n_values = powers_of_two(1, 128);
  Distribution distribution = ImpartialCulture{};
  std::size_t trials = 1000;
  Weight weight = 1;
  std::uint64_t master_seed = 42;
  SearchLimits limits{kDefaultMaxNodes, std::nullopt};
  TieRule tie_rule = TieRule::max_index();
  SearchOptions search{};
  unsigned threads = 1;

  void validate() const {
    if (trials == 0) throw Error("trials must be at least 1");
    if (m_values.empty() || n_values.empty()) throw Error("grid needs at least one m and one n");
    for (auto m : m_values)
      if (m == 0) throw Error("m must be at least 1");
  }
};

struct TrialResult {
  Verdict verdict = Verdict::NotManipulable;
  std::uint64_t nodes = 0;
  std::chrono::nanoseconds elapsed{0};
  CandidateId preferred = 0;
  bool witness_checked = false;
};

/// One random election: n fixed votes from `dist`, a uniformly random
/// preferred candidate, one manipulation search. Every witness found is
/// re-checked by an independent STV evaluation.
inline TrialResult run_trial(std::size_t m, std::size_t n, const Distribution& dist, Weight weight,
                             std::uint64_t trial_seed, const SearchLimits& limits,
                             const TieRule& rule = TieRule::max_index(), const SearchOptions& options = {}) {
  Rng rng(trial_seed);
  ManipulationInstance inst{sample(dist, m, n, rng), weight, 0, rule};
  inst.preferred = static_cast<CandidateId>(rng.below(m));
  const auto r = manipulate_single(inst, limits, options);
  TrialResult out{r.verdict, r.nodes, r.elapsed, inst.preferred, false};
  if (r.verdict == Verdict::Manipulable) {
    if (!r.witness || !verify_witness(inst, *r.witness))
      throw Error("solver witness failed verification (m=" + std::to_string(m) + ", n=" + std::to_string(n) +
                  ", seed=" + std::to_string(trial_seed) + ")");
    out.witness_checked = true;
  }
  return out;
}

struct PointResult {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  double p_manipulable = 0;
  double stderr_p = 0;
  double nodes_mean = 0;
  double nodes_median = 0;
  double nodes_p90 = 0;
  double nodes_max = 0;
  double time_mean_ms = 0;
  std::size_t unresolved = 0;
  std::size_t witnesses_checked = 0;
};

inline std::uint64_t point_id(std::size_t m, std::size_t n) noexcept {
  return (static_cast<std::uint64_t>(m) << 32) | static_cast<std::uint64_t>(n);
}

namespace detail {

// Nearest-rank percentile of sorted data.
inline double percentile(std::span<const std::uint64_t> sorted, double q) {
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return static_cast<double>(sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1]);
}

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Aggregates `trials` trials at (m, n). Trial seeds depend only on the
/// master seed, (m, n) and the trial index, so the result is independent of
/// thread count and of which other points share the grid. Node statistics
/// cover every trial; p_manipulable covers resolved trials only.
inline PointResult run_point(const GridConfig& config, std::size_t m, std::size_t n) {
  config.validate();
  std::vector<TrialResult> results(config.trials);
  const auto pid = point_id(m, n);
  detail::parallel_for(config.trials, config.threads, [&](std::size_t t) {
    results[t] = run_trial(m, n, config.distribution, config.weight, derive_seed(config.master_seed, pid, t),
                           config.limits, config.tie_rule, config.search);
  });

  PointResult point;
  point.m = m;
  point.n = n;
  point.trials = config.trials;
  std::vector<std::uint64_t> nodes;
  nodes.reserve(results.size());
  std::size_t positive = 0;
  double node_sum = 0, time_sum = 0;
  for (const auto& r : results) {
    nodes.push_back(r.nodes);
    node_sum += static_cast<double>(r.nodes);
    time_sum += std::chrono::duration<double, std::milli>(r.elapsed).count();
    if (r.verdict == Verdict::LimitExceeded) ++point.unresolved;
    if (r.verdict == Verdict::Manipulable) ++positive;
    if (r.witness_checked) ++point.witnesses_checked;
  }
  const auto resolved = config.trials - point.unresolved;
  if (resolved > 0) {
    point.p_manipulable = static_cast<double>(positive) / static_cast<double>(resolved);
    point.stderr_p = std::sqrt(point.p_manipulable * (1 - point.p_manipulable) / static_cast<double>(resolved));
  }
  std::sort(nodes.begin(), nodes.end());
  point.nodes_mean = node_sum / static_cast<double>(config.trials);
  point.nodes_median = detail::percentile(nodes, 0.5);
  point.nodes_p90 = detail::percentile(nodes, 0.9);
  point.nodes_max = static_cast<double>(nodes.back());
  point.time_mean_ms = time_sum / static_cast<double>(config.trials);
  return point;
}

/// Every (m, n) in the Cartesian product, m-major. `on_point` sees each
/// result as soon as it is ready.
inline std::vector<PointResult> run_grid(const GridConfig& config,
                                         const std::function<void(const PointResult&)>& on_point = {}) {
  config.validate();
  std::vector<PointResult> out;
  out.reserve(config.m_values.size() * config.n_values.size());
  for (auto m : config.m_values) {
    for (auto n : config.n_values) {
      out.push_back(run_point(config, m, n));
      if (on_point) on_point(out.back());
    }
  }
  return out;
}

struct FitResult {
  double a = 0;
  double b = 0;
  double r2 = 0;
};

/// Fits y = a * b^x by ordinary least squares of ln y on x. r2 is the
/// coefficient of determination of that regression, taken as 1 when ln y has
/// no variance.
inline FitResult fit_exponential(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw Error("exponential fit needs at least two points");
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    if (!(y > 0)) throw Error("exponential fit needs positive values");
    sx += x;
    sy += std::log(y);
  }
  const double k = static_cast<double>(points.size());
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : points) {
    const double dx = x - mx, dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0) throw Error("exponential fit needs at least two distinct x values");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0;
  for (const auto& [x, y] : points) {
    const double e = std::log(y) - (intercept + slope * x);
    ss_res += e * e;
  }
  FitResult fit;
  fit.a = std::exp(intercept);
  fit.b = std::exp(slope);
  // Rounding noise in ln y counts as zero variance.
  const bool flat = syy <= 1e-24 * k * std::max(1.0, my * my);
  fit.r2 = flat ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

}  // namespace stvm
