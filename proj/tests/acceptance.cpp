// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Tolerances are fixed here and not tuned per run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "stvmanip/stvmanip.hpp"
#include "stvmanip_cli.hpp"

namespace {

using namespace stvm;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Search decision equals enumeration on small elections; witnesses verify.
Outcome oracle_equivalence() {
  const auto start = Clock::now();
  auto nasa = std::make_shared<const BaseProfile>(builtin_base("nasa-shape"));
  auto hiring = std::make_shared<const BaseProfile>(builtin_base("hiring-shape"));
  struct Gen {
    std::string name;
    std::function<Distribution(std::size_t)> dist;
  };
  const std::vector<Gen> gens{
      {"ic", [](std::size_t) -> Distribution { return ImpartialCulture{}; }},
      {"urn(b=1)", [](std::size_t) -> Distribution { return Urn{1.0}; }},
      {"resample", [&](std::size_t i) -> Distribution { return Resample{i % 2 ? hiring : nasa}; }},
  };
  std::string detail;
  bool ok = true;
  std::size_t total = 0;
  for (const auto& g : gens) {
    std::size_t instances = 0, mismatches = 0, bad_witness = 0, positives = 0;
    Rng rng(0xacce55 + g.name.size());
    for (std::size_t rep = 0; rep < 9; ++rep)
      for (std::size_t m : {2u, 3u, 4u, 5u})
        for (std::size_t n : {1u, 2u, 4u, 8u, 16u})
          for (Weight w : {1u, 2u, 4u}) {
            Rng inst_rng(rng.next());
            ManipulationInstance inst{sample(g.dist(rep), m, n, inst_rng), w, 0};
            inst.preferred = static_cast<CandidateId>(inst_rng.below(m));
            const auto fast = manipulate_single(inst);
            const auto slow = brute_force_manipulate(inst);
            ++instances;
            if (fast.verdict != slow.verdict) ++mismatches;
            if (fast.verdict == Verdict::Manipulable) {
              ++positives;
              if (!fast.witness || !verify_witness(inst, *fast.witness)) ++bad_witness;
            }
          }
    total += instances;
    ok = ok && instances >= 500 && mismatches == 0 && bad_witness == 0;
    detail += fmt("%s: %zu instances, %zu mismatches, %zu/%zu witnesses failed; ", g.name.c_str(), instances,
                  mismatches, bad_witness, positives);
  }
  const double secs = seconds_since(start);
  ok = ok && secs <= 120;
  return {ok, detail + fmt("total %zu in %.1fs (limit 120s)", total, secs)};
}

// 2. Urn with b=1: the second vote repeats the first about half the time.
Outcome urn_repeat_anchor() {
  Rng rng(2);
  int same = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto p = urn_sample(4, 2, 1.0, rng);
    same += p.ballots()[0] == p.ballots()[1];
  }
  const double frac = same / 10000.0;
  return {frac >= 0.47 && frac <= 0.53, fmt("P(draw2 == draw1) = %.4f, band [0.47, 0.53]", frac)};
}

// 3. IC uniformity; urn with b=0 reproduces IC byte for byte.
Outcome ic_uniformity() {
  Rng rng(3);
  const auto p = ic_sample(3, 60000, rng);
  std::map<std::vector<CandidateId>, int> freq;
  for (const auto& b : p.ballots()) ++freq[{b.ranking().begin(), b.ranking().end()}];
  double worst = 0;
  for (auto& [r, k] : freq) worst = std::max(worst, std::abs(k / 60000.0 - 1.0 / 6));
  Rng again(3);
  const bool same_bytes = write_profile(urn_sample(3, 60000, 0.0, again)) == write_profile(p);
  const bool ok = freq.size() == 6 && worst <= 0.01 && same_bytes;
  return {ok, fmt("%zu permutations seen, max |freq - 1/6| = %.4f (tol 0.01), urn(b=0) identical: %s", freq.size(),
                  worst, same_bytes ? "yes" : "no")};
}

// At most one adjacent increase, and it is no larger than 0.03.
bool non_increasing_with_noise(const std::vector<double>& v) {
  int inversions = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double rise = v[i] - v[i - 1];
    if (rise > 0) {
      ++inversions;
      if (rise > 0.03) return false;
    }
  }
  return inversions <= 1;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.3f", x);
  return s;
}

// 4. Manipulability falls with m (n fixed) and with n (m fixed).
Outcome trend_reproduction() {
  const auto start = Clock::now();
  GridConfig cfg;
  cfg.trials = 1000;
  cfg.master_seed = 4;
  cfg.weight = 1;
  std::vector<double> by_m, by_n;
  for (std::size_t m : {2u, 4u, 8u, 16u, 32u}) by_m.push_back(run_point(cfg, m, 16).p_manipulable);
  for (std::size_t n : {1u, 4u, 16u, 64u, 128u}) by_n.push_back(run_point(cfg, 8, n).p_manipulable);
  const double secs = seconds_since(start);
  const bool ok = non_increasing_with_noise(by_m) && non_increasing_with_noise(by_n) && secs <= 600;
  return {ok, "n=16, m=2..32: [" + join(by_m) + "]; m=8, n=1..128: [" + join(by_n) + "]" +
                  fmt("; %.1fs (limit 600s)", secs)};
}

FitResult fit_nodes(const Distribution& dist) {
  GridConfig cfg;
  cfg.trials = 1000;
  cfg.master_seed = 5;
  cfg.distribution = dist;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t m : {4u, 8u, 16u, 32u, 64u}) pts.emplace_back(m, run_point(cfg, m, 32).nodes_mean);
  return fit_exponential(pts);
}

// 5. Node growth fits a*b^m with b close to 1.
Outcome scaling_fit() {
  const auto ic = fit_nodes(ImpartialCulture{});
  const auto urn = fit_nodes(Urn{1.0});
  const bool ok = ic.b >= 1.0 && ic.b <= 1.10 && ic.r2 >= 0.75 && urn.b >= 1.0 && urn.b <= 1.05;
  return {ok, fmt("IC n=32: a=%.4g b=%.4f R2=%.3f (b in [1, 1.10], R2 >= 0.75); urn b=1 n=32: a=%.4g b=%.4f "
                  "R2=%.3f (b in [1, 1.05])",
                  ic.a, ic.b, ic.r2, urn.a, urn.b, urn.r2)};
}

// 6. Large elections resolve at desk scale.
Outcome desk_scale() {
  std::vector<double> secs;
  std::size_t unresolved = 0, positives = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(derive_seed(6, point_id(128, 128), t));
    ManipulationInstance inst{ic_sample(128, 128, rng), 1, 0};
    inst.preferred = static_cast<CandidateId>(rng.below(128));
    const auto r = manipulate_single(inst, SearchLimits{std::nullopt, std::chrono::milliseconds(120'000)});
    secs.push_back(std::chrono::duration<double>(r.elapsed).count());
    unresolved += r.verdict == Verdict::LimitExceeded;
    positives += r.verdict == Verdict::Manipulable;
  }
  std::sort(secs.begin(), secs.end());
  const double median = (secs[49] + secs[50]) / 2;
  const bool ok = unresolved == 0 && secs.back() <= 120 && median < 10;
  return {ok, fmt("100 instances m=n=128: %zu manipulable, %zu unresolved, median %.4fs, max %.4fs", positives,
                  unresolved, median, secs.back())};
}

// 7. Degenerate cases.
Outcome triviality() {
  Rng rng(7);
  std::size_t zero_ok = 0, empty_ok = 0, single_ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = 1 + rng.below(32);
    const auto fixed = ic_sample(m, 1 + rng.below(64), rng);
    const auto p = static_cast<CandidateId>(rng.below(m));
    zero_ok += (manipulate_single({fixed, 0, p}).verdict == Verdict::Manipulable) == (stv_winner_id(fixed) == p);
  }
  std::size_t empty_cases = 0;
  for (std::size_t m : {1u, 2u, 5u, 17u, 64u, 128u})
    for (Weight w : {1u, 2u, 7u})
      for (CandidateId p = 0; p < m; ++p) {
        ++empty_cases;
        empty_ok += manipulate_single({Profile(m), w, p}).verdict == Verdict::Manipulable;
      }
  for (int i = 0; i < 100; ++i) {
    const auto r = manipulate_single({ic_sample(1, rng.below(50), rng), 1 + rng.below(3), 0});
    single_ok += r.verdict == Verdict::Manipulable && r.nodes == 1;
  }
  const bool ok = zero_ok == 1000 && empty_ok == empty_cases && single_ok == 100;
  return {ok, fmt("w=0 matches honest winner %zu/1000; n=0 manipulable %zu/%zu; m=1 manipulable in 1 node %zu/100",
                  zero_ok, empty_ok, empty_cases, single_ok)};
}

std::string run_experiment_cli(const std::filesystem::path& out, const std::string& threads) {
  std::ostringstream sink_out, sink_err;
  const int code = cli::run({"experiment", "--dist", "ic", "--m", "2,4,8,16", "--n", "4,16", "--trials", "1000",
                             "--seed", "42", "--threads", threads, "--out", out.string(), "--quiet"},
                            sink_out, sink_err);
  if (code != 0) return "exit " + std::to_string(code) + ": " + sink_err.str();
  std::ifstream f(out, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

// 8. Same flags and seed give the same CSV bytes, whatever the thread count.
Outcome reproducibility() {
  const auto dir = std::filesystem::temp_directory_path() / "stvmanip_acceptance";
  std::filesystem::create_directories(dir);
  const auto a = run_experiment_cli(dir / "a.csv", "1");
  const auto b = run_experiment_cli(dir / "b.csv", "1");
  const auto c = run_experiment_cli(dir / "c.csv", "8");
  std::filesystem::remove_all(dir);
  const bool ok = a == b && a == c && a.starts_with("distribution,");
  return {ok, fmt("run1 == run2: %s, threads 1 == threads 8: %s, %zu bytes", a == b ? "yes" : "no",
                  a == c ? "yes" : "no", a.size())};
}

// 9. Exact synthetic data recovers the generating parameters.
Outcome fit_anchor() {
  std::vector<std::pair<double, double>> pts;
  for (int m = 1; m <= 10; ++m) pts.emplace_back(m, 3.0 * std::pow(1.2, m));
  const auto f = fit_exponential(pts);
  const bool ok = std::abs(f.a / 3.0 - 1) < 5e-7 && std::abs(f.b / 1.2 - 1) < 5e-7 && std::abs(f.r2 - 1) < 1e-12;
  return {ok, fmt("a=%.9g b=%.9g R2=%.15g (want 3, 1.2, 1 to 6 significant digits)", f.a, f.b, f.r2)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 oracle equivalence", oracle_equivalence}, {"2 urn repeat anchor", urn_repeat_anchor},
      {"3 IC uniformity", ic_uniformity},           {"4 trend reproduction", trend_reproduction},
      {"5 scaling fit", scaling_fit},               {"6 desk-scale performance", desk_scale},
      {"7 triviality properties", triviality},      {"8 reproducibility", reproducibility},
      {"9 fit unit anchor", fit_anchor},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
