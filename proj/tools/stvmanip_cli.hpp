#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stvmanip/stvmanip.hpp"

namespace stvm::cli {

// Exit codes: the verdict of `solve` is 0/1/2; anything above is a failure.
inline constexpr int kManipulable = 0;
inline constexpr int kNotManipulable = 1;
inline constexpr int kUnresolved = 2;
inline constexpr int kUsage = 3;
inline constexpr int kFailure = 4;

namespace detail {

inline std::string read_file(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path);
  return {std::istreambuf_iterator<char>(f), {}};
}

inline BaseProfile load_base(const std::string& spec) {
  if (spec == "nasa-shape" || spec == "hiring-shape") return builtin_base(spec);
  auto label = std::filesystem::path(spec).stem().string();
  std::replace(label.begin(), label.end(), ',', '_');
  return {parse_profile(read_file(spec)), label};
}

struct DistFlags {
  std::string dist = "ic";
  double b = 1.0;
  std::string base;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--dist", dist, "Vote distribution")->check(CLI::IsMember({"ic", "urn", "resample"}))->capture_default_str();
    cmd.add_option("--b", b, "Urn correlation b = a/m! (urn only)")->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd.add_option("--base", base, "Base profile file, or builtin nasa-shape / hiring-shape (resample only)");
  }

  Distribution build() const {
    if (dist == "ic") return ImpartialCulture{};
    if (dist == "urn") return Urn{b};
    if (base.empty()) throw Error("--dist resample needs --base");
    return Resample{std::make_shared<const BaseProfile>(load_base(base))};
  }
};

struct TieFlags {
  std::string tie = "maxindex";
  std::uint64_t tie_seed = 0;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--tie", tie, "Elimination tie-break")->check(CLI::IsMember({"maxindex", "random"}))->capture_default_str();
  }
  TieRule build(std::uint64_t seed) const {
    return tie == "random" ? TieRule::seeded_random(seed) : TieRule::max_index();
  }
};

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

}  // namespace detail

/// Runs one command line; `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"STV manipulation search and experiments", "stvmanip"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Sample a profile of fixed votes");
  std::size_t gen_m = 0, gen_n = 0;
  std::uint64_t gen_seed = 42;
  std::string gen_out;
  detail::DistFlags gen_dist;
  gen->add_option("--m", gen_m, "Candidates")->required()->check(CLI::Range(std::size_t{1}, kMaxCandidates));
  gen->add_option("--n", gen_n, "Voters")->required();
  gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output file (default stdout)");
  gen_dist.add_to(*gen);

  // solve
  auto* solve = app.add_subcommand("solve", "Decide whether a manipulator can make --pref win");
  std::string solve_in;
  CandidateId solve_pref = 0;
  Weight solve_weight = 1;
  std::uint64_t solve_seed = 42, solve_max_nodes = 0;
  std::string solve_search = "lazy";
  bool solve_no_memo = false;
  detail::TieFlags solve_tie;
  solve->add_option("profile", solve_in, "Profile file ('-' for stdin)")->required();
  solve->add_option("--pref", solve_pref, "Preferred candidate")->required();
  solve->add_option("--weight", solve_weight, "Manipulator weight (coalition size)")->capture_default_str();
  solve->add_option("--seed", solve_seed, "Seed for --tie random")->capture_default_str();
  solve->add_option("--max-nodes", solve_max_nodes, "Node limit (0 = none)");
  solve->add_option("--search", solve_search, "Search procedure")
      ->check(CLI::IsMember({"lazy", "eager", "brute"}))
      ->capture_default_str();
  solve->add_flag("--no-memo", solve_no_memo, "Disable the visited-state table");
  solve_tie.add_to(*solve);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a Monte-Carlo grid and write the results CSV");
  std::vector<std::size_t> exp_m = powers_of_two(1, 128), exp_n = powers_of_two(1, 128);
  std::size_t exp_trials = 1000;
  Weight exp_weight = 1;
  std::uint64_t exp_seed = 42, exp_max_nodes = kDefaultMaxNodes;
  unsigned exp_threads = 1;
  std::string exp_out, exp_plot;
  bool exp_timing = false, exp_quiet = false;
  detail::DistFlags exp_dist;
  detail::TieFlags exp_tie;
  exp->add_option("--m", exp_m, "Candidate counts (comma separated)")->delimiter(',');
  exp->add_option("--n", exp_n, "Voter counts (comma separated)")->delimiter(',');
  exp->add_option("--trials", exp_trials, "Trials per point")->capture_default_str()->check(CLI::PositiveNumber);
  exp->add_option("--weight", exp_weight, "Manipulator weight")->capture_default_str();
  exp->add_option("--seed", exp_seed, "Master seed")->capture_default_str();
  exp->add_option("--max-nodes", exp_max_nodes, "Node limit per trial (0 = none)")->capture_default_str();
  exp->add_option("--threads", exp_threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  exp->add_option("--out", exp_out, "Results CSV (default stdout)");
  exp->add_option("--plot", exp_plot, "Directory for SVG charts");
  exp->add_flag("--timing", exp_timing, "Fill time_mean_ms (makes the CSV run-dependent)");
  exp->add_flag("--quiet", exp_quiet, "No summary table");
  exp_dist.add_to(*exp);
  exp_tie.add_to(*exp);

  // fit
  auto* fit = app.add_subcommand("fit", "Fit nodes_mean = a*b^m per fixed-n series of a results CSV");
  std::string fit_in;
  fit->add_option("csv", fit_in, "Results CSV ('-' for stdin)")->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (gen->parsed()) {
      Rng rng(gen_seed);
      const auto dist = gen_dist.build();
      const auto profile = sample(dist, gen_m, gen_n, rng);
      std::ostringstream text;
      text << "# dist=" << distribution_name(dist) << " b=" << format_number(distribution_param(dist))
           << " m=" << gen_m << " n=" << gen_n << " seed=" << gen_seed << '\n'
           << write_profile(profile);
      detail::write_output(gen_out, text.str(), out);
      return 0;
    }

    if (solve->parsed()) {
      ManipulationInstance inst{parse_profile(detail::read_file(solve_in)), solve_weight, solve_pref,
                                solve_tie.build(solve_seed)};
      SearchLimits limits;
      if (solve_max_nodes > 0) limits.max_nodes = solve_max_nodes;
      SearchResult r;
      if (solve_search == "brute") {
        r = brute_force_manipulate(inst);
      } else {
        SearchOptions opts;
        opts.strategy = solve_search == "eager" ? Strategy::Eager : Strategy::Lazy;
        opts.memoize = !solve_no_memo;
        r = manipulate_single(inst, limits, opts);
      }
      out << "verdict: " << to_string(r.verdict) << '\n';
      if (r.witness) {
        out << "witness: ";
        for (std::size_t i = 0; i < r.witness->size(); ++i) out << (i ? ">" : "") << (*r.witness)[i];
        out << '\n';
      }
      out << "nodes: " << r.nodes << '\n'
          << "time_ms: " << format_number(std::chrono::duration<double, std::milli>(r.elapsed).count()) << '\n';
      switch (r.verdict) {
        case Verdict::Manipulable: return kManipulable;
        case Verdict::NotManipulable: return kNotManipulable;
        case Verdict::LimitExceeded: return kUnresolved;
      }
    }

    if (exp->parsed()) {
      GridConfig cfg;
      cfg.m_values = exp_m;
      cfg.n_values = exp_n;
      cfg.distribution = exp_dist.build();
      cfg.trials = exp_trials;
      cfg.weight = exp_weight;
      cfg.master_seed = exp_seed;
      cfg.limits = {};
      if (exp_max_nodes > 0) cfg.limits.max_nodes = exp_max_nodes;
      cfg.tie_rule = exp_tie.build(exp_seed);
      cfg.threads = exp_threads;

      std::ofstream file;
      std::ostream* csv = &out;
      if (!exp_out.empty() && exp_out != "-") {
        file.open(exp_out, std::ios::binary);
        if (!file) throw Error("cannot write " + exp_out);
        csv = &file;
      }
      if (!exp_quiet) err << "seed=" << exp_seed << '\n';
      *csv << results_header() << std::flush;
      const auto results = run_grid(cfg, [&](const PointResult& p) {
        *csv << results_row(p, cfg, exp_timing) << std::flush;
      });
      if (!exp_quiet) err << summarize(results);
      if (!exp_plot.empty()) {
        const auto caption = distribution_name(cfg.distribution) + " seed=" + std::to_string(exp_seed);
        for (const auto& path : write_charts(results, exp_plot, caption))
          if (!exp_quiet) err << "wrote " << path.string() << '\n';
      }
      return 0;
    }

    if (fit->parsed()) {
      const auto fits = fit_series(parse_results_csv(detail::read_file(fit_in)));
      if (fits.empty()) throw Error("no series with two or more distinct m values");
      for (const auto& s : fits) {
        out << "distribution=" << s.distribution << " b_param=" << s.b_param << " n=" << s.n
            << " weight=" << s.weight << " points=" << s.points << " a=" << format_number(s.fit.a)
            << " b=" << format_number(s.fit.b) << " r2=" << format_number(s.fit.r2) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace stvm::cli
