#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "stvmanip/candidate_set.hpp"
#include "stvmanip/error.hpp"
#include "stvmanip/profile.hpp"
#include "stvmanip/stv.hpp"

namespace stvm {

/// A single manipulator of weight `weight` (a coalition voting in unison)
/// wants `preferred` to win against the `fixed` votes.
struct ManipulationInstance {
  Profile fixed;
  Weight weight = 1;
  CandidateId preferred = 0;
  TieRule tie_rule = TieRule::max_index();

  void validate() const {
    if (preferred >= fixed.candidates())
      throw Error("preferred candidate " + std::to_string(preferred) + " out of range for " +
                  std::to_string(fixed.candidates()) + " candidates");
  }
};

enum class Verdict { Manipulable, NotManipulable, LimitExceeded };

inline const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Manipulable: return "manipulable";
    case Verdict::NotManipulable: return "not-manipulable";
    case Verdict::LimitExceeded: return "unresolved";
  }
  return "?";
}

struct SearchLimits {
  std::optional<std::uint64_t> max_nodes;
  std::optional<std::chrono::milliseconds> max_time;
};

struct SearchResult {
  Verdict verdict = Verdict::NotManipulable;
  std::optional<Ballot> witness;
  std::uint64_t nodes = 0;
  std::chrono::nanoseconds elapsed{0};
};

/// Search strategy for `manipulate_single`.
///
/// Eager commits to the manipulator's next surviving preference every time
/// its current one is eliminated, branching over all remaining candidates.
/// Lazy leaves the next preference open while it cannot influence the
/// elimination, and branches only where giving the manipulator's weight to
/// the lowest candidate would save it.
enum class Strategy { Lazy, Eager };

struct SearchOptions {
  Strategy strategy = Strategy::Lazy;
  bool memoize = true;
};

namespace detail {

inline constexpr CandidateId kUncommitted = RoundEngine::kNoBonus;

struct StateKey {
  CandidateSet remaining;
  CandidateId holder;
  friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const noexcept {
    return k.remaining.hash() ^ (static_cast<std::size_t>(k.holder) * 0x9e3779b97f4a7c15ull);
  }
};

class ManipulationSearch {
 public:
  ManipulationSearch(const ManipulationInstance& inst, const SearchLimits& limits, const SearchOptions& options)
      : fixed_(inst.fixed.aggregated()),
        m_(inst.fixed.candidates()),
        weight_(inst.weight),
        preferred_(inst.preferred),
        rule_(inst.tie_rule),
        total_(inst.fixed.total_weight() + inst.weight),
        limits_(limits),
        options_(options),
        start_(std::chrono::steady_clock::now()) {}

  SearchResult run() {
    SearchResult result;
    const auto all = CandidateSet::first(m_);
    bool found = false;
    if (options_.strategy == Strategy::Lazy) {
      found = explore_lazy(all, detail::kUncommitted);
    } else {
      RoundEngine root(fixed_, all);
      for (auto c : branch_order(root)) {
        path_.push_back(c);
        if (explore_eager(all, c)) {
          found = true;
          break;
        }
        path_.pop_back();
        if (aborted_) break;
      }
    }
    result.nodes = nodes_;
    if (found) {
      result.verdict = Verdict::Manipulable;
      result.witness = complete_witness();
    } else {
      result.verdict = aborted_ ? Verdict::LimitExceeded : Verdict::NotManipulable;
    }
    result.elapsed = std::chrono::steady_clock::now() - start_;
    return result;
  }

 private:
  // Returns false if the state was seen before (and so cannot succeed) or a
  // limit was hit.
  bool enter(const CandidateSet& remaining, CandidateId holder) {
    if (aborted_) return false;
    if (options_.memoize && !seen_.insert({remaining, holder}).second) return false;
    ++nodes_;
    if (limits_.max_nodes && nodes_ > *limits_.max_nodes) aborted_ = true;
    if (limits_.max_time && (nodes_ & 255) == 0 && std::chrono::steady_clock::now() - start_ > *limits_.max_time)
      aborted_ = true;
    return !aborted_;
  }

  bool revisit(const CandidateSet& remaining, CandidateId holder) {
    return options_.memoize && !seen_.insert({remaining, holder}).second;
  }

  // p first, then the others by ascending current tally.
  std::vector<CandidateId> branch_order(const RoundEngine& engine) const {
    std::vector<CandidateId> order = engine.remaining().to_vector();
    std::stable_sort(order.begin(), order.end(), [&](CandidateId a, CandidateId b) {
      if ((a == preferred_) != (b == preferred_)) return a == preferred_;
      return engine.tally(a) < engine.tally(b);
    });
    return order;
  }

  bool explore_eager(const CandidateSet& remaining, CandidateId holder) {
    if (!enter(remaining, holder)) return false;
    RoundEngine engine(fixed_, remaining);
    for (;;) {
      if (auto w = engine.majority(total_, holder, weight_)) return *w == preferred_;
      const CandidateId out = engine.lowest(rule_, holder, weight_);
      if (out == preferred_) return false;
      engine.eliminate(out);
      if (out != holder) continue;
      for (auto next : branch_order(engine)) {
        path_.push_back(next);
        if (explore_eager(engine.remaining(), next)) return true;
        path_.pop_back();
        if (aborted_) return false;
      }
      return false;
    }
  }

  bool explore_lazy(const CandidateSet& remaining, CandidateId holder) {
    if (!enter(remaining, holder)) return false;
    RoundEngine engine(fixed_, remaining);
    for (;;) {
      if (holder != kUncommitted) {
        if (auto w = engine.majority(total_, holder, weight_)) return *w == preferred_;
        const CandidateId out = engine.lowest(rule_, holder, weight_);
        if (out == preferred_) return false;
        engine.eliminate(out);
        if (out == holder) {
          holder = kUncommitted;
          if (revisit(engine.remaining(), holder)) return false;
        }
        continue;
      }

      // Uncommitted: the manipulator's weight goes to any standing candidate.
      if (2 * (engine.tally(preferred_) + weight_) > total_) {
        path_.push_back(preferred_);
        return true;
      }
      if (engine.majority(total_)) return false;
      const CandidateId low = engine.lowest(rule_);
      const bool saved = engine.lowest(rule_, low, weight_) != low;
      if (low == preferred_) {
        if (!saved) return false;
        holder = preferred_;
        path_.push_back(preferred_);
        continue;
      }
      if (!saved) {
        engine.eliminate(low);
        continue;
      }
      // Either save `low` by ranking it next, or let it go.
      const std::size_t mark = path_.size();
      path_.push_back(low);
      if (explore_lazy(engine.remaining(), low)) return true;
      path_.resize(mark);
      if (aborted_) return false;
      auto without = engine.remaining();
      without.erase(low);
      return explore_lazy(without, kUncommitted);
    }
  }

  Ballot complete_witness() const {
    std::vector<CandidateId> ranking;
    ranking.reserve(m_);
    CandidateSet used;
    for (auto c : path_) {
      if (used.contains(c)) continue;
      used.insert(c);
      ranking.push_back(c);
    }
    for (CandidateId c = 0; c < m_; ++c)
      if (!used.contains(c)) ranking.push_back(c);
    return Ballot(std::move(ranking), weight_);
  }

  Profile fixed_;
  std::size_t m_;
  Weight weight_;
  CandidateId preferred_;
  TieRule rule_;
  Weight total_;
  SearchLimits limits_;
  SearchOptions options_;
  std::chrono::steady_clock::time_point start_;

  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  std::vector<CandidateId> path_;
  std::unordered_set<StateKey, StateKeyHash> seen_;
};

}  // namespace detail

/// Decides whether the manipulator can cast some full ballot that makes the
/// preferred candidate the STV winner. Stops at the first success; a
/// Manipulable verdict always carries a witness ballot of the instance's
/// weight. A hit limit yields LimitExceeded, never NotManipulable.
inline SearchResult manipulate_single(const ManipulationInstance& instance, const SearchLimits& limits = {},
                                      const SearchOptions& options = {}) {
  instance.validate();
  if (instance.weight == 0) {
    const auto start = std::chrono::steady_clock::now();
    SearchResult r;
    r.nodes = 1;
    if (stv_winner_id(instance.fixed, instance.tie_rule) == instance.preferred) {
      r.verdict = Verdict::Manipulable;
      std::vector<CandidateId> ranking(instance.fixed.candidates());
      std::iota(ranking.begin(), ranking.end(), CandidateId{0});
      std::rotate(ranking.begin(), ranking.begin() + instance.preferred, ranking.begin() + instance.preferred + 1);
      r.witness = Ballot(std::move(ranking), 1);
    } else {
      r.verdict = Verdict::NotManipulable;
    }
    r.elapsed = std::chrono::steady_clock::now() - start;
    return r;
  }
  return detail::ManipulationSearch(instance, limits, options).run();
}

/// True iff adding `witness` (at the instance weight) makes the preferred
/// candidate win. The witness's own weight is ignored.
inline bool verify_witness(const ManipulationInstance& instance, const Ballot& witness) {
  instance.validate();
  if (witness.size() != instance.fixed.candidates())
    throw Error("witness ranks " + std::to_string(witness.size()) + " candidates, expected " +
                std::to_string(instance.fixed.candidates()));
  if (instance.weight == 0) return stv_winner_id(instance.fixed, instance.tie_rule) == instance.preferred;
  const auto profile = instance.fixed.with(witness.with_weight(instance.weight));
  return stv_winner_id(profile, instance.tie_rule) == instance.preferred;
}

inline constexpr std::size_t kDefaultEnumerationCap = 7;

/// Tries every one of the m! manipulator ballots. nodes counts the elections
/// evaluated.
inline SearchResult brute_force_manipulate(const ManipulationInstance& instance,
                                           std::size_t cap = kDefaultEnumerationCap) {
  instance.validate();
  const std::size_t m = instance.fixed.candidates();
  if (m > cap)
    throw Error("brute force refuses " + std::to_string(m) + " candidates (cap " + std::to_string(cap) + ")");
  const auto start = std::chrono::steady_clock::now();
  SearchResult r;
  std::vector<CandidateId> ranking(m);
  std::iota(ranking.begin(), ranking.end(), CandidateId{0});
  do {
    ++r.nodes;
    Ballot candidate(ranking, instance.weight == 0 ? 1 : instance.weight);
    if (verify_witness(instance, candidate)) {
      r.verdict = Verdict::Manipulable;
      r.witness = std::move(candidate);
      break;
    }
  } while (std::next_permutation(ranking.begin(), ranking.end()));
  r.elapsed = std::chrono::steady_clock::now() - start;
  return r;
}

struct WinnableSet {
  std::vector<CandidateId> winnable;
  std::vector<CandidateId> unresolved;
};

/// Every candidate the manipulator can make win.
inline WinnableSet winnable_set(const Profile& fixed, Weight weight, const TieRule& rule = TieRule::max_index(),
                                const SearchLimits& limits = {}, const SearchOptions& options = {}) {
  WinnableSet out;
  for (CandidateId p = 0; p < fixed.candidates(); ++p) {
    const auto r = manipulate_single({fixed, weight, p, rule}, limits, options);
    if (r.verdict == Verdict::Manipulable)
      out.winnable.push_back(p);
    else if (r.verdict == Verdict::LimitExceeded)
      out.unresolved.push_back(p);
  }
  return out;
}

}  // namespace stvm
