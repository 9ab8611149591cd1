#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "stvmanip/candidate_set.hpp"
#include "stvmanip/error.hpp"
#include "stvmanip/profile.hpp"

namespace stvm {

/// How to pick the eliminated candidate when several share the minimum tally.
///
/// Both variants reduce to a fixed priority per candidate; the tied candidate
/// with the highest priority is eliminated. MaxIndex uses the index itself.
/// SeededRandom hashes (seed, candidate), which amounts to one random
/// elimination order per election. A fixed order means that raising the tally
/// of a candidate other than the chosen one never changes the choice.
class TieRule {
 public:
  enum class Kind { MaxIndex, SeededRandom };

  static constexpr TieRule max_index() noexcept { return TieRule(Kind::MaxIndex, 0); }
  static constexpr TieRule seeded_random(std::uint64_t seed) noexcept { return TieRule(Kind::SeededRandom, seed); }

  Kind kind() const noexcept { return kind_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t priority(CandidateId c) const noexcept {
    if (kind_ == Kind::MaxIndex) return c;
    // splitmix64 finaliser
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(c) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// True if `a` is eliminated in preference to `b` when both are tied.
  bool eliminates_first(CandidateId a, CandidateId b) const noexcept {
    const auto pa = priority(a), pb = priority(b);
    return pa != pb ? pa > pb : a > b;
  }

  friend bool operator==(const TieRule&, const TieRule&) = default;

 private:
  constexpr TieRule(Kind kind, std::uint64_t seed) noexcept : kind_(kind), seed_(seed) {}

  Kind kind_;
  std::uint64_t seed_;
};

/// Per-candidate tallies keyed by candidate, ascending.
using Tallies = std::vector<std::pair<CandidateId, Weight>>;

/// The ballot's most preferred candidate that is still standing.
inline CandidateId top_among(const Ballot& ballot, const CandidateSet& remaining) {
  for (auto c : ballot.ranking())
    if (remaining.contains(c)) return c;
  throw Error("no remaining candidates");
}

inline Tallies tally(const Profile& profile, const CandidateSet& remaining) {
  if (remaining.empty()) throw Error("no remaining candidates");
  std::vector<Weight> counts(kMaxCandidates, 0);
  for (const auto& b : profile.ballots()) counts[top_among(b, remaining)] += b.weight();
  Tallies out;
  out.reserve(remaining.size());
  remaining.for_each([&](CandidateId c) { out.emplace_back(c, counts[c]); });
  return out;
}

inline CandidateId eliminate_choice(std::span<const std::pair<CandidateId, Weight>> tallies, const TieRule& rule) {
  if (tallies.empty()) throw Error("no remaining candidates");
  auto best = tallies.front();
  for (const auto& entry : tallies.subspan(1)) {
    if (entry.second < best.second || (entry.second == best.second && rule.eliminates_first(entry.first, best.first)))
      best = entry;
  }
  return best.first;
}

/// Incremental first-preference counts over a shrinking candidate set.
///
/// Each ballot keeps a cursor to its current top choice; eliminating a
/// candidate advances only the cursors that pointed at it.
class RoundEngine {
 public:
  RoundEngine(const Profile& profile, const CandidateSet& remaining)
      : profile_(&profile), remaining_(remaining), count_(remaining.size()), tallies_(profile.candidates(), 0) {
    if (remaining.empty()) throw Error("no remaining candidates");
    const auto ballots = profile.ballots();
    cursor_.resize(ballots.size());
    for (std::size_t i = 0; i < ballots.size(); ++i) {
      cursor_[i] = advance(ballots[i], 0);
      tallies_[ballots[i][cursor_[i]]] += ballots[i].weight();
    }
  }

  const CandidateSet& remaining() const noexcept { return remaining_; }
  std::size_t remaining_count() const noexcept { return count_; }
  Weight tally(CandidateId c) const noexcept { return tallies_[c]; }
  Weight fixed_total() const noexcept { return profile_->total_weight(); }

  Tallies snapshot(CandidateId bonus_to = kNoBonus, Weight bonus = 0) const {
    Tallies out;
    out.reserve(count_);
    remaining_.for_each([&](CandidateId c) { out.emplace_back(c, effective(c, bonus_to, bonus)); });
    return out;
  }

  /// Candidate holding a strict majority of `total`, if any. `bonus` extra
  /// weight is credited to `bonus_to`.
  std::optional<CandidateId> majority(Weight total, CandidateId bonus_to = kNoBonus, Weight bonus = 0) const {
    std::optional<CandidateId> found;
    remaining_.for_each([&](CandidateId c) {
      if (2 * effective(c, bonus_to, bonus) > total) found = c;
    });
    return found;
  }

  /// The candidate that would be eliminated this round.
  CandidateId lowest(const TieRule& rule, CandidateId bonus_to = kNoBonus, Weight bonus = 0) const {
    CandidateId best = 0;
    Weight best_tally = 0;
    bool first = true;
    remaining_.for_each([&](CandidateId c) {
      const Weight t = effective(c, bonus_to, bonus);
      if (first || t < best_tally || (t == best_tally && rule.eliminates_first(c, best))) {
        best = c;
        best_tally = t;
        first = false;
      }
    });
    return best;
  }

  void eliminate(CandidateId e) {
    if (!remaining_.contains(e)) throw Error("candidate " + std::to_string(e) + " is not standing");
    if (count_ == 1) throw Error("cannot eliminate the last candidate");
    remaining_.erase(e);
    --count_;
    tallies_[e] = 0;
    const auto ballots = profile_->ballots();
    for (std::size_t i = 0; i < ballots.size(); ++i) {
      if (ballots[i][cursor_[i]] != e) continue;
      cursor_[i] = advance(ballots[i], cursor_[i] + 1);
      tallies_[ballots[i][cursor_[i]]] += ballots[i].weight();
    }
  }

  static constexpr CandidateId kNoBonus = static_cast<CandidateId>(-1);

 private:
  Weight effective(CandidateId c, CandidateId bonus_to, Weight bonus) const noexcept {
    return tallies_[c] + (c == bonus_to ? bonus : 0);
  }

  std::size_t advance(const Ballot& b, std::size_t from) const {
    for (std::size_t k = from; k < b.size(); ++k)
      if (remaining_.contains(b[k])) return k;
    throw Error("no remaining candidates");
  }

  const Profile* profile_;
  CandidateSet remaining_;
  std::size_t count_;
  std::vector<Weight> tallies_;
  std::vector<std::size_t> cursor_;
};

struct RoundRecord {
  enum class Action { Eliminated, Winner };

  CandidateSet remaining;
  Tallies tallies;
  Action action;
  CandidateId candidate;
};

struct ElectionOutcome {
  CandidateId winner;
  std::vector<RoundRecord> rounds;
};

/// Single-winner STV: drop the lowest first-preference tally until some
/// candidate holds a strict majority of the total weight.
inline ElectionOutcome stv_winner(const Profile& profile, const TieRule& rule = TieRule::max_index()) {
  const Weight total = profile.total_weight();
  if (total == 0) throw Error("empty election");
  RoundEngine engine(profile, CandidateSet::first(profile.candidates()));
  ElectionOutcome outcome{};
  for (;;) {
    auto winner = engine.majority(total);
    if (!winner && engine.remaining_count() == 1) winner = engine.lowest(rule);
    if (winner) {
      outcome.winner = *winner;
      outcome.rounds.push_back({engine.remaining(), engine.snapshot(), RoundRecord::Action::Winner, *winner});
      return outcome;
    }
    const CandidateId loser = engine.lowest(rule);
    outcome.rounds.push_back({engine.remaining(), engine.snapshot(), RoundRecord::Action::Eliminated, loser});
    engine.eliminate(loser);
  }
}

/// Winner only, without the round trace.
inline CandidateId stv_winner_id(const Profile& profile, const TieRule& rule = TieRule::max_index()) {
  const Weight total = profile.total_weight();
  if (total == 0) throw Error("empty election");
  RoundEngine engine(profile, CandidateSet::first(profile.candidates()));
  for (;;) {
    if (auto w = engine.majority(total)) return *w;
    if (engine.remaining_count() == 1) return engine.lowest(rule);
    engine.eliminate(engine.lowest(rule));
  }
}

}  // namespace stvm
