#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stvmanip/candidate_set.hpp"
#include "stvmanip/error.hpp"

namespace stvm {

using Weight = std::uint64_t;

/// A strict total order over all m candidates, cast by `weight` identical
/// voters.
class Ballot {
 public:
  Ballot(std::vector<CandidateId> ranking, Weight weight = 1)
      : ranking_(std::move(ranking)), weight_(weight) {
    if (weight_ == 0) throw Error("ballot weight must be positive");
    if (ranking_.empty()) throw Error("ballot ranks no candidates");
    if (ranking_.size() > kMaxCandidates) throw Error("too many candidates in ballot");
    std::vector<bool> seen(ranking_.size(), false);
    for (auto c : ranking_) {
      if (c >= ranking_.size())
        throw Error("candidate " + std::to_string(c) + " out of range for " + std::to_string(ranking_.size()) +
                    " candidates");
      if (seen[c]) throw Error("duplicate candidate " + std::to_string(c));
      seen[c] = true;
    }
  }

  std::span<const CandidateId> ranking() const noexcept { return ranking_; }
  CandidateId operator[](std::size_t i) const { return ranking_[i]; }
  std::size_t size() const noexcept { return ranking_.size(); }
  Weight weight() const noexcept { return weight_; }

  Ballot with_weight(Weight w) const { return Ballot(ranking_, w); }

  friend bool operator==(const Ballot&, const Ballot&) = default;

 private:
  std::vector<CandidateId> ranking_;
  Weight weight_;
};

/// The fixed (non-manipulator) votes of an election over candidates 0..m-1.
class Profile {
 public:
  explicit Profile(std::size_t m) : m_(m) {
    if (m == 0) throw Error("an election needs at least one candidate");
    if (m > kMaxCandidates) throw Error("at most " + std::to_string(kMaxCandidates) + " candidates supported");
  }
  Profile(std::size_t m, std::vector<Ballot> ballots) : Profile(m) {
    ballots_.reserve(ballots.size());
    for (auto& b : ballots) add(std::move(b));
  }

  void add(Ballot b) {
    if (b.size() != m_)
      throw Error("ballot ranks " + std::to_string(b.size()) + " candidates, expected " + std::to_string(m_));
    total_ += b.weight();
    ballots_.push_back(std::move(b));
  }

  std::size_t candidates() const noexcept { return m_; }
  std::span<const Ballot> ballots() const noexcept { return ballots_; }
  std::size_t size() const noexcept { return ballots_.size(); }
  Weight total_weight() const noexcept { return total_; }

  /// Copy with `extra` appended.
  Profile with(Ballot extra) const {
    Profile p = *this;
    p.add(std::move(extra));
    return p;
  }

  /// Merges identical rankings into one weighted ballot, keeping the order of
  /// first occurrence. Election outcomes are unchanged.
  Profile aggregated() const {
    std::map<std::vector<CandidateId>, std::size_t> index;
    std::vector<std::pair<std::vector<CandidateId>, Weight>> merged;
    for (const auto& b : ballots_) {
      std::vector<CandidateId> key(b.ranking().begin(), b.ranking().end());
      auto [it, fresh] = index.try_emplace(key, merged.size());
      if (fresh)
        merged.emplace_back(std::move(key), b.weight());
      else
        merged[it->second].second += b.weight();
    }
    Profile out(m_);
    out.ballots_.reserve(merged.size());
    for (auto& [ranking, w] : merged) out.add(Ballot(std::move(ranking), w));
    return out;
  }

  /// One weight-1 ballot per voter.
  Profile expanded() const {
    Profile out(m_);
    out.ballots_.reserve(static_cast<std::size_t>(total_));
    for (const auto& b : ballots_)
      for (Weight i = 0; i < b.weight(); ++i) out.add(b.with_weight(1));
    return out;
  }

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  std::size_t m_;
  std::vector<Ballot> ballots_;
  Weight total_ = 0;
};

}  // namespace stvm
