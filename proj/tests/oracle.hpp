#pragma once

// Test-only reference code. Nothing here calls into the library's tally or
// search paths; it works on plain vectors.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "stvmanip/profile.hpp"
#include "stvmanip/rng.hpp"
#include "stvmanip/stv.hpp"
#include "stvmanip/votegen.hpp"

namespace oracle {

using stvm::CandidateId;

// Single-winner STV recounted from scratch every round over unit ballots.
inline CandidateId naive_stv(const std::vector<std::vector<CandidateId>>& voters, std::size_t m,
                             const stvm::TieRule& rule) {
  std::set<CandidateId> standing;
  for (CandidateId c = 0; c < m; ++c) standing.insert(c);
  const std::size_t total = voters.size();
  while (true) {
    std::map<CandidateId, std::size_t> count;
    for (auto c : standing) count[c] = 0;
    for (const auto& v : voters) {
      for (auto c : v) {
        if (standing.count(c)) {
          ++count[c];
          break;
        }
      }
    }
    for (auto [c, k] : count)
      if (2 * k > total) return c;
    if (standing.size() == 1) return *standing.begin();
    CandidateId loser = *standing.begin();
    for (auto [c, k] : count) {
      const auto lk = count[loser];
      if (k < lk || (k == lk && rule.eliminates_first(c, loser))) loser = c;
    }
    standing.erase(loser);
  }
}

inline std::vector<std::vector<CandidateId>> unit_ballots(const stvm::Profile& p) {
  std::vector<std::vector<CandidateId>> out;
  for (const auto& b : p.ballots())
    for (stvm::Weight i = 0; i < b.weight(); ++i) out.emplace_back(b.ranking().begin(), b.ranking().end());
  return out;
}

inline CandidateId naive_stv(const stvm::Profile& p, const stvm::TieRule& rule = stvm::TieRule::max_index()) {
  return naive_stv(unit_ballots(p), p.candidates(), rule);
}

// Tries all m! manipulator ballots against the naive tally.
inline bool naive_manipulable(const stvm::Profile& fixed, stvm::Weight w, CandidateId p,
                              const stvm::TieRule& rule = stvm::TieRule::max_index()) {
  auto voters = unit_ballots(fixed);
  std::vector<CandidateId> perm(fixed.candidates());
  for (CandidateId c = 0; c < perm.size(); ++c) perm[c] = c;
  do {
    auto all = voters;
    for (stvm::Weight i = 0; i < w; ++i) all.push_back(perm);
    if (!all.empty() && naive_stv(all, fixed.candidates(), rule) == p) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Random weighted profile; weights in [1, max_weight].
inline stvm::Profile random_weighted_profile(std::size_t m, std::size_t ballots, stvm::Weight max_weight,
                                             stvm::Rng& rng) {
  stvm::Profile out(m);
  for (std::size_t i = 0; i < ballots; ++i)
    out.add(stvm::Ballot(stvm::random_permutation(m, rng), 1 + rng.below(max_weight)));
  return out;
}

}  // namespace oracle
