#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stvmanip/error.hpp"
#include "stvmanip/profile.hpp"
#include "stvmanip/rng.hpp"

namespace stvm {

inline std::vector<CandidateId> random_permutation(std::size_t m, Rng& rng) {
  std::vector<CandidateId> order(m);
  std::iota(order.begin(), order.end(), CandidateId{0});
  shuffle(std::span(order), rng);
  return order;
}

/// Impartial Culture: n independent uniform permutations.
inline Profile ic_sample(std::size_t m, std::size_t n, Rng& rng) {
  Profile out(m);
  for (std::size_t i = 0; i < n; ++i) out.add(Ballot(random_permutation(m, rng)));
  return out;
}

/// Polya-Eggenberger urn with normalised replacement b = a / m!.
///
/// Draw t sees an urn of m! + t*a ballots: the m! originals plus a copies of
/// each earlier draw. So it is fresh and uniform with probability 1/(1 + t*b)
/// and otherwise repeats a uniformly chosen earlier draw. No coin is flipped
/// when t*b == 0, which makes b = 0 consume exactly the stream of ic_sample.
inline Profile urn_sample(std::size_t m, std::size_t n, double b, Rng& rng) {
  if (!(b >= 0)) throw Error("urn parameter b must be nonnegative");
  std::vector<std::vector<CandidateId>> draws;
  draws.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double mass = static_cast<double>(t) * b;
    bool copy = false;
    if (mass > 0) copy = rng.unit() * (1.0 + mass) >= 1.0;
    if (copy)
      draws.push_back(draws[static_cast<std::size_t>(rng.below(t))]);
    else
      draws.push_back(random_permutation(m, rng));
  }
  Profile out(m);
  for (auto& d : draws) out.add(Ballot(std::move(d)));
  return out;
}

struct BaseProfile {
  Profile profile;
  std::string label;
};

/// n voters drawn from the base: a uniform subset without replacement when
/// the base is large enough, otherwise i.i.d. draws with replacement.
inline Profile resample_voters(const BaseProfile& base, std::size_t n, Rng& rng) {
  const Profile unit = base.profile.expanded();
  const auto source = unit.ballots();
  if (source.empty()) throw Error("base profile '" + base.label + "' has no ballots");
  if (n == 0) throw Error("resample_voters needs at least one voter");
  Profile out(unit.candidates());
  if (n <= source.size()) {
    std::vector<std::size_t> idx(source.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
      std::swap(idx[i], idx[j]);
      out.add(source[idx[i]]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) out.add(source[static_cast<std::size_t>(rng.below(source.size()))]);
  }
  return out;
}

/// Changes the candidate count to m. Shrinking keeps a uniform m-subset of
/// candidates with every ballot's induced order. Growing doubles every
/// candidate (the clone tied with its original) until there are at least m,
/// then keeps a uniform m-subset; each voter breaks each tie group into a
/// uniformly random strict order. Kept candidates are relabelled 0..m-1 in
/// ascending order of (original, clone generation).
inline Profile resample_candidates(const BaseProfile& base, std::size_t m, Rng& rng) {
  const std::size_t base_m = base.profile.candidates();
  if (m == 0) throw Error("resample_candidates needs at least one candidate");
  if (m > kMaxCandidates) throw Error("at most " + std::to_string(kMaxCandidates) + " candidates supported");
  std::size_t pool = base_m;
  while (pool < m) pool *= 2;

  // Virtual candidate v is a clone of original v % base_m.
  std::vector<std::size_t> virt(pool);
  std::iota(virt.begin(), virt.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool - i));
    std::swap(virt[i], virt[j]);
  }
  virt.resize(m);
  std::sort(virt.begin(), virt.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(a % base_m, a / base_m) < std::pair(b % base_m, b / base_m);
  });

  std::vector<std::vector<CandidateId>> groups(base_m);
  for (std::size_t label = 0; label < m; ++label) groups[virt[label] % base_m].push_back(static_cast<CandidateId>(label));

  const Profile unit = base.profile.expanded();
  Profile out(m);
  std::vector<CandidateId> ranking;
  ranking.reserve(m);
  for (const auto& b : unit.ballots()) {
    ranking.clear();
    for (auto original : b.ranking()) {
      auto& g = groups[original];
      const auto first = ranking.size();
      ranking.insert(ranking.end(), g.begin(), g.end());
      if (g.size() > 1) shuffle(std::span(ranking).subspan(first), rng);
    }
    out.add(Ballot(ranking));
  }
  return out;
}

struct ImpartialCulture {};
struct Urn {
  double b = 1.0;
};
struct Resample {
  std::shared_ptr<const BaseProfile> base;
};

using Distribution = std::variant<ImpartialCulture, Urn, Resample>;

inline std::string distribution_name(const Distribution& d) {
  struct Namer {
    std::string operator()(const ImpartialCulture&) const { return "ic"; }
    std::string operator()(const Urn&) const { return "urn"; }
    std::string operator()(const Resample& r) const { return "resample:" + r.base->label; }
  };
  return std::visit(Namer{}, d);
}

inline double distribution_param(const Distribution& d) {
  if (const auto* u = std::get_if<Urn>(&d)) return u->b;
  return 0.0;
}

/// n fixed voters over m candidates from `dist`.
inline Profile sample(const Distribution& dist, std::size_t m, std::size_t n, Rng& rng) {
  struct Sampler {
    std::size_t m, n;
    Rng& rng;
    Profile operator()(const ImpartialCulture&) const { return ic_sample(m, n, rng); }
    Profile operator()(const Urn& u) const { return urn_sample(m, n, u.b, rng); }
    Profile operator()(const Resample& r) const {
      if (!r.base) throw Error("resample distribution has no base profile");
      if (n == 0) return Profile(m);
      BaseProfile reshaped{resample_candidates(*r.base, m, rng), r.base->label};
      return resample_voters(reshaped, n, rng);
    }
  };
  return std::visit(Sampler{m, n, rng}, dist);
}

/// Synthetic stand-ins for the two real committee datasets, same shape
/// (voters x candidates): "nasa-shape" 10 x 32 and "hiring-shape" 10 x 3.
inline BaseProfile builtin_base(std::string_view name) {
  if (name == "nasa-shape") {
    Rng rng(0x4e415341ull);
    return {ic_sample(32, 10, rng), "nasa-shape"};
  }
  if (name == "hiring-shape") {
    Rng rng(0x48495245ull);
    return {ic_sample(3, 10, rng), "hiring-shape"};
  }
  throw Error("unknown builtin base profile '" + std::string(name) + "'");
}

}  // namespace stvm
