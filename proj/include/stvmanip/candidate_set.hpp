#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace stvm {

using CandidateId = std::uint32_t;

/// Upper bound on the number of candidates in one election.
inline constexpr std::size_t kMaxCandidates = 256;

/// Fixed-capacity bitset over candidate indices. Iteration is in ascending
/// index order.
class CandidateSet {
 public:
  constexpr CandidateSet() = default;

  static CandidateSet first(std::size_t m) {
    CandidateSet s;
    for (std::size_t w = 0; w < kWords && m > 0; ++w) {
      const std::size_t take = m < 64 ? m : 64;
      s.words_[w] = take == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << take) - 1);
      m -= take;
    }
    return s;
  }

  bool contains(CandidateId c) const noexcept {
    return c < kMaxCandidates && ((words_[c >> 6] >> (c & 63)) & 1u) != 0;
  }
  void insert(CandidateId c) noexcept { words_[c >> 6] |= bit(c); }
  void erase(CandidateId c) noexcept { words_[c >> 6] &= ~bit(c); }

  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const noexcept {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < kWords; ++w) {
      for (auto bits = words_[w]; bits != 0; bits &= bits - 1)
        f(static_cast<CandidateId>(w * 64 + std::countr_zero(bits)));
    }
  }

  std::vector<CandidateId> to_vector() const {
    std::vector<CandidateId> out;
    out.reserve(size());
    for_each([&](CandidateId c) { out.push_back(c); });
    return out;
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (auto w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;

 private:
  static constexpr std::size_t kWords = kMaxCandidates / 64;
  static constexpr std::uint64_t bit(CandidateId c) noexcept { return std::uint64_t{1} << (c & 63); }

  std::array<std::uint64_t, kWords> words_{};
};

}  // namespace stvm

template <>
struct std::hash<stvm::CandidateSet> {
  std::size_t operator()(const stvm::CandidateSet& s) const noexcept { return s.hash(); }
};
