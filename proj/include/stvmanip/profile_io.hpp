#pragma once

#include <algorithm>
#include <charconv>
#include <optional>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "stvmanip/error.hpp"
#include "stvmanip/profile.hpp"

namespace stvm {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_unsigned(std::string_view s, std::uint64_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace detail

/// Reads the text profile format:
///
///     m=3
///     2: 0>1>2
///     1: 2>1>0
///
/// One ballot per line as "<weight>: <ranking>". Text after '#' and blank
/// lines are ignored.
inline Profile parse_profile(std::string_view text) {
  std::optional<Profile> profile;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    if (!profile) {
      std::uint64_t m = 0;
      if (!line.starts_with("m=") || !detail::parse_unsigned(line.substr(2), m))
        throw ParseError(line_no, "expected header 'm=<count>'");
      if (m == 0 || m > kMaxCandidates)
        throw ParseError(line_no, "candidate count must be in 1.." + std::to_string(kMaxCandidates));
      profile.emplace(static_cast<std::size_t>(m));
      continue;
    }

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "expected '<weight>: <ranking>'");
    const auto weight_text = detail::trim(line.substr(0, colon));
    std::uint64_t weight = 0;
    if (!detail::parse_unsigned(weight_text, weight)) {
      if (!weight_text.empty() && weight_text.front() == '-')
        throw ParseError(line_no, "nonpositive weight");
      throw ParseError(line_no, "weight must be a positive integer");
    }
    if (weight == 0) throw ParseError(line_no, "nonpositive weight");

    const std::size_t m = profile->candidates();
    std::vector<CandidateId> ranking;
    std::vector<bool> seen(m, false);
    auto rest = line.substr(colon + 1);
    for (std::size_t from = 0;;) {
      const auto gt = rest.find('>', from);
      const auto token = rest.substr(from, gt == std::string_view::npos ? std::string_view::npos : gt - from);
      std::uint64_t c = 0;
      if (!detail::parse_unsigned(token, c))
        throw ParseError(line_no, "bad candidate '" + std::string(detail::trim(token)) + "'");
      if (c >= m) throw ParseError(line_no, "candidate " + std::to_string(c) + " out of range (m=" + std::to_string(m) + ")");
      if (seen[c]) throw ParseError(line_no, "duplicate candidate " + std::to_string(c));
      seen[c] = true;
      ranking.push_back(static_cast<CandidateId>(c));
      if (gt == std::string_view::npos) break;
      from = gt + 1;
    }
    if (ranking.size() != m) {
      std::size_t missing = 0;
      while (seen[missing]) ++missing;
      throw ParseError(line_no, "missing candidate " + std::to_string(missing) + " (ranking has " +
                                    std::to_string(ranking.size()) + " of m=" + std::to_string(m) + ")");
    }
    profile->add(Ballot(std::move(ranking), weight));
  }
  if (!profile) throw ParseError(std::max<std::size_t>(line_no, 1), "missing header 'm=<count>'");
  return *profile;
}

inline std::string write_profile(const Profile& profile) {
  std::ostringstream out;
  out << "m=" << profile.candidates() << '\n';
  for (const auto& b : profile.ballots()) {
    out << b.weight() << ": ";
    for (std::size_t i = 0; i < b.size(); ++i) out << (i ? ">" : "") << b[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace stvm
