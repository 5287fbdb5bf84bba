#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ranges>
#include <string>
#include <string_view>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "concord/error.hpp"

namespace concord {

// One clustering of n items as dense 0-based cluster ids: every id in
// [0, num_clusters) occurs at least once.
class LabelVector {
 public:
  LabelVector() = default;

  static LabelVector from_assignments(std::vector<std::uint32_t> assignments) {
    if (assignments.empty()) raise(Errc::empty_input, "label vector has no items");
    std::uint32_t max_id = 0;
    for (std::uint32_t a : assignments) max_id = std::max(max_id, a);
    std::vector<bool> seen(static_cast<std::size_t>(max_id) + 1, false);
    for (std::uint32_t a : assignments) seen[a] = true;
    for (std::size_t k = 0; k < seen.size(); ++k) {
      if (!seen[k])
        raise(Errc::invalid_labels,
              "cluster id " + std::to_string(k) + " unused; ids must be dense");
    }
    LabelVector lv;
    lv.assignments_ = std::move(assignments);
    lv.num_clusters_ = max_id + 1;
    return lv;
  }

  const std::vector<std::uint32_t>& assignments() const noexcept { return assignments_; }
  std::uint32_t operator[](std::size_t i) const noexcept { return assignments_[i]; }
  std::size_t n() const noexcept { return assignments_.size(); }
  std::uint32_t num_clusters() const noexcept { return num_clusters_; }

 private:
  std::vector<std::uint32_t> assignments_;
  std::uint32_t num_clusters_ = 0;
};

// Dense ids in first-occurrence order; equal tokens map to one id. The
// choice of order is unobservable downstream because every index depends
// only on co-membership.
template <std::ranges::forward_range R>
LabelVector factorize(const R& tokens) {
  using Token = std::remove_cvref_t<std::ranges::range_value_t<R>>;
  std::vector<std::uint32_t> assignments;
  if constexpr (std::ranges::sized_range<R>) assignments.reserve(std::ranges::size(tokens));
  std::unordered_map<Token, std::uint32_t> ids;
  std::size_t row = 0;
  for (const auto& token : tokens) {
    ++row;
    if constexpr (std::is_convertible_v<Token, std::string_view>) {
      if (std::string_view(token).empty())
        raise(Errc::missing_label, "empty label at row " + std::to_string(row));
    }
    const auto [it, inserted] =
        ids.try_emplace(token, static_cast<std::uint32_t>(ids.size()));
    assignments.push_back(it->second);
  }
  if (assignments.empty()) raise(Errc::empty_input, "no labels to factorize");
  return LabelVector::from_assignments(std::move(assignments));
}

struct LabelFileOptions {
  char delimiter = ',';
  bool skip_header = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) noexcept {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (in.bad()) raise(Errc::io_error, "read failure on " + path.string());
  return lines;
}

inline std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

}  // namespace detail

// UTF-8 text, one label per line. Labels are trimmed of surrounding
// whitespace; an empty row is an error, never a dropped item.
inline LabelVector read_single_column(const std::filesystem::path& path,
                                      const LabelFileOptions& options = {}) {
  const auto lines = detail::read_lines(path);
  const std::size_t first = options.skip_header ? 1 : 0;
  if (lines.size() <= first) raise(Errc::empty_input, path.string() + " has no data rows");
  std::vector<std::string> tokens;
  tokens.reserve(lines.size() - first);
  for (std::size_t r = first; r < lines.size(); ++r) {
    const auto token = detail::trim(lines[r]);
    if (token.empty())
      raise(Errc::missing_label, path.string() + " row " + std::to_string(r + 1) + " is empty");
    tokens.emplace_back(token);
  }
  return factorize(tokens);
}

// Two delimited label columns in one file.
inline std::pair<LabelVector, LabelVector> read_two_columns(
    const std::filesystem::path& path, const LabelFileOptions& options = {}) {
  const auto lines = detail::read_lines(path);
  const std::size_t first = options.skip_header ? 1 : 0;
  std::vector<std::string> left;
  std::vector<std::string> right;
  for (std::size_t r = first; r < lines.size(); ++r) {
    const std::string& line = lines[r];
    const std::string row_id = path.string() + " row " + std::to_string(r + 1);
    if (detail::trim(line).empty()) raise(Errc::missing_label, row_id + " is empty");
    const auto fields = detail::split_fields(line, options.delimiter);
    if (fields.size() == 1)
      raise(Errc::length_mismatch, row_id + " has 1 column, expected 2");
    if (fields.size() > 2)
      raise(Errc::parse_error, row_id + ": expected 2 columns, got " +
                                   std::to_string(fields.size()) + " in \"" + line + "\"");
    const auto a = detail::trim(fields[0]);
    const auto b = detail::trim(fields[1]);
    if (a.empty() || b.empty()) raise(Errc::missing_label, row_id + " has an empty label");
    left.emplace_back(a);
    right.emplace_back(b);
  }
  if (left.empty()) raise(Errc::empty_input, path.string() + " has no data rows");
  return {factorize(left), factorize(right)};
}

}  // namespace concord
