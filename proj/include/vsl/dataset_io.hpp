#pragma once
// Dataset CSV: header "f1,...,fn,label", cells 0/1, label pos/neg (1/0 also
// accepted on input). The writer's output round-trips byte-identically.

#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vsl/core.hpp"

namespace vsl::io {

inline std::string write_csv(const dataset& d) {
  std::string out;
  out.reserve(16 + d.samples.size() * (static_cast<std::size_t>(d.n) * 2 + 4));
  for (int i = 1; i <= d.n; ++i) {
    out += 'f';
    out += std::to_string(i);
    out += ',';
  }
  out += "label\n";
  for (const sample& s : d.samples) {
    for (std::uint8_t b : s.bits) {
      out += b ? '1' : '0';
      out += ',';
    }
    out += s.lab == label::positive ? "pos" : "neg";
    out += '\n';
  }
  return out;
}

namespace detail {

[[noreturn]] inline void bad_csv(std::size_t line, std::size_t column, const std::string& what) {
  throw parse_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                    what);
}

inline std::vector<std::string_view> split_fields(std::string_view row) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= row.size(); ++i) {
    if (i == row.size() || row[i] == ',') {
      fields.push_back(row.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

}  // namespace detail

// Column numbers in diagnostics are 1-based CSV fields, not byte offsets.
inline dataset parse_csv(std::string_view text) {
  if (text.empty()) throw parse_error("line 1, column 1: empty input");

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      std::string_view row = text.substr(start, i - start);
      if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
      lines.push_back(row);
      start = i + 1;
    }
  }
  // A trailing newline yields one empty tail entry; drop it. Blank interior
  // lines are errors, caught below.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw parse_error("line 1, column 1: empty input");

  const std::vector<std::string_view> header = detail::split_fields(lines[0]);
  if (header.size() < 2)
    detail::bad_csv(1, 1, "header needs at least one feature column and the label column");
  const int n = static_cast<int>(header.size()) - 1;
  for (int i = 0; i < n; ++i) {
    const std::string expected = "f" + std::to_string(i + 1);
    if (header[static_cast<std::size_t>(i)] != expected)
      detail::bad_csv(1, static_cast<std::size_t>(i) + 1,
                      "expected header field '" + expected + "', got '" +
                          std::string(header[static_cast<std::size_t>(i)]) + "'");
  }
  if (header.back() != "label")
    detail::bad_csv(1, header.size(), "last header field must be 'label'");

  dataset d;
  d.n = n;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::size_t line_no = r + 1;
    const std::vector<std::string_view> fields = detail::split_fields(lines[r]);
    if (fields.size() != header.size())
      detail::bad_csv(line_no, fields.size(),
                      "expected " + std::to_string(header.size()) + " fields, got " +
                          std::to_string(fields.size()));
    sample s;
    s.bits.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const std::string_view cell = fields[static_cast<std::size_t>(i)];
      if (cell == "0")
        s.bits.push_back(0);
      else if (cell == "1")
        s.bits.push_back(1);
      else
        detail::bad_csv(line_no, static_cast<std::size_t>(i) + 1,
                        "cell must be 0 or 1, got '" + std::string(cell) + "'");
    }
    const std::string_view lab = fields.back();
    if (lab == "pos" || lab == "1")
      s.lab = label::positive;
    else if (lab == "neg" || lab == "0")
      s.lab = label::negative;
    else
      detail::bad_csv(line_no, fields.size(),
                      "label must be pos, neg, 1, or 0, got '" + std::string(lab) + "'");
    d.samples.push_back(std::move(s));
  }
  return d;
}

}  // namespace vsl::io
