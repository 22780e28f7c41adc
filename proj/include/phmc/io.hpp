/*
 * Copyright 2026 The phmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PHMC_IO_HPP
#define PHMC_IO_HPP

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

#include "phmc/types.hpp"

namespace phmc::io {

/// Shortest decimal form that round-trips; locale independent.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline double parse_real(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw IoError("not a number: '" + std::string(s) + "'");
  return v;
}

inline long long parse_integer(std::string_view s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw IoError("not an integer: '" + std::string(s) + "'");
  return v;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw IoError("missing column '" + std::string(name) + "'");
  }
};

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  t.header = split_line(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto row = split_line(line);
    if (row.size() != t.header.size())
      throw IoError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                    " fields, got " + std::to_string(row.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Writes a CSV with '\n' line endings; all numeric formatting is done by the caller.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot write " + path);
    row(header);
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
    if (!out_) throw IoError("write failed: " + path_);
  }

  void close() {
    out_.close();
    if (!out_) throw IoError("write failed: " + path_);
  }

 private:
  std::string path_;
  std::ofstream out_;
};

template <class Obs>
struct Dataset {
  std::vector<Obs> y;
  std::optional<std::vector<double>> h;
};

template <class Obs>
std::string format_observation(Obs v) {
  if constexpr (std::is_integral_v<Obs>)
    return std::to_string(v);
  else
    return format_real(static_cast<double>(v));
}

/// Dataset CSV `t,y` or `t,y,h` with 1-based t.
template <class Obs>
void write_dataset(const std::string& path, const std::vector<Obs>& y, const std::vector<double>* h = nullptr) {
  if (h && h->size() != y.size()) throw std::invalid_argument("write_dataset: y and h lengths differ");
  CsvWriter w(path, h ? std::vector<std::string>{"t", "y", "h"} : std::vector<std::string>{"t", "y"});
  for (std::size_t t = 0; t < y.size(); ++t) {
    std::vector<std::string> r{std::to_string(t + 1), format_observation(y[t])};
    if (h) r.push_back(format_real((*h)[t]));
    w.row(r);
  }
  w.close();
}

/// Reads a `t,y[,h]` CSV. Integer observation types require non-negative integers.
template <class Obs>
Dataset<Obs> read_dataset(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t cy = t.column("y");
  std::optional<std::size_t> ch;
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == "h") ch = i;
  if (t.rows.empty()) throw IoError(path + ": no observations");
  Dataset<Obs> d;
  if (ch) d.h.emplace();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string& f = t.rows[r][cy];
    try {
      if constexpr (std::is_integral_v<Obs>) {
        const long long v = parse_integer(f);
        if (v < 0) throw IoError("negative count '" + f + "'");
        d.y.push_back(static_cast<Obs>(v));
      } else {
        const double v = parse_real(f);
        if (!std::isfinite(v)) throw IoError("non-finite observation '" + f + "'");
        d.y.push_back(static_cast<Obs>(v));
      }
      if (ch) d.h->push_back(parse_real(t.rows[r][*ch]));
    } catch (const IoError& e) {
      throw IoError(path + ": row " + std::to_string(r + 1) + ": " + e.what());
    }
  }
  return d;
}

}  // namespace phmc::io

#endif  // PHMC_IO_HPP
