// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Sparse crew x crew x genre collaboration-count tensor and the cubic
// acquaintance score
//
//   A(x) = sum_{n,m in crew} sum_{l in genres} W[n][m][l] x[n] x[m] x[l].
//
// Only n < m is stored; W is symmetric in its first two slots with a zero
// diagonal, so every stored count contributes twice to the ordered sum.
// All indices are positions in the owning FeatureIndex.

#ifndef MOVIEPLAN_TENSOR_H_
#define MOVIEPLAN_TENSOR_H_

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "movieplan/errors.h"
#include "movieplan/library.h"

namespace movieplan {

class AcquaintanceTensor {
 public:
  struct Entry {
    uint32_t n = 0;  // crew, n < m
    uint32_t m = 0;  // crew
    uint32_t l = 0;  // genre
    uint32_t count = 0;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  AcquaintanceTensor() = default;

  // Crew positions are [0, crew), genre positions [crew, crew + genres).
  AcquaintanceTensor(size_t crew, size_t genres, std::vector<Entry> entries)
      : crew_(crew), genres_(genres), entries_(std::move(entries)) {
    for (auto& e : entries_) {
      if (e.n > e.m) std::swap(e.n, e.m);
      if (e.n == e.m) throw InvalidInput("tensor entry on the diagonal at crew " + std::to_string(e.n));
      if (e.m >= crew_ || e.l < crew_ || e.l >= crew_ + genres_) {
        throw InvalidInput("tensor entry (" + std::to_string(e.n) + "," + std::to_string(e.m) + "," +
                           std::to_string(e.l) + ") outside crew x crew x genre ranges");
      }
    }
    std::sort(entries_.begin(), entries_.end(), KeyLess);
    for (size_t i = 1; i < entries_.size(); ++i) {
      if (!KeyLess(entries_[i - 1], entries_[i])) throw InvalidInput("duplicate tensor entry");
    }
    entries_.erase(std::remove_if(entries_.begin(), entries_.end(), [](const Entry& e) { return e.count == 0; }),
                   entries_.end());
  }

  // Each movie adds 1 to (c_i, c_j, g) for every unordered pair of distinct
  // crew features and every genre g of that movie.
  static AcquaintanceTensor Build(const KnowledgeLibrary& lib, const FeatureIndex& index) {
    const size_t crew = index.crew_range().size();
    const size_t genres = index.genre_range().size();
    if (index.size() > kMask) throw InvalidInput("feature index too large for tensor keys");
    std::unordered_map<uint64_t, uint32_t> counts;
    std::vector<size_t> members;
    std::vector<size_t> movie_genres;
    for (const auto& movie : lib.movies()) {
      members.clear();
      movie_genres.clear();
      for (Role r : kCrewRoles) {
        for (const auto& name : movie.names(r)) members.push_back(index.Position(r, name));
      }
      for (const auto& g : movie.genres) movie_genres.push_back(index.Position(Role::kGenre, g));
      std::sort(members.begin(), members.end());
      for (size_t a = 0; a < members.size(); ++a) {
        for (size_t b = a + 1; b < members.size(); ++b) {
          for (size_t g : movie_genres) ++counts[Key(members[a], members[b], g)];
        }
      }
    }
    std::vector<Entry> entries;
    entries.reserve(counts.size());
    for (const auto& [key, count] : counts) {
      entries.push_back({static_cast<uint32_t>(key >> 42), static_cast<uint32_t>((key >> 21) & kMask),
                         static_cast<uint32_t>(key & kMask), count});
    }
    return AcquaintanceTensor(crew, genres, std::move(entries));
  }

  size_t crew_count() const { return crew_; }
  size_t genre_count() const { return genres_; }
  size_t dimension() const { return crew_ + genres_; }

  // Unordered (n < m) entries sorted by (n, m, l).
  std::span<const Entry> entries() const { return entries_; }
  // Nonzero entries of the full symmetric tensor.
  size_t stored_entries() const { return 2 * entries_.size(); }

  uint64_t total_mass() const {
    uint64_t s = 0;
    for (const auto& e : entries_) s += 2ull * e.count;
    return s;
  }

  uint32_t at(size_t n, size_t m, size_t l) const {
    if (n == m) return 0;
    if (n > m) std::swap(n, m);
    const Entry probe{static_cast<uint32_t>(n), static_cast<uint32_t>(m), static_cast<uint32_t>(l), 0};
    auto it = std::lower_bound(entries_.begin(), entries_.end(), probe, KeyLess);
    if (it == entries_.end() || it->n != probe.n || it->m != probe.m || it->l != probe.l) return 0;
    return it->count;
  }

  double Evaluate(std::span<const double> x) const {
    CheckDimension(x.size());
    double s = 0.0;
    for (const auto& e : entries_) s += e.count * x[e.n] * x[e.m] * x[e.l];
    return 2.0 * s;
  }

  std::vector<double> Gradient(std::span<const double> x) const {
    CheckDimension(x.size());
    std::vector<double> g(x.size(), 0.0);
    for (const auto& e : entries_) {
      const double c = 2.0 * e.count;
      g[e.n] += c * x[e.m] * x[e.l];
      g[e.m] += c * x[e.n] * x[e.l];
      g[e.l] += c * x[e.n] * x[e.m];
    }
    return g;
  }

  // One JSON object per unordered entry.
  void Write(std::ostream& out) const {
    for (const auto& e : entries_) {
      out << json{{"n", e.n}, {"m", e.m}, {"l", e.l}, {"count", e.count}}.dump() << '\n';
    }
  }

  static AcquaintanceTensor Load(std::istream& in, const FeatureIndex& index) {
    std::vector<Entry> entries;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) {
        throw InvalidInput("tensor file line " + std::to_string(line_no) + ": malformed JSON");
      }
      try {
        const auto n = j.at("n").get<int64_t>();
        const auto m = j.at("m").get<int64_t>();
        const auto l = j.at("l").get<int64_t>();
        const auto count = j.at("count").get<int64_t>();
        if (n < 0 || m < 0 || l < 0 || count < 0 || n >= m) throw InvalidInput("bad indices");
        entries.push_back({static_cast<uint32_t>(n), static_cast<uint32_t>(m), static_cast<uint32_t>(l),
                           static_cast<uint32_t>(count)});
      } catch (const std::exception& e) {
        throw InvalidInput("tensor file line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    return AcquaintanceTensor(index.crew_range().size(), index.genre_range().size(), std::move(entries));
  }

 private:
  static constexpr uint64_t kMask = (1ull << 21) - 1;

  static uint64_t Key(size_t n, size_t m, size_t l) {
    return (static_cast<uint64_t>(n) << 42) | (static_cast<uint64_t>(m) << 21) | static_cast<uint64_t>(l);
  }

  static bool KeyLess(const Entry& a, const Entry& b) {
    return std::tie(a.n, a.m, a.l) < std::tie(b.n, b.m, b.l);
  }

  void CheckDimension(size_t n) const {
    if (n != dimension()) {
      throw InvalidInput("configuration length " + std::to_string(n) + " does not match tensor dimension " +
                         std::to_string(dimension()));
    }
  }

  size_t crew_ = 0;
  size_t genres_ = 0;
  std::vector<Entry> entries_;
};

}  // namespace movieplan

#endif  // MOVIEPLAN_TENSOR_H_
