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

// Movie knowledge library: JSONL corpus parsing, the role-partitioned
// feature index, and binary configuration vectors.
//
// Vector layout is fixed: [actors | actresses | directors | writers | genres],
// each block sorted lexicographically by name. The first four blocks form the
// crew range, the last one the genre range.

#ifndef MOVIEPLAN_LIBRARY_H_
#define MOVIEPLAN_LIBRARY_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "movieplan/errors.h"

namespace movieplan {

using json = nlohmann::json;

enum class Role : int { kActor = 0, kActress = 1, kDirector = 2, kWriter = 3, kGenre = 4 };

inline constexpr std::array<Role, 5> kAllRoles = {Role::kActor, Role::kActress, Role::kDirector,
                                                  Role::kWriter, Role::kGenre};
inline constexpr std::array<Role, 4> kCrewRoles = {Role::kActor, Role::kActress, Role::kDirector,
                                                   Role::kWriter};

constexpr std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kActor: return "actor";
    case Role::kActress: return "actress";
    case Role::kDirector: return "director";
    case Role::kWriter: return "writer";
    case Role::kGenre: return "genre";
  }
  return "?";
}

inline std::optional<Role> ParseRole(std::string_view name) {
  for (Role r : kAllRoles) {
    if (RoleName(r) == name) return r;
  }
  return std::nullopt;
}

// A (role, name) pair as written on the wire: "role:name".
struct FeatureRef {
  Role role = Role::kActor;
  std::string name;

  std::string ToString() const { return std::string(RoleName(role)) + ":" + name; }
  friend bool operator==(const FeatureRef&, const FeatureRef&) = default;
};

inline FeatureRef ParseFeatureRef(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidInput("feature reference must look like role:name, got '" + std::string(text) + "'");
  }
  const auto role = ParseRole(text.substr(0, colon));
  if (!role) throw InvalidInput("unknown role in '" + std::string(text) + "'");
  std::string name(text.substr(colon + 1));
  if (name.empty()) throw InvalidInput("empty name in '" + std::string(text) + "'");
  return {*role, std::move(name)};
}

struct MovieRecord {
  std::string id;
  std::string title;
  int year = 0;
  std::set<std::string> genres;
  std::set<std::string> actors;
  std::set<std::string> actresses;
  std::set<std::string> writers;
  std::set<std::string> directors;
  std::optional<double> budget;  // million USD
  std::optional<double> gross;   // million USD

  bool trainable() const { return budget.has_value() && gross.has_value(); }

  const std::set<std::string>& names(Role role) const {
    switch (role) {
      case Role::kActor: return actors;
      case Role::kActress: return actresses;
      case Role::kDirector: return directors;
      case Role::kWriter: return writers;
      case Role::kGenre: return genres;
    }
    return genres;
  }
  std::set<std::string>& names(Role role) {
    return const_cast<std::set<std::string>&>(std::as_const(*this).names(role));
  }

  size_t crew_count() const {
    return actors.size() + actresses.size() + writers.size() + directors.size();
  }
};

inline json RecordToJson(const MovieRecord& m) {
  json j;
  j["id"] = m.id;
  j["title"] = m.title;
  j["year"] = m.year;
  j["genres"] = m.genres;
  j["actors"] = m.actors;
  j["actresses"] = m.actresses;
  j["writers"] = m.writers;
  j["directors"] = m.directors;
  j["budget"] = m.budget ? json(*m.budget) : json(nullptr);
  j["gross"] = m.gross ? json(*m.gross) : json(nullptr);
  return j;
}

struct LineError {
  size_t line = 0;  // 1-based
  std::string reason;
};

struct ParseReport {
  size_t accepted = 0;  // trainable records
  size_t flagged = 0;   // kept, but missing budget or gross
  size_t rejected = 0;
  std::vector<LineError> errors;

  json ToJson() const {
    json errs = json::array();
    for (const auto& e : errors) errs.push_back({{"line", e.line}, {"reason", e.reason}});
    return {{"accepted", accepted}, {"flagged", flagged}, {"rejected", rejected}, {"errors", errs}};
  }
};

class KnowledgeLibrary {
 public:
  KnowledgeLibrary() = default;

  // Throws InvalidInput on duplicate ids.
  explicit KnowledgeLibrary(std::vector<MovieRecord> movies, ParseReport report = {})
      : movies_(std::move(movies)), report_(std::move(report)) {
    for (size_t i = 0; i < movies_.size(); ++i) {
      if (!by_id_.emplace(movies_[i].id, i).second) {
        throw InvalidInput("duplicate movie id '" + movies_[i].id + "'");
      }
      if (movies_[i].trainable()) trainable_.push_back(i);
    }
  }

  const std::vector<MovieRecord>& movies() const { return movies_; }
  const ParseReport& report() const { return report_; }
  const std::vector<size_t>& trainable() const { return trainable_; }
  size_t size() const { return movies_.size(); }
  bool empty() const { return movies_.empty(); }

  std::optional<size_t> Find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
  }

  // Copy of this library without the listed movie ids.
  KnowledgeLibrary Without(const std::set<std::string>& ids) const {
    std::vector<MovieRecord> kept;
    for (const auto& m : movies_) {
      if (!ids.contains(m.id)) kept.push_back(m);
    }
    return KnowledgeLibrary(std::move(kept));
  }

  void Write(std::ostream& out) const {
    for (const auto& m : movies_) out << RecordToJson(m).dump() << '\n';
  }

 private:
  std::vector<MovieRecord> movies_;
  ParseReport report_;
  std::vector<size_t> trainable_;
  std::unordered_map<std::string, size_t> by_id_;
};

namespace internal {

inline bool ReadNameList(const json& obj, const char* key, std::set<std::string>& out,
                         std::string& error) {
  if (!obj.contains(key) || obj[key].is_null()) return true;
  const json& arr = obj[key];
  if (!arr.is_array()) {
    error = std::string("field '") + key + "' must be an array of strings";
    return false;
  }
  for (const auto& v : arr) {
    if (!v.is_string() || v.get_ref<const std::string&>().empty()) {
      error = std::string("field '") + key + "' must contain non-empty strings";
      return false;
    }
    out.insert(v.get<std::string>());
  }
  return true;
}

// Returns false with `error` set on a malformed money field. Absent or null
// leaves `out` empty, which flags the record instead of rejecting it.
inline bool ReadMoney(const json& obj, const char* key, std::optional<double>& out,
                      std::string& error) {
  if (!obj.contains(key) || obj[key].is_null()) return true;
  if (!obj[key].is_number()) {
    error = std::string("field '") + key + "' must be a number or null";
    return false;
  }
  const double v = obj[key].get<double>();
  if (!std::isfinite(v) || v < 0) {
    error = std::string("field '") + key + "' must be finite and non-negative";
    return false;
  }
  out = v;
  return true;
}

inline std::optional<MovieRecord> ParseRecord(const json& obj, std::string& error) {
  if (!obj.is_object()) {
    error = "line is not a JSON object";
    return std::nullopt;
  }
  MovieRecord m;
  if (!obj.contains("id") || !obj["id"].is_string() || obj["id"].get_ref<const std::string&>().empty()) {
    error = "missing or empty 'id'";
    return std::nullopt;
  }
  m.id = obj["id"].get<std::string>();
  if (obj.contains("title") && obj["title"].is_string()) m.title = obj["title"].get<std::string>();
  if (obj.contains("year") && !obj["year"].is_null()) {
    if (!obj["year"].is_number_integer()) {
      error = "field 'year' must be an integer";
      return std::nullopt;
    }
    m.year = obj["year"].get<int>();
  }
  if (!ReadNameList(obj, "genres", m.genres, error) ||
      !ReadNameList(obj, "actors", m.actors, error) ||
      !ReadNameList(obj, "actresses", m.actresses, error) ||
      !ReadNameList(obj, "writers", m.writers, error) ||
      !ReadNameList(obj, "directors", m.directors, error)) {
    return std::nullopt;
  }
  if (m.genres.empty()) {
    error = "record has no genres";
    return std::nullopt;
  }
  if (m.crew_count() == 0) {
    error = "record has no crew members";
    return std::nullopt;
  }
  if (!ReadMoney(obj, "budget", m.budget, error) || !ReadMoney(obj, "gross", m.gross, error)) {
    return std::nullopt;
  }
  return m;
}

}  // namespace internal

// Reads one JSON object per line. Bad lines are rejected into the report and
// parsing continues; a stream with no non-blank lines is an error.
inline KnowledgeLibrary ParseLibrary(std::istream& in) {
  ParseReport report;
  std::vector<MovieRecord> movies;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  size_t non_blank = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++non_blank;
    const json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    std::string error;
    std::optional<MovieRecord> rec;
    if (obj.is_discarded()) {
      error = "malformed JSON";
    } else {
      rec = internal::ParseRecord(obj, error);
    }
    if (rec && seen.contains(rec->id)) {
      error = "duplicate id '" + rec->id + "'";
      rec.reset();
    }
    if (!rec) {
      ++report.rejected;
      report.errors.push_back({line_no, error});
      continue;
    }
    seen.insert(rec->id);
    if (rec->trainable()) {
      ++report.accepted;
    } else {
      ++report.flagged;
    }
    movies.push_back(std::move(*rec));
  }
  if (non_blank == 0) throw InvalidInput("empty library");
  return KnowledgeLibrary(std::move(movies), std::move(report));
}

struct IndexRange {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  bool contains(size_t i) const { return i >= begin && i < end; }
};

// Bijection between (role, name) and positions [0, N).
class FeatureIndex {
 public:
  FeatureIndex() = default;

  // Each block is sorted and deduplicated.
  explicit FeatureIndex(std::array<std::vector<std::string>, 5> blocks) : names_(std::move(blocks)) {
    size_t offset = 0;
    for (size_t b = 0; b < names_.size(); ++b) {
      auto& v = names_[b];
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      offsets_[b] = offset;
      offset += v.size();
    }
    offsets_[5] = offset;
  }

  static FeatureIndex Build(const KnowledgeLibrary& lib) {
    if (lib.empty()) throw InvalidInput("cannot index an empty library");
    std::array<std::set<std::string>, 5> seen;
    for (const auto& m : lib.movies()) {
      for (Role r : kAllRoles) {
        const auto& names = m.names(r);
        seen[static_cast<int>(r)].insert(names.begin(), names.end());
      }
    }
    std::array<std::vector<std::string>, 5> blocks;
    for (size_t b = 0; b < 5; ++b) blocks[b].assign(seen[b].begin(), seen[b].end());
    return FeatureIndex(std::move(blocks));
  }

  size_t size() const { return offsets_[5]; }

  IndexRange block(Role role) const {
    const auto b = static_cast<size_t>(role);
    return {offsets_[b], offsets_[b + 1]};
  }
  size_t block_size(Role role) const { return block(role).size(); }
  std::array<size_t, 5> block_sizes() const {
    std::array<size_t, 5> out{};
    for (size_t b = 0; b < 5; ++b) out[b] = names_[b].size();
    return out;
  }

  IndexRange crew_range() const { return {0, offsets_[4]}; }
  IndexRange genre_range() const { return {offsets_[4], offsets_[5]}; }
  bool is_crew(size_t i) const { return i < offsets_[4]; }

  std::optional<size_t> Find(Role role, std::string_view name) const {
    const auto& v = names_[static_cast<size_t>(role)];
    auto it = std::lower_bound(v.begin(), v.end(), name);
    if (it == v.end() || *it != name) return std::nullopt;
    return offsets_[static_cast<size_t>(role)] + static_cast<size_t>(it - v.begin());
  }

  size_t Position(Role role, std::string_view name) const {
    auto pos = Find(role, name);
    if (!pos) {
      throw InvalidInput("unknown feature " + std::string(RoleName(role)) + ":" + std::string(name));
    }
    return *pos;
  }
  size_t Position(const FeatureRef& ref) const { return Position(ref.role, ref.name); }

  Role role_of(size_t i) const {
    CheckIndex(i);
    for (size_t b = 0; b < 5; ++b) {
      if (i < offsets_[b + 1]) return static_cast<Role>(b);
    }
    return Role::kGenre;
  }

  const std::string& name_of(size_t i) const {
    const Role r = role_of(i);
    return names_[static_cast<size_t>(r)][i - offsets_[static_cast<size_t>(r)]];
  }

  FeatureRef ref_of(size_t i) const { return {role_of(i), name_of(i)}; }

  const std::vector<std::string>& names(Role role) const { return names_[static_cast<size_t>(role)]; }

  json ToJson() const {
    json j;
    for (Role r : kAllRoles) j[std::string(RoleName(r))] = names(r);
    return j;
  }

  static FeatureIndex FromJson(const json& j) {
    std::array<std::vector<std::string>, 5> blocks;
    for (Role r : kAllRoles) {
      const std::string key(RoleName(r));
      if (!j.contains(key) || !j[key].is_array()) {
        throw InvalidInput("feature index file lacks block '" + key + "'");
      }
      blocks[static_cast<size_t>(r)] = j[key].get<std::vector<std::string>>();
    }
    return FeatureIndex(std::move(blocks));
  }

  friend bool operator==(const FeatureIndex& a, const FeatureIndex& b) { return a.names_ == b.names_; }

 private:
  void CheckIndex(size_t i) const {
    if (i >= size()) throw InvalidInput("feature position " + std::to_string(i) + " out of range");
  }

  std::array<std::vector<std::string>, 5> names_;
  std::array<size_t, 6> offsets_{};
};

enum class ConfigMode { kBinary, kRelaxed };

struct ConfigVector {
  std::vector<double> values;
  ConfigMode mode = ConfigMode::kBinary;

  ConfigVector() = default;
  ConfigVector(std::vector<double> v, ConfigMode m) : values(std::move(v)), mode(m) {}
  ConfigVector(size_t n, ConfigMode m) : values(n, 0.0), mode(m) {}

  size_t size() const { return values.size(); }

  bool IsValid() const {
    return std::all_of(values.begin(), values.end(), [this](double v) {
      if (mode == ConfigMode::kBinary) return v == 0.0 || v == 1.0;
      return v >= 0.0 && v <= 1.0;
    });
  }

  // Positions equal to 1 (binary) or above zero (relaxed).
  std::vector<size_t> Selected() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < values.size(); ++i) {
      if (values[i] > 0.0 && (mode == ConfigMode::kRelaxed || values[i] == 1.0)) out.push_back(i);
    }
    return out;
  }
};

inline ConfigVector Vectorize(const MovieRecord& movie, const FeatureIndex& index) {
  ConfigVector x(index.size(), ConfigMode::kBinary);
  for (Role r : kAllRoles) {
    for (const auto& name : movie.names(r)) x.values[index.Position(r, name)] = 1.0;
  }
  return x;
}

// Positions of the movie's features, in index order.
inline std::vector<size_t> FeaturePositions(const MovieRecord& movie, const FeatureIndex& index) {
  std::vector<size_t> out;
  for (Role r : kAllRoles) {
    for (const auto& name : movie.names(r)) out.push_back(index.Position(r, name));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace movieplan

#endif  // MOVIEPLAN_LIBRARY_H_
