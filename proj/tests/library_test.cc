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

#include "movieplan/library.h"

#include <random>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace movieplan {
namespace {

KnowledgeLibrary Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseLibrary(in);
}

const char* kAvengers =
    R"({"id":"tt0848228","title":"The Avengers","year":2012,"genres":["Action","Adventure","Sci-Fi"],)"
    R"("actors":["Robert Downey Jr.","Chris Evans"],"actresses":["Scarlett Johansson"],)"
    R"("writers":["Joss Whedon"],"directors":["Joss Whedon"],"budget":220,"gross":623.27})";

TEST(ParseLibraryTest, SingleValidRecordIsTrainable) {
  const auto lib = Parse(std::string(kAvengers) + "\n");
  ASSERT_EQ(lib.size(), 1u);
  EXPECT_EQ(lib.trainable().size(), 1u);
  const auto& m = lib.movies()[0];
  EXPECT_EQ(m.title, "The Avengers");
  EXPECT_DOUBLE_EQ(*m.budget, 220.0);
  EXPECT_DOUBLE_EQ(*m.gross, 623.27);
  EXPECT_EQ(lib.report().accepted, 1u);
  EXPECT_EQ(lib.report().rejected, 0u);
}

TEST(ParseLibraryTest, EmptyObjectIsRejected) {
  const auto lib = Parse("{}\n");
  EXPECT_EQ(lib.size(), 0u);
  EXPECT_EQ(lib.report().rejected, 1u);
  ASSERT_EQ(lib.report().errors.size(), 1u);
  EXPECT_EQ(lib.report().errors[0].line, 1u);
}

TEST(ParseLibraryTest, MissingGrossIsFlaggedNotDropped) {
  const std::string text =
      R"({"id":"a","genres":["Drama"],"actors":["X"],"budget":1,"gross":2})"
      "\n"
      R"({"id":"b","genres":["Drama"],"actors":["Y"],"budget":3})"
      "\n"
      R"({"id":"c","genres":["Drama"],"actors":["Z"],"budget":4,"gross":5})"
      "\n";
  const auto lib = Parse(text);
  EXPECT_EQ(lib.size(), 3u);
  EXPECT_EQ(lib.trainable().size(), 2u);
  EXPECT_EQ(lib.report().accepted, 2u);
  EXPECT_EQ(lib.report().flagged, 1u);
  EXPECT_FALSE(lib.movies()[1].trainable());
}

TEST(ParseLibraryTest, MalformedLinesAreReportedWithLineNumbers) {
  const std::string text = std::string(kAvengers) +
                           "\n"
                           "not json\n"
                           "\n" +
                           R"({"id":"x","genres":[],"actors":["A"]})" + "\n" +
                           R"({"id":"y","genres":["Drama"]})" + "\n" +
                           R"({"id":"z","genres":["Drama"],"actors":["A"],"budget":-1,"gross":1})" + "\n" +
                           std::string(kAvengers) + "\n";
  const auto lib = Parse(text);
  EXPECT_EQ(lib.size(), 1u);
  EXPECT_EQ(lib.report().rejected, 5u);
  std::vector<size_t> lines;
  for (const auto& e : lib.report().errors) lines.push_back(e.line);
  EXPECT_EQ(lines, (std::vector<size_t>{2, 4, 5, 6, 7}));
  EXPECT_NE(lib.report().errors.back().reason.find("duplicate"), std::string::npos);
}

TEST(ParseLibraryTest, EmptyStreamIsAnError) {
  EXPECT_THROW(Parse(""), InvalidInput);
  EXPECT_THROW(Parse("\n  \n"), InvalidInput);
}

TEST(FeatureRefTest, ParsesRoleAndName) {
  const auto f = ParseFeatureRef("director:Joel Coen");
  EXPECT_EQ(f.role, Role::kDirector);
  EXPECT_EQ(f.name, "Joel Coen");
  EXPECT_EQ(ParseFeatureRef("genre:Sci-Fi:Extra").name, "Sci-Fi:Extra");
  EXPECT_THROW(ParseFeatureRef("nobody"), InvalidInput);
  EXPECT_THROW(ParseFeatureRef("producer:X"), InvalidInput);
  EXPECT_THROW(ParseFeatureRef("actor:"), InvalidInput);
}

KnowledgeLibrary SmallLibrary() {
  MovieRecord a;
  a.id = "a";
  a.genres = {"Action", "Comedy"};
  a.actors = {"Bob", "Al"};
  a.actresses = {"Cat"};
  a.writers = {"Wes"};
  a.budget = 10;
  a.gross = 20;
  MovieRecord b;
  b.id = "b";
  b.genres = {"Drama"};
  b.actors = {"Al"};
  b.directors = {"Dee"};
  return KnowledgeLibrary({a, b});
}

TEST(FeatureIndexTest, BlockSizesSumToN) {
  const auto index = FeatureIndex::Build(SmallLibrary());
  // 2 actors, 1 actress, 1 director, 1 writer, 3 genres.
  EXPECT_EQ(index.size(), 8u);
  EXPECT_EQ(index.block_sizes(), (std::array<size_t, 5>{2, 1, 1, 1, 3}));
  EXPECT_EQ(index.crew_range().size(), 5u);
  EXPECT_EQ(index.genre_range().begin, 5u);
  EXPECT_EQ(index.genre_range().end, 8u);
}

TEST(FeatureIndexTest, LayoutIsBlockOrderedAndLexicographic) {
  const auto index = FeatureIndex::Build(SmallLibrary());
  EXPECT_EQ(index.Position(Role::kActor, "Al"), 0u);
  EXPECT_EQ(index.Position(Role::kActor, "Bob"), 1u);
  EXPECT_EQ(index.Position(Role::kActress, "Cat"), 2u);
  EXPECT_EQ(index.Position(Role::kDirector, "Dee"), 3u);
  EXPECT_EQ(index.Position(Role::kWriter, "Wes"), 4u);
  EXPECT_EQ(index.Position(Role::kGenre, "Action"), 5u);
  EXPECT_EQ(index.Position(Role::kGenre, "Drama"), 7u);
  for (size_t i = 0; i < index.size(); ++i) {
    EXPECT_EQ(index.Position(index.ref_of(i)), i);
  }
  EXPECT_FALSE(index.Find(Role::kActor, "Cat").has_value());
  EXPECT_THROW(index.Position(Role::kWriter, "Nobody"), InvalidInput);
}

TEST(FeatureIndexTest, DeterministicAcrossParses) {
  const std::string text = std::string(kAvengers) + "\n" +
                           R"({"id":"b","genres":["Drama"],"actors":["Z","A"],"budget":3,"gross":4})" + "\n";
  EXPECT_EQ(FeatureIndex::Build(Parse(text)), FeatureIndex::Build(Parse(text)));
  const auto index = FeatureIndex::Build(Parse(text));
  EXPECT_EQ(FeatureIndex::FromJson(index.ToJson()), index);
}

TEST(FeatureIndexTest, EmptyLibraryIsAnError) { EXPECT_THROW(FeatureIndex::Build(KnowledgeLibrary()), InvalidInput); }

TEST(FeatureIndexTest, FullScaleBlockSizes) {
  std::array<std::vector<std::string>, 5> blocks;
  const std::array<size_t, 5> sizes = {72786, 38951, 1682, 4576, 24};
  for (size_t b = 0; b < 5; ++b) {
    for (size_t i = 0; i < sizes[b]; ++i) blocks[b].push_back("f" + std::to_string(i));
  }
  const FeatureIndex index(blocks);
  EXPECT_EQ(index.size(), 72786u + 38951u + 1682u + 4576u + 24u);
}

TEST(VectorizeTest, SingleActor) {
  const FeatureIndex index({std::vector<std::string>{"A"}, {}, {}, {}, {"G1", "G2"}});
  MovieRecord m;
  m.actors = {"A"};
  EXPECT_EQ(Vectorize(m, index).values, (std::vector<double>{1, 0, 0}));
}

TEST(VectorizeTest, AllFeatures) {
  const auto lib = SmallLibrary();
  const auto index = FeatureIndex::Build(lib);
  MovieRecord all;
  for (size_t i = 0; i < index.size(); ++i) all.names(index.role_of(i)).insert(index.name_of(i));
  const auto x = Vectorize(all, index);
  EXPECT_EQ(x.values, std::vector<double>(index.size(), 1.0));
  EXPECT_TRUE(x.IsValid());
}

TEST(VectorizeTest, SamePersonInTwoRolesSetsBothPositions) {
  const auto lib = Parse(std::string(kAvengers) + "\n");
  const auto index = FeatureIndex::Build(lib);
  const auto x = Vectorize(lib.movies()[0], index);
  const size_t as_writer = index.Position(Role::kWriter, "Joss Whedon");
  const size_t as_director = index.Position(Role::kDirector, "Joss Whedon");
  EXPECT_NE(as_writer, as_director);
  EXPECT_EQ(x.values[as_writer], 1.0);
  EXPECT_EQ(x.values[as_director], 1.0);
}

TEST(VectorizeTest, UnknownFeatureNamesTheMissingRoleAndName) {
  const auto index = FeatureIndex::Build(SmallLibrary());
  MovieRecord m;
  m.writers = {"Ghost"};
  try {
    Vectorize(m, index);
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("writer:Ghost"), std::string::npos);
  }
}

// Random libraries: row sums, genre mass and the round trip back to names.
TEST(VectorizeTest, RandomLibraryProperties) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<MovieRecord> movies;
    const int n = 1 + static_cast<int>(rng() % 15);
    size_t genre_memberships = 0;
    for (int i = 0; i < n; ++i) {
      MovieRecord m;
      m.id = "m" + std::to_string(i);
      for (Role r : kAllRoles) {
        const int k = static_cast<int>(rng() % 4);
        for (int j = 0; j < k; ++j) m.names(r).insert("p" + std::to_string(rng() % 6));
      }
      if (m.genres.empty()) m.genres.insert("p0");
      if (m.crew_count() == 0) m.actors.insert("p0");
      genre_memberships += m.genres.size();
      movies.push_back(m);
    }
    const KnowledgeLibrary lib(movies);
    const auto index = FeatureIndex::Build(lib);
    double genre_mass = 0.0;
    for (const auto& m : lib.movies()) {
      const auto x = Vectorize(m, index);
      EXPECT_EQ(Vectorize(m, index).values, x.values);
      double total = 0.0;
      for (double v : x.values) total += v;
      EXPECT_EQ(total, static_cast<double>(m.crew_count() + m.genres.size()));
      for (size_t i = index.genre_range().begin; i < index.genre_range().end; ++i) genre_mass += x.values[i];
      MovieRecord back;
      for (size_t i : x.Selected()) back.names(index.role_of(i)).insert(index.name_of(i));
      for (Role r : kAllRoles) EXPECT_EQ(back.names(r), m.names(r));
    }
    EXPECT_EQ(genre_mass, static_cast<double>(genre_memberships));
  }
}

}  // namespace
}  // namespace movieplan
