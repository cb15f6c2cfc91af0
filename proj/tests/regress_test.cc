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

#include "movieplan/regress.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "movieplan/harness.h"
#include "oracles.h"

namespace movieplan {
namespace {

struct Instance {
  oracle::Dense x;
  std::vector<double> y;
};

// n x p design with entries in [0, 1) and a planted non-negative w plus noise.
Instance RandomInstance(std::mt19937_64& rng, size_t n, size_t p, bool binary = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::vector<double> w(p);
  for (auto& v : w) v = u(rng) < 0.6 ? 3.0 * u(rng) : 0.0;
  Instance inst;
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> row(p);
    double yi = 2.0;
    for (size_t j = 0; j < p; ++j) {
      row[j] = binary ? (u(rng) < 0.3 ? 1.0 : 0.0) : u(rng);
      yi += row[j] * w[j];
    }
    inst.x.push_back(row);
    inst.y.push_back(yi + noise(rng));
  }
  return inst;
}

TEST(FitNonNegativeLassoTest, ConstantTargetGoesToIntercept) {
  const auto x = ColumnMatrix::FromDense({{1}, {1}});
  const std::vector<double> y = {5, 5};
  FitConfig cfg;
  cfg.lambda = 0.0;
  const auto fit = FitNonNegativeLasso(x, y, cfg);
  EXPECT_DOUBLE_EQ(fit.weights[0], 0.0);
  EXPECT_DOUBLE_EQ(fit.intercept, 5.0);
}

TEST(FitNonNegativeLassoTest, ExactInterpolationWithoutIntercept) {
  const auto x = ColumnMatrix::FromDense({{1}, {0}});
  const std::vector<double> y = {3, 0};
  FitConfig cfg;
  cfg.lambda = 0.0;
  cfg.fit_intercept = false;
  const auto fit = FitNonNegativeLasso(x, y, cfg);
  EXPECT_DOUBLE_EQ(fit.weights[0], 3.0);
  EXPECT_DOUBLE_EQ(fit.intercept, 0.0);
}

TEST(FitNonNegativeLassoTest, NegativeCorrelationClampsToZero) {
  const auto x = ColumnMatrix::FromDense({{1}, {0}, {1}, {0}});
  const std::vector<double> y = {0, 4, 0, 4};
  const auto fit = FitNonNegativeLasso(x, y, FitConfig{});
  EXPECT_EQ(fit.weights[0], 0.0);
  EXPECT_DOUBLE_EQ(fit.intercept, 2.0);
}

TEST(FitNonNegativeLassoTest, AllZeroColumnGetsZeroWeight) {
  const auto x = ColumnMatrix::FromDense({{1, 0}, {2, 0}, {3, 0}});
  const std::vector<double> y = {1, 2, 3};
  const auto fit = FitNonNegativeLasso(x, y, FitConfig{});
  EXPECT_EQ(fit.weights[1], 0.0);
}

TEST(FitNonNegativeLassoTest, RejectsBadInputs) {
  const auto one = ColumnMatrix::FromDense({{1}});
  EXPECT_THROW(FitNonNegativeLasso(one, std::vector<double>{1}, FitConfig{}), InvalidInput);
  const auto two = ColumnMatrix::FromDense({{1}, {2}});
  EXPECT_THROW(FitNonNegativeLasso(two, std::vector<double>{1, NAN}, FitConfig{}), InvalidInput);
  const auto inf = ColumnMatrix::FromDense({{1}, {INFINITY}});
  EXPECT_THROW(FitNonNegativeLasso(inf, std::vector<double>{1, 2}, FitConfig{}), InvalidInput);
  FitConfig bad;
  bad.lambda = -1;
  EXPECT_THROW(FitNonNegativeLasso(two, std::vector<double>{1, 2}, bad), InvalidInput);
  bad = FitConfig{};
  bad.tol = 0;
  EXPECT_THROW(FitNonNegativeLasso(two, std::vector<double>{1, 2}, bad), InvalidInput);
}

TEST(FitNonNegativeLassoTest, PlantedProblemMatchesProjectedGradientOracle) {
  std::mt19937_64 rng(2024);
  const auto inst = RandomInstance(rng, 50, 5);
  FitConfig cfg;
  cfg.lambda = 0.1;
  const auto fit = FitNonNegativeLasso(ColumnMatrix::FromDense(inst.x), inst.y, cfg);
  const auto ref = oracle::ProjectedGradientLasso(inst.x, inst.y, cfg.lambda);
  const double ours = oracle::LassoObjective(inst.x, inst.y, fit.weights, fit.intercept, cfg.lambda);
  EXPECT_NEAR(ours, ref.objective, 1e-6 * std::max(1.0, std::abs(ref.objective)));
  for (size_t j = 0; j < fit.weights.size(); ++j) EXPECT_NEAR(fit.weights[j], ref.w[j], 1e-4);
}

TEST(FitNonNegativeLassoTest, ObjectiveNeverIncreasesAcrossSweeps) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = RandomInstance(rng, 40, 8, trial % 2 == 0);
    FitConfig cfg;
    cfg.lambda = 0.05 * trial;
    const auto fit = FitNonNegativeLasso(ColumnMatrix::FromDense(inst.x), inst.y, cfg, /*record_trace=*/true);
    ASSERT_GE(fit.objective_trace.size(), 2u);
    for (size_t s = 1; s < fit.objective_trace.size(); ++s) {
      EXPECT_LE(fit.objective_trace[s], fit.objective_trace[s - 1] * (1 + 1e-12) + 1e-12) << "sweep " << s;
    }
  }
}

TEST(FitNonNegativeLassoTest, LargerLambdaNeverGrowsTheL1Norm) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = RandomInstance(rng, 30, 6);
    const auto x = ColumnMatrix::FromDense(inst.x);
    double prev = std::numeric_limits<double>::infinity();
    for (double lambda : {0.0, 0.1, 1.0, 5.0, 20.0, 100.0}) {
      FitConfig cfg;
      cfg.lambda = lambda;
      cfg.tol = 1e-10;
      cfg.max_iters = 100000;
      const auto fit = FitNonNegativeLasso(x, inst.y, cfg);
      double l1 = 0.0;
      for (double w : fit.weights) l1 += w;
      EXPECT_LE(l1, prev + 1e-6) << "lambda " << lambda;
      prev = l1;
    }
  }
}

TEST(FitNonNegativeLassoTest, WeightsStayNonNegativeOnArbitraryData) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    oracle::Dense x(25, std::vector<double>(7));
    std::vector<double> y(25);
    for (auto& row : x)
      for (auto& v : row) v = g(rng);
    for (auto& v : y) v = g(rng);
    FitConfig cfg;
    cfg.lambda = trial * 0.5;
    const auto fit = FitNonNegativeLasso(ColumnMatrix::FromDense(x), y, cfg);
    for (double w : fit.weights) {
      EXPECT_GE(w, 0.0);
      EXPECT_TRUE(std::isfinite(w));
    }
  }
}

TEST(MapeTest, Examples) {
  EXPECT_DOUBLE_EQ(Mape(std::vector<double>{100}, std::vector<double>{90}), 10.0);
  EXPECT_DOUBLE_EQ(Mape(std::vector<double>{3, 4}, std::vector<double>{3, 4}), 0.0);
  // (10% + 25%) / 2
  EXPECT_DOUBLE_EQ(Mape(std::vector<double>{100, 200}, std::vector<double>{110, 150}), 17.5);
}

TEST(MapeTest, ZeroActualIsAnError) {
  try {
    Mape(std::vector<double>{1, 0}, std::vector<double>{1, 1});
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("index 1"), std::string::npos);
  }
  EXPECT_THROW(Mape(std::vector<double>{}, std::vector<double>{}), InvalidInput);
  EXPECT_THROW(Mape(std::vector<double>{1}, std::vector<double>{1, 2}), InvalidInput);
}

KnowledgeLibrary TwoCopies(double budget, double gross, bool with_actor) {
  MovieRecord m;
  m.genres = {"Drama"};
  if (with_actor) m.actors = {"A"};
  m.directors = {"D"};
  m.budget = budget;
  m.gross = gross;
  MovieRecord a = m, b = m;
  a.id = "a";
  b.id = "b";
  return KnowledgeLibrary({a, b});
}

TEST(TrainModelTest, IdenticalMoviesPredictTheirBudget) {
  const auto lib = TwoCopies(10, 30, true);
  const auto index = FeatureIndex::Build(lib);
  const auto model = TrainBudgetModel(lib, index, FitConfig{});
  EXPECT_EQ(model.kind, ModelKind::kBudget);
  EXPECT_EQ(model.weights.size(), index.size());
  EXPECT_NEAR(PredictMovie(model, lib.movies()[0], index), 10.0, 1e-9);
}

TEST(TrainModelTest, GrossModelCarriesTheBudgetSlot) {
  // The movie's features are indexed but the extra, unused actor column keeps
  // the design row otherwise empty.
  const auto lib = TwoCopies(100, 50, false);
  const FeatureIndex index({std::vector<std::string>{"unused"}, {}, {"D"}, {}, {"Drama"}});
  const auto model = TrainModel(ModelKind::kGross, lib, index, FitConfig{}, lib.trainable(), FeatureGroup::kActor);
  EXPECT_EQ(model.weights.size(), index.size() + 1);
  EXPECT_NEAR(PredictMovie(model, lib.movies()[0], index), 50.0, 1e-9);
}

TEST(TrainModelTest, NeedsTwoTrainableRecords) {
  MovieRecord m;
  m.id = "a";
  m.genres = {"Drama"};
  m.actors = {"A"};
  m.budget = 1;
  m.gross = 1;
  MovieRecord n = m;
  n.id = "b";
  n.gross.reset();
  const KnowledgeLibrary lib({m, n});
  const auto index = FeatureIndex::Build(lib);
  EXPECT_THROW(TrainBudgetModel(lib, index, FitConfig{}), InvalidInput);
}

TEST(TrainModelTest, RecoversPlantedWeightsWithoutNoise) {
  SyntheticSpec spec;
  spec.n_movies = 600;
  spec.n_actors = 60;
  spec.n_actresses = 40;
  spec.n_directors = 20;
  spec.n_writers = 25;
  spec.n_genres = 10;
  spec.seed = 3;
  const auto s = GenerateSyntheticLibrary(spec);
  FitConfig cfg;
  cfg.lambda = 0.0;
  cfg.max_iters = 5000;
  const auto budget = TrainBudgetModel(s.library, s.index, cfg);
  const auto gross = TrainGrossModel(s.library, s.index, cfg);
  EXPECT_LT(ModelMape(budget, s.library, s.index, s.library.trainable()), 1.0);
  EXPECT_LT(ModelMape(gross, s.library, s.index, s.library.trainable()), 1.0);
}

TEST(LinearModelTest, JsonRoundTripAndValidation) {
  LinearModel m;
  m.kind = ModelKind::kGross;
  m.weights = {1.5, 0, 2, 0, 0, 3};
  m.intercept = -4;
  m.lambda = 0.1;
  m.block_sizes = {1, 1, 1, 1, 1};
  const auto back = LinearModel::FromJson(m.ToJson());
  EXPECT_EQ(back.weights, m.weights);
  EXPECT_EQ(back.kind, ModelKind::kGross);
  EXPECT_DOUBLE_EQ(back.intercept, -4);
  EXPECT_DOUBLE_EQ(back.Predict(std::vector<double>{1, 1, 1, 1, 1}, 10.0), -4 + 15 + 2 + 3);
  auto j = m.ToJson();
  j["weights"][2] = -1.0;
  EXPECT_THROW(LinearModel::FromJson(j), InvalidInput);
  j = m.ToJson();
  j["feature_block_sizes"] = {1, 1, 1, 1, 2};
  EXPECT_THROW(LinearModel::FromJson(j), InvalidInput);
}

SyntheticSpec SmallSpec(uint64_t seed) {
  SyntheticSpec spec;
  spec.n_movies = 100;
  spec.n_actors = 30;
  spec.n_actresses = 20;
  spec.n_directors = 10;
  spec.n_writers = 12;
  spec.n_genres = 6;
  spec.noise_sigma = 1.0;
  spec.seed = seed;
  return spec;
}

TEST(CrossValidateTest, FoldAndTestReports) {
  const auto s = GenerateSyntheticLibrary(SmallSpec(1));
  const auto reports = CrossValidate(s.library, s.index, FitConfig{}, 5, 7);
  ASSERT_EQ(reports.size(), 6u);
  EXPECT_EQ(reports.back().split, "test");
  EXPECT_EQ(reports.back().n, 20u);
  size_t fold_total = 0;
  for (size_t f = 0; f < 5; ++f) {
    EXPECT_EQ(reports[f].split, "fold-" + std::to_string(f + 1));
    EXPECT_EQ(reports[f].per_group.size(), 6u);
    EXPECT_GE(reports[f].budget_mape, 0.0);
    fold_total += reports[f].n;
  }
  EXPECT_EQ(fold_total, 80u);
}

TEST(CrossValidateTest, SameSeedSameFolds) {
  std::vector<size_t> rows(100);
  std::iota(rows.begin(), rows.end(), 0);
  const auto a = MakeSplit(rows, 5, 7);
  const auto b = MakeSplit(rows, 5, 7);
  const auto c = MakeSplit(rows, 5, 8);
  EXPECT_EQ(a.test, b.test);
  EXPECT_EQ(a.folds, b.folds);
  EXPECT_NE(a.test, c.test);
  EXPECT_EQ(a.test.size() + a.TrainingRows().size(), 100u);
}

TEST(CrossValidateTest, RejectsTooFewFolds) {
  const auto s = GenerateSyntheticLibrary(SmallSpec(1));
  EXPECT_THROW(CrossValidate(s.library, s.index, FitConfig{}, 1, 7), InvalidInput);
}

TEST(CrossValidateTest, PlantedGroupWinsTheAblation) {
  SyntheticSpec spec = SmallSpec(4);
  spec.n_movies = 800;
  spec.n_directors = 40;
  spec.per_movie = {4.0, 3.0, 1.5, 1.5, 2.0};
  spec.weight_density = 0.8;
  spec.signal_roles = {Role::kDirector};
  spec.noise_sigma = 0.5;
  const auto s = GenerateSyntheticLibrary(spec);
  const auto reports = CrossValidate(s.library, s.index, FitConfig{}, 5, 11);
  const auto& test = reports.back();
  for (const char* other : {"Genre", "Actor", "Actress", "Writer"}) {
    EXPECT_LT(test.per_group.at("Director").budget, test.per_group.at(other).budget) << other;
  }
}

}  // namespace
}  // namespace movieplan
