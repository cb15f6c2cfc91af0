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

// Random planning instances shared by the planner tests and the acceptance
// binary.

#ifndef MOVIEPLAN_TESTS_FIXTURES_H_
#define MOVIEPLAN_TESTS_FIXTURES_H_

#include <cstdio>
#include <memory>
#include <random>
#include <vector>

#include "movieplan/harness.h"
#include "movieplan/planner.h"
#include "oracles.h"

namespace movieplan::fixture {

struct PlanFixture {
  LinearModel gross;
  LinearModel budget;
  AcquaintanceTensor tensor;
  oracle::DenseTensor dense{0, 0};
  PlanProblem problem;
};

struct PlanFixtureSpec {
  size_t crew = 10;
  size_t genres = 4;
  double gross_density = 0.7;
  double tensor_density = 0.3;
  uint32_t max_count = 9;
  double gross_intercept = 0.0;
  double gross_budget_weight = 0.0;
  double budget_fraction = 0.4;  // cap = b_b + fraction * sum(w_b)
};

// Gross weights U(0, 10) at the given density, budget weights U(0.5, 5),
// b_b U(0, 5) and tensor counts U{1..max_count}.
inline std::unique_ptr<PlanFixture> RandomPlanFixture(std::mt19937_64& rng, const PlanFixtureSpec& spec) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<uint32_t> count(1, spec.max_count);
  auto f = std::make_unique<PlanFixture>();
  const size_t n = spec.crew + spec.genres;
  f->gross.kind = ModelKind::kGross;
  f->gross.block_sizes = {spec.crew, 0, 0, 0, spec.genres};
  f->gross.weights.assign(n + 1, 0.0);
  f->gross.weights[0] = spec.gross_budget_weight;
  f->gross.intercept = spec.gross_intercept;
  f->budget.kind = ModelKind::kBudget;
  f->budget.block_sizes = f->gross.block_sizes;
  f->budget.weights.assign(n, 0.0);
  f->budget.intercept = 5.0 * u(rng);
  double total_cost = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (u(rng) < spec.gross_density) f->gross.weights[i + 1] = 10.0 * u(rng);
    f->budget.weights[i] = 0.5 + 4.5 * u(rng);
    total_cost += f->budget.weights[i];
  }
  f->dense = oracle::DenseTensor(spec.crew, spec.genres);
  std::vector<AcquaintanceTensor::Entry> entries;
  for (size_t a = 0; a < spec.crew; ++a) {
    for (size_t b = a + 1; b < spec.crew; ++b) {
      for (size_t l = 0; l < spec.genres; ++l) {
        if (u(rng) >= spec.tensor_density) continue;
        const uint32_t k = count(rng);
        f->dense.at(a, b, l) = k;
        f->dense.at(b, a, l) = k;
        entries.push_back({static_cast<uint32_t>(a), static_cast<uint32_t>(b), static_cast<uint32_t>(spec.crew + l), k});
      }
    }
  }
  f->tensor = AcquaintanceTensor(spec.crew, spec.genres, std::move(entries));
  f->problem.gross_model = &f->gross;
  f->problem.budget_model = &f->budget;
  f->problem.tensor = &f->tensor;
  f->problem.budget_cap = f->budget.intercept + spec.budget_fraction * total_cost;
  return f;
}


// A one-movie evaluation with `pos` true actors and exactly `neg` other
// actors in the index, scored against a planner that picks the first
// `keep_pos` positives and the first `keep_neg` negatives.
struct MetricsCase {
  size_t pos = 0;
  size_t neg = 0;
  size_t keep_pos = 0;
  size_t keep_neg = 0;
  double accuracy = 0.0;  // by hand
  double f1 = 0.0;        // by hand
};

inline PlanningMetrics RunMetricsCase(const MetricsCase& mc, double ratio = 100.0) {
  auto name = [](char prefix, size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%c%03zu", prefix, i);
    return std::string(buf);
  };
  MovieRecord movie;
  movie.id = "target";
  movie.genres = {"Drama"};
  movie.budget = 1.0;
  movie.gross = 1.0;
  std::array<std::vector<std::string>, 5> blocks;
  for (size_t i = 0; i < mc.pos; ++i) {
    movie.actors.insert(name('p', i));
    blocks[0].push_back(name('p', i));
  }
  for (size_t i = 0; i < mc.neg; ++i) blocks[0].push_back(name('q', i));
  blocks[4] = {"Drama"};
  const KnowledgeLibrary lib({movie});
  const FeatureIndex index(blocks);
  const size_t n = index.size();

  LinearModel gross;
  gross.kind = ModelKind::kGross;
  gross.block_sizes = index.block_sizes();
  gross.weights.assign(n + 1, 0.0);
  LinearModel budget;
  budget.kind = ModelKind::kBudget;
  budget.block_sizes = index.block_sizes();
  budget.weights.assign(n, 0.0);
  const AcquaintanceTensor tensor(n - 1, 1, {});

  const PlanningContext ctx{&lib, &index, &gross, &budget, &tensor};
  PlanningEvalOptions opts;
  opts.ratio = ratio;
  const PlanFn picker = [&](const PlanProblem& p, Method) {
    PlanResult r;
    r.config = ConfigVector(n, ConfigMode::kBinary);
    for (size_t i : p.locked) r.config.values[i] = 1.0;
    for (size_t i : p.candidates) {
      if (i < mc.keep_pos || (i >= mc.pos && i < mc.pos + mc.keep_neg)) r.config.values[i] = 1.0;
    }
    return r;
  };
  return EvaluatePlanning(ctx, opts, picker);
}

inline const std::vector<MetricsCase>& HandMetricsCases() {
  static const std::vector<MetricsCase> kCases = {
      {4, 6, 3, 1, 0.8, 0.75},         {4, 4, 4, 0, 1.0, 1.0},       {4, 4, 0, 0, 0.5, 0.0},
      {2, 2, 0, 2, 0.0, 0.0},          {3, 3, 3, 3, 0.5, 2.0 / 3.0}, {5, 5, 1, 0, 0.6, 1.0 / 3.0},
      {2, 6, 1, 1, 0.75, 0.5},         {1, 1, 1, 0, 1.0, 1.0},       {4, 8, 2, 2, 2.0 / 3.0, 0.5},
      {3, 9, 2, 3, 2.0 / 3.0, 0.5},
  };
  return kCases;
}

}  // namespace movieplan::fixture

#endif  // MOVIEPLAN_TESTS_FIXTURES_H_
