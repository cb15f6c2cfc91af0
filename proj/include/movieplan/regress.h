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

// Non-negative Lasso budget and gross estimators.
//
//   Budget(x) = w_b . x + b_b
//   Gross(x)  = w_g . [B, x] + b_g
//
// both fitted by minimizing ||y - (Xw + b)||^2 + lambda * ||w||_1 subject to
// w >= 0, with an unpenalized intercept.

#ifndef MOVIEPLAN_REGRESS_H_
#define MOVIEPLAN_REGRESS_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "movieplan/errors.h"
#include "movieplan/library.h"

namespace movieplan {

enum class ModelKind { kBudget, kGross };

constexpr std::string_view ModelKindName(ModelKind k) {
  return k == ModelKind::kBudget ? "budget" : "gross";
}

struct FitConfig {
  double lambda = 0.1;
  int max_iters = 1000;
  double tol = 1e-7;
  bool fit_intercept = true;
};

// Column-major sparse design matrix. Rows within a column must be appended in
// increasing order.
class ColumnMatrix {
 public:
  struct Entry {
    uint32_t row;
    double value;
  };

  ColumnMatrix(size_t rows, size_t cols) : rows_(rows), columns_(cols) {}

  static ColumnMatrix FromDense(const std::vector<std::vector<double>>& dense) {
    const size_t cols = dense.empty() ? 0 : dense.front().size();
    ColumnMatrix m(dense.size(), cols);
    for (size_t i = 0; i < dense.size(); ++i) {
      if (dense[i].size() != cols) throw InvalidInput("ragged design matrix");
      for (size_t j = 0; j < cols; ++j) {
        if (dense[i][j] != 0.0) m.Append(i, j, dense[i][j]);
      }
    }
    return m;
  }

  void Append(size_t row, size_t col, double value) {
    columns_[col].push_back({static_cast<uint32_t>(row), value});
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return columns_.size(); }
  std::span<const Entry> column(size_t j) const { return columns_[j]; }

  // out = X w
  void Multiply(std::span<const double> w, std::vector<double>& out) const {
    out.assign(rows_, 0.0);
    for (size_t j = 0; j < columns_.size(); ++j) {
      if (w[j] == 0.0) continue;
      for (const auto& e : columns_[j]) out[e.row] += e.value * w[j];
    }
  }

 private:
  size_t rows_;
  std::vector<std::vector<Entry>> columns_;
};

inline double LassoObjective(const ColumnMatrix& x, std::span<const double> y,
                             std::span<const double> w, double intercept, double lambda) {
  std::vector<double> fitted;
  x.Multiply(w, fitted);
  double rss = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - fitted[i] - intercept;
    rss += r * r;
  }
  double l1 = 0.0;
  for (double v : w) l1 += std::abs(v);
  return rss + lambda * l1;
}

struct FitResult {
  std::vector<double> weights;
  double intercept = 0.0;
  int sweeps = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // after each sweep, when requested
};

// Cyclic coordinate descent with the non-negative soft threshold
//   w_j <- max(0, (rho_j - lambda) / z_j),
// z_j = 2 sum_i x_ij^2, rho_j = 2 sum_i x_ij (r_i + x_ij w_j). The intercept
// is reset to the mean residual after every sweep.
inline FitResult FitNonNegativeLasso(const ColumnMatrix& x, std::span<const double> y,
                                     const FitConfig& cfg, bool record_trace = false) {
  const size_t n = x.rows();
  const size_t p = x.cols();
  if (n < 2) throw InvalidInput("need at least 2 samples to fit, got " + std::to_string(n));
  if (y.size() != n) throw InvalidInput("target length does not match design rows");
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) throw InvalidInput("lambda must be >= 0");
  if (!(cfg.tol > 0.0)) throw InvalidInput("tol must be > 0");
  for (double v : y) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite target value");
  }

  std::vector<double> z(p, 0.0);
  for (size_t j = 0; j < p; ++j) {
    for (const auto& e : x.column(j)) {
      if (!std::isfinite(e.value)) throw InvalidInput("non-finite design value");
      z[j] += 2.0 * e.value * e.value;
    }
  }

  FitResult fit;
  fit.weights.assign(p, 0.0);
  std::vector<double> r(y.begin(), y.end());
  if (cfg.fit_intercept) {
    fit.intercept = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    for (double& v : r) v -= fit.intercept;
  }

  auto objective = [&] {
    double rss = 0.0;
    for (double v : r) rss += v * v;
    double l1 = 0.0;
    for (double v : fit.weights) l1 += v;
    return rss + cfg.lambda * l1;
  };
  if (record_trace) fit.objective_trace.push_back(objective());

  for (int sweep = 0; sweep < cfg.max_iters; ++sweep) {
    double max_change = 0.0;
    for (size_t j = 0; j < p; ++j) {
      if (z[j] == 0.0) continue;
      const auto col = x.column(j);
      const double wj = fit.weights[j];
      double rho = 0.0;
      for (const auto& e : col) rho += e.value * (r[e.row] + e.value * wj);
      rho *= 2.0;
      const double updated = std::max(0.0, (rho - cfg.lambda) / z[j]);
      const double delta = updated - wj;
      if (delta != 0.0) {
        for (const auto& e : col) r[e.row] -= e.value * delta;
        fit.weights[j] = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (cfg.fit_intercept) {
      const double shift = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n);
      for (double& v : r) v -= shift;
      fit.intercept += shift;
      max_change = std::max(max_change, std::abs(shift));
    }
    fit.sweeps = sweep + 1;
    if (record_trace) fit.objective_trace.push_back(objective());
    if (max_change < cfg.tol) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

struct LinearModel {
  ModelKind kind = ModelKind::kBudget;
  // kBudget: N entries. kGross: N + 1 entries, [0] multiplies the budget.
  std::vector<double> weights;
  double intercept = 0.0;
  double lambda = 0.0;
  std::array<size_t, 5> block_sizes{};
  std::optional<double> training_mape;

  size_t dimension() const {
    size_t n = 0;
    for (size_t s : block_sizes) n += s;
    return n;
  }
  size_t offset() const { return kind == ModelKind::kGross ? 1 : 0; }

  // Weight on configuration position i (skips the gross model's budget slot).
  double feature_weight(size_t i) const { return weights[i + offset()]; }
  double budget_weight() const { return kind == ModelKind::kGross ? weights[0] : 0.0; }

  std::span<const double> feature_weights() const {
    return std::span<const double>(weights).subspan(offset());
  }

  // Budget(x), or Gross(x) given the budget B.
  double Predict(std::span<const double> x, double budget = 0.0) const {
    if (x.size() + offset() != weights.size()) {
      throw InvalidInput("configuration length " + std::to_string(x.size()) +
                         " does not match model dimension " + std::to_string(weights.size() - offset()));
    }
    double s = intercept + budget_weight() * budget;
    for (size_t i = 0; i < x.size(); ++i) s += feature_weight(i) * x[i];
    return s;
  }

  json ToJson() const {
    json j{{"kind", std::string(ModelKindName(kind))},
           {"intercept", intercept},
           {"weights", weights},
           {"lambda", lambda},
           {"feature_block_sizes", block_sizes}};
    if (training_mape) j["training_mape"] = *training_mape;
    return j;
  }

  static LinearModel FromJson(const json& j) {
    LinearModel m;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "budget") {
      m.kind = ModelKind::kBudget;
    } else if (kind == "gross") {
      m.kind = ModelKind::kGross;
    } else {
      throw InvalidInput("unknown model kind '" + kind + "'");
    }
    m.intercept = j.at("intercept").get<double>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.lambda = j.at("lambda").get<double>();
    const auto sizes = j.at("feature_block_sizes").get<std::vector<size_t>>();
    if (sizes.size() != 5) throw InvalidInput("feature_block_sizes must have 5 entries");
    std::copy(sizes.begin(), sizes.end(), m.block_sizes.begin());
    if (j.contains("training_mape") && j["training_mape"].is_number()) {
      m.training_mape = j["training_mape"].get<double>();
    }
    if (m.weights.size() != m.dimension() + m.offset()) {
      throw InvalidInput("model weight count does not match its block sizes");
    }
    for (double w : m.weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("model weights must be finite and >= 0");
    }
    return m;
  }
};

// (100 / n) * sum |A_t - E_t| / |A_t|
inline double Mape(std::span<const double> actual, std::span<const double> estimated) {
  if (actual.size() != estimated.size()) throw InvalidInput("MAPE inputs differ in length");
  if (actual.empty()) throw InvalidInput("MAPE of an empty sample");
  double sum = 0.0;
  for (size_t t = 0; t < actual.size(); ++t) {
    if (actual[t] == 0.0) throw InvalidInput("undefined MAPE at index " + std::to_string(t));
    sum += std::abs(actual[t] - estimated[t]) / std::abs(actual[t]);
  }
  return 100.0 * sum / static_cast<double>(actual.size());
}

// Feature subsets for the ablation study.
enum class FeatureGroup { kAll, kGenre, kActor, kActress, kWriter, kDirector };

inline constexpr std::array<FeatureGroup, 6> kAllGroups = {
    FeatureGroup::kAll,     FeatureGroup::kGenre,  FeatureGroup::kActor,
    FeatureGroup::kActress, FeatureGroup::kWriter, FeatureGroup::kDirector};

constexpr std::string_view GroupName(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::kAll: return "ALL";
    case FeatureGroup::kGenre: return "Genre";
    case FeatureGroup::kActor: return "Actor";
    case FeatureGroup::kActress: return "Actress";
    case FeatureGroup::kWriter: return "Writer";
    case FeatureGroup::kDirector: return "Director";
  }
  return "?";
}

inline bool GroupUses(FeatureGroup g, Role r) {
  switch (g) {
    case FeatureGroup::kAll: return true;
    case FeatureGroup::kGenre: return r == Role::kGenre;
    case FeatureGroup::kActor: return r == Role::kActor;
    case FeatureGroup::kActress: return r == Role::kActress;
    case FeatureGroup::kWriter: return r == Role::kWriter;
    case FeatureGroup::kDirector: return r == Role::kDirector;
  }
  return false;
}

// Fits a budget or gross model on the given library rows (movie positions,
// all trainable). Features outside `group` are left out and get weight 0.
inline LinearModel TrainModel(ModelKind kind, const KnowledgeLibrary& lib, const FeatureIndex& index,
                              const FitConfig& cfg, std::span<const size_t> rows,
                              FeatureGroup group = FeatureGroup::kAll) {
  if (rows.size() < 2) {
    throw InvalidInput("need at least 2 trainable records, got " + std::to_string(rows.size()));
  }
  const size_t offset = kind == ModelKind::kGross ? 1 : 0;
  ColumnMatrix design(rows.size(), index.size() + offset);
  std::vector<double> y;
  y.reserve(rows.size());
  // Column entries must go in row order, so fill column-by-row.
  for (size_t i = 0; i < rows.size(); ++i) {
    const MovieRecord& m = lib.movies().at(rows[i]);
    if (!m.trainable()) throw InvalidInput("movie '" + m.id + "' lacks budget or gross");
    if (kind == ModelKind::kGross) {
      if (*m.budget != 0.0) design.Append(i, 0, *m.budget);
      y.push_back(*m.gross);
    } else {
      y.push_back(*m.budget);
    }
    for (Role r : kAllRoles) {
      if (!GroupUses(group, r)) continue;
      for (const auto& name : m.names(r)) design.Append(i, index.Position(r, name) + offset, 1.0);
    }
  }
  FitResult fit = FitNonNegativeLasso(design, y, cfg);
  LinearModel model;
  model.kind = kind;
  model.weights = std::move(fit.weights);
  model.intercept = fit.intercept;
  model.lambda = cfg.lambda;
  model.block_sizes = index.block_sizes();
  return model;
}

inline double PredictMovie(const LinearModel& model, const MovieRecord& m, const FeatureIndex& index) {
  const ConfigVector x = Vectorize(m, index);
  return model.Predict(x.values, model.kind == ModelKind::kGross ? m.budget.value_or(0.0) : 0.0);
}

inline double ModelMape(const LinearModel& model, const KnowledgeLibrary& lib, const FeatureIndex& index,
                        std::span<const size_t> rows) {
  std::vector<double> actual;
  std::vector<double> estimated;
  for (size_t r : rows) {
    const MovieRecord& m = lib.movies().at(r);
    actual.push_back(model.kind == ModelKind::kBudget ? m.budget.value() : m.gross.value());
    estimated.push_back(PredictMovie(model, m, index));
  }
  return Mape(actual, estimated);
}

inline LinearModel TrainBudgetModel(const KnowledgeLibrary& lib, const FeatureIndex& index,
                                    const FitConfig& cfg) {
  return TrainModel(ModelKind::kBudget, lib, index, cfg, lib.trainable());
}

inline LinearModel TrainGrossModel(const KnowledgeLibrary& lib, const FeatureIndex& index,
                                   const FitConfig& cfg) {
  return TrainModel(ModelKind::kGross, lib, index, cfg, lib.trainable());
}

// Seeded 80/20 outer split with k folds over the training part. Positions
// refer to library movies.
struct SplitPlan {
  std::vector<size_t> test;
  std::vector<std::vector<size_t>> folds;

  std::vector<size_t> TrainingRows() const {
    std::vector<size_t> out;
    for (const auto& f : folds) out.insert(out.end(), f.begin(), f.end());
    return out;
  }
};

inline SplitPlan MakeSplit(std::vector<size_t> rows, int k, uint64_t seed) {
  if (k < 2) throw InvalidInput("need at least 2 folds, got " + std::to_string(k));
  std::mt19937_64 rng(seed);
  std::shuffle(rows.begin(), rows.end(), rng);
  const size_t n_test = rows.size() / 5;
  SplitPlan plan;
  plan.test.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
  const size_t n_train = rows.size() - n_test;
  if (n_train < static_cast<size_t>(k)) {
    throw InvalidInput("not enough training records for " + std::to_string(k) + " folds");
  }
  plan.folds.resize(static_cast<size_t>(k));
  for (size_t i = 0; i < n_train; ++i) plan.folds[i % static_cast<size_t>(k)].push_back(rows[n_test + i]);
  for (auto& f : plan.folds) std::sort(f.begin(), f.end());
  std::sort(plan.test.begin(), plan.test.end());
  return plan;
}

struct GroupMape {
  double budget = 0.0;
  double gross = 0.0;
};

struct EvalReport {
  std::string split;  // "fold-1" .. "fold-k", or "test"
  size_t n = 0;
  double budget_mape = 0.0;
  double gross_mape = 0.0;
  std::map<std::string, GroupMape> per_group;

  json ToJson() const {
    json groups = json::object();
    for (const auto& [name, g] : per_group) groups[name] = {{"budget", g.budget}, {"gross", g.gross}};
    return {{"split", split}, {"n", n}, {"budget_mape", budget_mape}, {"gross_mape", gross_mape},
            {"per_group", groups}};
  }
};

inline EvalReport EvaluateSplit(const KnowledgeLibrary& lib, const FeatureIndex& index, const FitConfig& cfg,
                                std::span<const size_t> train, std::span<const size_t> test,
                                std::string label, bool ablations) {
  EvalReport report;
  report.split = std::move(label);
  report.n = test.size();
  for (FeatureGroup g : kAllGroups) {
    if (!ablations && g != FeatureGroup::kAll) continue;
    const LinearModel budget = TrainModel(ModelKind::kBudget, lib, index, cfg, train, g);
    const LinearModel gross = TrainModel(ModelKind::kGross, lib, index, cfg, train, g);
    GroupMape gm{ModelMape(budget, lib, index, test), ModelMape(gross, lib, index, test)};
    report.per_group[std::string(GroupName(g))] = gm;
    if (g == FeatureGroup::kAll) {
      report.budget_mape = gm.budget;
      report.gross_mape = gm.gross;
    }
  }
  return report;
}

// k fold reports on the 80% training part followed by one report for the
// held-out 20%. Records with zero budget or gross are left out since MAPE is
// undefined on them.
inline std::vector<EvalReport> CrossValidate(const KnowledgeLibrary& lib, const FeatureIndex& index,
                                             const FitConfig& cfg, int k, uint64_t seed,
                                             bool ablations = true) {
  if (k < 2) throw InvalidInput("need at least 2 folds, got " + std::to_string(k));
  std::vector<size_t> rows;
  for (size_t r : lib.trainable()) {
    const MovieRecord& m = lib.movies()[r];
    if (*m.budget > 0.0 && *m.gross > 0.0) rows.push_back(r);
  }
  if (rows.size() < static_cast<size_t>(k)) {
    throw InvalidInput("need at least " + std::to_string(k) + " trainable records");
  }
  const SplitPlan plan = MakeSplit(std::move(rows), k, seed);
  std::vector<EvalReport> reports;
  for (size_t f = 0; f < plan.folds.size(); ++f) {
    std::vector<size_t> train;
    for (size_t g = 0; g < plan.folds.size(); ++g) {
      if (g != f) train.insert(train.end(), plan.folds[g].begin(), plan.folds[g].end());
    }
    reports.push_back(EvaluateSplit(lib, index, cfg, train, plan.folds[f], "fold-" + std::to_string(f + 1),
                                    ablations));
  }
  reports.push_back(EvaluateSplit(lib, index, cfg, plan.TrainingRows(), plan.test, "test", ablations));
  return reports;
}

}  // namespace movieplan

#endif  // MOVIEPLAN_REGRESS_H_
