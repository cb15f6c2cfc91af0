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

// Synthetic libraries with planted ground truth, and the planning evaluation
// protocols: mask-and-recover accuracy/F1, beta sweeps against the baselines,
// and single-movie case studies.

#ifndef MOVIEPLAN_HARNESS_H_
#define MOVIEPLAN_HARNESS_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "movieplan/errors.h"
#include "movieplan/library.h"
#include "movieplan/planner.h"
#include "movieplan/regress.h"
#include "movieplan/tensor.h"

namespace movieplan {

// Defaults follow the size of the original crawl: 3,156 movies with budget
// and gross over 24 genres.
struct SyntheticSpec {
  size_t n_movies = 3156;
  size_t n_actors = 72786;
  size_t n_actresses = 38951;
  size_t n_directors = 1682;
  size_t n_writers = 4576;
  size_t n_genres = 24;
  // Expected features per movie drawn on top of the coverage pass that puts
  // every feature in at least one movie.
  std::array<double, 5> per_movie = {4.0, 3.0, 1.2, 1.5, 2.0};  // in Role order
  double noise_sigma = 0.0;
  uint64_t seed = 7;
  // Fraction of features carrying a nonzero planted weight.
  double weight_density = 0.3;
  // Roles whose features carry planted budget/gross weight.
  std::set<Role> signal_roles = {Role::kActor, Role::kActress, Role::kDirector, Role::kWriter, Role::kGenre};
  // Recurring crews: 0 disables. Each movie belongs to one team and draws a
  // slot from that team with probability team_affinity.
  size_t n_teams = 0;
  double team_affinity = 0.9;
  // Fraction of movies written without budget/gross.
  double untrainable_fraction = 0.0;

  size_t count(Role r) const {
    switch (r) {
      case Role::kActor: return n_actors;
      case Role::kActress: return n_actresses;
      case Role::kDirector: return n_directors;
      case Role::kWriter: return n_writers;
      case Role::kGenre: return n_genres;
    }
    return 0;
  }

  void Validate() const {
    if (n_movies < 1) throw InvalidInput("synthetic spec needs at least one movie");
    for (Role r : kAllRoles) {
      if (count(r) < 1) throw InvalidInput("synthetic spec needs at least one " + std::string(RoleName(r)));
    }
    if (!(noise_sigma >= 0.0)) throw InvalidInput("noise_sigma must be >= 0");
  }
};

struct SyntheticLibrary {
  KnowledgeLibrary library;
  FeatureIndex index;
  std::vector<double> budget_weights;  // N
  double budget_intercept = 0.0;
  std::vector<double> gross_weights;  // N + 1, [0] multiplies the budget
  double gross_intercept = 0.0;
  std::vector<size_t> movie_team;  // empty without teams
};

inline std::string SyntheticName(Role r, size_t i) {
  static constexpr std::array<const char*, 24> kGenres = {
      "Action",  "Adventure", "Animation", "Biography", "Comedy",  "Crime",   "Documentary", "Drama",
      "Family",  "Fantasy",   "Film-Noir", "History",   "Horror",  "Music",   "Musical",     "Mystery",
      "News",    "Romance",   "Sci-Fi",    "Sport",     "Thriller", "War",    "Western",     "Short"};
  if (r == Role::kGenre && i < kGenres.size()) return kGenres[i];
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s_%06zu", std::string(RoleName(r)).c_str(), i);
  return buf;
}

inline SyntheticLibrary GenerateSyntheticLibrary(const SyntheticSpec& spec) {
  spec.Validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::array<std::vector<std::string>, 5> names;
  for (Role r : kAllRoles) {
    for (size_t i = 0; i < spec.count(r); ++i) names[static_cast<size_t>(r)].push_back(SyntheticName(r, i));
  }
  SyntheticLibrary out;
  out.index = FeatureIndex(names);
  const size_t n_features = out.index.size();

  const size_t teams = spec.n_teams;
  auto team_of_feature = [&](Role r, size_t i) { return teams ? (i * 7919 + static_cast<size_t>(r)) % teams : 0; };

  // member[r][movie] -> local feature ids of role r
  std::vector<std::array<std::set<size_t>, 5>> members(spec.n_movies);
  if (teams) {
    out.movie_team.resize(spec.n_movies);
    for (size_t m = 0; m < spec.n_movies; ++m) out.movie_team[m] = m % teams;
  }
  std::vector<std::vector<size_t>> movies_of_team(std::max<size_t>(teams, 1));
  for (size_t m = 0; m < spec.n_movies; ++m) movies_of_team[teams ? m % teams : 0].push_back(m);

  for (Role r : kAllRoles) {
    const size_t k = spec.count(r);
    const auto ri = static_cast<size_t>(r);
    std::vector<std::vector<size_t>> team_features(std::max<size_t>(teams, 1));
    for (size_t i = 0; i < k; ++i) team_features[team_of_feature(r, i)].push_back(i);

    // Coverage: every feature appears at least once, inside its own team.
    for (size_t i = 0; i < k; ++i) {
      const auto& pool = movies_of_team[team_of_feature(r, i)];
      const auto& fallback = movies_of_team[0];
      const auto& use = pool.empty() ? fallback : pool;
      std::uniform_int_distribution<size_t> pick(0, use.size() - 1);
      members[use[pick(rng)]][ri].insert(i);
    }
    std::poisson_distribution<int> extra(spec.per_movie[ri]);
    std::uniform_int_distribution<size_t> any(0, k - 1);
    for (size_t m = 0; m < spec.n_movies; ++m) {
      int draws = extra(rng);
      if (r == Role::kGenre && members[m][ri].empty()) draws = std::max(draws, 1);
      for (int d = 0; d < draws; ++d) {
        size_t i = any(rng);
        if (teams && unit(rng) < spec.team_affinity) {
          const auto& tf = team_features[out.movie_team[m]];
          if (!tf.empty()) i = tf[std::uniform_int_distribution<size_t>(0, tf.size() - 1)(rng)];
        }
        members[m][ri].insert(i);
      }
    }
  }
  // Every movie needs some crew.
  for (size_t m = 0; m < spec.n_movies; ++m) {
    bool has_crew = false;
    for (Role r : kCrewRoles) has_crew |= !members[m][static_cast<size_t>(r)].empty();
    if (!has_crew) {
      members[m][static_cast<size_t>(Role::kDirector)].insert(
          std::uniform_int_distribution<size_t>(0, spec.n_directors - 1)(rng));
    }
  }

  // Planted non-negative weights.
  out.budget_weights.assign(n_features, 0.0);
  out.gross_weights.assign(n_features + 1, 0.0);
  std::uniform_real_distribution<double> crew_cost(0.5, 5.0);
  std::uniform_real_distribution<double> crew_gain(0.5, 10.0);
  for (size_t i = 0; i < n_features; ++i) {
    const Role r = out.index.role_of(i);
    if (!spec.signal_roles.contains(r)) continue;
    if (unit(rng) < spec.weight_density) out.budget_weights[i] = crew_cost(rng);
    if (unit(rng) < spec.weight_density) out.gross_weights[i + 1] = crew_gain(rng);
  }
  out.budget_intercept = 10.0;
  out.gross_weights[0] = 1.2;
  out.gross_intercept = 5.0;

  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<MovieRecord> records;
  records.reserve(spec.n_movies);
  for (size_t m = 0; m < spec.n_movies; ++m) {
    MovieRecord rec;
    char id[32];
    std::snprintf(id, sizeof(id), "m%06zu", m);
    rec.id = id;
    rec.title = "Synthetic Movie " + std::to_string(m);
    rec.year = 1980 + static_cast<int>(m % 40);
    double budget = out.budget_intercept;
    double gross = out.gross_intercept;
    for (Role r : kAllRoles) {
      const auto ri = static_cast<size_t>(r);
      for (size_t i : members[m][ri]) {
        rec.names(r).insert(names[ri][i]);
        const size_t pos = out.index.block(r).begin + i;
        budget += out.budget_weights[pos];
        gross += out.gross_weights[pos + 1];
      }
    }
    if (spec.noise_sigma > 0.0) budget += spec.noise_sigma * noise(rng);
    budget = std::max(budget, 0.0);
    gross += out.gross_weights[0] * budget;
    if (spec.noise_sigma > 0.0) gross += spec.noise_sigma * noise(rng);
    gross = std::max(gross, 0.0);
    if (unit(rng) >= spec.untrainable_fraction) {
      rec.budget = budget;
      rec.gross = gross;
    }
    records.push_back(std::move(rec));
  }
  out.library = KnowledgeLibrary(std::move(records));
  return out;
}

enum class PlanTarget { kTeam, kGenre };

constexpr std::string_view TargetName(PlanTarget t) { return t == PlanTarget::kTeam ? "team" : "genre"; }

inline std::optional<PlanTarget> ParseTarget(std::string_view s) {
  if (s == "team") return PlanTarget::kTeam;
  if (s == "genre") return PlanTarget::kGenre;
  return std::nullopt;
}

struct PlanningMetrics {
  double accuracy = 0.0;
  double f1 = 0.0;
  size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double ratio = 1.0;
  double beta = 0.0;
  PlanTarget target = PlanTarget::kTeam;
  Method method = Method::kBigMovie;
  size_t movies = 0;

  json ToJson() const {
    return {{"method", std::string(MethodName(method))},
            {"beta", beta},
            {"target", std::string(TargetName(target))},
            {"ratio", ratio},
            {"movies", movies},
            {"accuracy", accuracy},
            {"f1", f1},
            {"tp", tp},
            {"fp", fp},
            {"tn", tn},
            {"fn", fn}};
  }
};

// accuracy = (tp + tn) / total; f1 = 2 P R / (P + R), 0 when P + R = 0.
inline PlanningMetrics MetricsFromCounts(size_t tp, size_t fp, size_t tn, size_t fn) {
  PlanningMetrics m;
  m.tp = tp;
  m.fp = fp;
  m.tn = tn;
  m.fn = fn;
  const size_t total = tp + fp + tn + fn;
  m.accuracy = total ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
  const double precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  const double recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  return m;
}

// Everything a planning evaluation reads; all of it is immutable.
struct PlanningContext {
  const KnowledgeLibrary* library = nullptr;
  const FeatureIndex* index = nullptr;
  const LinearModel* gross_model = nullptr;
  const LinearModel* budget_model = nullptr;
  const AcquaintanceTensor* tensor = nullptr;
};

struct PlanningEvalOptions {
  PlanTarget target = PlanTarget::kTeam;
  double ratio = 1.0;  // negatives per positive in the candidate pool
  double alpha = 1.0;
  double beta = 1e-4;
  double theta = 0.5;
  Method method = Method::kBigMovie;
  uint64_t seed = 7;
  size_t max_movies = 0;  // 0: every eligible movie
};

using PlanFn = std::function<PlanResult(const PlanProblem&, Method)>;

// One masked movie: the target features are hidden, the rest locked to the
// truth, and the planner picks among positives plus sampled negatives.
struct MaskedCase {
  size_t movie = 0;
  PlanProblem problem;
  std::vector<size_t> positives;
  std::vector<size_t> negatives;
};

inline MaskedCase MakeMaskedCase(const PlanningContext& ctx, size_t movie, const PlanningEvalOptions& opts) {
  const MovieRecord& rec = ctx.library->movies().at(movie);
  const FeatureIndex& index = *ctx.index;
  MaskedCase c;
  c.movie = movie;
  std::seed_seq seq{static_cast<uint64_t>(opts.seed), static_cast<uint64_t>(movie)};
  std::mt19937_64 rng(seq);

  std::vector<Role> target_roles;
  if (opts.target == PlanTarget::kTeam) {
    target_roles.assign(kCrewRoles.begin(), kCrewRoles.end());
  } else {
    target_roles.push_back(Role::kGenre);
  }
  const auto truth = FeaturePositions(rec, index);
  std::set<size_t> truth_set(truth.begin(), truth.end());
  for (Role r : target_roles) {
    std::vector<size_t> pos;
    for (const auto& name : rec.names(r)) pos.push_back(index.Position(r, name));
    std::vector<size_t> pool;
    const IndexRange block = index.block(r);
    for (size_t i = block.begin; i < block.end; ++i) {
      if (!truth_set.contains(i)) pool.push_back(i);
    }
    const auto want = static_cast<size_t>(std::llround(opts.ratio * static_cast<double>(pos.size())));
    std::vector<size_t> drawn;
    std::sample(pool.begin(), pool.end(), std::back_inserter(drawn), std::min(want, pool.size()), rng);
    c.positives.insert(c.positives.end(), pos.begin(), pos.end());
    c.negatives.insert(c.negatives.end(), drawn.begin(), drawn.end());
  }
  std::sort(c.positives.begin(), c.positives.end());
  std::sort(c.negatives.begin(), c.negatives.end());

  const std::set<size_t> target_set(c.positives.begin(), c.positives.end());
  PlanProblem& p = c.problem;
  for (size_t i : truth) {
    if (!target_set.contains(i)) p.locked.push_back(i);
  }
  p.candidates = c.positives;
  p.candidates.insert(p.candidates.end(), c.negatives.begin(), c.negatives.end());
  std::sort(p.candidates.begin(), p.candidates.end());
  p.alpha = opts.alpha;
  p.beta = opts.beta;
  p.theta = opts.theta;
  p.gross_model = ctx.gross_model;
  p.budget_model = ctx.budget_model;
  p.tensor = ctx.tensor;
  // The budget is what the model charges for the true configuration, so the
  // truth is always affordable.
  p.budget_cap = ctx.budget_model->Predict(Vectorize(rec, index).values);
  return c;
}

inline std::vector<size_t> EligibleMovies(const PlanningContext& ctx, const PlanningEvalOptions& opts) {
  std::vector<size_t> out;
  const auto& movies = ctx.library->movies();
  for (size_t i = 0; i < movies.size(); ++i) {
    const auto& m = movies[i];
    const bool has_target = opts.target == PlanTarget::kTeam ? m.crew_count() > 0 : !m.genres.empty();
    if (has_target) out.push_back(i);
  }
  if (opts.max_movies && out.size() > opts.max_movies) {
    std::mt19937_64 rng(opts.seed);
    std::shuffle(out.begin(), out.end(), rng);
    out.resize(opts.max_movies);
    std::sort(out.begin(), out.end());
  }
  return out;
}

// Confusion counts are taken over the candidate pool only.
inline PlanningMetrics EvaluatePlanning(const PlanningContext& ctx, const PlanningEvalOptions& opts,
                                        const PlanFn& planner = Solve) {
  if (!(opts.ratio > 0.0)) throw InvalidInput("positive:negative ratio must be > 0");
  if (!ctx.library || !ctx.index || !ctx.gross_model || !ctx.budget_model || !ctx.tensor) {
    throw InvalidInput("planning context is incomplete");
  }
  size_t tp = 0, fp = 0, tn = 0, fn = 0;
  const auto movies = EligibleMovies(ctx, opts);
  for (size_t movie : movies) {
    const MaskedCase c = MakeMaskedCase(ctx, movie, opts);
    const PlanResult res = planner(c.problem, opts.method);
    for (size_t i : c.positives) (res.config.values[i] == 1.0 ? tp : fn) += 1;
    for (size_t i : c.negatives) (res.config.values[i] == 1.0 ? fp : tn) += 1;
  }
  PlanningMetrics m = MetricsFromCounts(tp, fp, tn, fn);
  m.ratio = opts.ratio;
  m.beta = opts.method == Method::kMaxA ? 1.0 : (opts.method == Method::kBigMovie ? opts.beta : 0.0);
  m.target = opts.target;
  m.method = opts.method;
  m.movies = movies.size();
  return m;
}

inline const std::vector<double>& DefaultBetas() {
  static const std::vector<double> kBetas = {0.0, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  return kBetas;
}

// One bigmovie row per beta (alpha fixed at 1), then MaxG, MaxA and Greedy.
inline std::vector<PlanningMetrics> BetaSweep(const PlanningContext& ctx, const std::vector<double>& betas,
                                              PlanningEvalOptions opts, const PlanFn& planner = Solve) {
  if (betas.empty()) throw InvalidInput("beta sweep needs at least one beta");
  std::vector<PlanningMetrics> rows;
  opts.alpha = 1.0;
  for (double b : betas) {
    opts.method = Method::kBigMovie;
    opts.beta = b;
    rows.push_back(EvaluatePlanning(ctx, opts, planner));
  }
  for (Method m : {Method::kMaxG, Method::kMaxA, Method::kGreedy}) {
    opts.method = m;
    rows.push_back(EvaluatePlanning(ctx, opts, planner));
  }
  return rows;
}

inline std::string FormatMetricsTable(const std::vector<PlanningMetrics>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "method" << std::right << std::setw(10) << "beta" << std::setw(8) << "target"
     << std::setw(7) << "ratio" << std::setw(7) << "movies" << std::setw(10) << "accuracy" << std::setw(8) << "f1"
     << std::setw(7) << "tp" << std::setw(7) << "fp" << std::setw(7) << "tn" << std::setw(7) << "fn" << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(10) << MethodName(r.method) << std::right << std::setw(10) << std::setprecision(4)
       << r.beta << std::setw(8) << TargetName(r.target) << std::setw(7) << r.ratio << std::setw(7) << r.movies
       << std::setw(10) << std::fixed << std::setprecision(4) << r.accuracy << std::setw(8) << r.f1
       << std::defaultfloat << std::setw(7) << r.tp << std::setw(7) << r.fp << std::setw(7) << r.tn << std::setw(7)
       << r.fn << '\n';
  }
  return os.str();
}

struct CaseStudyOptions {
  std::string movie_id;
  std::vector<std::string> locked_genres;  // empty: the movie's own genres
  std::vector<std::string> sequels;        // also removed from training data
  std::vector<FeatureRef> excluded;
  size_t n_candidates = 250;
  size_t team_cap = 20;
  std::optional<double> budget;  // default: the movie's recorded budget
  double alpha = 1.0;
  double beta = 1e-4;
  double theta = 0.5;
  Method method = Method::kBigMovie;
  FitConfig fit;
  uint64_t seed = 7;
};

struct Partner {
  FeatureRef feature;
  uint64_t co_count = 0;  // summed over the locked genres
};

struct Selection {
  FeatureRef feature;
  size_t position = 0;
  double score = 0.0;
  double gross_weight = 0.0;
  double budget_weight = 0.0;
  bool locked = false;
  bool actual = false;  // part of the real movie
  std::vector<Partner> partners;
};

struct CaseReport {
  std::string movie_id;
  std::string title;
  double budget_cap = 0.0;
  std::optional<double> actual_gross;
  double est_gross = 0.0;
  double est_budget = 0.0;
  double acquaintance = 0.0;
  double objective = 0.0;
  bool feasible = false;
  size_t candidates = 0;
  std::vector<Selection> selected;
  std::vector<FeatureRef> overlap;  // actual crew that was selected
  std::vector<FeatureRef> missed;   // actual crew that was not
  // Leakage accounting.
  size_t training_rows = 0;
  size_t full_training_rows = 0;
  uint64_t tensor_mass = 0;
  uint64_t full_tensor_mass = 0;
  uint64_t removed_mass = 0;  // what the removed movies contribute to the full tensor
  LinearModel gross_model;
  LinearModel budget_model;
  AcquaintanceTensor tensor;
  PlanResult plan;

  json ToJson() const {
    auto ref = [](const FeatureRef& f) { return f.ToString(); };
    json sel = json::array();
    for (const auto& s : selected) {
      json partners = json::array();
      for (const auto& p : s.partners) partners.push_back({{"feature", ref(p.feature)}, {"co_count", p.co_count}});
      sel.push_back({{"feature", ref(s.feature)},
                     {"score", s.score},
                     {"gross_weight", s.gross_weight},
                     {"budget_weight", s.budget_weight},
                     {"locked", s.locked},
                     {"actual", s.actual},
                     {"partners", partners}});
    }
    json overlap_j = json::array();
    for (const auto& f : overlap) overlap_j.push_back(ref(f));
    json missed_j = json::array();
    for (const auto& f : missed) missed_j.push_back(ref(f));
    return {{"movie_id", movie_id},
            {"title", title},
            {"method", std::string(MethodName(plan.method))},
            {"budget_cap", budget_cap},
            {"actual_gross", actual_gross ? json(*actual_gross) : json(nullptr)},
            {"est_gross", est_gross},
            {"est_budget", est_budget},
            {"acquaintance", acquaintance},
            {"objective", objective},
            {"feasible", feasible},
            {"candidates", candidates},
            {"selected", sel},
            {"overlap", overlap_j},
            {"missed", missed_j},
            {"training_rows", training_rows},
            {"full_training_rows", full_training_rows},
            {"tensor_mass", tensor_mass},
            {"full_tensor_mass", full_tensor_mass},
            {"removed_mass", removed_mass}};
  }
};

// Tensor mass a single movie contributes: 2 * pairs * genres.
inline uint64_t MovieTensorMass(const MovieRecord& m) {
  const uint64_t c = m.crew_count();
  return 2 * (c * (c - (c > 0 ? 1 : 0)) / 2) * m.genres.size();
}

// Plans one existing movie from scratch after removing it (and its sequels)
// from the data the models and tensor are built from. The feature index is
// kept so the movie's own crew stay addressable.
inline CaseReport RunCaseStudy(const KnowledgeLibrary& lib, const FeatureIndex& index,
                               const CaseStudyOptions& opts) {
  const auto target_pos = lib.Find(opts.movie_id);
  if (!target_pos) throw InvalidInput("unknown movie id '" + opts.movie_id + "'");
  const MovieRecord& target = lib.movies()[*target_pos];

  std::set<std::string> removed = {opts.movie_id};
  for (const auto& s : opts.sequels) {
    if (!lib.Find(s)) throw InvalidInput("unknown sequel id '" + s + "'");
    removed.insert(s);
  }
  const KnowledgeLibrary train_lib = lib.Without(removed);

  CaseReport report;
  report.movie_id = target.id;
  report.title = target.title;
  report.actual_gross = target.gross;
  report.gross_model = TrainGrossModel(train_lib, index, opts.fit);
  report.budget_model = TrainBudgetModel(train_lib, index, opts.fit);
  report.tensor = AcquaintanceTensor::Build(train_lib, index);
  report.training_rows = train_lib.trainable().size();
  report.full_training_rows = lib.trainable().size();
  report.tensor_mass = report.tensor.total_mass();
  report.full_tensor_mass = AcquaintanceTensor::Build(lib, index).total_mass();
  for (const auto& id : removed) report.removed_mass += MovieTensorMass(lib.movies()[*lib.Find(id)]);

  if (opts.budget) {
    report.budget_cap = *opts.budget;
  } else if (target.budget) {
    report.budget_cap = *target.budget;
  } else {
    throw InvalidInput("movie '" + target.id + "' has no recorded budget; pass one explicitly");
  }

  std::vector<size_t> true_crew;
  for (Role r : kCrewRoles) {
    for (const auto& name : target.names(r)) true_crew.push_back(index.Position(r, name));
  }
  std::sort(true_crew.begin(), true_crew.end());
  if (opts.n_candidates < true_crew.size()) {
    throw InvalidInput("candidate pool of " + std::to_string(opts.n_candidates) + " cannot hold the " +
                       std::to_string(true_crew.size()) + " actual crew members");
  }
  const size_t crew_total = index.crew_range().size();
  if (opts.n_candidates > crew_total) {
    throw InvalidInput("candidate pool larger than the available crew (" + std::to_string(crew_total) + ")");
  }

  PlanProblem p;
  p.budget_cap = report.budget_cap;
  p.alpha = opts.alpha;
  p.beta = opts.beta;
  p.theta = opts.theta;
  p.team_cap = opts.team_cap;
  p.gross_model = &report.gross_model;
  p.budget_model = &report.budget_model;
  p.tensor = &report.tensor;
  for (const auto& f : opts.excluded) p.excluded.push_back(index.Position(f));
  const std::set<size_t> excluded(p.excluded.begin(), p.excluded.end());

  const std::vector<std::string> genres =
      opts.locked_genres.empty() ? std::vector<std::string>(target.genres.begin(), target.genres.end())
                                 : opts.locked_genres;
  for (const auto& g : genres) p.locked.push_back(index.Position(Role::kGenre, g));

  std::set<size_t> pool;
  for (size_t i : true_crew) {
    if (!excluded.contains(i)) pool.insert(i);
  }
  std::vector<size_t> others;
  const std::set<size_t> truth(true_crew.begin(), true_crew.end());
  for (size_t i = 0; i < crew_total; ++i) {
    if (!truth.contains(i) && !excluded.contains(i)) others.push_back(i);
  }
  std::mt19937_64 rng(opts.seed);
  const size_t extra = std::min(opts.n_candidates - std::min(opts.n_candidates, pool.size()), others.size());
  std::vector<size_t> drawn;
  std::sample(others.begin(), others.end(), std::back_inserter(drawn), extra, rng);
  pool.insert(drawn.begin(), drawn.end());
  p.candidates.assign(pool.begin(), pool.end());
  report.candidates = p.candidates.size();

  report.plan = Solve(p, opts.method);
  const PlanResult& res = report.plan;
  report.est_gross = res.est_gross;
  report.est_budget = res.est_budget;
  report.acquaintance = res.acquaintance_score;
  report.objective = res.objective;
  report.feasible = res.feasible;

  const std::set<size_t> locked(p.locked.begin(), p.locked.end());
  const auto chosen = res.config.Selected();
  std::vector<size_t> chosen_crew;
  for (size_t i : chosen) {
    if (index.is_crew(i)) chosen_crew.push_back(i);
  }
  for (size_t i : chosen) {
    Selection s;
    s.feature = index.ref_of(i);
    s.position = i;
    s.score = res.relaxed.values[i];
    s.gross_weight = report.gross_model.feature_weight(i);
    s.budget_weight = report.budget_model.feature_weight(i);
    s.locked = locked.contains(i);
    s.actual = truth.contains(i) || (!index.is_crew(i) && target.genres.contains(index.name_of(i)));
    if (index.is_crew(i)) {
      for (size_t j : chosen_crew) {
        if (j == i) continue;
        uint64_t co = 0;
        for (size_t g : p.locked) co += report.tensor.at(i, j, g);
        if (co > 0) s.partners.push_back({index.ref_of(j), co});
      }
      std::stable_sort(s.partners.begin(), s.partners.end(),
                       [](const Partner& a, const Partner& b) { return a.co_count > b.co_count; });
      if (s.partners.size() > 3) s.partners.resize(3);
    }
    report.selected.push_back(std::move(s));
  }
  const std::set<size_t> chosen_set(chosen.begin(), chosen.end());
  for (size_t i : true_crew) (chosen_set.contains(i) ? report.overlap : report.missed).push_back(index.ref_of(i));
  return report;
}

}  // namespace movieplan

#endif  // MOVIEPLAN_HARNESS_H_
