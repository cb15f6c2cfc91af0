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

// Blockbuster planning: choose a binary configuration x maximizing
//
//   alpha * (w_g[1:] . x + b_g + w_g[0] * B) + beta * A(x)
//   subject to w_b . x + b_b <= B,
//
// by relaxing x to [0,1]^N, running projected gradient ascent, thresholding
// at theta and repairing the budget. Greedy ratio and exhaustive baselines
// share the same problem description.

#ifndef MOVIEPLAN_PLANNER_H_
#define MOVIEPLAN_PLANNER_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "movieplan/errors.h"
#include "movieplan/library.h"
#include "movieplan/regress.h"
#include "movieplan/tensor.h"

namespace movieplan {

enum class Method { kBigMovie, kMaxG, kMaxA, kGreedy, kExact };

constexpr std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kBigMovie: return "bigmovie";
    case Method::kMaxG: return "maxg";
    case Method::kMaxA: return "maxa";
    case Method::kGreedy: return "greedy";
    case Method::kExact: return "exact";
  }
  return "?";
}

inline std::optional<Method> ParseMethod(std::string_view name) {
  for (Method m : {Method::kBigMovie, Method::kMaxG, Method::kMaxA, Method::kGreedy, Method::kExact}) {
    if (MethodName(m) == name) return m;
  }
  return std::nullopt;
}

inline constexpr double kBudgetTolerance = 1e-9;

struct PlanProblem {
  double budget_cap = 0.0;  // B, million USD
  double alpha = 1.0;
  double beta = 0.0;
  double theta = 0.5;
  const LinearModel* gross_model = nullptr;
  const LinearModel* budget_model = nullptr;
  const AcquaintanceTensor* tensor = nullptr;
  std::vector<size_t> candidates;  // empty means every position is eligible
  std::vector<size_t> locked;
  std::vector<size_t> excluded;
  std::optional<size_t> team_cap;  // max selected non-locked crew features

  size_t dimension() const { return tensor ? tensor->dimension() : 0; }
  size_t crew_count() const { return tensor ? tensor->crew_count() : 0; }

  void Validate() const {
    if (!gross_model || !budget_model || !tensor) throw InvalidInput("plan problem is missing models or tensor");
    if (gross_model->kind != ModelKind::kGross || budget_model->kind != ModelKind::kBudget) {
      throw InvalidInput("plan problem models have the wrong kinds");
    }
    const size_t n = dimension();
    if (gross_model->weights.size() != n + 1 || budget_model->weights.size() != n) {
      throw InvalidInput("model dimensions do not match the tensor dimension " + std::to_string(n));
    }
    if (!(budget_cap >= 0.0) || !std::isfinite(budget_cap)) throw InvalidInput("budget cap must be >= 0");
    if (!(alpha >= 0.0) || !(beta >= 0.0)) throw InvalidInput("alpha and beta must be >= 0");
    if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidInput("theta must lie in [0, 1]");
    if (team_cap && *team_cap == 0) throw InvalidInput("team cap must be positive");
    for (const auto* set : {&candidates, &locked, &excluded}) {
      for (size_t i : *set) {
        if (i >= n) throw InvalidInput("feature position " + std::to_string(i) + " out of range");
      }
    }
    std::vector<char> lock(n, 0);
    for (size_t i : locked) lock[i] = 1;
    for (size_t i : excluded) {
      if (lock[i]) throw InvalidInput("feature position " + std::to_string(i) + " is both locked and excluded");
    }
  }
};

struct ObjectiveTerms {
  double objective = 0.0;
  double est_gross = 0.0;
  double est_budget = 0.0;
  double acquaintance = 0.0;
};

inline ObjectiveTerms EvaluateObjective(const PlanProblem& p, std::span<const double> x) {
  if (!p.gross_model || !p.budget_model || !p.tensor) throw InvalidInput("plan problem is missing models or tensor");
  if (x.size() != p.dimension()) {
    throw InvalidInput("configuration length " + std::to_string(x.size()) + " does not match dimension " +
                       std::to_string(p.dimension()));
  }
  ObjectiveTerms t;
  t.est_gross = p.gross_model->Predict(x, p.budget_cap);
  t.est_budget = p.budget_model->Predict(x);
  t.acquaintance = p.tensor->Evaluate(x);
  t.objective = p.alpha * t.est_gross + p.beta * t.acquaintance;
  return t;
}

// Euclidean projection of y onto {x in [0,1]^n : w . x <= c} for w >= 0:
// x(mu) = clip(y - mu w, 0, 1) with the smallest mu >= 0 meeting the bound,
// found by bisection on the non-increasing map mu -> w . x(mu).
inline std::vector<double> ProjectBoxHalfspace(std::span<const double> y, std::span<const double> w, double c) {
  if (y.size() != w.size()) throw InvalidInput("projection inputs differ in length");
  for (double v : w) {
    if (!(v >= 0.0)) throw InvalidInput("projection weights must be >= 0");
  }
  if (c < 0.0) throw Infeasible("budget bound is negative");
  auto at = [&](double mu, std::vector<double>& x) {
    double used = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
      x[i] = std::clamp(y[i] - mu * w[i], 0.0, 1.0);
      used += w[i] * x[i];
    }
    return used;
  };
  std::vector<double> x(y.size());
  if (at(0.0, x) <= c) return x;

  double hi = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    if (w[i] > 0.0) hi = std::max(hi, y[i] / w[i]);
  }
  hi = hi * (1.0 + 1e-12) + std::numeric_limits<double>::min();
  double lo = 0.0;
  std::vector<double> probe(y.size());
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (at(mid, probe) > c) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  at(hi, x);
  return x;
}

namespace internal {

// The problem restricted to positions that can be nonzero: locked ones
// (pinned to 1) and free candidates. Tensor terms touching any other position
// vanish and are dropped.
struct ReducedProblem {
  struct Term {
    uint32_t a, b, g;
    double coef;  // both orders of the symmetric pair
  };

  std::vector<size_t> positions;  // local -> global
  std::vector<char> fixed;        // locked
  std::vector<char> crew;
  std::vector<size_t> free_vars;  // local ids of non-locked entries
  std::vector<double> gross_w;
  std::vector<double> budget_w;
  std::vector<Term> terms;
  double gross_constant = 0.0;  // b_g + w_g[0] B
  double slack = 0.0;           // B - b_b - locked budget
  double alpha = 1.0;
  double beta = 0.0;

  size_t size() const { return positions.size(); }

  double Objective(std::span<const double> x) const {
    double lin = gross_constant;
    for (size_t i = 0; i < x.size(); ++i) lin += gross_w[i] * x[i];
    double acq = 0.0;
    for (const auto& t : terms) acq += t.coef * x[t.a] * x[t.b] * x[t.g];
    return alpha * lin + beta * acq;
  }

  void Gradient(std::span<const double> x, std::vector<double>& g) const {
    g.assign(x.size(), 0.0);
    for (size_t i = 0; i < x.size(); ++i) g[i] = alpha * gross_w[i];
    if (beta == 0.0) return;
    for (const auto& t : terms) {
      const double c = beta * t.coef;
      g[t.a] += c * x[t.b] * x[t.g];
      g[t.b] += c * x[t.a] * x[t.g];
      g[t.g] += c * x[t.a] * x[t.b];
    }
  }

  // Projects the free block of y in place; fixed entries are set to 1.
  void Project(std::vector<double>& y) const {
    std::vector<double> yf(free_vars.size());
    std::vector<double> wf(free_vars.size());
    for (size_t k = 0; k < free_vars.size(); ++k) {
      yf[k] = y[free_vars[k]];
      wf[k] = budget_w[free_vars[k]];
    }
    const auto xf = ProjectBoxHalfspace(yf, wf, std::max(slack, 0.0));
    for (size_t i = 0; i < y.size(); ++i) {
      if (fixed[i]) y[i] = 1.0;
    }
    for (size_t k = 0; k < free_vars.size(); ++k) y[free_vars[k]] = xf[k];
  }

  std::vector<double> Expand(std::span<const double> local, size_t n) const {
    std::vector<double> full(n, 0.0);
    for (size_t i = 0; i < local.size(); ++i) full[positions[i]] = local[i];
    return full;
  }
};

// Eligibility mask: 1 free candidate, 2 locked, 0 otherwise.
inline std::vector<char> EligibilityMask(const PlanProblem& p) {
  const size_t n = p.dimension();
  std::vector<char> mask(n, p.candidates.empty() ? 1 : 0);
  for (size_t i : p.candidates) mask[i] = 1;
  for (size_t i : p.excluded) mask[i] = 0;
  for (size_t i : p.locked) mask[i] = 2;
  return mask;
}

inline double LockedBudget(const PlanProblem& p) {
  double cost = p.budget_model->intercept;
  for (size_t i : p.locked) cost += p.budget_model->feature_weight(i);
  return cost;
}

inline void CheckLockedFeasible(const PlanProblem& p) {
  if (LockedBudget(p) > p.budget_cap + kBudgetTolerance) throw Infeasible("locked set exceeds budget");
}

inline ReducedProblem Reduce(const PlanProblem& p) {
  p.Validate();
  CheckLockedFeasible(p);
  const size_t n = p.dimension();
  const auto mask = EligibilityMask(p);
  ReducedProblem r;
  r.alpha = p.alpha;
  r.beta = p.beta;
  std::vector<int64_t> local(n, -1);
  for (size_t i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    local[i] = static_cast<int64_t>(r.positions.size());
    r.positions.push_back(i);
    r.fixed.push_back(mask[i] == 2 ? 1 : 0);
    r.crew.push_back(i < p.crew_count() ? 1 : 0);
    r.gross_w.push_back(p.gross_model->feature_weight(i));
    r.budget_w.push_back(p.budget_model->feature_weight(i));
    if (mask[i] == 1) r.free_vars.push_back(r.positions.size() - 1);
  }
  r.gross_constant = p.gross_model->intercept + p.gross_model->budget_weight() * p.budget_cap;
  r.slack = p.budget_cap - LockedBudget(p);
  for (const auto& e : p.tensor->entries()) {
    const int64_t a = local[e.n], b = local[e.m], g = local[e.l];
    if (a < 0 || b < 0 || g < 0) continue;
    r.terms.push_back({static_cast<uint32_t>(a), static_cast<uint32_t>(b), static_cast<uint32_t>(g),
                       2.0 * e.count});
  }
  return r;
}

}  // namespace internal

// Projection of y onto the problem's feasible box: locked positions pinned to
// 1, excluded and non-candidate positions to 0, the rest projected onto
// [0,1] intersected with the budget halfspace.
inline std::vector<double> ProjectFeasible(const PlanProblem& p, std::span<const double> y) {
  const auto r = internal::Reduce(p);
  if (y.size() != p.dimension()) throw InvalidInput("configuration length does not match problem dimension");
  std::vector<double> local(r.size());
  for (size_t i = 0; i < r.size(); ++i) local[i] = y[r.positions[i]];
  r.Project(local);
  return r.Expand(local, p.dimension());
}

struct RelaxedSolution {
  ConfigVector relaxed;
  int iterations = 0;
  std::vector<double> trace;  // objective at the start point and after each accepted step
  std::vector<std::vector<double>> iterates;  // only when requested
};

struct RelaxedOptions {
  int max_iters = 500;
  double step_tol = 1e-6;
  bool keep_iterates = false;
};

// Projected gradient ascent with backtracking from the projection of the
// all-0.5 point. The objective is not concave, so this reaches a stationary
// point rather than a global maximum.
inline RelaxedSolution SolveRelaxed(const PlanProblem& p, const RelaxedOptions& opts = {}) {
  const auto r = internal::Reduce(p);
  std::vector<double> x(r.size(), 0.5);
  r.Project(x);
  double f = r.Objective(x);

  RelaxedSolution sol;
  sol.trace.push_back(f);
  if (opts.keep_iterates) sol.iterates.push_back(r.Expand(x, p.dimension()));

  std::vector<double> grad;
  std::vector<double> trial(x.size());
  double eta = 0.0;
  for (int it = 0; it < opts.max_iters && !r.free_vars.empty(); ++it) {
    r.Gradient(x, grad);
    double gmax = 0.0;
    for (size_t k : r.free_vars) gmax = std::max(gmax, std::abs(grad[k]));
    if (gmax == 0.0) break;
    if (eta == 0.0) eta = 1.0 / gmax;

    bool accepted = false;
    double f_trial = f;
    while (eta > 1e-20) {
      for (size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + eta * grad[i];
      r.Project(trial);
      f_trial = r.Objective(trial);
      if (f_trial >= f) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;

    double step = 0.0;
    for (size_t i = 0; i < x.size(); ++i) step = std::max(step, std::abs(trial[i] - x[i]));
    x.swap(trial);
    f = f_trial;
    sol.iterations = it + 1;
    sol.trace.push_back(f);
    if (opts.keep_iterates) sol.iterates.push_back(r.Expand(x, p.dimension()));
    if (step < opts.step_tol) break;
    eta *= 2.0;
  }
  sol.relaxed = ConfigVector(r.Expand(x, p.dimension()), ConfigMode::kRelaxed);
  return sol;
}

// x_i = 1 iff relaxed_i > theta, with locks and exclusions applied. Then, while
// over budget, drops the lowest-scoring non-locked selection that carries
// cost; finally keeps at most team_cap non-locked crew, best scores first.
inline ConfigVector Binarize(const ConfigVector& relaxed, const PlanProblem& p) {
  p.Validate();
  const size_t n = p.dimension();
  if (relaxed.size() != n) throw InvalidInput("relaxed configuration length does not match problem dimension");
  internal::CheckLockedFeasible(p);
  const auto mask = internal::EligibilityMask(p);
  const auto& score = relaxed.values;

  ConfigVector x(n, ConfigMode::kBinary);
  std::vector<size_t> picked;  // non-locked selections
  for (size_t i = 0; i < n; ++i) {
    if (mask[i] == 2) {
      x.values[i] = 1.0;
    } else if (mask[i] == 1 && score[i] > p.theta) {
      x.values[i] = 1.0;
      picked.push_back(i);
    }
  }
  // Lowest score first; ties drop the later position first.
  std::sort(picked.begin(), picked.end(), [&](size_t a, size_t b) {
    if (score[a] != score[b]) return score[a] < score[b];
    return a > b;
  });

  double budget = p.budget_model->Predict(x.values);
  for (size_t k = 0; k < picked.size() && budget > p.budget_cap; ++k) {
    const size_t i = picked[k];
    const double cost = p.budget_model->feature_weight(i);
    if (cost <= 0.0) continue;
    x.values[i] = 0.0;
    budget -= cost;
  }

  if (p.team_cap) {
    std::vector<size_t> crew;
    for (auto it = picked.rbegin(); it != picked.rend(); ++it) {
      if (*it < p.crew_count() && x.values[*it] == 1.0) crew.push_back(*it);
    }
    for (size_t k = *p.team_cap; k < crew.size(); ++k) x.values[crew[k]] = 0.0;
  }
  return x;
}

struct PlanResult {
  ConfigVector config;
  ConfigVector relaxed;
  double est_gross = 0.0;
  double est_budget = 0.0;
  double acquaintance_score = 0.0;
  double objective = 0.0;
  bool feasible = false;
  int iterations = 0;
  Method method = Method::kBigMovie;
};

namespace internal {

inline PlanResult Finish(const PlanProblem& p, ConfigVector config, ConfigVector relaxed, int iterations,
                         Method method) {
  PlanResult res;
  const auto terms = EvaluateObjective(p, config.values);
  res.config = std::move(config);
  res.relaxed = std::move(relaxed);
  res.est_gross = terms.est_gross;
  res.est_budget = terms.est_budget;
  res.acquaintance_score = terms.acquaintance;
  res.objective = terms.objective;
  res.feasible = terms.est_budget <= p.budget_cap + kBudgetTolerance;
  res.iterations = iterations;
  res.method = method;
  return res;
}

inline ConfigVector AsRelaxed(const ConfigVector& x) { return ConfigVector(x.values, ConfigMode::kRelaxed); }

}  // namespace internal

// Relaxed solve, threshold rounding and repair under the problem's alpha and
// beta.
inline PlanResult Plan(const PlanProblem& p) {
  RelaxedSolution sol = SolveRelaxed(p);
  ConfigVector config = Binarize(sol.relaxed, p);
  return internal::Finish(p, std::move(config), std::move(sol.relaxed), sol.iterations, Method::kBigMovie);
}

// Adds free candidates in decreasing gross/budget weight ratio while the
// budget holds. Zero-cost candidates with positive gross weight come first;
// candidates without gross weight are never chosen.
inline PlanResult GreedyPlan(const PlanProblem& p) {
  const auto r = internal::Reduce(p);
  std::vector<size_t> order;
  for (size_t k : r.free_vars) {
    if (r.gross_w[k] > 0.0) order.push_back(k);
  }
  auto ratio = [&](size_t k) {
    return r.budget_w[k] > 0.0 ? r.gross_w[k] / r.budget_w[k] : std::numeric_limits<double>::infinity();
  };
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return ratio(a) > ratio(b); });

  std::vector<double> local(r.size(), 0.0);
  for (size_t i = 0; i < r.size(); ++i) {
    if (r.fixed[i]) local[i] = 1.0;
  }
  double spent = 0.0;
  size_t crew = 0;
  for (size_t k : order) {
    if (spent + r.budget_w[k] > r.slack) continue;
    if (p.team_cap && r.crew[k] && crew >= *p.team_cap) continue;
    local[k] = 1.0;
    spent += r.budget_w[k];
    if (r.crew[k]) ++crew;
  }
  ConfigVector config(r.Expand(local, p.dimension()), ConfigMode::kBinary);
  ConfigVector relaxed = internal::AsRelaxed(config);
  return internal::Finish(p, std::move(config), std::move(relaxed), 0, Method::kGreedy);
}

inline constexpr size_t kMaxExactCandidates = 20;

// Enumerates every assignment of the free candidates. Ties on the objective
// go to the smaller budget, then to the lexicographically smaller vector.
inline PlanResult ExactPlan(const PlanProblem& p) {
  const auto r = internal::Reduce(p);
  const size_t k = r.free_vars.size();
  if (k > kMaxExactCandidates) {
    throw InvalidInput("exact planning supports at most " + std::to_string(kMaxExactCandidates) +
                       " free candidates, got " + std::to_string(k));
  }
  std::vector<double> local(r.size(), 0.0);
  for (size_t i = 0; i < r.size(); ++i) {
    if (r.fixed[i]) local[i] = 1.0;
  }

  // Bit j of a mask is free candidate j; lexicographic order compares the
  // lowest differing bit.
  auto lex_less = [](uint64_t a, uint64_t b) {
    const uint64_t diff = a ^ b;
    if (diff == 0) return false;
    const uint64_t low = diff & (~diff + 1);
    return (a & low) == 0;
  };

  bool found = false;
  uint64_t best_mask = 0;
  double best_obj = 0.0;
  double best_cost = 0.0;
  const uint64_t total = uint64_t{1} << k;
  for (uint64_t mask = 0; mask < total; ++mask) {
    double cost = 0.0;
    size_t crew = 0;
    for (size_t j = 0; j < k; ++j) {
      const bool on = (mask >> j) & 1u;
      local[r.free_vars[j]] = on ? 1.0 : 0.0;
      if (on) {
        cost += r.budget_w[r.free_vars[j]];
        crew += r.crew[r.free_vars[j]];
      }
    }
    if (cost > r.slack + kBudgetTolerance) continue;
    if (p.team_cap && crew > *p.team_cap) continue;
    const double obj = r.Objective(local);
    const double tie = 1e-9 * std::max(1.0, std::abs(best_obj));
    bool better = !found || obj > best_obj + tie;
    if (!better && std::abs(obj - best_obj) <= tie) {
      better = cost < best_cost || (cost == best_cost && lex_less(mask, best_mask));
    }
    if (better) {
      found = true;
      best_mask = mask;
      best_obj = obj;
      best_cost = cost;
    }
  }
  for (size_t j = 0; j < k; ++j) local[r.free_vars[j]] = ((best_mask >> j) & 1u) ? 1.0 : 0.0;
  ConfigVector config(r.Expand(local, p.dimension()), ConfigMode::kBinary);
  ConfigVector relaxed = internal::AsRelaxed(config);
  return internal::Finish(p, std::move(config), std::move(relaxed), static_cast<int>(total), Method::kExact);
}

// Runs one method. MaxG solves with alpha=1, beta=0 and MaxA with alpha=0,
// beta=1; reported objectives always use the caller's alpha and beta so
// methods stay comparable.
inline PlanResult Solve(const PlanProblem& p, Method method) {
  switch (method) {
    case Method::kBigMovie: return Plan(p);
    case Method::kGreedy: return GreedyPlan(p);
    case Method::kExact: return ExactPlan(p);
    case Method::kMaxG:
    case Method::kMaxA: {
      PlanProblem q = p;
      q.alpha = method == Method::kMaxG ? 1.0 : 0.0;
      q.beta = method == Method::kMaxG ? 0.0 : 1.0;
      PlanResult res = Plan(q);
      return internal::Finish(p, std::move(res.config), std::move(res.relaxed), res.iterations, method);
    }
  }
  throw InvalidInput("unknown method");
}

}  // namespace movieplan

#endif  // MOVIEPLAN_PLANNER_H_
