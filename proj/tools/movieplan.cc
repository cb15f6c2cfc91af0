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

// movieplan: command-line front end.
//
//   synth | ingest | train | evaluate-regression | build-tensor | plan |
//   evaluate-planning | beta-sweep | case-study | serve

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"
#include "movieplan/harness.h"
#include "movieplan/io.h"
#include "movieplan/library.h"
#include "movieplan/planner.h"
#include "movieplan/regress.h"
#include "movieplan/service.h"
#include "movieplan/tensor.h"

namespace fs = std::filesystem;
using namespace movieplan;

namespace {

void PrintEvalTable(const std::vector<EvalReport>& reports) {
  std::printf("%-8s %6s %12s %12s\n", "split", "n", "budget_mape", "gross_mape");
  for (const auto& r : reports) std::printf("%-8s %6zu %12.3f %12.3f\n", r.split.c_str(), r.n, r.budget_mape, r.gross_mape);
  const auto& test = reports.back();
  if (test.per_group.size() > 1) {
    std::printf("\nablation on the held-out split\n%-10s %12s %12s\n", "group", "budget_mape", "gross_mape");
    for (FeatureGroup g : kAllGroups) {
      const auto it = test.per_group.find(std::string(GroupName(g)));
      if (it != test.per_group.end()) {
        std::printf("%-10s %12.3f %12.3f\n", it->first.c_str(), it->second.budget, it->second.gross);
      }
    }
  }
}

struct PlanningInputs {
  std::string library;
  std::string models;
  std::string tensor;
};

struct LoadedPlanning {
  KnowledgeLibrary library;
  ModelBundle models;
  AcquaintanceTensor tensor;

  PlanningContext context() const {
    return {&library, &models.index, &models.gross, &models.budget, &tensor};
  }
};

LoadedPlanning LoadPlanning(const PlanningInputs& in) {
  LoadedPlanning out;
  out.library = LoadLibraryFile(in.library);
  out.models = LoadModels(in.models);
  out.tensor = LoadTensorFile(in.tensor, out.models.index);
  return out;
}

void AddPlanningInputs(CLI::App* cmd, PlanningInputs& in) {
  cmd->add_option("--input", in.library, "Library JSONL")->required();
  cmd->add_option("--models", in.models, "Model directory written by train")->required();
  cmd->add_option("--tensor", in.tensor, "Tensor JSONL written by build-tensor")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-driven movie configuration planning"};
  app.require_subcommand(1);

  // synth
  SyntheticSpec synth;
  std::string synth_out = "lib.jsonl";
  std::string synth_truth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic library with planted weights");
  synth_cmd->add_option("--movies", synth.n_movies, "Movie count")->capture_default_str();
  synth_cmd->add_option("--actors", synth.n_actors)->capture_default_str();
  synth_cmd->add_option("--actresses", synth.n_actresses)->capture_default_str();
  synth_cmd->add_option("--directors", synth.n_directors)->capture_default_str();
  synth_cmd->add_option("--writers", synth.n_writers)->capture_default_str();
  synth_cmd->add_option("--genres", synth.n_genres)->capture_default_str();
  synth_cmd->add_option("--teams", synth.n_teams, "Recurring crews (0 = none)")->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise_sigma, "Gaussian noise on budget and gross")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output JSONL")->capture_default_str();
  synth_cmd->add_option("--truth", synth_truth, "Optional JSON file for the planted weights");

  // ingest
  std::string ingest_in, ingest_report;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse a library and write the parse report");
  ingest_cmd->add_option("--input", ingest_in)->required();
  ingest_cmd->add_option("--report", ingest_report)->required();

  // train
  std::string train_in, train_out = "models";
  FitConfig train_cfg;
  uint64_t train_seed = 7;
  auto* train_cmd = app.add_subcommand("train", "Fit the budget and gross models");
  train_cmd->add_option("--input", train_in)->required();
  train_cmd->add_option("--out", train_out)->capture_default_str();
  train_cmd->add_option("--lambda", train_cfg.lambda)->capture_default_str();
  train_cmd->add_option("--max-iters", train_cfg.max_iters)->capture_default_str();
  train_cmd->add_option("--tol", train_cfg.tol)->capture_default_str();
  train_cmd->add_option("--seed", train_seed, "Seed of the 80/20 split used for the held-out summary")
      ->capture_default_str();

  // evaluate-regression
  std::string evr_in, evr_out;
  FitConfig evr_cfg;
  int evr_folds = 5;
  uint64_t evr_seed = 7;
  bool evr_no_ablation = false;
  auto* evr_cmd = app.add_subcommand("evaluate-regression", "Cross-validated MAPE with feature-group ablations");
  evr_cmd->add_option("--input", evr_in)->required();
  evr_cmd->add_option("--folds", evr_folds)->capture_default_str();
  evr_cmd->add_option("--lambda", evr_cfg.lambda)->capture_default_str();
  evr_cmd->add_option("--seed", evr_seed)->capture_default_str();
  evr_cmd->add_option("--out", evr_out, "Optional JSON report");
  evr_cmd->add_flag("--no-ablation", evr_no_ablation);

  // build-tensor
  std::string bt_in, bt_out = "tensor.jsonl";
  auto* bt_cmd = app.add_subcommand("build-tensor", "Count crew collaborations per genre");
  bt_cmd->add_option("--input", bt_in)->required();
  bt_cmd->add_option("--out", bt_out)->capture_default_str();

  // plan
  std::string plan_models, plan_tensor, plan_candidates, plan_out, plan_method = "bigmovie";
  double plan_budget = 0.0, plan_alpha = 1.0, plan_beta = 1e-4, plan_theta = 0.5;
  std::vector<std::string> plan_lock, plan_exclude;
  std::optional<size_t> plan_team_cap;
  auto* plan_cmd = app.add_subcommand("plan", "Plan a movie configuration under a budget");
  plan_cmd->add_option("--models", plan_models)->required();
  plan_cmd->add_option("--tensor", plan_tensor)->required();
  plan_cmd->add_option("--budget", plan_budget, "Budget cap B in million USD")->required();
  plan_cmd->add_option("--alpha", plan_alpha)->capture_default_str();
  plan_cmd->add_option("--beta", plan_beta)->capture_default_str();
  plan_cmd->add_option("--theta", plan_theta)->capture_default_str();
  plan_cmd->add_option("--lock", plan_lock, "role:name, repeatable");
  plan_cmd->add_option("--exclude", plan_exclude, "role:name, repeatable");
  plan_cmd->add_option("--candidates", plan_candidates, "JSON array of role:name");
  plan_cmd->add_option("--team-cap", plan_team_cap);
  plan_cmd->add_option("--method", plan_method)
      ->check(CLI::IsMember({"bigmovie", "maxg", "maxa", "greedy", "exact"}))
      ->capture_default_str();
  plan_cmd->add_option("--out", plan_out, "Plan JSON (stdout when omitted)");

  // evaluate-planning
  PlanningInputs evp_in;
  PlanningEvalOptions evp_opts;
  std::string evp_target = "team", evp_method = "bigmovie", evp_out;
  auto* evp_cmd = app.add_subcommand("evaluate-planning", "Mask-and-recover accuracy and F1");
  AddPlanningInputs(evp_cmd, evp_in);
  evp_cmd->add_option("--target", evp_target)->check(CLI::IsMember({"team", "genre"}))->capture_default_str();
  evp_cmd->add_option("--ratio", evp_opts.ratio)->capture_default_str();
  evp_cmd->add_option("--beta", evp_opts.beta)->capture_default_str();
  evp_cmd->add_option("--theta", evp_opts.theta)->capture_default_str();
  evp_cmd->add_option("--method", evp_method)
      ->check(CLI::IsMember({"bigmovie", "maxg", "maxa", "greedy"}))
      ->capture_default_str();
  evp_cmd->add_option("--max-movies", evp_opts.max_movies)->capture_default_str();
  evp_cmd->add_option("--seed", evp_opts.seed)->capture_default_str();
  evp_cmd->add_option("--out", evp_out);

  // beta-sweep
  PlanningInputs bs_in;
  PlanningEvalOptions bs_opts;
  std::string bs_target = "team", bs_out;
  std::vector<double> bs_betas = DefaultBetas();
  auto* bs_cmd = app.add_subcommand("beta-sweep", "Compare beta values against MaxG, MaxA and Greedy");
  AddPlanningInputs(bs_cmd, bs_in);
  bs_cmd->add_option("--betas", bs_betas)->capture_default_str();
  bs_cmd->add_option("--target", bs_target)->check(CLI::IsMember({"team", "genre"}))->capture_default_str();
  bs_cmd->add_option("--ratio", bs_opts.ratio)->capture_default_str();
  bs_cmd->add_option("--theta", bs_opts.theta)->capture_default_str();
  bs_cmd->add_option("--max-movies", bs_opts.max_movies)->capture_default_str();
  bs_cmd->add_option("--seed", bs_opts.seed)->capture_default_str();
  bs_cmd->add_option("--out", bs_out);

  // case-study
  std::string cs_in, cs_out, cs_method = "bigmovie";
  CaseStudyOptions cs;
  std::vector<std::string> cs_exclude;
  std::optional<double> cs_budget;
  auto* cs_cmd = app.add_subcommand("case-study", "Re-plan an existing movie without its own data");
  cs_cmd->add_option("--input", cs_in)->required();
  cs_cmd->add_option("--movie", cs.movie_id)->required();
  cs_cmd->add_option("--candidates", cs.n_candidates)->capture_default_str();
  cs_cmd->add_option("--team-cap", cs.team_cap)->capture_default_str();
  cs_cmd->add_option("--budget", cs_budget, "Defaults to the movie's recorded budget");
  cs_cmd->add_option("--genre", cs.locked_genres, "Locked genre, repeatable (default: the movie's genres)");
  cs_cmd->add_option("--sequel", cs.sequels, "Movie id removed alongside the target, repeatable");
  cs_cmd->add_option("--exclude", cs_exclude, "role:name, repeatable");
  cs_cmd->add_option("--alpha", cs.alpha)->capture_default_str();
  cs_cmd->add_option("--beta", cs.beta)->capture_default_str();
  cs_cmd->add_option("--theta", cs.theta)->capture_default_str();
  cs_cmd->add_option("--lambda", cs.fit.lambda)->capture_default_str();
  cs_cmd->add_option("--method", cs_method)
      ->check(CLI::IsMember({"bigmovie", "maxg", "maxa", "greedy"}))
      ->capture_default_str();
  cs_cmd->add_option("--seed", cs.seed)->capture_default_str();
  cs_cmd->add_option("--out", cs_out);

  // serve
  std::string sv_models, sv_tensor, sv_lib, sv_host = "127.0.0.1";
  int sv_port = 8080;
  ServiceOptions sv_opts;
  auto* sv_cmd = app.add_subcommand("serve", "Serve the planning HTTP API");
  sv_cmd->add_option("--models", sv_models)->required();
  sv_cmd->add_option("--tensor", sv_tensor)->required();
  sv_cmd->add_option("--lib", sv_lib, "Library JSONL (validated against the feature index)");
  sv_cmd->add_option("--host", sv_host)->capture_default_str();
  sv_cmd->add_option("--port", sv_port)->capture_default_str();
  sv_cmd->add_option("--candidate-cap", sv_opts.candidate_cap)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) {
      const SyntheticLibrary s = GenerateSyntheticLibrary(synth);
      auto out = OpenOutput(synth_out);
      s.library.Write(out);
      if (!synth_truth.empty()) {
        WriteJsonFile(synth_truth, {{"budget_weights", s.budget_weights},
                                    {"budget_intercept", s.budget_intercept},
                                    {"gross_weights", s.gross_weights},
                                    {"gross_intercept", s.gross_intercept},
                                    {"feature_block_sizes", s.index.block_sizes()}});
      }
      std::printf("wrote %zu movies, N=%zu features to %s\n", s.library.size(), s.index.size(), synth_out.c_str());
    } else if (ingest_cmd->parsed()) {
      const KnowledgeLibrary lib = LoadLibraryFile(ingest_in);
      WriteJsonFile(ingest_report, lib.report().ToJson());
      std::printf("accepted %zu, flagged %zu, rejected %zu\n", lib.report().accepted, lib.report().flagged,
                  lib.report().rejected);
    } else if (train_cmd->parsed()) {
      const KnowledgeLibrary lib = LoadLibraryFile(train_in);
      ModelBundle b;
      b.index = FeatureIndex::Build(lib);
      b.budget = TrainBudgetModel(lib, b.index, train_cfg);
      b.gross = TrainGrossModel(lib, b.index, train_cfg);
      std::vector<size_t> usable;
      for (size_t r : lib.trainable()) {
        if (*lib.movies()[r].budget > 0 && *lib.movies()[r].gross > 0) usable.push_back(r);
      }
      b.budget.training_mape = ModelMape(b.budget, lib, b.index, usable);
      b.gross.training_mape = ModelMape(b.gross, lib, b.index, usable);
      SaveModels(train_out, b);
      // Held-out check on a seeded 80/20 split; the saved models use every record.
      const SplitPlan split = MakeSplit(usable, 2, train_seed);
      const auto rows = split.TrainingRows();
      const LinearModel hb = TrainModel(ModelKind::kBudget, lib, b.index, train_cfg, rows);
      const LinearModel hg = TrainModel(ModelKind::kGross, lib, b.index, train_cfg, rows);
      json summary{{"n_trainable", lib.trainable().size()},
                   {"n", b.index.size()},
                   {"lambda", train_cfg.lambda},
                   {"training_mape", {{"budget", *b.budget.training_mape}, {"gross", *b.gross.training_mape}}}};
      if (!split.test.empty()) {
        summary["holdout_mape"] = {{"budget", ModelMape(hb, lib, b.index, split.test)},
                                   {"gross", ModelMape(hg, lib, b.index, split.test)},
                                   {"n", split.test.size()}};
      }
      WriteJsonFile(fs::path(train_out) / "summary.json", summary);
      std::cout << summary.dump(2) << '\n';
    } else if (evr_cmd->parsed()) {
      const KnowledgeLibrary lib = LoadLibraryFile(evr_in);
      const FeatureIndex index = FeatureIndex::Build(lib);
      const auto reports = CrossValidate(lib, index, evr_cfg, evr_folds, evr_seed, !evr_no_ablation);
      PrintEvalTable(reports);
      if (!evr_out.empty()) {
        json j = json::array();
        for (const auto& r : reports) j.push_back(r.ToJson());
        WriteJsonFile(evr_out, j);
      }
    } else if (bt_cmd->parsed()) {
      const KnowledgeLibrary lib = LoadLibraryFile(bt_in);
      const FeatureIndex index = FeatureIndex::Build(lib);
      const AcquaintanceTensor t = AcquaintanceTensor::Build(lib, index);
      auto out = OpenOutput(bt_out);
      t.Write(out);
      std::printf("wrote %zu entries (C=%zu, G=%zu) to %s\n", t.entries().size(), t.crew_count(), t.genre_count(),
                  bt_out.c_str());
    } else if (plan_cmd->parsed()) {
      const ModelBundle b = LoadModels(plan_models);
      const AcquaintanceTensor t = LoadTensorFile(plan_tensor, b.index);
      PlanProblem p;
      p.budget_cap = plan_budget;
      p.alpha = plan_alpha;
      p.beta = plan_beta;
      p.theta = plan_theta;
      p.team_cap = plan_team_cap;
      p.gross_model = &b.gross;
      p.budget_model = &b.budget;
      p.tensor = &t;
      p.locked = ResolveRefs(b.index, plan_lock);
      p.excluded = ResolveRefs(b.index, plan_exclude);
      if (!plan_candidates.empty()) {
        p.candidates = ResolveRefs(b.index, ReadJsonFile(plan_candidates).get<std::vector<std::string>>());
      }
      const PlanResult res = Solve(p, *ParseMethod(plan_method));
      const json doc = PlanToJson(res, p, b.index);
      if (plan_out.empty()) {
        std::cout << doc.dump(2) << '\n';
      } else {
        WriteJsonFile(plan_out, doc);
        std::printf("est_gross %.3f  est_budget %.3f  acquaintance %.0f  objective %.3f\n", res.est_gross,
                    res.est_budget, res.acquaintance_score, res.objective);
      }
    } else if (evp_cmd->parsed()) {
      const LoadedPlanning lp = LoadPlanning(evp_in);
      evp_opts.target = *ParseTarget(evp_target);
      evp_opts.method = *ParseMethod(evp_method);
      const PlanningMetrics m = EvaluatePlanning(lp.context(), evp_opts);
      std::cout << FormatMetricsTable({m});
      if (!evp_out.empty()) WriteJsonFile(evp_out, m.ToJson());
    } else if (bs_cmd->parsed()) {
      const LoadedPlanning lp = LoadPlanning(bs_in);
      bs_opts.target = *ParseTarget(bs_target);
      const auto rows = BetaSweep(lp.context(), bs_betas, bs_opts);
      std::cout << FormatMetricsTable(rows);
      if (!bs_out.empty()) {
        json j = json::array();
        for (const auto& r : rows) j.push_back(r.ToJson());
        WriteJsonFile(bs_out, j);
      }
    } else if (cs_cmd->parsed()) {
      const KnowledgeLibrary lib = LoadLibraryFile(cs_in);
      const FeatureIndex index = FeatureIndex::Build(lib);
      cs.budget = cs_budget;
      cs.method = *ParseMethod(cs_method);
      for (const auto& e : cs_exclude) cs.excluded.push_back(ParseFeatureRef(e));
      const CaseReport report = RunCaseStudy(lib, index, cs);
      std::printf("%s (%s): budget %.2f, est_gross %.2f (actual %s), est_budget %.2f, acquaintance %.0f\n",
                  report.movie_id.c_str(), report.title.c_str(), report.budget_cap, report.est_gross,
                  report.actual_gross ? std::to_string(*report.actual_gross).c_str() : "n/a", report.est_budget,
                  report.acquaintance);
      std::printf("%-9s %-28s %7s %9s %9s %6s\n", "role", "name", "score", "w_gross", "w_budget", "actual");
      for (const auto& s : report.selected) {
        std::printf("%-9s %-28s %7.3f %9.3f %9.3f %6s\n", std::string(RoleName(s.feature.role)).c_str(),
                    s.feature.name.c_str(), s.score, s.gross_weight, s.budget_weight, s.actual ? "yes" : "");
      }
      std::printf("actual crew selected: %zu of %zu\n", report.overlap.size(),
                  report.overlap.size() + report.missed.size());
      if (!cs_out.empty()) WriteJsonFile(cs_out, report.ToJson());
    } else if (sv_cmd->parsed()) {
      ModelBundle b = LoadModels(sv_models);
      if (!sv_lib.empty()) {
        const KnowledgeLibrary lib = LoadLibraryFile(sv_lib);
        if (!(FeatureIndex::Build(lib) == b.index)) {
          throw InvalidInput("library does not match the feature index in " + sv_models);
        }
      }
      AcquaintanceTensor t = LoadTensorFile(sv_tensor, b.index);
      const PlanService service(std::move(b), std::move(t), sv_opts);
      httplib::Server server;
      service.Mount(server);
      std::printf("listening on http://%s:%d\n", sv_host.c_str(), sv_port);
      std::fflush(stdout);
      if (!server.listen(sv_host, sv_port)) {
        std::fprintf(stderr, "cannot bind %s:%d\n", sv_host.c_str(), sv_port);
        return 1;
      }
    }
  } catch (const Infeasible& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
