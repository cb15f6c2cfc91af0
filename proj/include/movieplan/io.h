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

// On-disk formats: the model directory (features.json, budget.json,
// gross.json), JSONL libraries and tensors, and the plan document shared by
// the CLI and the HTTP service.

#ifndef MOVIEPLAN_IO_H_
#define MOVIEPLAN_IO_H_

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "movieplan/errors.h"
#include "movieplan/library.h"
#include "movieplan/planner.h"
#include "movieplan/regress.h"
#include "movieplan/tensor.h"

namespace movieplan {

inline std::ifstream OpenInput(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return in;
}

inline std::ofstream OpenOutput(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  return out;
}

inline json ReadJsonFile(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw InvalidInput("malformed JSON in " + path.string());
  return j;
}

inline void WriteJsonFile(const std::filesystem::path& path, const json& j) {
  auto out = OpenOutput(path);
  out << j.dump(2) << '\n';
}

inline KnowledgeLibrary LoadLibraryFile(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  return ParseLibrary(in);
}

inline AcquaintanceTensor LoadTensorFile(const std::filesystem::path& path, const FeatureIndex& index) {
  auto in = OpenInput(path);
  return AcquaintanceTensor::Load(in, index);
}

struct ModelBundle {
  FeatureIndex index;
  LinearModel budget;
  LinearModel gross;
};

inline void SaveModels(const std::filesystem::path& dir, const ModelBundle& b) {
  std::filesystem::create_directories(dir);
  WriteJsonFile(dir / "features.json", b.index.ToJson());
  WriteJsonFile(dir / "budget.json", b.budget.ToJson());
  WriteJsonFile(dir / "gross.json", b.gross.ToJson());
}

inline ModelBundle LoadModels(const std::filesystem::path& dir) {
  ModelBundle b;
  b.index = FeatureIndex::FromJson(ReadJsonFile(dir / "features.json"));
  b.budget = LinearModel::FromJson(ReadJsonFile(dir / "budget.json"));
  b.gross = LinearModel::FromJson(ReadJsonFile(dir / "gross.json"));
  if (b.budget.kind != ModelKind::kBudget || b.gross.kind != ModelKind::kGross) {
    throw InvalidInput("model files have the wrong kinds");
  }
  if (b.budget.block_sizes != b.index.block_sizes() || b.gross.block_sizes != b.index.block_sizes()) {
    throw InvalidInput("model block sizes do not match features.json");
  }
  return b;
}

inline std::vector<size_t> ResolveRefs(const FeatureIndex& index, const std::vector<std::string>& refs) {
  std::vector<size_t> out;
  out.reserve(refs.size());
  for (const auto& r : refs) out.push_back(index.Position(ParseFeatureRef(r)));
  return out;
}

inline json TermsToJson(const ObjectiveTerms& t) {
  return {{"est_gross", t.est_gross},
          {"est_budget", t.est_budget},
          {"acquaintance", t.acquaintance},
          {"objective", t.objective}};
}

// Selected features grouped by role, each with its relaxed score and model
// weights.
inline json SelectionToJson(const ConfigVector& config, const ConfigVector& relaxed, const PlanProblem& p,
                            const FeatureIndex& index) {
  const std::set<size_t> locked(p.locked.begin(), p.locked.end());
  json by_role = json::object();
  for (Role r : kAllRoles) by_role[std::string(RoleName(r))] = json::array();
  for (size_t i : config.Selected()) {
    by_role[std::string(RoleName(index.role_of(i)))].push_back(
        {{"name", index.name_of(i)},
         {"index", i},
         {"score", relaxed.size() == config.size() ? relaxed.values[i] : 1.0},
         {"gross_weight", p.gross_model->feature_weight(i)},
         {"budget_weight", p.budget_model->feature_weight(i)},
         {"locked", locked.contains(i)}});
  }
  return by_role;
}

inline json PlanToJson(const PlanResult& res, const PlanProblem& p, const FeatureIndex& index) {
  return {{"method", std::string(MethodName(res.method))},
          {"budget_cap", p.budget_cap},
          {"alpha", p.alpha},
          {"beta", p.beta},
          {"theta", p.theta},
          {"team_cap", p.team_cap ? json(*p.team_cap) : json(nullptr)},
          {"selected", SelectionToJson(res.config, res.relaxed, p, index)},
          {"est_gross", res.est_gross},
          {"est_budget", res.est_budget},
          {"acquaintance", res.acquaintance_score},
          {"objective", res.objective},
          {"feasible", res.feasible},
          {"iterations", res.iterations}};
}

}  // namespace movieplan

#endif  // MOVIEPLAN_IO_H_
