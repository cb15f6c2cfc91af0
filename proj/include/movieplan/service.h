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

// JSON-over-HTTP facade for interactive planning. Handlers are plain const
// member functions over immutable state, so they can be called directly or
// mounted on an httplib::Server.
//
//   POST /plan               PlanRequest -> plan document
//   POST /whatif             {base, toggles} -> term breakdown and deltas
//   GET  /library/features   ?role=&prefix=&limit=&offset=
//   GET  /model/info

#ifndef MOVIEPLAN_SERVICE_H_
#define MOVIEPLAN_SERVICE_H_

#include <algorithm>
#include <exception>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "movieplan/errors.h"
#include "movieplan/io.h"
#include "movieplan/library.h"
#include "movieplan/planner.h"
#include "movieplan/regress.h"
#include "movieplan/tensor.h"

namespace movieplan {

struct ServiceOptions {
  size_t candidate_cap = 2000;
  size_t max_page = 1000;
};

struct Response {
  int status = 200;
  json body;
};

class PlanService {
 public:
  PlanService(ModelBundle models, AcquaintanceTensor tensor, ServiceOptions opts = {})
      : models_(std::move(models)), tensor_(std::move(tensor)), opts_(opts) {
    if (tensor_.dimension() != models_.index.size()) {
      throw InvalidInput("tensor dimension does not match the feature index");
    }
  }

  const FeatureIndex& index() const { return models_.index; }

  Response HandlePlan(const json& request) const {
    return Guard([&] {
      const PlanProblem p = ParseRequest(request);
      const Method method = ParseServiceMethod(request);
      const PlanResult res = Solve(p, method);
      return Response{200, PlanToJson(res, p, index())};
    });
  }

  Response HandleWhatIf(const json& request) const {
    return Guard([&] {
      if (!request.is_object() || !request.contains("base")) throw InvalidInput("what-if request needs 'base'");
      const json& base_req = request["base"];
      const PlanProblem p = ParseRequest(base_req);
      const PlanResult base = Solve(p, ParseServiceMethod(base_req));

      ConfigVector modified = base.config;
      if (request.contains("toggles")) {
        if (!request["toggles"].is_array()) throw InvalidInput("'toggles' must be an array");
        for (const json& t : request["toggles"]) {
          if (!t.is_object() || !t.contains("feature") || !t["feature"].is_string() || !t.contains("value")) {
            throw InvalidInput("each toggle needs 'feature' and 'value'");
          }
          const size_t i = index().Position(ParseFeatureRef(t["feature"].get<std::string>()));
          const int v = t["value"].get<int>();
          if (v != 0 && v != 1) throw InvalidInput("toggle value must be 0 or 1");
          modified.values[i] = v;
        }
      }
      const ObjectiveTerms before = EvaluateObjective(p, base.config.values);
      const ObjectiveTerms after = EvaluateObjective(p, modified.values);
      const ObjectiveTerms delta{after.objective - before.objective, after.est_gross - before.est_gross,
                                 after.est_budget - before.est_budget, after.acquaintance - before.acquaintance};
      json body = TermsToJson(after);
      body["feasible"] = after.est_budget <= p.budget_cap + kBudgetTolerance;
      body["base"] = TermsToJson(before);
      body["delta"] = TermsToJson(delta);
      body["selected"] = SelectionToJson(modified, base.relaxed, p, index());
      return Response{200, body};
    });
  }

  Response HandleFeatures(const std::optional<std::string>& role_name, const std::string& prefix, size_t limit,
                          size_t offset) const {
    return Guard([&] {
      std::vector<Role> roles(kAllRoles.begin(), kAllRoles.end());
      if (role_name && !role_name->empty()) {
        const auto r = ParseRole(*role_name);
        if (!r) throw InvalidInput("unknown role '" + *role_name + "'");
        roles = {*r};
      }
      limit = std::min(limit, opts_.max_page);
      std::vector<size_t> matches;
      for (Role r : roles) {
        const auto& names = index().names(r);
        auto it = std::lower_bound(names.begin(), names.end(), prefix);
        for (; it != names.end() && it->compare(0, prefix.size(), prefix) == 0; ++it) {
          matches.push_back(index().block(r).begin + static_cast<size_t>(it - names.begin()));
        }
      }
      json page = json::array();
      for (size_t k = offset; k < matches.size() && page.size() < limit; ++k) {
        const size_t i = matches[k];
        page.push_back({{"feature", index().ref_of(i).ToString()},
                        {"role", std::string(RoleName(index().role_of(i)))},
                        {"name", index().name_of(i)},
                        {"index", i},
                        {"gross_weight", models_.gross.feature_weight(i)},
                        {"budget_weight", models_.budget.feature_weight(i)}});
      }
      return Response{200, {{"total", matches.size()}, {"offset", offset}, {"limit", limit}, {"features", page}}};
    });
  }

  Response HandleModelInfo() const {
    return Guard([&] {
      json sizes = json::object();
      for (Role r : kAllRoles) sizes[std::string(RoleName(r))] = index().block_size(r);
      auto mape = [](const LinearModel& m) { return m.training_mape ? json(*m.training_mape) : json(nullptr); };
      return Response{200,
                      {{"n", index().size()},
                       {"block_sizes", sizes},
                       {"feature_block_sizes", index().block_sizes()},
                       {"lambda", {{"budget", models_.budget.lambda}, {"gross", models_.gross.lambda}}},
                       {"training_mape", {{"budget", mape(models_.budget)}, {"gross", mape(models_.gross)}}},
                       {"tensor_entries", tensor_.stored_entries()},
                       {"tensor_unique_entries", tensor_.entries().size()}}};
    });
  }

  void Mount(httplib::Server& server) const {
    auto reply = [](httplib::Response& res, const Response& r) {
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json");
    };
    auto parse_body = [](const httplib::Request& req, json& out) {
      out = json::parse(req.body, nullptr, false);
      return !out.is_discarded();
    };
    server.Post("/plan", [this, reply, parse_body](const httplib::Request& req, httplib::Response& res) {
      json body;
      if (!parse_body(req, body)) return reply(res, Error(400, "bad_request", "body is not valid JSON"));
      reply(res, HandlePlan(body));
    });
    server.Post("/whatif", [this, reply, parse_body](const httplib::Request& req, httplib::Response& res) {
      json body;
      if (!parse_body(req, body)) return reply(res, Error(400, "bad_request", "body is not valid JSON"));
      reply(res, HandleWhatIf(body));
    });
    server.Get("/library/features", [this, reply](const httplib::Request& req, httplib::Response& res) {
      std::optional<std::string> role;
      if (req.has_param("role")) role = req.get_param_value("role");
      const std::string prefix = req.has_param("prefix") ? req.get_param_value("prefix") : "";
      size_t limit = 50;
      size_t offset = 0;
      try {
        if (req.has_param("limit")) limit = std::stoul(req.get_param_value("limit"));
        if (req.has_param("offset")) offset = std::stoul(req.get_param_value("offset"));
      } catch (const std::exception&) {
        return reply(res, Error(400, "bad_request", "limit and offset must be non-negative integers"));
      }
      reply(res, HandleFeatures(role, prefix, limit, offset));
    });
    server.Get("/model/info",
               [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, HandleModelInfo()); });
  }

 private:
  static Response Error(int status, const std::string& error, const std::string& detail) {
    return Response{status, {{"error", error}, {"detail", detail}}};
  }

  template <typename F>
  static Response Guard(F&& f) {
    try {
      return f();
    } catch (const Infeasible& e) {
      return Error(422, "infeasible", e.what());
    } catch (const InvalidInput& e) {
      return Error(400, "bad_request", e.what());
    } catch (const json::exception& e) {
      return Error(400, "bad_request", e.what());
    } catch (const std::exception& e) {
      return Error(500, "internal", e.what());
    }
  }

  static Method ParseServiceMethod(const json& request) {
    const std::string name = request.value("method", std::string("bigmovie"));
    const auto m = ParseMethod(name);
    if (!m || *m == Method::kExact) throw InvalidInput("invalid method '" + name + "'");
    return *m;
  }

  std::vector<size_t> RefList(const json& request, const char* key) const {
    if (!request.contains(key) || request[key].is_null()) return {};
    if (!request[key].is_array()) throw InvalidInput(std::string("'") + key + "' must be a list of role:name");
    return ResolveRefs(index(), request[key].get<std::vector<std::string>>());
  }

  PlanProblem ParseRequest(const json& request) const {
    if (!request.is_object()) throw InvalidInput("plan request must be a JSON object");
    if (!request.contains("budget_cap") || !request["budget_cap"].is_number()) {
      throw InvalidInput("plan request needs a numeric 'budget_cap'");
    }
    PlanProblem p;
    p.budget_cap = request["budget_cap"].get<double>();
    p.alpha = request.value("alpha", 1.0);
    p.beta = request.value("beta", 1e-4);
    p.theta = request.value("theta", 0.5);
    if (request.contains("team_cap") && !request["team_cap"].is_null()) {
      const auto cap = request["team_cap"].get<int64_t>();
      if (cap <= 0) throw InvalidInput("team_cap must be positive");
      p.team_cap = static_cast<size_t>(cap);
    }
    p.locked = RefList(request, "locked");
    p.excluded = RefList(request, "excluded");
    p.candidates = RefList(request, "candidate_pool");
    const size_t pool = p.candidates.empty() ? index().size() : p.candidates.size();
    if (pool > opts_.candidate_cap) {
      throw InvalidInput("candidate pool of " + std::to_string(pool) + " exceeds the per-request cap of " +
                         std::to_string(opts_.candidate_cap) + "; use the CLI for larger jobs");
    }
    p.gross_model = &models_.gross;
    p.budget_model = &models_.budget;
    p.tensor = &tensor_;
    p.Validate();
    return p;
  }

  ModelBundle models_;
  AcquaintanceTensor tensor_;
  ServiceOptions opts_;
};

}  // namespace movieplan

#endif  // MOVIEPLAN_SERVICE_H_
