#include "panda/commands.hpp"

#include "panda/errors.hpp"
#include "panda/oracle.hpp"

namespace panda {

namespace {

void check_size(const Program& prog, const RunConfig& config) {
  if (prog.universe().size() > config.max_variables) {
    fail(ErrorCode::kUniverseTooLarge,
         std::to_string(prog.universe().size()) + " variables, limit is " +
             std::to_string(config.max_variables));
  }
}

const ConjunctiveQuery& need_query(const Program& prog, const char* cmd) {
  if (!prog.is_query) {
    fail(ErrorCode::kUsage, std::string(cmd) + " needs a conjunctive query");
  }
  return prog.query;
}

std::vector<VarSet> bound_targets(const Program& prog) {
  if (!prog.is_query) {
    std::vector<VarSet> t;
    for (const auto& a : prog.rule.output.atoms) t.push_back(a.vars);
    return t;
  }
  VarSet f = prog.query.free;
  return {f.empty() ? prog.query.body.vars() : f};
}

PlannerConfig planner_config(const RunConfig& c) {
  return {c.basis, c.parallel, c.trace};
}

void write_outputs(const Program& prog, const Model& model,
                   const std::filesystem::path& out, const ValueDictionary& dict,
                   Json& files) {
  std::filesystem::create_directories(out);
  for (const auto& a : prog.rule.output.atoms) {
    auto path = out / (a.name + ".csv");
    write_relation_csv(path, model.at(a.name), a.order, prog.universe(), dict);
    files[a.name] = Json{{"path", path.string()}, {"rows", model.at(a.name).size()}};
  }
}

Atom head_atom(const ConjunctiveQuery& q) {
  return make_atom(q.head_name, q.head_order);
}

Json load_json(const LoadReport& r) {
  Json j;
  for (const auto& [name, n] : r.rows) {
    j[name] = Json{{"rows", n}, {"duplicates_dropped", r.duplicates.at(name)}};
  }
  return j;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kDuplicateAtomVarSet:
    case ErrorCode::kHeadVarNotInBody:
    case ErrorCode::kUnknownRelation:
    case ErrorCode::kNonGuardedConstraint:
    case ErrorCode::kUnguardedConstraint:
    case ErrorCode::kUnguardedDegree:
    case ErrorCode::kMissingFile:
    case ErrorCode::kHeaderMismatch:
    case ErrorCode::kUsage:
    case ErrorCode::kUniverseTooLarge:
    case ErrorCode::kUnbounded:
    case ErrorCode::kEmptyOutputSet:
    case ErrorCode::kOracleCapExceeded:
      return 1;
    case ErrorCode::kConstraintViolated:
      return 2;
    default:
      return 3;
  }
}

Json cmd_bound(const Program& prog, const StatisticsProfile& profile,
               const RunConfig& config) {
  check_size(prog, config);
  profile.validate(prog.body());
  const Universe& u = prog.universe();
  auto targets = bound_targets(prog);
  MaxMinResult r = solve_maxmin_dual(targets, u.size(), profile, config.basis);
  Json j;
  j["command"] = "bound";
  Json t = Json::array();
  for (VarSet s : targets) t.push_back(format_varset(s, u));
  j["targets"] = t;
  j["bound"] = bound_json(r.opt, scale_of(profile),
                          constraint_labels(profile, u, prog.body()));
  return j;
}

Json cmd_witness(const Program& prog, const StatisticsProfile& profile,
                 const RunConfig& config) {
  check_size(prog, config);
  profile.validate(prog.body());
  const Universe& u = prog.universe();
  auto labels = constraint_labels(profile, u, prog.body());
  LogScale scale = scale_of(profile);
  Json j;
  j["command"] = "witness";
  Json rules = Json::array();
  auto add = [&](const std::vector<VarSet>& heads, const LogExpr& bound,
                 const RationalWitness& coeffs, const IntegralInequality& w) {
    Json r;
    Json h = Json::array();
    for (VarSet s : heads) h.push_back(format_varset(s, u));
    r["heads"] = h;
    r["bound"] = bound_json(bound, scale, labels);
    r["coefficients"] = coefficients_json(coeffs, u);
    r["integral"] = inequality_json(w, u);
    rules.push_back(r);
  };
  if (prog.is_query) {
    CqPlan plan = plan_cq(prog.query, profile, planner_config(config));
    for (const auto& d : plan.ddrs) add(d.heads, d.bound, d.coeffs, d.witness);
  } else {
    MaxMinResult dual = solve_polymatroid_bound(prog.rule, profile, config.basis);
    RationalWitness coeffs;
    IntegralInequality w = witness_for(dual, u.size(), config.basis, &coeffs);
    add(bound_targets(prog), dual.opt, coeffs, w);
  }
  j["rules"] = rules;
  return j;
}

Json cmd_width(const Program& prog, const StatisticsProfile& profile,
               const RunConfig& config, bool submodular) {
  const ConjunctiveQuery& q = need_query(prog, submodular ? "subw" : "fhtw");
  check_size(prog, config);
  profile.validate(q.body);
  WidthReport w = submodular ? compute_subw(q, profile, config.basis)
                             : compute_fhtw(q, profile, config.basis);
  Json j;
  j["command"] = submodular ? "subw" : "fhtw";
  j["width"] = bound_json(w.value, scale_of(profile),
                          constraint_labels(profile, q.universe, q.body));
  Json bags = Json::array();
  for (VarSet b : w.realizer) bags.push_back(format_varset(b, q.universe));
  j[submodular ? "worst_bag_choice" : "best_td_bags"] = bags;
  j["decompositions"] = w.tds_considered;
  return j;
}

Json cmd_plan(const Program& prog, const StatisticsProfile& profile,
              const RunConfig& config) {
  const ConjunctiveQuery& q = need_query(prog, "plan");
  check_size(prog, config);
  profile.validate(q.body);
  const Universe& u = q.universe;
  auto labels = constraint_labels(profile, u, q.body);
  LogScale scale = scale_of(profile);
  CqPlan plan = plan_cq(q, profile, planner_config(config));
  Json j;
  j["command"] = "plan";
  j["full"] = plan.full;
  if (!plan.full) {
    j["fhtw"] = bound_json(compute_fhtw(q, profile, config.basis).value, scale,
                           labels);
    j["subw"] = bound_json(compute_subw(q, profile, config.basis).value, scale,
                           labels);
  }
  Json tds = Json::array();
  for (const auto& td : plan.tds) tds.push_back(td_json(td, u));
  j["decompositions"] = tds;
  Json rules = Json::array();
  for (const auto& d : plan.ddrs) {
    Json r;
    Json h = Json::array();
    for (VarSet s : d.heads) h.push_back(format_varset(s, u));
    r["heads"] = h;
    r["bound"] = bound_json(d.bound, scale, labels);
    r["coefficients"] = coefficients_json(d.coeffs, u);
    r["integral"] = inequality_json(d.witness, u);
    rules.push_back(r);
  }
  j["rules"] = rules;
  return j;
}

Json cmd_run(const Program& prog, const StatisticsProfile& profile,
             const std::filesystem::path& data,
             const std::filesystem::path& out, const RunConfig& config) {
  check_size(prog, config);
  profile.validate(prog.body());
  const Universe& u = prog.universe();
  ValueDictionary dict;
  LoadReport load;
  Instance inst = load_relations(data, prog.body(), u, dict, &load);
  check_instance(inst, profile);
  Json j;
  j["command"] = "run";
  j["input"] = load_json(load);
  Json files;
  if (prog.is_query) {
    const ConjunctiveQuery& q = prog.query;
    PlannerConfig pc = planner_config(config);
    CqPlan plan = plan_cq(q, profile, pc);
    CqStats st;
    Table result = execute_plan(plan, inst, pc, &st);
    std::filesystem::create_directories(out);
    auto path = out / (q.head_name + ".csv");
    write_relation_csv(path, result, q.head_order, u, dict);
    files[q.head_name] = Json{{"path", path.string()}, {"rows", result.size()}};
    Json tds = Json::array();
    for (const auto& td : plan.tds) tds.push_back(td_json(td, u));
    j["plan"] = Json{{"full", plan.full}, {"decompositions", tds},
                     {"rules", plan.ddrs.size()}};
    j["stats"] = Json{{"work", st.panda_work}, {"nodes", st.panda_nodes},
                      {"rules_run", st.ddrs_run}};
  } else {
    MaxMinResult dual = solve_polymatroid_bound(prog.rule, profile, config.basis);
    IntegralInequality w = witness_for(dual, u.size(), config.basis);
    PandaConfig pc;
    pc.parallel = config.parallel;
    pc.trace = config.trace;
    PandaStats st;
    Model model = run_panda(prog.rule, inst, profile, w, pc, &st);
    write_outputs(prog, model, out, dict, files);
    j["bound"] = bound_json(dual.opt, scale_of(profile),
                            constraint_labels(profile, u, prog.body()));
    j["stats"] = panda_stats_json(st);
    if (config.trace) j["trace"] = trace_json(st.trace, u);
  }
  j["outputs"] = files;
  return j;
}

Json cmd_verify(const Program& prog, const StatisticsProfile& profile,
                const std::filesystem::path& data,
                const std::filesystem::path& results) {
  profile.validate(prog.body());
  const Universe& u = prog.universe();
  ValueDictionary dict;
  Instance inst = load_relations(data, prog.body(), u, dict);
  check_instance(inst, profile);
  Json j;
  j["command"] = "verify";
  if (prog.is_query) {
    const ConjunctiveQuery& q = prog.query;
    Table got = read_relation_csv(results / (q.head_name + ".csv"), head_atom(q),
                                  u, dict);
    Table want = naive_cq(q, inst);
    j["ok"] = got.same_rows(want);
    j["expected_rows"] = want.size();
    j["result_rows"] = got.size();
  } else {
    Model model;
    for (const auto& a : prog.rule.output.atoms) {
      model[a.name] = read_relation_csv(results / (a.name + ".csv"), a, u, dict);
    }
    j["ok"] = verify_model(inst, prog.rule, model);
  }
  return j;
}

Json cmd_oracle(const Program& prog, const std::filesystem::path& data,
                const std::filesystem::path& out) {
  const Universe& u = prog.universe();
  ValueDictionary dict;
  Instance inst = load_relations(data, prog.body(), u, dict);
  Json j;
  j["command"] = "oracle";
  Json files;
  if (prog.is_query) {
    const ConjunctiveQuery& q = prog.query;
    Table result = naive_cq(q, inst);
    std::filesystem::create_directories(out);
    auto path = out / (q.head_name + ".csv");
    write_relation_csv(path, result, q.head_order, u, dict);
    files[q.head_name] = Json{{"path", path.string()}, {"rows", result.size()}};
  } else {
    Table full = naive_full_join(prog.rule.input, inst);
    Model model;
    for (const auto& a : prog.rule.output.atoms) model[a.name] = project(full, a.vars);
    write_outputs(prog, model, out, dict, files);
  }
  j["outputs"] = files;
  return j;
}

Json cmd_generate(const Program& prog, const StatisticsProfile* profile,
                  const std::filesystem::path& out, const RunConfig& config) {
  GeneratorConfig g;
  g.seed = config.seed;
  g.domain = config.domain;
  g.tuples = config.tuples;
  g.skew = config.skew;
  Instance inst = random_instance(prog.body(), g);
  if (profile) {
    profile->validate(prog.body());
    inst = restrict_to_profile(std::move(inst), *profile);
  }
  ValueDictionary dict;
  for (Value v = 0; v < config.domain; ++v) dict.intern(std::to_string(v));
  std::filesystem::create_directories(out);
  Json j;
  j["command"] = "generate";
  j["seed"] = config.seed;
  Json files;
  for (const auto& a : prog.body().atoms) {
    auto path = out / (a.name + ".csv");
    write_relation_csv(path, inst.at(a.name), a.order, prog.universe(), dict);
    files[a.name] = Json{{"path", path.string()}, {"rows", inst.at(a.name).size()}};
  }
  j["outputs"] = files;
  return j;
}

}  // namespace panda
