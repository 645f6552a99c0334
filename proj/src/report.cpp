#include "panda/report.hpp"

#include "panda/io.hpp"

namespace panda {

std::string format_varset(VarSet s, const Universe& u) {
  return "{" + u.format(s) + "}";
}

std::vector<std::string> constraint_labels(const StatisticsProfile& profile,
                                           const Universe& u,
                                           const Schema& schema) {
  std::vector<std::string> out;
  for (const auto& c : profile.constraints) {
    out.push_back(constraint_label(c, u, schema));
  }
  return out;
}

std::string power_value(const LogExpr& e, const LogScale& scale) {
  BigInt k = 1;
  for (const auto& [i, q] : e.coeffs()) k = lcm(k, q.get_den());
  BigInt p;
  if (!scale.integer_power(e, Rational(k), &p)) return "";
  if (k == 1) return to_string(p);
  BigInt root;
  unsigned long kk = k.get_ui();
  if (mpz_root(root.get_mpz_t(), p.get_mpz_t(), kk) != 0) return to_string(root);
  return to_string(p) + "^(1/" + to_string(k) + ")";
}

Json bound_json(const LogExpr& e, const LogScale& scale,
                const std::vector<std::string>& labels) {
  Json j;
  j["symbolic"] = format_log_expr(e, labels);
  Json w = Json::object();
  for (const auto& [i, q] : e.coeffs()) w[labels.at(i)] = to_string(q);
  j["weights"] = w;
  Rational common;
  if (!e.is_zero() && common_exponent(e, scale, &common)) {
    j["base"] = to_string(scale.bounds().at(e.coeffs().begin()->first));
    j["exponent"] = to_string(common);
  }
  std::string v = power_value(e, scale);
  if (!v.empty()) j["value"] = v;
  return j;
}

namespace {

Json measures(const std::vector<Measure>& ms, const Universe& u) {
  Json a = Json::array();
  for (const auto& m : ms) a.push_back(format_measure(m, u));
  return a;
}

Json weighted(const std::vector<std::pair<Measure, Rational>>& ms,
              const Universe& u) {
  Json a = Json::array();
  for (const auto& [m, q] : ms) {
    a.push_back(Json::array({format_measure(m, u), to_string(q)}));
  }
  return a;
}

}  // namespace

Json inequality_json(const IntegralInequality& ineq, const Universe& u) {
  Json j;
  Json z = Json::array();
  for (VarSet s : ineq.Z) z.push_back(format_varset(s, u));
  j["Z"] = z;
  j["D"] = measures(ineq.D, u);
  j["M"] = measures(ineq.M, u);
  j["S"] = measures(ineq.S, u);
  j["identity"] = verify_identity(ineq);
  j["unconditional"] = count_unconditional(ineq);
  j["potential"] = ineq.potential();
  return j;
}

Json coefficients_json(const RationalWitness& w, const Universe& u) {
  Json j;
  Json l = Json::array();
  for (const auto& [s, q] : w.lambda) {
    l.push_back(Json::array({format_varset(s, u), to_string(q)}));
  }
  j["lambda"] = l;
  j["w"] = weighted(w.w, u);
  j["m"] = weighted(w.m, u);
  j["s"] = weighted(w.s, u);
  return j;
}

Json td_json(const TreeDecomposition& td, const Universe& u) {
  Json j;
  Json bags = Json::array();
  for (VarSet b : td.bags) bags.push_back(format_varset(b, u));
  j["bags"] = bags;
  Json edges = Json::array();
  for (auto [a, b] : td.edges) edges.push_back(Json::array({a, b}));
  j["edges"] = edges;
  Json fr = Json::array();
  for (int i = 0; i < td.size(); ++i) {
    if (td.free_node[i]) fr.push_back(i);
  }
  j["free_nodes"] = fr;
  return j;
}

Json trace_json(const std::vector<TraceLine>& trace, const Universe& u) {
  Json a = Json::array();
  for (const auto& t : trace) {
    Json j;
    j["depth"] = t.depth;
    j["case"] = step_case_name(t.kind);
    j["delta"] = format_measure(t.delta, u);
    j["sizes"] = Json::array({t.z, t.d, t.m, t.s});
    j["within_budget"] = t.budget_ok;
    j["children"] = t.children;
    a.push_back(j);
  }
  return a;
}

Json panda_stats_json(const PandaStats& s) {
  Json j;
  j["work"] = s.work;
  j["max_node_work"] = s.max_node_work;
  j["input_size"] = s.input_size;
  j["nodes"] = s.nodes;
  j["leaves"] = s.leaves;
  j["pruned"] = s.pruned;
  j["max_depth"] = s.max_depth;
  j["budget_z0"] = s.budget.z0;
  j["budget_product"] = to_string(s.budget.product);
  return j;
}

}  // namespace panda
