#include "panda/shannon.hpp"

#include <algorithm>

#include "panda/errors.hpp"
#include "panda/simplex.hpp"

namespace panda {

namespace {

void check_universe(int n) {
  if (n > kMaxLpVariables) {
    fail(ErrorCode::kUniverseTooLarge,
         "LP paths support at most " + std::to_string(kMaxLpVariables) +
             " variables");
  }
}

// Row index of h(X) in identity LPs; X ranges over nonempty subsets.
int row_of(VarSet s) { return static_cast<int>(s.bits()) - 1; }

LinExpr expand(const Measure& m) {
  LinExpr e;
  e.add(m, 1);
  return e;
}

// Identity rows Σ_k col_k(X) x_k = rhs_X for every nonempty X.
struct IdentityLp {
  LpProblem lp;
  std::vector<std::vector<std::pair<int, Rational>>> rows;

  explicit IdentityLp(int n) : rows((std::size_t{1} << n) - 1) {}

  int add_column(const LinExpr& e, const Rational& scale) {
    int col = lp.num_vars++;
    for (const auto& [s, c] : e.terms()) rows[row_of(s)].push_back({col, c * scale});
    return col;
  }

  void finish(const LinExpr& rhs) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      lp.add_row(std::move(rows[i]), Sense::kEq,
                 rhs.coeff(VarSet(static_cast<std::uint32_t>(i + 1))));
    }
  }
};

PolymatroidVector separating_polymatroid(const LinExpr& a, int n,
                                         Basis basis) {
  // min Σ a_X h(X) over polymatroids with h(V) ≤ 1.
  LpProblem lp;
  lp.num_vars = (1 << n) - 1;
  for (const auto& mu : basis_measures(n, basis)) {
    LinExpr e = expand(mu);
    std::vector<std::pair<int, Rational>> row;
    for (const auto& [s, c] : e.terms()) row.push_back({row_of(s), c});
    lp.add_row(std::move(row), Sense::kGe, 0);
  }
  lp.add_row({{row_of(VarSet::first_n(n)), Rational(1)}}, Sense::kLe, 1);
  std::vector<Rational> cost(lp.num_vars);
  for (const auto& [s, c] : a.terms()) cost[row_of(s)] = c;
  auto sol = solve_lp_exact(lp, cost);
  PolymatroidVector h(n);
  for (int i = 0; i < lp.num_vars; ++i) h.h[i + 1] = sol.x[i];
  return h;
}

}  // namespace

LinExpr shannon_gap(const RationalWitness& coeffs) {
  LinExpr e;
  for (const auto& [d, c] : coeffs.w) e.add(d, c);
  for (const auto& [z, c] : coeffs.lambda) e.add(z, -c);
  return e;
}

WitnessResult find_witness(const LinExpr& a, int n, Basis basis) {
  check_universe(n);
  for (const auto& [s, c] : a.terms()) {
    if (!s.subset_of(VarSet::first_n(n))) {
      fail(ErrorCode::kPreconditionViolated, "expression outside universe");
    }
  }
  auto measures = basis_measures(n, basis);
  IdentityLp id(n);
  for (const auto& mu : measures) id.add_column(expand(mu), 1);
  id.finish(a);
  auto sol = solve_lp_exact(id.lp, std::vector<Rational>{});
  WitnessResult out;
  if (sol.status != LpStatus::kOptimal) {
    out.certificate = separating_polymatroid(a, n, basis);
    return out;
  }
  out.valid = true;
  for (std::size_t k = 0; k < measures.size(); ++k) {
    if (sol.x[k] == 0) continue;
    (measures[k].is_mon() ? out.m : out.s).push_back({measures[k], sol.x[k]});
  }
  return out;
}

IntegralInequality integralize(const RationalWitness& coeffs) {
  BigInt l = 1;
  auto fold = [&](const auto& list) {
    for (const auto& [item, c] : list) l = lcm(l, c.get_den());
  };
  fold(coeffs.lambda);
  fold(coeffs.w);
  fold(coeffs.m);
  fold(coeffs.s);
  auto times = [&](const Rational& c) {
    Rational scaled = c * Rational(l);
    return scaled.get_num().get_ui();
  };
  IntegralInequality out;
  for (const auto& [z, c] : coeffs.lambda) {
    out.Z.insert(out.Z.end(), times(c), z);
  }
  bool origins = coeffs.w_origin.size() == coeffs.w.size();
  for (std::size_t i = 0; i < coeffs.w.size(); ++i) {
    unsigned long k = times(coeffs.w[i].second);
    out.D.insert(out.D.end(), k, coeffs.w[i].first);
    if (origins) out.d_origin.insert(out.d_origin.end(), k, coeffs.w_origin[i]);
  }
  for (const auto& [mu, c] : coeffs.m) out.M.insert(out.M.end(), times(c), mu);
  for (const auto& [sg, c] : coeffs.s) out.S.insert(out.S.end(), times(c), sg);
  return out;
}

LogScale scale_of(const StatisticsProfile& profile) {
  std::vector<BigInt> bounds;
  for (const auto& c : profile.constraints) bounds.push_back(c.bound);
  return LogScale(std::move(bounds));
}

MaxMinResult solve_maxmin_dual(const std::vector<VarSet>& targets, int n,
                               const StatisticsProfile& profile, Basis basis) {
  check_universe(n);
  if (targets.empty()) {
    fail(ErrorCode::kEmptyOutputSet, "max-min problem without targets");
  }
  IdentityLp id(n);
  std::vector<int> lambda_col, w_col;
  for (VarSet z : targets) {
    LinExpr e;
    e.add(z, 1);
    lambda_col.push_back(id.add_column(e, 1));
  }
  for (const auto& c : profile.constraints) {
    w_col.push_back(id.add_column(expand(Measure::mon(c.y, c.x - c.y)), -1));
  }
  auto measures = basis_measures(n, basis);
  int first_measure = id.lp.num_vars;
  for (const auto& mu : measures) id.add_column(expand(mu), 1);
  id.finish(LinExpr());
  std::vector<std::pair<int, Rational>> norm;
  for (int col : lambda_col) norm.push_back({col, Rational(1)});
  id.lp.add_row(std::move(norm), Sense::kEq, 1);

  std::vector<LogExpr> cost(id.lp.num_vars);
  for (std::size_t i = 0; i < w_col.size(); ++i) {
    cost[w_col[i]] = LogExpr::unit(static_cast<int>(i));
  }
  LogScale scale = scale_of(profile);
  auto sol = solve_lp_exact(id.lp, cost, scale);
  if (sol.status != LpStatus::kOptimal) {
    fail(ErrorCode::kUnbounded, "no finite bound for the given constraints");
  }
  MaxMinResult out;
  out.opt = sol.objective;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    out.lambda.push_back(sol.x[lambda_col[i]]);
    if (sol.x[lambda_col[i]] != 0) {
      out.witness.lambda.push_back({targets[i], sol.x[lambda_col[i]]});
    }
  }
  for (std::size_t i = 0; i < w_col.size(); ++i) {
    const auto& c = profile.constraints[i];
    out.w.push_back(sol.x[w_col[i]]);
    if (sol.x[w_col[i]] != 0) {
      out.witness.w.push_back({Measure::mon(c.y, c.x - c.y), sol.x[w_col[i]]});
      out.witness.w_origin.push_back(static_cast<int>(i));
    }
  }
  for (std::size_t k = 0; k < measures.size(); ++k) {
    const Rational& v = sol.x[first_measure + k];
    if (v == 0) continue;
    (measures[k].is_mon() ? out.witness.m : out.witness.s)
        .push_back({measures[k], v});
  }
  return out;
}

MaxMinResult solve_polymatroid_bound(const DisjunctiveRule& rule,
                                     const StatisticsProfile& profile,
                                     Basis basis) {
  std::vector<VarSet> targets;
  for (const auto& a : rule.output.atoms) {
    if (std::find(targets.begin(), targets.end(), a.vars) == targets.end()) {
      targets.push_back(a.vars);
    }
  }
  return solve_maxmin_dual(targets, rule.universe.size(), profile, basis);
}

std::optional<Rational> solve_maxmin_primal(const std::vector<VarSet>& targets,
                                            int n,
                                            const StatisticsProfile& profile,
                                            const std::vector<Rational>& logs) {
  check_universe(n);
  // Variable 0 is t; variable row_of(X) + 1 is h(X).
  LpProblem lp;
  lp.num_vars = 1 << n;
  auto hcol = [](VarSet s) { return row_of(s) + 1; };
  auto add_expr_row = [&](const LinExpr& e, Sense sense, Rational rhs,
                          std::vector<std::pair<int, Rational>> extra) {
    for (const auto& [s, c] : e.terms()) extra.push_back({hcol(s), c});
    lp.add_row(std::move(extra), sense, std::move(rhs));
  };
  for (VarSet z : targets) {
    LinExpr e;
    e.add(z, -1);
    add_expr_row(e, Sense::kLe, 0, {{0, Rational(1)}});
  }
  for (std::size_t i = 0; i < profile.constraints.size(); ++i) {
    const auto& c = profile.constraints[i];
    add_expr_row(expand(Measure::mon(c.y, c.x - c.y)), Sense::kLe, logs.at(i),
                 {});
  }
  for (const auto& mu : elemental_measures(n)) {
    add_expr_row(expand(mu), Sense::kGe, 0, {});
  }
  std::vector<Rational> cost(lp.num_vars);
  cost[0] = -1;
  auto sol = solve_lp_exact(lp, cost);
  if (sol.status != LpStatus::kOptimal) return std::nullopt;
  return Rational(-sol.objective);
}

}  // namespace panda
