#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "panda/log_scale.hpp"
#include "panda/rational.hpp"

namespace panda {

enum class Sense { kLe, kEq, kGe };

struct LpRow {
  std::vector<std::pair<int, Rational>> coeffs;  // (variable, coefficient)
  Sense sense = Sense::kEq;
  Rational rhs = 0;
};

// minimize c·x subject to rows, x ≥ 0.
struct LpProblem {
  int num_vars = 0;
  std::vector<LpRow> rows;

  int add_row(std::vector<std::pair<int, Rational>> coeffs, Sense sense,
              Rational rhs) {
    rows.push_back({std::move(coeffs), sense, std::move(rhs)});
    return static_cast<int>(rows.size()) - 1;
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* lp_status_name(LpStatus s);

template <class Obj>
struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<Rational> x;
  Obj objective{};
  int pivots = 0;
};

// Two-phase exact simplex with Bland's rule. `cost` may be empty (pure
// feasibility: the first feasible basis is returned).
LpSolution<Rational> solve_lp_exact(const LpProblem& lp,
                                    const std::vector<Rational>& cost);

// Same, with symbolic Σ q log N costs whose signs are decided by `scale`.
LpSolution<LogExpr> solve_lp_exact(const LpProblem& lp,
                                   const std::vector<LogExpr>& cost,
                                   const LogScale& scale);

}  // namespace panda
