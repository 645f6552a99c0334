#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "panda/log_scale.hpp"
#include "panda/measure.hpp"
#include "panda/query.hpp"

namespace panda {

inline constexpr int kMaxLpVariables = 10;

// Non-negative rational coefficients of a Shannon inequality
// Σ λ_Z h(Z) ≤ Σ w_δ h(δ) together with its witness terms.
struct RationalWitness {
  std::vector<std::pair<VarSet, Rational>> lambda;
  std::vector<std::pair<Measure, Rational>> w;
  std::vector<int> w_origin;  // degree-constraint index per w entry, or -1
  std::vector<std::pair<Measure, Rational>> m;
  std::vector<std::pair<Measure, Rational>> s;
};

// Σ w_δ h(δ) − Σ λ_Z h(Z).
LinExpr shannon_gap(const RationalWitness& coeffs);

struct WitnessResult {
  bool valid = false;
  std::vector<std::pair<Measure, Rational>> m;
  std::vector<std::pair<Measure, Rational>> s;
  // When invalid: a polymatroid with Σ a_X h(X) < 0.
  std::optional<PolymatroidVector> certificate;
};

// Decides Σ a_X h(X) ≥ 0 over polymatroids on n variables and returns
// (m, s) ≥ 0 with a ≡ Σ m h(μ) + Σ s h(σ) when it holds.
WitnessResult find_witness(const LinExpr& a, int n,
                           Basis basis = Basis::kElemental);

// Scales by the LCM of all denominators into multisets.
IntegralInequality integralize(const RationalWitness& coeffs);

struct MaxMinResult {
  LogExpr opt;                  // Σ w_δ n_δ, indexed by constraint
  std::vector<Rational> lambda;  // per target
  std::vector<Rational> w;       // per constraint
  RationalWitness witness;       // λ, w and the LP's own witness terms
};

// max_{h ⊨ (Δ,n)} min_Z h(Z) through its Lagrangian dual. Throws Unbounded
// when the optimum is infinite and UniverseTooLarge beyond the LP cap.
MaxMinResult solve_maxmin_dual(const std::vector<VarSet>& targets, int n,
                               const StatisticsProfile& profile,
                               Basis basis = Basis::kElemental);

// Polymatroid bound of a rule: the max-min problem over its head atoms.
MaxMinResult solve_polymatroid_bound(const DisjunctiveRule& rule,
                                     const StatisticsProfile& profile,
                                     Basis basis = Basis::kElemental);

// The primal max-min LP with explicit rational logs n_δ; nullopt if unbounded.
std::optional<Rational> solve_maxmin_primal(const std::vector<VarSet>& targets,
                                            int n,
                                            const StatisticsProfile& profile,
                                            const std::vector<Rational>& logs);

LogScale scale_of(const StatisticsProfile& profile);

}  // namespace panda
