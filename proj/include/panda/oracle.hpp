#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "panda/measure.hpp"
#include "panda/panda_engine.hpp"
#include "panda/query.hpp"

namespace panda {

inline constexpr std::size_t kOracleTupleCap = 100000;
inline constexpr int kOracleMaxVariables = 6;

// Backtracking evaluation of ⋈Σ. Throws OracleCapExceeded past the cap.
Table naive_full_join(const Schema& schema, const Instance& instance);

// Every full-join tuple projects into at least one head table.
bool verify_model(const Instance& instance, const DisjunctiveRule& rule,
                  const Model& model);

Table naive_cq(const ConjunctiveQuery& q, const Instance& instance);

// Σ a_X h(X) ≥ 0 over all polymatroids, decided by minimizing over the cone.
bool check_shannon_direct(const LinExpr& a, int n);

struct GeneratorConfig {
  std::uint64_t seed = 1;
  Value domain = 16;
  std::size_t tuples = 32;
  // Probability that a tuple's first column takes the heavy value 0.
  double skew = 0.0;
};

// Same seed and schema give the same instance.
Instance random_instance(const Schema& schema, const GeneratorConfig& config);

// Drops rows (in row order) until every declared bound holds.
Instance restrict_to_profile(Instance instance,
                             const StatisticsProfile& profile);

}  // namespace panda
