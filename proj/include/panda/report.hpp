#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "panda/decomposition.hpp"
#include "panda/log_scale.hpp"
#include "panda/panda_engine.hpp"
#include "panda/shannon.hpp"

namespace panda {

using Json = nlohmann::ordered_json;

std::string format_varset(VarSet s, const Universe& u);

std::vector<std::string> constraint_labels(const StatisticsProfile& profile,
                                           const Universe& u,
                                           const Schema& schema);

// ∏ N_i^{q_i} as an exact integer when it is one, else "P^(1/k)".
std::string power_value(const LogExpr& e, const LogScale& scale);

// Symbolic exponent, common-base exponent when there is one, and value.
Json bound_json(const LogExpr& e, const LogScale& scale,
                const std::vector<std::string>& labels);

Json inequality_json(const IntegralInequality& ineq, const Universe& u);
Json coefficients_json(const RationalWitness& w, const Universe& u);
Json td_json(const TreeDecomposition& td, const Universe& u);
Json trace_json(const std::vector<TraceLine>& trace, const Universe& u);
Json panda_stats_json(const PandaStats& stats);

}  // namespace panda
