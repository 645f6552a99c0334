#pragma once

#include <cstdint>
#include <filesystem>

#include "panda/errors.hpp"
#include "panda/io.hpp"
#include "panda/planner.hpp"
#include "panda/report.hpp"

namespace panda {

struct RunConfig {
  Basis basis = Basis::kElemental;
  bool parallel = false;
  bool trace = false;
  int max_variables = kMaxLpVariables;
  std::uint64_t seed = 1;
  // generate only
  Value domain = 16;
  std::size_t tuples = 64;
  double skew = 0.0;
};

// Process exit status for an error: 1 usage or input, 2 violated
// statistics, 3 internal.
int exit_code_for(ErrorCode code);

Json cmd_bound(const Program& prog, const StatisticsProfile& profile,
               const RunConfig& config);
Json cmd_witness(const Program& prog, const StatisticsProfile& profile,
                 const RunConfig& config);
Json cmd_width(const Program& prog, const StatisticsProfile& profile,
               const RunConfig& config, bool submodular);
// Decompositions, widths and the solved rules of a query plan.
Json cmd_plan(const Program& prog, const StatisticsProfile& profile,
              const RunConfig& config);
// Evaluates and writes one CSV per output relation into `out`.
Json cmd_run(const Program& prog, const StatisticsProfile& profile,
             const std::filesystem::path& data,
             const std::filesystem::path& out, const RunConfig& config);
// "ok" is false when the CSVs in `results` are not a correct answer.
Json cmd_verify(const Program& prog, const StatisticsProfile& profile,
                const std::filesystem::path& data,
                const std::filesystem::path& results);
Json cmd_oracle(const Program& prog, const std::filesystem::path& data,
                const std::filesystem::path& out);
Json cmd_generate(const Program& prog, const StatisticsProfile* profile,
                  const std::filesystem::path& out, const RunConfig& config);

}  // namespace panda
