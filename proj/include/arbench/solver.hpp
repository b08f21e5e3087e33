#ifndef ARBENCH_SOLVER_HPP
#define ARBENCH_SOLVER_HPP

#include <stdexcept>
#include <string>

#include "arbench/core.hpp"

namespace arbench::solve {

struct UnparsableQuestion final : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Recomputes the ground-truth answer of a raw instance by parsing its
/// question text and evaluating the oracle. This reverses the generator's
/// rendering path, so the two cross-check each other. Function-inference
/// tasks are solved by fitting the family's parameters to the few-shot
/// pairs. MA answers come from the external dataset and are returned as
/// stored.
std::string solve(const TaskInstance& raw_inst);

}  // namespace arbench::solve

#endif
