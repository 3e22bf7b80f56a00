#ifndef MECSIM_ORACLE_HPP_
#define MECSIM_ORACLE_HPP_

#include "mecsim/solvers.hpp"

namespace mecsim {

struct EnumerationResult {
    Decision best;
    ObjectiveValue value;
    long leaves = 0;  // complete decisions evaluated
};

// Brute force over the full (p-grid x server x rb) decision space,
// evaluating every complete decision with the objective evaluator.
// Deliberately ignores cfg.node_limit and shares nothing with the
// branch-and-bound search it cross-checks.
EnumerationResult enumerate_exhaustive(const Instance& inst, Mode mode, const ExactConfig& cfg);

}  // namespace mecsim

#endif  // MECSIM_ORACLE_HPP_
