#ifndef MECSIM_SOLVERS_HPP_
#define MECSIM_SOLVERS_HPP_

#include <cstdint>
#include <vector>

#include "mecsim/objective.hpp"

namespace mecsim {

// Cuckoo Search parameters; the defaults are the tuned configuration
// (25 nests, 100 iterations, abandonment 0.25, Levy exponent 1.5).
struct CuckooConfig {
    int nest_count = 25;
    int iterations = 100;
    double abandonment_prob = 0.25;
    double levy_lambda = 1.5;
    std::uint64_t seed = 1;
    double step_scale = 0.1;   // per-dimension step as a fraction of the dimension range
    double p_grid_step = 0.05; // local fractions decode onto this grid; 1/p_grid_step integral
};

// Grid-discretized branch-and-bound configuration.
struct ExactConfig {
    double p_grid_step = 0.05;           // 1/p_grid_step must be an integer
    std::vector<int> rb_choices;         // empty -> {rb_max}
    long node_limit = 200000;            // search stops at the incumbent when exceeded
};

struct TracePoint {
    long iteration = 0;
    double best_objective = 0.0;
};

struct SolveResult {
    Decision best_decision;
    ObjectiveValue best_value;
    std::vector<TracePoint> trace;
    long evaluations = 0;
    double wall_time_s = 0.0;
};

// Everything a solver needs about one instance.
struct Instance {
    std::vector<Task> tasks;
    std::vector<ServerSpec> servers;
    ProcessingModel model;
    RadioConfig radio;
    DropPenalty penalty = DropPenalty::PerTask;
};

// Branch-and-bound over (server, p on the grid, rb choice), lower-bounded
// by each undecided task's zero-contention cost. With an unbounded node
// limit the result equals exhaustive enumeration over the same grid.
SolveResult solve_exact(const Instance& inst, Mode mode, const ExactConfig& cfg);

// Cuckoo Search over one continuous vector per task (p, server coordinate,
// rb coordinate), Levy-flight proposals via the Mantegna construction,
// greedy replacement, worst-nest abandonment and elitism.
// initial_decisions pre-seed the first nests.
SolveResult solve_cuckoo(const Instance& inst, Mode mode, const CuckooConfig& cfg,
                         const std::vector<Decision>& initial_decisions = {});

// LocalOnly: everything on the UE. OffloadOnly: earliest-feasible-start
// greedy assignment with the maximum RB grant.
SolveResult solve_baseline(const Instance& inst, Mode mode);

// All p_i = 1; always feasible in Partition and LocalOnly modes.
Decision all_local_decision(std::size_t task_count);

}  // namespace mecsim

#endif  // MECSIM_SOLVERS_HPP_
