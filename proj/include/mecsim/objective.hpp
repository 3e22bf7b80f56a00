#ifndef MECSIM_OBJECTIVE_HPP_
#define MECSIM_OBJECTIVE_HPP_

#include <string>
#include <vector>

#include "mecsim/scheduler.hpp"

namespace mecsim {

enum class Mode {
    LocalOnly,    // p_i == 1
    OffloadOnly,  // p_i == 0
    Partition,    // p_i in [0,1]
};

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

// How the drop count D enters the objective: once per task occurrence,
// weighted by (1 - p_i), or once globally.
enum class DropPenalty { PerTask, Global };

struct ObjectiveValue {
    double total = 0.0;
    double latency_component = 0.0;
    double drop_component = 0.0;
    bool feasible = false;
};

struct Violation {
    int task_id = -1;  // -1 for schedule-wide violations
    std::string tag;   // "p-regime", "start-window", "rb-cap", "zero-drop"
    std::string detail;
};

// One record per violated constraint; empty list <=> feasible.
std::vector<Violation> check_constraints(const std::vector<Task>& tasks, const Decision& decision,
                                         const ScheduleOutcome& outcome, Mode mode,
                                         const RadioConfig& radio);

// Runs the simulator and evaluates the drop-penalized latency objective
// for the requested mode.
ObjectiveValue evaluate(const std::vector<Task>& tasks, const Decision& decision, Mode mode,
                        const std::vector<ServerSpec>& servers, const ProcessingModel& model,
                        const RadioConfig& radio, DropPenalty penalty = DropPenalty::PerTask);

// Same, reusing an outcome already produced from (tasks, decision).
ObjectiveValue evaluate_outcome(const std::vector<Task>& tasks, const Decision& decision,
                                const ScheduleOutcome& outcome, Mode mode,
                                const RadioConfig& radio,
                                DropPenalty penalty = DropPenalty::PerTask);

}  // namespace mecsim

#endif  // MECSIM_OBJECTIVE_HPP_
