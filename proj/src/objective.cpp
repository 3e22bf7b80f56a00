#include "mecsim/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace mecsim {

namespace {

constexpr double kTimeTol = 1e-9;

bool matches_mode(double p, Mode mode) {
    switch (mode) {
        case Mode::LocalOnly: return p == 1.0;
        case Mode::OffloadOnly: return p == 0.0;
        case Mode::Partition: return p >= 0.0 && p <= 1.0;
    }
    return false;
}

}  // namespace

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::LocalOnly: return "local";
        case Mode::OffloadOnly: return "offload";
        case Mode::Partition: return "partition";
    }
    return "?";
}

Mode mode_from_string(const std::string& name) {
    if (name == "local") return Mode::LocalOnly;
    if (name == "offload") return Mode::OffloadOnly;
    if (name == "partition") return Mode::Partition;
    throw std::invalid_argument("unknown mode '" + name + "' (local|offload|partition)");
}

std::vector<Violation> check_constraints(const std::vector<Task>& tasks, const Decision& decision,
                                         const ScheduleOutcome& outcome, Mode mode,
                                         const RadioConfig& radio) {
    if (decision.per_task.size() != tasks.size() || outcome.per_task.size() != tasks.size())
        throw std::invalid_argument("tasks, decision and outcome sizes disagree");
    std::vector<Violation> violations;
    const int cap = rb_max(radio);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const Task& task = tasks[i];
        const TaskDecision& d = decision.per_task[i];
        const TaskOutcome& r = outcome.per_task[i];

        if (!matches_mode(d.local_fraction, mode))
            violations.push_back({task.id, "p-regime",
                                  "local_fraction " + std::to_string(d.local_fraction) +
                                      " not allowed in mode " + to_string(mode)});

        if (d.rb_count > cap)
            violations.push_back({task.id, "rb-cap",
                                  "rb_count " + std::to_string(d.rb_count) + " exceeds rb_max " +
                                      std::to_string(cap)});

        if (r.offload_attempted && !r.dropped) {
            const double uplink = r.breakdown.comm_s / 2.0;
            const double earliest = task.arrival_s + uplink;
            const double latest = task.deadline_s - r.breakdown.mec_compute_s - r.breakdown.comm_s;
            if (r.start_s < earliest - kTimeTol || r.start_s > latest + kTimeTol)
                violations.push_back({task.id, "start-window",
                                      "start " + std::to_string(r.start_s) + " outside [" +
                                          std::to_string(earliest) + ", " + std::to_string(latest) +
                                          "]"});
        }

        if (mode == Mode::Partition && r.dropped)
            violations.push_back({task.id, "zero-drop", "offloaded portion dropped"});
    }
    return violations;
}

ObjectiveValue evaluate_outcome(const std::vector<Task>& tasks, const Decision& decision,
                                const ScheduleOutcome& outcome, Mode mode,
                                const RadioConfig& radio, DropPenalty penalty) {
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (!matches_mode(decision.per_task[i].local_fraction, mode))
            throw std::invalid_argument("task " + std::to_string(tasks[i].id) +
                                        ": decision violates the " + to_string(mode) + " p-regime");

    ObjectiveValue value;
    double offload_weight = 0.0;  // sum of (1 - p_i)
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& b = outcome.per_task[i].breakdown;
        value.latency_component += b.local_s;
        if (!outcome.per_task[i].dropped)
            value.latency_component += b.waiting_s + b.mec_compute_s + b.comm_s;
        offload_weight += 1.0 - decision.per_task[i].local_fraction;
    }
    const double drops = static_cast<double>(outcome.drop_count);
    value.drop_component = (penalty == DropPenalty::PerTask) ? drops * offload_weight : drops;
    value.total = value.latency_component + value.drop_component;
    value.feasible = check_constraints(tasks, decision, outcome, mode, radio).empty();
    return value;
}

ObjectiveValue evaluate(const std::vector<Task>& tasks, const Decision& decision, Mode mode,
                        const std::vector<ServerSpec>& servers, const ProcessingModel& model,
                        const RadioConfig& radio, DropPenalty penalty) {
    const ScheduleOutcome outcome = simulate(tasks, decision, servers, model, radio);
    return evaluate_outcome(tasks, decision, outcome, mode, radio, penalty);
}

}  // namespace mecsim
