#ifndef MECSIM_SCHEDULER_HPP_
#define MECSIM_SCHEDULER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "mecsim/core_model.hpp"
#include "mecsim/workload.hpp"

namespace mecsim {

// Per-task choice: local fraction, optional server for the offloaded
// portion and the resource-block grant used for the transfer.
struct TaskDecision {
    double local_fraction = 1.0;      // p_i in [0,1]
    std::optional<int> server;        // at most one server per task
    int rb_count = 1;
};

struct Decision {
    std::vector<TaskDecision> per_task;  // indexed like the task list
};

// One task's simulated outcome.
struct TaskOutcome {
    int task_id = 0;
    bool offload_attempted = false;  // p < 1 and a server was assigned
    bool dropped = false;            // offloaded portion missed its start window
    double start_s = 0.0;            // server-side start (offloaded portion)
    double local_start_s = 0.0;
    LatencyBreakdown breakdown;
    // Completion latency: both portions done, measured from arrival.
    double completion_latency_s = 0.0;
};

struct ScheduleOutcome {
    std::vector<TaskOutcome> per_task;
    double total_latency_s = 0.0;  // sum of completion latencies, scheduled work only
    int drop_count = 0;
    std::vector<double> mec_busy_s;    // per server
    std::vector<double> local_busy_s;  // per UE
    double last_completion_s = 0.0;
};

// Non-preemptive FCFS-by-arrival on every server CPU and every UE.
// The offloaded portion of a task is dropped (no server time consumed)
// when its achievable start misses deadline - Tp - Tt.
ScheduleOutcome simulate(const std::vector<Task>& tasks, const Decision& decision,
                         const std::vector<ServerSpec>& servers,
                         const ProcessingModel& model, const RadioConfig& radio);

int drop_count(const ScheduleOutcome& outcome);

struct Utilization {
    double mec = 0.0;
    double local = 0.0;
};

// Busy time over capacity x horizon, averaged across servers / UEs.
Utilization utilization(const ScheduleOutcome& outcome, const std::vector<ServerSpec>& servers,
                        int ue_count, double horizon_s);

// Debug trace: task,server,start,end,dropped per offload attempt.
void write_schedule_trace(const std::vector<Task>& tasks, const Decision& decision,
                          const ScheduleOutcome& outcome, const ProcessingModel& model,
                          const std::string& path);

}  // namespace mecsim

#endif  // MECSIM_SCHEDULER_HPP_
