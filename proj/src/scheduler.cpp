#include "mecsim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace mecsim {

namespace {

constexpr double kTimeTol = 1e-9;

struct ServerState {
    std::vector<double> cpu_free;
    double speed_factor = 1.0;
};

void validate_decision(const std::vector<Task>& tasks, const Decision& decision,
                       const std::vector<ServerSpec>& servers, const RadioConfig& radio) {
    if (decision.per_task.size() != tasks.size())
        throw std::invalid_argument("decision covers " + std::to_string(decision.per_task.size()) +
                                    " tasks, workload has " + std::to_string(tasks.size()));
    (void)radio;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& d = decision.per_task[i];
        if (d.local_fraction < 0.0 || d.local_fraction > 1.0)
            throw std::invalid_argument("task " + std::to_string(tasks[i].id) +
                                        ": local_fraction outside [0,1]");
        if (d.rb_count < 1)
            throw std::invalid_argument("task " + std::to_string(tasks[i].id) +
                                        ": rb_count must be >= 1");
        if (d.server) {
            bool known = false;
            for (const auto& s : servers) known = known || s.id == *d.server;
            if (!known)
                throw std::invalid_argument("task " + std::to_string(tasks[i].id) +
                                            ": unknown server id " + std::to_string(*d.server));
        }
    }
}

}  // namespace

ScheduleOutcome simulate(const std::vector<Task>& tasks, const Decision& decision,
                         const std::vector<ServerSpec>& servers,
                         const ProcessingModel& model, const RadioConfig& radio) {
    validate(radio);
    validate(model);
    for (const auto& s : servers) validate(s);
    validate_decision(tasks, decision, servers, radio);

    std::unordered_map<int, std::size_t> server_index;
    std::vector<ServerState> server_state(servers.size());
    for (std::size_t j = 0; j < servers.size(); ++j) {
        server_index[servers[j].id] = j;
        server_state[j].cpu_free.assign(servers[j].cpu_count, 0.0);
        server_state[j].speed_factor = servers[j].speed_factor;
    }

    int ue_count = 0;
    for (const auto& t : tasks) ue_count = std::max(ue_count, t.ue_id + 1);
    std::vector<double> ue_free(ue_count, 0.0);

    ScheduleOutcome out;
    out.per_task.resize(tasks.size());
    out.mec_busy_s.assign(servers.size(), 0.0);
    out.local_busy_s.assign(ue_count, 0.0);

    // FCFS by arrival, ties by task id.
    std::vector<std::size_t> order(tasks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (tasks[a].arrival_s != tasks[b].arrival_s) return tasks[a].arrival_s < tasks[b].arrival_s;
        return tasks[a].id < tasks[b].id;
    });

    for (std::size_t idx : order) {
        const Task& task = tasks[idx];
        validate(task);
        const TaskDecision& d = decision.per_task[idx];
        TaskOutcome& r = out.per_task[idx];
        r.task_id = task.id;

        const double p = d.local_fraction;
        double completion = 0.0;

        // Local portion on the owning UE, never dropped.
        const double local_bits = p * task.size_bits;
        if (local_bits > 0.0) {
            const double proc = processing_time(local_bits, model, ProcessingSite::Local);
            const double start = std::max(task.arrival_s, ue_free[task.ue_id]);
            ue_free[task.ue_id] = start + proc;
            out.local_busy_s[task.ue_id] += proc;
            r.local_start_s = start;
            r.breakdown.local_s = (start - task.arrival_s) + proc;
            completion = std::max(completion, start + proc - task.arrival_s);
        }

        // Offloaded portion on the assigned server CPU.
        const double offload_bits = (1.0 - p) * task.size_bits;
        if (p < 1.0) {
            if (!d.server) {
                r.dropped = true;
                ++out.drop_count;
            } else {
                r.offload_attempted = true;
                const std::size_t j = server_index.at(*d.server);
                ServerState& srv = server_state[j];
                const double rate = data_rate_for_rbs(d.rb_count, radio);
                const double uplink = offload_bits / rate;
                const double roundtrip = comm_latency(offload_bits, rate);
                const double proc = processing_time(offload_bits, model, ProcessingSite::Mec) /
                                    srv.speed_factor;
                auto cpu = std::min_element(srv.cpu_free.begin(), srv.cpu_free.end());
                const double start = std::max(task.arrival_s + uplink, *cpu);
                if (start > task.deadline_s - proc - roundtrip + kTimeTol) {
                    r.dropped = true;  // x_ij forced to 0, no server time consumed
                    ++out.drop_count;
                } else {
                    *cpu = start + proc;
                    out.mec_busy_s[j] += proc;
                    r.start_s = start;
                    r.breakdown.waiting_s = start - (task.arrival_s + uplink);
                    r.breakdown.comm_s = roundtrip;
                    r.breakdown.mec_compute_s = proc;
                    completion = std::max(completion, start + proc + uplink - task.arrival_s);
                }
            }
        }

        r.completion_latency_s = completion;
        out.total_latency_s += completion;
        out.last_completion_s = std::max(out.last_completion_s, task.arrival_s + completion);
    }
    return out;
}

int drop_count(const ScheduleOutcome& outcome) {
    return outcome.drop_count;
}

Utilization utilization(const ScheduleOutcome& outcome, const std::vector<ServerSpec>& servers,
                        int ue_count, double horizon_s) {
    if (!(horizon_s > 0.0)) throw std::invalid_argument("horizon must be > 0");
    if (horizon_s < outcome.last_completion_s - kTimeTol)
        throw std::invalid_argument("horizon shorter than schedule");
    Utilization u;
    if (!servers.empty()) {
        double acc = 0.0;
        for (std::size_t j = 0; j < servers.size() && j < outcome.mec_busy_s.size(); ++j)
            acc += outcome.mec_busy_s[j] / (servers[j].cpu_count * horizon_s);
        u.mec = acc / static_cast<double>(servers.size());
    }
    if (ue_count > 0) {
        double acc = 0.0;
        for (int k = 0; k < ue_count && k < static_cast<int>(outcome.local_busy_s.size()); ++k)
            acc += outcome.local_busy_s[k] / horizon_s;
        u.local = acc / static_cast<double>(ue_count);
    }
    return u;
}

void write_schedule_trace(const std::vector<Task>& tasks, const Decision& decision,
                          const ScheduleOutcome& outcome, const ProcessingModel& model,
                          const std::string& path) {
    (void)model;
    const std::string tmp = path + ".partial";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << "task,server,start,end,dropped\n" << std::setprecision(17);
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const auto& r = outcome.per_task[i];
            const auto& d = decision.per_task[i];
            if (d.local_fraction >= 1.0) continue;
            out << r.task_id << ',' << (d.server && !r.dropped ? std::to_string(*d.server) : "-")
                << ',' << r.start_s << ',' << (r.start_s + r.breakdown.mec_compute_s) << ','
                << (r.dropped ? 1 : 0) << '\n';
        }
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace mecsim
