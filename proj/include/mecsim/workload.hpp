#ifndef MECSIM_WORKLOAD_HPP_
#define MECSIM_WORKLOAD_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mecsim/core_model.hpp"

namespace mecsim {

struct SizeClass {
    double size_bits;
    double weight;
};

// Seeded description of one task set.
struct WorkloadSpec {
    int ue_count = 50;
    int max_tasks = 400;
    double arrival_rate_per_s = 5.0;  // aggregate Poisson rate
    std::vector<SizeClass> size_classes = {
        {0.5e6, 0.25},
        {2.0e6, 0.50},
        {8.0e6, 0.25},
    };
    double deadline_slack_min_s = 0.5;
    double deadline_slack_max_s = 2.0;
    std::uint64_t seed = 1;
};

void validate(const WorkloadSpec& spec);

// Linear processing model: time = bits / rate.
struct ProcessingModel {
    double local_rate_bits_per_s = 10e6;
    double mec_rate_bits_per_s = 40e6;
};

void validate(const ProcessingModel& model);

enum class ProcessingSite { Local, Mec };

double processing_time(double task_bits, const ProcessingModel& model, ProcessingSite where);

// Draws max_tasks tasks with exponential inter-arrivals, sizes from
// size_classes and uniform deadline slack. Deterministic in the seed.
std::vector<Task> generate_workload(const WorkloadSpec& spec);

// Line-oriented workload files: a version line, then one CSV record per task.
void write_workload(const std::vector<Task>& tasks, std::ostream& out);
void write_workload_file(const std::vector<Task>& tasks, const std::string& path);
std::vector<Task> read_workload(std::istream& in);
std::vector<Task> read_workload_file(const std::string& path);

}  // namespace mecsim

#endif  // MECSIM_WORKLOAD_HPP_
