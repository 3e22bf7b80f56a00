#ifndef MECSIM_EXPERIMENT_HPP_
#define MECSIM_EXPERIMENT_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mecsim/solvers.hpp"

namespace mecsim {

// Flat key = value config file; '#' starts a comment. Physical
// quantities carry their unit in the key name.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> parse_config_file(const std::string& path);

struct ExperimentConfig {
    RadioConfig radio;
    ProcessingModel model;
    int server_count = 2;
    int cpus_per_server = 1;
    double server_speed_factor = 1.0;

    // Workload template; arrival rate and task count scale with ue_count.
    double rate_per_ue_per_s = 0.1;
    int max_tasks = 400;
    std::vector<SizeClass> size_classes = {{0.5e6, 0.25}, {2.0e6, 0.50}, {8.0e6, 0.25}};
    double deadline_slack_min_s = 0.5;
    double deadline_slack_max_s = 2.0;

    std::vector<int> ue_counts = {50, 100, 200, 400};
    std::vector<Mode> modes = {Mode::LocalOnly, Mode::OffloadOnly, Mode::Partition};
    std::vector<std::string> solvers = {"exact", "cuckoo"};
    int runs_per_point = 10;
    std::uint64_t base_seed = 1;
    std::string output_dir = "out";
    DropPenalty drop_penalty = DropPenalty::PerTask;
    bool report_walltime = false;  // keeps summary.csv manifest-determined

    CuckooConfig cuckoo;
    ExactConfig exact;
};

ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv);
ExperimentConfig load_config(const std::string& path);

// Round-trippable echo of every resolved field, including per-run seeds.
std::string manifest_text(const ExperimentConfig& cfg);

std::uint64_t run_seed(const ExperimentConfig& cfg, int ue_count, int run_index);

std::vector<ServerSpec> make_servers(const ExperimentConfig& cfg);
WorkloadSpec make_workload_spec(const ExperimentConfig& cfg, int ue_count, int run_index);

struct RunRow {
    int ue_count = 0;
    Mode mode = Mode::Partition;
    std::string solver;
    int run_index = 0;
    std::uint64_t seed = 0;
    double mean_latency_s = 0.0;
    int drops = 0;
    double mec_util = 0.0;
    double local_util = 0.0;
    double wall_time_s = 0.0;
    double objective_total = 0.0;
    long evaluations = 0;
    std::vector<TracePoint> trace;
};

struct AggregateRow {
    int ue_count = 0;
    Mode mode = Mode::Partition;
    std::string solver;
    double mean_latency_s = 0.0;
    double std_latency_s = 0.0;
    double mean_drops = 0.0;
    double mec_util = 0.0;
    double local_util = 0.0;
    double mean_walltime_s = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<RunRow> runs;
    std::vector<AggregateRow> aggregates;
};

// Solves one instance with the named solver ("exact", "cuckoo",
// "baseline") and fills a RunRow from the simulated best decision.
RunRow run_point(const ExperimentConfig& cfg, int ue_count, Mode mode,
                 const std::string& solver, int run_index);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

// summary.csv, runs.csv, timings.csv, manifest.txt and one convergence
// trace CSV per solver run, all written via .partial + rename.
void write_report(const ExperimentReport& report, const std::string& output_dir);

AggregateRow recompute_aggregate(const std::vector<RunRow>& runs, int ue_count, Mode mode,
                                 const std::string& solver);

}  // namespace mecsim

#endif  // MECSIM_EXPERIMENT_HPP_
