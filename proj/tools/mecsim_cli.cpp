#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mecsim/experiment.hpp"
#include "mecsim/oracle.hpp"
#include "mecsim/workload.hpp"

namespace {

void apply_overrides(mecsim::ExperimentConfig& cfg, const std::string& out_dir,
                     long long seed, const std::string& solvers, const std::string& ue_counts) {
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(seed);
    if (!solvers.empty()) {
        cfg.solvers.clear();
        std::istringstream in(solvers);
        std::string item;
        while (std::getline(in, item, ',')) cfg.solvers.push_back(item);
    }
    if (!ue_counts.empty()) {
        cfg.ue_counts.clear();
        std::istringstream in(ue_counts);
        std::string item;
        while (std::getline(in, item, ',')) cfg.ue_counts.push_back(std::stoi(item));
    }
}

int run_config(const std::string& config_path, const std::string& out_dir, long long seed,
               const std::string& solvers, const std::string& ue_counts) {
    mecsim::ExperimentConfig cfg = mecsim::load_config(config_path);
    apply_overrides(cfg, out_dir, seed, solvers, ue_counts);
    const mecsim::ExperimentReport report = mecsim::run_experiment(cfg);
    mecsim::write_report(report, cfg.output_dir);
    std::cout << "wrote " << cfg.output_dir << "/summary.csv (" << report.runs.size()
              << " runs)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Task offloading / partitioning experiments for 5G MEC"};
    app.require_subcommand(1);

    std::string config_path, manifest_path, out_dir, solvers, ue_counts;
    long long seed = -1;

    auto* run = app.add_subcommand("run", "run a sweep from a config file");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--out", out_dir, "output directory override");
    run->add_option("--seed", seed, "base seed override");
    run->add_option("--solvers", solvers, "comma-separated solver list override");
    run->add_option("--ue-counts", ue_counts, "comma-separated ue count override");

    auto* replay = app.add_subcommand("replay", "re-run a sweep from a manifest");
    replay->add_option("manifest", manifest_path, "manifest file from a previous run")->required();
    replay->add_option("--out", out_dir, "output directory override");

    std::string workload_path, mode_name = "partition";
    int oracle_servers = 2;
    double p_grid = 0.25;
    std::string rb_list = "100";
    auto* oracle = app.add_subcommand("oracle",
                                      "brute-force enumeration over a workload file, "
                                      "cross-checked against the exact solver");
    oracle->add_option("workload", workload_path, "workload CSV file")->required();
    oracle->add_option("--mode", mode_name, "local|offload|partition");
    oracle->add_option("--servers", oracle_servers, "number of identical 1-CPU servers");
    oracle->add_option("--p-grid", p_grid, "partition grid step");
    oracle->add_option("--rb", rb_list, "comma-separated rb choices");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return run_config(config_path, out_dir, seed, solvers, ue_counts);

        if (replay->parsed()) {
            mecsim::ExperimentConfig cfg = mecsim::load_config(manifest_path);
            if (!out_dir.empty()) cfg.output_dir = out_dir;
            const mecsim::ExperimentReport report = mecsim::run_experiment(cfg);
            mecsim::write_report(report, cfg.output_dir);
            std::cout << "replayed into " << cfg.output_dir << "/summary.csv ("
                      << report.runs.size() << " runs)\n";
            return 0;
        }

        if (oracle->parsed()) {
            mecsim::Instance inst;
            inst.tasks = mecsim::read_workload_file(workload_path);
            for (int j = 0; j < oracle_servers; ++j) inst.servers.push_back({j, 1, 1.0});
            mecsim::ExactConfig ecfg;
            ecfg.p_grid_step = p_grid;
            std::istringstream in(rb_list);
            std::string item;
            while (std::getline(in, item, ',')) ecfg.rb_choices.push_back(std::stoi(item));
            const mecsim::Mode mode = mecsim::mode_from_string(mode_name);

            const auto enumerated = mecsim::enumerate_exhaustive(inst, mode, ecfg);
            const auto solved = mecsim::solve_exact(inst, mode, ecfg);
            std::cout << "enumeration: objective " << enumerated.value.total << " over "
                      << enumerated.leaves << " leaves\n";
            std::cout << "solve_exact: objective " << solved.best_value.total << " after "
                      << solved.evaluations << " nodes\n";
            const double gap = std::abs(enumerated.value.total - solved.best_value.total);
            std::cout << (gap <= 1e-9 ? "MATCH" : "MISMATCH") << " (gap " << gap << ")\n";
            return gap <= 1e-9 ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
