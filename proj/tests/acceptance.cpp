// Acceptance suite: one pass/fail line per criterion, nonzero exit on
// any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "mecsim/experiment.hpp"
#include "mecsim/oracle.hpp"

using namespace mecsim;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << criterion << ": " << name;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++failures;
}

struct Key {
    int ue;
    Mode mode;
    std::string solver;
    bool operator<(const Key& o) const {
        return std::tie(ue, mode, solver) < std::tie(o.ue, o.mode, o.solver);
    }
};

Instance small_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Instance inst;
    const int n = 1 + static_cast<int>(rng() % 4);
    double clock = 0.0;
    for (int i = 0; i < n; ++i) {
        clock += static_cast<double>(rng() % 50) / 100.0;
        inst.tasks.push_back({i, static_cast<int>(rng() % 3),
                              0.5e6 + static_cast<double>(rng() % 16) * 0.5e6, clock,
                              clock + 0.4 + static_cast<double>(rng() % 16) / 10.0});
    }
    inst.servers = {{0, 1, 1.0}, {1, 1, 1.0}};
    return inst;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main() {
    // ---- default sweep: criteria 1-3 share one run --------------------
    ExperimentConfig cfg;  // defaults: ue [50,100,200,400], 10 runs, exact+cuckoo
    cfg.modes = {Mode::OffloadOnly, Mode::Partition};
    const auto sweep_t0 = std::chrono::steady_clock::now();
    const ExperimentReport report_sweep = run_experiment(cfg);
    const double sweep_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - sweep_t0).count();

    std::map<Key, AggregateRow> agg;
    for (const auto& a : report_sweep.aggregates) agg[{a.ue_count, a.mode, a.solver}] = a;

    // 1. zero drops in partition mode, every run, both solvers
    {
        bool ok = sweep_s < 600.0;
        int bad = 0;
        for (const auto& r : report_sweep.runs)
            if (r.mode == Mode::Partition && r.drops != 0) ++bad;
        ok = ok && bad == 0;
        std::ostringstream d;
        d << bad << " partition runs with drops, sweep " << static_cast<int>(sweep_s) << "s";
        report(1, "zero-drop guarantee in partition mode", ok, d.str());
    }

    // 2. offload drops non-decreasing in ue_count, positive at 400
    {
        bool ok = true;
        std::ostringstream d;
        for (const auto& solver : cfg.solvers) {
            double prev = -1.0;
            for (int ue : cfg.ue_counts) {
                const double m = agg[{ue, Mode::OffloadOnly, solver}].mean_drops;
                if (m < prev - 1e-12) ok = false;
                prev = m;
                d << solver << "@" << ue << "=" << m << " ";
            }
            if (!(agg[{400, Mode::OffloadOnly, solver}].mean_drops > 0.0)) ok = false;
        }
        report(2, "drop growth under full offloading", ok, d.str());
    }

    // 3. partition beats offloading at the largest ue count
    {
        const int ue = cfg.ue_counts.back();
        const double off_e = agg[{ue, Mode::OffloadOnly, "exact"}].mean_latency_s;
        const double part_e = agg[{ue, Mode::Partition, "exact"}].mean_latency_s;
        const double off_c = agg[{ue, Mode::OffloadOnly, "cuckoo"}].mean_latency_s;
        const double part_c = agg[{ue, Mode::Partition, "cuckoo"}].mean_latency_s;
        const double gap_e = (off_e - part_e) / off_e;
        const double gap_c = (off_c - part_c) / off_c;
        std::ostringstream d;
        d << "exact gap " << gap_e * 100 << "%, cuckoo gap " << gap_c * 100 << "%";
        report(3, "partition latency gain at 400 users", gap_e >= 0.10 && gap_c >= 0.05, d.str());
    }

    // ---- small oracle instances: criteria 4-5 -------------------------
    ExactConfig ecfg;
    ecfg.p_grid_step = 0.25;
    ecfg.rb_choices = {50, 100};
    ecfg.node_limit = 100000000;

    std::vector<Instance> instances;
    std::vector<SolveResult> exact_results;
    {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        int mismatches = 0;
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            instances.push_back(small_instance(seed));
            const Instance& inst = instances.back();
            const auto brute = enumerate_exhaustive(inst, Mode::Partition, ecfg);
            const auto solved = solve_exact(inst, Mode::Partition, ecfg);
            exact_results.push_back(solved);
            if (std::abs(solved.best_value.total - brute.value.total) >= 1e-9) {
                ok = false;
                ++mismatches;
            }
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ok = ok && secs < 60.0;
        std::ostringstream d;
        d << mismatches << " mismatches, " << secs << "s";
        report(4, "exact solver matches exhaustive enumeration (50 instances)", ok, d.str());
    }

    std::vector<SolveResult> cuckoo_results;
    {
        int never_better = 0, within20 = 0, monotone = 0;
        for (std::size_t k = 0; k < instances.size(); ++k) {
            CuckooConfig ccfg;
            ccfg.seed = 1000 + k;
            ccfg.p_grid_step = ecfg.p_grid_step;
            const auto solved = solve_cuckoo(instances[k], Mode::Partition, ccfg);
            cuckoo_results.push_back(solved);
            const double exact_total = exact_results[k].best_value.total;
            if (solved.best_value.total >= exact_total - 1e-9) ++never_better;
            if (solved.best_value.total <= 1.2 * exact_total + 1e-12) ++within20;
            bool mono = true;
            for (std::size_t i = 1; i < solved.trace.size(); ++i)
                if (solved.trace[i].best_objective > solved.trace[i - 1].best_objective)
                    mono = false;
            if (mono) ++monotone;
        }
        std::ostringstream d;
        d << never_better << "/50 never better, " << within20 << "/50 within 20%, " << monotone
          << "/50 monotone traces";
        report(5, "solver ordering: cuckoo vs exact",
               never_better == 50 && within20 >= 45 && monotone == 50, d.str());
    }

    // 6. formula unit values
    {
        bool ok = true;
        RadioConfig radio;
        ok = ok && rb_max(radio) == 100;
        RadioConfig snr1 = radio;
        snr1.channel_gain = snr1.noise_power_w / snr1.tx_power_w;
        ok = ok && std::abs(data_rate({100}, snr1) - 18e6) <= 18e6 * 1e-12;
        RadioConfig snr3 = radio;
        snr3.channel_gain = 3.0 * snr3.noise_power_w / snr3.tx_power_w;
        ok = ok && std::abs(data_rate({100}, snr3) - 36e6) <= 36e6 * 1e-12;
        ok = ok && std::abs(comm_latency(9e6, 18e6) - 1.0) <= 1e-12;
        ok = ok && std::abs(comm_latency(1.0, 1.0) - 2.0) <= 1e-12;
        RadioConfig one_rb = radio;
        one_rb.guard_band_fraction = 0.0;
        one_rb.rb_bandwidth_hz = 20e6;
        ok = ok && rb_max(one_rb) == 1;
        RadioConfig half = radio;
        half.total_bandwidth_hz = 10e6;
        ok = ok && rb_max(half) == 50;
        report(6, "formula unit values incl. rb_max(default config) == 100", ok);
    }

    // 7. constraint enforcement under fuzzing
    {
        bool ok = true;
        std::mt19937_64 rng(4242);
        const Instance fuzz_inst = [&] {
            Instance inst;
            WorkloadSpec spec;
            spec.ue_count = 20;
            spec.max_tasks = 40;
            spec.arrival_rate_per_s = 8.0;
            spec.seed = 7;
            inst.tasks = generate_workload(spec);
            inst.servers = {{0, 1, 1.0}, {1, 1, 1.0}};
            return inst;
        }();
        for (int trial = 0; trial < 10000 && ok; ++trial) {
            Decision d;
            for (std::size_t i = 0; i < fuzz_inst.tasks.size(); ++i) {
                TaskDecision td;
                td.local_fraction = static_cast<double>(rng() % 101) / 100.0;
                if (rng() % 3 != 0) td.server = static_cast<int>(rng() % 2);
                td.rb_count = 1 + static_cast<int>(rng() % 100);
                d.per_task.push_back(td);
            }
            const auto out = simulate(fuzz_inst.tasks, d, fuzz_inst.servers, fuzz_inst.model,
                                      fuzz_inst.radio);
            // No overlapping intervals on one CPU, no grant above 100.
            for (int server = 0; server < 2 && ok; ++server) {
                std::vector<std::pair<double, double>> iv;
                for (std::size_t i = 0; i < fuzz_inst.tasks.size(); ++i)
                    if (out.per_task[i].offload_attempted && !out.per_task[i].dropped &&
                        d.per_task[i].server == server)
                        iv.emplace_back(out.per_task[i].start_s,
                                        out.per_task[i].start_s +
                                            out.per_task[i].breakdown.mec_compute_s);
                std::sort(iv.begin(), iv.end());
                for (std::size_t k = 1; k < iv.size(); ++k)
                    if (iv[k].first < iv[k - 1].second - 1e-9) ok = false;
            }
            for (const auto& td : d.per_task)
                if (td.rb_count > 100) ok = false;
        }
        // Every solver-emitted decision passes check_constraints.
        for (std::size_t k = 0; k < instances.size() && ok; ++k) {
            for (const SolveResult* res : {&exact_results[k], &cuckoo_results[k]}) {
                const auto out = simulate(instances[k].tasks, res->best_decision,
                                          instances[k].servers, instances[k].model,
                                          instances[k].radio);
                if (!check_constraints(instances[k].tasks, res->best_decision, out,
                                       Mode::Partition, instances[k].radio)
                         .empty())
                    ok = false;
            }
        }
        report(7, "constraint enforcement under fuzzing", ok);
    }

    // 8. determinism / replay through the run and replay paths
    {
        ExperimentConfig small = cfg;
        small.ue_counts = {20, 40};
        small.runs_per_point = 2;
        small.modes = {Mode::OffloadOnly, Mode::Partition};
        small.exact.node_limit = 20000;
        const fs::path base = fs::temp_directory_path() / "mecsim_acceptance";
        fs::remove_all(base);
        write_report(run_experiment(small), (base / "a").string());
        write_report(run_experiment(small), (base / "b").string());
        const auto replay_cfg =
            config_from_map(parse_config_text(slurp(base / "a" / "manifest.txt")));
        write_report(run_experiment(replay_cfg), (base / "c").string());
        const bool ok = slurp(base / "a" / "summary.csv") == slurp(base / "b" / "summary.csv") &&
                        slurp(base / "a" / "summary.csv") == slurp(base / "c" / "summary.csv") &&
                        slurp(base / "a" / "runs.csv") == slurp(base / "c" / "runs.csv") &&
                        !slurp(base / "a" / "summary.csv").empty();
        fs::remove_all(base);
        report(8, "byte-identical rerun and manifest replay", ok);
    }

    // 9. one cuckoo solve on a 400-task instance under 60 s
    {
        Instance inst;
        WorkloadSpec spec = make_workload_spec(cfg, 400, 0);
        inst.tasks = generate_workload(spec);
        inst.servers = make_servers(cfg);
        const auto solved = solve_cuckoo(inst, Mode::Partition, cfg.cuckoo);
        std::ostringstream d;
        d << solved.wall_time_s << "s, " << solved.evaluations << " evaluations";
        report(9, "400-task cuckoo solve under 60 s",
               solved.wall_time_s < 60.0 && inst.tasks.size() == 400, d.str());
    }

    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: ")
              << (failures == 0 ? "" : std::to_string(failures)) << std::endl;
    return failures == 0 ? 0 : 1;
}
