#include "mecsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mecsim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(trim(item));
    return parts;
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing garbage");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config field '" + key + "': cannot parse number from '" +
                                 value + "'");
    }
}

long long to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing garbage");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config field '" + key + "': cannot parse integer from '" +
                                 value + "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::runtime_error("config field '" + key + "': expected true/false, got '" + value +
                             "'");
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".partial";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

std::string fmt(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "radio.total_bandwidth_hz", "radio.guard_band_fraction", "radio.rb_bandwidth_hz",
        "radio.tx_power_w", "radio.tx_power_dbm", "radio.noise_power_w", "radio.noise_power_dbm",
        "radio.channel_gain",
        "processing.local_rate_bits_per_s", "processing.mec_rate_bits_per_s",
        "servers.count", "servers.cpus_per_server", "servers.speed_factor",
        "workload.rate_per_ue_per_s", "workload.max_tasks", "workload.size_classes",
        "workload.deadline_slack_min_s", "workload.deadline_slack_max_s",
        "experiment.ue_counts", "experiment.modes", "experiment.solvers",
        "experiment.runs_per_point", "experiment.base_seed", "experiment.output_dir",
        "experiment.drop_penalty", "experiment.report_walltime",
        "cuckoo.nest_count", "cuckoo.iterations", "cuckoo.abandonment_prob",
        "cuckoo.levy_lambda", "cuckoo.step_scale", "cuckoo.p_grid_step",
        "exact.p_grid_step", "exact.rb_choices", "exact.node_limit",
    };
    return keys;
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config parse error at line " + std::to_string(lineno) +
                                     ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_keys().count(key))
            throw std::runtime_error("config parse error at line " + std::to_string(lineno) +
                                     ": unknown key '" + key + "'");
        if (kv.count(key))
            throw std::runtime_error("config parse error at line " + std::to_string(lineno) +
                                     ": duplicate key '" + key + "'");
        kv[key] = value;
    }
    return kv;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv) {
    ExperimentConfig cfg;
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    if (auto* v = get("radio.total_bandwidth_hz")) cfg.radio.total_bandwidth_hz = to_double("radio.total_bandwidth_hz", *v);
    if (auto* v = get("radio.guard_band_fraction")) cfg.radio.guard_band_fraction = to_double("radio.guard_band_fraction", *v);
    if (auto* v = get("radio.rb_bandwidth_hz")) cfg.radio.rb_bandwidth_hz = to_double("radio.rb_bandwidth_hz", *v);
    if (auto* v = get("radio.tx_power_w")) cfg.radio.tx_power_w = to_double("radio.tx_power_w", *v);
    if (auto* v = get("radio.tx_power_dbm")) cfg.radio.tx_power_w = dbm_to_watts(to_double("radio.tx_power_dbm", *v));
    if (auto* v = get("radio.noise_power_w")) cfg.radio.noise_power_w = to_double("radio.noise_power_w", *v);
    if (auto* v = get("radio.noise_power_dbm")) cfg.radio.noise_power_w = dbm_to_watts(to_double("radio.noise_power_dbm", *v));
    if (auto* v = get("radio.channel_gain")) cfg.radio.channel_gain = to_double("radio.channel_gain", *v);

    if (auto* v = get("processing.local_rate_bits_per_s")) cfg.model.local_rate_bits_per_s = to_double("processing.local_rate_bits_per_s", *v);
    if (auto* v = get("processing.mec_rate_bits_per_s")) cfg.model.mec_rate_bits_per_s = to_double("processing.mec_rate_bits_per_s", *v);

    if (auto* v = get("servers.count")) cfg.server_count = static_cast<int>(to_int("servers.count", *v));
    if (auto* v = get("servers.cpus_per_server")) cfg.cpus_per_server = static_cast<int>(to_int("servers.cpus_per_server", *v));
    if (auto* v = get("servers.speed_factor")) cfg.server_speed_factor = to_double("servers.speed_factor", *v);

    if (auto* v = get("workload.rate_per_ue_per_s")) cfg.rate_per_ue_per_s = to_double("workload.rate_per_ue_per_s", *v);
    if (auto* v = get("workload.max_tasks")) cfg.max_tasks = static_cast<int>(to_int("workload.max_tasks", *v));
    if (auto* v = get("workload.size_classes")) {
        cfg.size_classes.clear();
        for (const auto& part : split(*v, ',')) {
            const auto colon = part.find(':');
            if (colon == std::string::npos)
                throw std::runtime_error("config field 'workload.size_classes': expected bits:weight, got '" + part + "'");
            cfg.size_classes.push_back({to_double("workload.size_classes", trim(part.substr(0, colon))),
                                        to_double("workload.size_classes", trim(part.substr(colon + 1)))});
        }
    }
    if (auto* v = get("workload.deadline_slack_min_s")) cfg.deadline_slack_min_s = to_double("workload.deadline_slack_min_s", *v);
    if (auto* v = get("workload.deadline_slack_max_s")) cfg.deadline_slack_max_s = to_double("workload.deadline_slack_max_s", *v);

    if (auto* v = get("experiment.ue_counts")) {
        cfg.ue_counts.clear();
        for (const auto& part : split(*v, ','))
            cfg.ue_counts.push_back(static_cast<int>(to_int("experiment.ue_counts", part)));
    }
    if (auto* v = get("experiment.modes")) {
        cfg.modes.clear();
        for (const auto& part : split(*v, ',')) cfg.modes.push_back(mode_from_string(part));
    }
    if (auto* v = get("experiment.solvers")) {
        cfg.solvers.clear();
        for (const auto& part : split(*v, ',')) {
            if (part != "exact" && part != "cuckoo" && part != "baseline")
                throw std::runtime_error("config field 'experiment.solvers': unknown solver '" + part + "'");
            cfg.solvers.push_back(part);
        }
    }
    if (auto* v = get("experiment.runs_per_point")) cfg.runs_per_point = static_cast<int>(to_int("experiment.runs_per_point", *v));
    if (auto* v = get("experiment.base_seed")) cfg.base_seed = static_cast<std::uint64_t>(to_int("experiment.base_seed", *v));
    if (auto* v = get("experiment.output_dir")) cfg.output_dir = *v;
    if (auto* v = get("experiment.drop_penalty")) {
        if (*v == "per-task") cfg.drop_penalty = DropPenalty::PerTask;
        else if (*v == "global") cfg.drop_penalty = DropPenalty::Global;
        else throw std::runtime_error("config field 'experiment.drop_penalty': expected per-task or global");
    }
    if (auto* v = get("experiment.report_walltime")) cfg.report_walltime = to_bool("experiment.report_walltime", *v);

    if (auto* v = get("cuckoo.nest_count")) cfg.cuckoo.nest_count = static_cast<int>(to_int("cuckoo.nest_count", *v));
    if (auto* v = get("cuckoo.iterations")) cfg.cuckoo.iterations = static_cast<int>(to_int("cuckoo.iterations", *v));
    if (auto* v = get("cuckoo.abandonment_prob")) cfg.cuckoo.abandonment_prob = to_double("cuckoo.abandonment_prob", *v);
    if (auto* v = get("cuckoo.levy_lambda")) cfg.cuckoo.levy_lambda = to_double("cuckoo.levy_lambda", *v);
    if (auto* v = get("cuckoo.step_scale")) cfg.cuckoo.step_scale = to_double("cuckoo.step_scale", *v);
    if (auto* v = get("cuckoo.p_grid_step")) cfg.cuckoo.p_grid_step = to_double("cuckoo.p_grid_step", *v);

    if (auto* v = get("exact.p_grid_step")) cfg.exact.p_grid_step = to_double("exact.p_grid_step", *v);
    if (auto* v = get("exact.rb_choices")) {
        cfg.exact.rb_choices.clear();
        for (const auto& part : split(*v, ','))
            cfg.exact.rb_choices.push_back(static_cast<int>(to_int("exact.rb_choices", part)));
    }
    if (auto* v = get("exact.node_limit")) cfg.exact.node_limit = to_int("exact.node_limit", *v);

    validate(cfg.radio);
    validate(cfg.model);
    if (cfg.server_count < 0) throw std::runtime_error("servers.count must be >= 0");
    if (cfg.cpus_per_server < 1) throw std::runtime_error("servers.cpus_per_server must be >= 1");
    if (cfg.runs_per_point < 1) throw std::runtime_error("experiment.runs_per_point must be >= 1");
    if (cfg.ue_counts.empty()) throw std::runtime_error("experiment.ue_counts must not be empty");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    return config_from_map(parse_config_file(path));
}

std::uint64_t run_seed(const ExperimentConfig& cfg, int ue_count, int run_index) {
    // base_seed xor golden-ratio multiples of (run, ue) so streams differ
    // per grid point; the manifest echoes the resolved values.
    return cfg.base_seed ^
           (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(run_index + 1)) ^
           (0xBF58476D1CE4E5B9ULL * static_cast<std::uint64_t>(ue_count));
}

std::vector<ServerSpec> make_servers(const ExperimentConfig& cfg) {
    std::vector<ServerSpec> servers;
    for (int j = 0; j < cfg.server_count; ++j)
        servers.push_back({j, cfg.cpus_per_server, cfg.server_speed_factor});
    return servers;
}

WorkloadSpec make_workload_spec(const ExperimentConfig& cfg, int ue_count, int run_index) {
    WorkloadSpec spec;
    spec.ue_count = ue_count;
    spec.max_tasks = std::min(ue_count, cfg.max_tasks);
    spec.arrival_rate_per_s = cfg.rate_per_ue_per_s * ue_count;
    spec.size_classes = cfg.size_classes;
    spec.deadline_slack_min_s = cfg.deadline_slack_min_s;
    spec.deadline_slack_max_s = cfg.deadline_slack_max_s;
    spec.seed = run_seed(cfg, ue_count, run_index);
    return spec;
}

std::string manifest_text(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "# mecsim-manifest v1\n";
    out << "# resolved configuration; feed back to `mecsim replay` to reproduce the run\n";
    out << "radio.total_bandwidth_hz = " << fmt(cfg.radio.total_bandwidth_hz) << '\n';
    out << "radio.guard_band_fraction = " << fmt(cfg.radio.guard_band_fraction) << '\n';
    out << "radio.rb_bandwidth_hz = " << fmt(cfg.radio.rb_bandwidth_hz) << '\n';
    out << "radio.tx_power_w = " << fmt(cfg.radio.tx_power_w) << '\n';
    out << "radio.noise_power_w = " << fmt(cfg.radio.noise_power_w) << '\n';
    out << "radio.channel_gain = " << fmt(cfg.radio.channel_gain) << '\n';
    out << "processing.local_rate_bits_per_s = " << fmt(cfg.model.local_rate_bits_per_s) << '\n';
    out << "processing.mec_rate_bits_per_s = " << fmt(cfg.model.mec_rate_bits_per_s) << '\n';
    out << "servers.count = " << cfg.server_count << '\n';
    out << "servers.cpus_per_server = " << cfg.cpus_per_server << '\n';
    out << "servers.speed_factor = " << fmt(cfg.server_speed_factor) << '\n';
    out << "workload.rate_per_ue_per_s = " << fmt(cfg.rate_per_ue_per_s) << '\n';
    out << "workload.max_tasks = " << cfg.max_tasks << '\n';
    out << "workload.size_classes = ";
    for (std::size_t i = 0; i < cfg.size_classes.size(); ++i) {
        if (i) out << ',';
        out << fmt(cfg.size_classes[i].size_bits) << ':' << fmt(cfg.size_classes[i].weight);
    }
    out << '\n';
    out << "workload.deadline_slack_min_s = " << fmt(cfg.deadline_slack_min_s) << '\n';
    out << "workload.deadline_slack_max_s = " << fmt(cfg.deadline_slack_max_s) << '\n';
    out << "experiment.ue_counts = ";
    for (std::size_t i = 0; i < cfg.ue_counts.size(); ++i) out << (i ? "," : "") << cfg.ue_counts[i];
    out << '\n';
    out << "experiment.modes = ";
    for (std::size_t i = 0; i < cfg.modes.size(); ++i) out << (i ? "," : "") << to_string(cfg.modes[i]);
    out << '\n';
    out << "experiment.solvers = ";
    for (std::size_t i = 0; i < cfg.solvers.size(); ++i) out << (i ? "," : "") << cfg.solvers[i];
    out << '\n';
    out << "experiment.runs_per_point = " << cfg.runs_per_point << '\n';
    out << "experiment.base_seed = " << cfg.base_seed << '\n';
    out << "experiment.output_dir = " << cfg.output_dir << '\n';
    out << "experiment.drop_penalty = "
        << (cfg.drop_penalty == DropPenalty::PerTask ? "per-task" : "global") << '\n';
    out << "experiment.report_walltime = " << (cfg.report_walltime ? "true" : "false") << '\n';
    out << "cuckoo.nest_count = " << cfg.cuckoo.nest_count << '\n';
    out << "cuckoo.iterations = " << cfg.cuckoo.iterations << '\n';
    out << "cuckoo.abandonment_prob = " << fmt(cfg.cuckoo.abandonment_prob) << '\n';
    out << "cuckoo.levy_lambda = " << fmt(cfg.cuckoo.levy_lambda) << '\n';
    out << "cuckoo.step_scale = " << fmt(cfg.cuckoo.step_scale) << '\n';
    out << "cuckoo.p_grid_step = " << fmt(cfg.cuckoo.p_grid_step) << '\n';
    out << "exact.p_grid_step = " << fmt(cfg.exact.p_grid_step) << '\n';
    if (!cfg.exact.rb_choices.empty()) {
        out << "exact.rb_choices = ";
        for (std::size_t i = 0; i < cfg.exact.rb_choices.size(); ++i)
            out << (i ? "," : "") << cfg.exact.rb_choices[i];
        out << '\n';
    }
    out << "exact.node_limit = " << cfg.exact.node_limit << '\n';
    out << "# per-run workload seeds (derived, informational)\n";
    for (int ue : cfg.ue_counts)
        for (int r = 0; r < cfg.runs_per_point; ++r)
            out << "# seed ue=" << ue << " run=" << r << " : " << run_seed(cfg, ue, r) << '\n';
    return out.str();
}

RunRow run_point(const ExperimentConfig& cfg, int ue_count, Mode mode,
                 const std::string& solver, int run_index) {
    const WorkloadSpec wspec = make_workload_spec(cfg, ue_count, run_index);
    Instance inst;
    inst.tasks = generate_workload(wspec);
    inst.servers = make_servers(cfg);
    inst.model = cfg.model;
    inst.radio = cfg.radio;
    inst.penalty = cfg.drop_penalty;

    SolveResult solved;
    if (solver == "exact") {
        solved = solve_exact(inst, mode, cfg.exact);
    } else if (solver == "cuckoo") {
        CuckooConfig ccfg = cfg.cuckoo;
        ccfg.seed = wspec.seed ^ 0x5851F42D4C957F2DULL;
        solved = solve_cuckoo(inst, mode, ccfg);
    } else if (solver == "baseline") {
        solved = solve_baseline(inst, mode);
    } else {
        throw std::invalid_argument("unknown solver '" + solver + "'");
    }

    const ScheduleOutcome outcome =
        simulate(inst.tasks, solved.best_decision, inst.servers, inst.model, inst.radio);

    RunRow row;
    row.ue_count = ue_count;
    row.mode = mode;
    row.solver = solver;
    row.run_index = run_index;
    row.seed = wspec.seed;
    int scheduled = 0;
    for (std::size_t i = 0; i < inst.tasks.size(); ++i) {
        const bool has_work = solved.best_decision.per_task[i].local_fraction > 0.0 ||
                              !outcome.per_task[i].dropped;
        if (has_work) ++scheduled;
    }
    row.mean_latency_s = scheduled > 0 ? outcome.total_latency_s / scheduled : 0.0;
    row.drops = outcome.drop_count;
    if (outcome.last_completion_s > 0.0) {
        const Utilization u =
            utilization(outcome, inst.servers, ue_count, outcome.last_completion_s);
        row.mec_util = u.mec;
        row.local_util = u.local;
    }
    row.wall_time_s = solved.wall_time_s;
    row.objective_total = solved.best_value.total;
    row.evaluations = solved.evaluations;
    row.trace = solved.trace;
    return row;
}

AggregateRow recompute_aggregate(const std::vector<RunRow>& runs, int ue_count, Mode mode,
                                 const std::string& solver) {
    AggregateRow agg;
    agg.ue_count = ue_count;
    agg.mode = mode;
    agg.solver = solver;
    std::vector<const RunRow*> group;
    for (const auto& r : runs)
        if (r.ue_count == ue_count && r.mode == mode && r.solver == solver) group.push_back(&r);
    if (group.empty()) return agg;
    const double n = static_cast<double>(group.size());
    for (const auto* r : group) {
        agg.mean_latency_s += r->mean_latency_s / n;
        agg.mean_drops += static_cast<double>(r->drops) / n;
        agg.mec_util += r->mec_util / n;
        agg.local_util += r->local_util / n;
        agg.mean_walltime_s += r->wall_time_s / n;
    }
    if (group.size() > 1) {
        double ss = 0.0;
        for (const auto* r : group) {
            const double d = r->mean_latency_s - agg.mean_latency_s;
            ss += d * d;
        }
        agg.std_latency_s = std::sqrt(ss / (n - 1.0));
    }
    return agg;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    ExperimentReport report;
    report.config = cfg;
    for (int ue : cfg.ue_counts)
        for (Mode mode : cfg.modes)
            for (const auto& solver : cfg.solvers)
                for (int r = 0; r < cfg.runs_per_point; ++r)
                    report.runs.push_back(run_point(cfg, ue, mode, solver, r));
    for (int ue : cfg.ue_counts)
        for (Mode mode : cfg.modes)
            for (const auto& solver : cfg.solvers)
                report.aggregates.push_back(recompute_aggregate(report.runs, ue, mode, solver));
    return report;
}

void write_report(const ExperimentReport& report, const std::string& output_dir) {
    std::filesystem::create_directories(output_dir);
    const auto path = [&](const std::string& name) { return output_dir + "/" + name; };

    {
        std::ostringstream out;
        out << "ue_count,mode,solver,mean_latency_s,std_latency_s,mean_drops,mec_util,"
               "local_util,mean_walltime_s\n";
        for (const auto& a : report.aggregates) {
            const double wt = report.config.report_walltime ? a.mean_walltime_s : 0.0;
            out << a.ue_count << ',' << to_string(a.mode) << ',' << a.solver << ','
                << fmt(a.mean_latency_s) << ',' << fmt(a.std_latency_s) << ','
                << fmt(a.mean_drops) << ',' << fmt(a.mec_util) << ',' << fmt(a.local_util) << ','
                << fmt(wt) << '\n';
        }
        atomic_write(path("summary.csv"), out.str());
    }

    {
        std::ostringstream out;
        out << "ue_count,mode,solver,run,seed,mean_latency_s,drops,mec_util,local_util,"
               "objective_total,evaluations\n";
        for (const auto& r : report.runs)
            out << r.ue_count << ',' << to_string(r.mode) << ',' << r.solver << ','
                << r.run_index << ',' << r.seed << ',' << fmt(r.mean_latency_s) << ','
                << r.drops << ',' << fmt(r.mec_util) << ',' << fmt(r.local_util) << ','
                << fmt(r.objective_total) << ',' << r.evaluations << '\n';
        atomic_write(path("runs.csv"), out.str());
    }

    {
        // Measured timings; deliberately not covered by the replay guarantee.
        std::ostringstream out;
        out << "ue_count,mode,solver,run,wall_time_s\n";
        for (const auto& r : report.runs)
            out << r.ue_count << ',' << to_string(r.mode) << ',' << r.solver << ','
                << r.run_index << ',' << fmt(r.wall_time_s) << '\n';
        atomic_write(path("timings.csv"), out.str());
    }

    for (const auto& r : report.runs) {
        if (r.trace.empty()) continue;
        std::ostringstream out;
        out << "iteration,best_objective\n";
        for (const auto& tp : r.trace) out << tp.iteration << ',' << fmt(tp.best_objective) << '\n';
        atomic_write(path("trace_" + std::to_string(r.ue_count) + "_" + to_string(r.mode) + "_" +
                          r.solver + "_run" + std::to_string(r.run_index) + ".csv"),
                     out.str());
    }

    atomic_write(path("manifest.txt"), manifest_text(report.config));
}

}  // namespace mecsim
