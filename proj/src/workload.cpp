#include "mecsim/workload.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace mecsim {

namespace {

constexpr const char* kWorkloadHeader = "# mecsim-workload v1";

// Uniform in [0,1) from the top 53 bits; keeps draws independent of
// libstdc++'s distribution internals so files replay across toolchains.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double exponential(std::mt19937_64& rng, double rate) {
    return -std::log1p(-uniform01(rng)) / rate;
}

}  // namespace

void validate(const WorkloadSpec& spec) {
    if (spec.ue_count < 1) throw std::invalid_argument("ue_count must be >= 1");
    if (spec.max_tasks < 1) throw std::invalid_argument("max_tasks must be >= 1");
    if (!(spec.arrival_rate_per_s > 0.0)) throw std::invalid_argument("arrival_rate_per_s must be > 0");
    if (spec.size_classes.empty()) throw std::invalid_argument("size_classes must not be empty");
    double total = 0.0;
    for (const auto& sc : spec.size_classes) {
        if (!(sc.size_bits > 0.0)) throw std::invalid_argument("size class sizes must be > 0");
        if (sc.weight < 0.0) throw std::invalid_argument("size class weights must be >= 0");
        total += sc.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("size class weights must sum to 1");
    if (!(spec.deadline_slack_min_s > 0.0) || spec.deadline_slack_min_s > spec.deadline_slack_max_s)
        throw std::invalid_argument("deadline slack must satisfy 0 < min <= max");
}

void validate(const ProcessingModel& model) {
    if (!(model.local_rate_bits_per_s > 0.0))
        throw std::invalid_argument("local_rate_bits_per_s must be > 0");
    if (!(model.mec_rate_bits_per_s > model.local_rate_bits_per_s))
        throw std::invalid_argument("mec_rate_bits_per_s must exceed local_rate_bits_per_s");
}

double processing_time(double task_bits, const ProcessingModel& model, ProcessingSite where) {
    const double rate = (where == ProcessingSite::Local) ? model.local_rate_bits_per_s
                                                         : model.mec_rate_bits_per_s;
    return task_bits / rate;
}

std::vector<Task> generate_workload(const WorkloadSpec& spec) {
    validate(spec);
    std::mt19937_64 rng(spec.seed);

    std::vector<double> cumulative;
    cumulative.reserve(spec.size_classes.size());
    double acc = 0.0;
    for (const auto& sc : spec.size_classes) {
        acc += sc.weight;
        cumulative.push_back(acc);
    }
    cumulative.back() = 1.0;

    std::vector<Task> tasks;
    tasks.reserve(spec.max_tasks);
    double clock = 0.0;
    for (int i = 0; i < spec.max_tasks; ++i) {
        clock += exponential(rng, spec.arrival_rate_per_s);
        const double u_size = uniform01(rng);
        std::size_t k = 0;
        while (k + 1 < cumulative.size() && u_size >= cumulative[k]) ++k;
        const double slack = spec.deadline_slack_min_s +
                             uniform01(rng) * (spec.deadline_slack_max_s - spec.deadline_slack_min_s);
        const int ue = static_cast<int>(rng() % static_cast<std::uint64_t>(spec.ue_count));
        Task t;
        t.id = i;
        t.ue_id = ue;
        t.size_bits = spec.size_classes[k].size_bits;
        t.arrival_s = clock;
        t.deadline_s = clock + slack;
        tasks.push_back(t);
    }
    return tasks;
}

void write_workload(const std::vector<Task>& tasks, std::ostream& out) {
    out << kWorkloadHeader << '\n';
    out << "id,ue,size_bits,arrival_s,deadline_s\n";
    out << std::setprecision(17);
    for (const auto& t : tasks) {
        out << t.id << ',' << t.ue_id << ',' << t.size_bits << ','
            << t.arrival_s << ',' << t.deadline_s << '\n';
    }
}

void write_workload_file(const std::vector<Task>& tasks, const std::string& path) {
    const std::string tmp = path + ".partial";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        write_workload(tasks, out);
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

std::vector<Task> read_workload(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kWorkloadHeader)
        throw std::runtime_error("not a mecsim workload file");
    if (!std::getline(in, line))
        throw std::runtime_error("missing workload column header");
    std::vector<Task> tasks;
    int lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        Task t;
        char c1, c2, c3, c4;
        if (!(row >> t.id >> c1 >> t.ue_id >> c2 >> t.size_bits >> c3 >> t.arrival_s >> c4 >> t.deadline_s) ||
            c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',')
            throw std::runtime_error("workload parse error at line " + std::to_string(lineno));
        validate(t);
        tasks.push_back(t);
    }
    return tasks;
}

std::vector<Task> read_workload_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open workload file " + path);
    return read_workload(in);
}

}  // namespace mecsim
