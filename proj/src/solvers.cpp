#include "mecsim/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace mecsim {

namespace {

constexpr double kTimeTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::size_t> arrival_order(const std::vector<Task>& tasks) {
    std::vector<std::size_t> order(tasks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (tasks[a].arrival_s != tasks[b].arrival_s) return tasks[a].arrival_s < tasks[b].arrival_s;
        return tasks[a].id < tasks[b].id;
    });
    return order;
}

// Incremental FCFS state; assigning tasks in arrival order reproduces
// the simulator's schedule exactly.
struct SimState {
    std::vector<std::vector<double>> cpu_free;  // per server index
    std::vector<double> ue_free;                // per ue id

    SimState(const std::vector<ServerSpec>& servers, int ue_count) {
        cpu_free.reserve(servers.size());
        for (const auto& s : servers) cpu_free.emplace_back(s.cpu_count, 0.0);
        ue_free.assign(ue_count, 0.0);
    }
};

struct StepUndo {
    int server_idx = -1, cpu_idx = -1;
    double cpu_old = 0.0;
    int ue_idx = -1;
    double ue_old = 0.0;
};

struct StepResult {
    double cost = 0.0;   // latency contribution incl. drop penalty
    bool dropped = false;
    StepUndo undo;
};

// Applies one task's decision to the running schedule and returns its
// objective contribution, mirroring simulate() + evaluate_outcome().
StepResult apply_step(const Task& task, const TaskDecision& d, const Instance& inst,
                      SimState& state, double per_drop_cost) {
    StepResult res;
    const double p = d.local_fraction;

    const double local_bits = p * task.size_bits;
    if (local_bits > 0.0) {
        const double proc = local_bits / inst.model.local_rate_bits_per_s;
        const double start = std::max(task.arrival_s, state.ue_free[task.ue_id]);
        res.undo.ue_idx = task.ue_id;
        res.undo.ue_old = state.ue_free[task.ue_id];
        state.ue_free[task.ue_id] = start + proc;
        res.cost += (start - task.arrival_s) + proc;
    }

    if (p < 1.0) {
        if (!d.server) {
            res.dropped = true;
            res.cost += per_drop_cost;
        } else {
            std::size_t j = 0;
            while (j < inst.servers.size() && inst.servers[j].id != *d.server) ++j;
            const double offload_bits = (1.0 - p) * task.size_bits;
            const double rate = data_rate_for_rbs(d.rb_count, inst.radio);
            const double uplink = offload_bits / rate;
            const double roundtrip = 2.0 * offload_bits / rate;
            const double proc = offload_bits / inst.model.mec_rate_bits_per_s /
                                inst.servers[j].speed_factor;
            auto& cpus = state.cpu_free[j];
            const auto cpu = std::min_element(cpus.begin(), cpus.end());
            const double start = std::max(task.arrival_s + uplink, *cpu);
            if (start > task.deadline_s - proc - roundtrip + kTimeTol) {
                res.dropped = true;
                res.cost += per_drop_cost;
            } else {
                res.undo.server_idx = static_cast<int>(j);
                res.undo.cpu_idx = static_cast<int>(cpu - cpus.begin());
                res.undo.cpu_old = *cpu;
                *cpu = start + proc;
                res.cost += (start - task.arrival_s - uplink) + proc + roundtrip;
            }
        }
    }
    return res;
}

void undo_step(SimState& state, const StepUndo& u) {
    if (u.server_idx >= 0) state.cpu_free[u.server_idx][u.cpu_idx] = u.cpu_old;
    if (u.ue_idx >= 0) state.ue_free[u.ue_idx] = u.ue_old;
}

int ue_count_of(const std::vector<Task>& tasks) {
    int n = 0;
    for (const auto& t : tasks) n = std::max(n, t.ue_id + 1);
    return n;
}

// Drop penalty added to the objective per dropped task.
double per_drop_cost(const Instance& inst, Mode mode) {
    if (inst.penalty == DropPenalty::Global) return 1.0;
    // Per-task reading: D is weighted by sum of (1 - p_i); only
    // OffloadOnly tolerates drops, where that sum is N.
    (void)mode;
    return static_cast<double>(inst.tasks.size());
}

std::vector<double> partition_p_grid(double step, Mode mode) {
    if (mode == Mode::LocalOnly) return {1.0};
    if (mode == Mode::OffloadOnly) return {0.0};
    if (!(step > 0.0) || step > 1.0) throw std::invalid_argument("p_grid_step must be in (0,1]");
    const double inv = 1.0 / step;
    if (std::abs(inv - std::round(inv)) > 1e-9)
        throw std::invalid_argument("1/p_grid_step must be an integer");
    const int n = static_cast<int>(std::round(inv));
    std::vector<double> grid;
    grid.reserve(n + 1);
    for (int k = 0; k <= n; ++k) grid.push_back(static_cast<double>(k) / n);
    return grid;
}

SolveResult finish(const Instance& inst, Mode mode, Decision decision,
                   std::vector<TracePoint> trace, long evaluations, Clock::time_point t0) {
    SolveResult result;
    result.best_value = evaluate(inst.tasks, decision, mode, inst.servers, inst.model, inst.radio,
                                 inst.penalty);
    result.best_decision = std::move(decision);
    result.trace = std::move(trace);
    result.evaluations = evaluations;
    result.wall_time_s = elapsed_s(t0);
    return result;
}

// ---------------------------------------------------------------- exact

struct ExactSearch {
    const Instance& inst;
    Mode mode;
    const ExactConfig& cfg;
    std::vector<std::size_t> order;
    std::vector<double> p_grid;
    std::vector<int> rbs;
    double drop_cost;
    bool allow_drops;

    SimState state;
    std::vector<TaskDecision> current;
    std::vector<double> suffix_bound;

    double best_total = kInf;
    std::vector<TaskDecision> best;
    long nodes = 0;
    bool hit_limit = false;
    std::vector<TracePoint> trace;

    ExactSearch(const Instance& in, Mode m, const ExactConfig& c)
        : inst(in),
          mode(m),
          cfg(c),
          order(arrival_order(in.tasks)),
          p_grid(partition_p_grid(c.p_grid_step, m)),
          drop_cost(per_drop_cost(in, m)),
          allow_drops(m == Mode::OffloadOnly),
          state(in.servers, ue_count_of(in.tasks)),
          current(in.tasks.size()) {
        rbs = cfg.rb_choices;
        if (rbs.empty()) rbs = {rb_max(inst.radio)};
        const int cap = rb_max(inst.radio);
        for (int r : rbs)
            if (r < 1 || r > cap) throw std::invalid_argument("rb choice outside [1, rb_max]");
        compute_suffix_bound();
    }

    // Zero-contention cost of the cheapest option of each task, summed
    // over the tail; admissible since waiting only adds cost.
    void compute_suffix_bound() {
        const std::size_t n = order.size();
        std::vector<double> lb(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const Task& task = inst.tasks[order[k]];
            double best_opt = kInf;
            for (double p : p_grid) {
                const double local = p * task.size_bits / inst.model.local_rate_bits_per_s;
                if (p == 1.0) {
                    best_opt = std::min(best_opt, local);
                    continue;
                }
                const double off = (1.0 - p) * task.size_bits;
                for (const auto& srv : inst.servers) {
                    const double proc = off / inst.model.mec_rate_bits_per_s / srv.speed_factor;
                    for (int r : rbs) {
                        const double rate = data_rate_for_rbs(r, inst.radio);
                        best_opt = std::min(best_opt, local + proc + 2.0 * off / rate);
                    }
                }
                if (allow_drops) best_opt = std::min(best_opt, local + drop_cost);
            }
            lb[k] = best_opt;
        }
        suffix_bound.assign(n + 1, 0.0);
        for (std::size_t k = n; k-- > 0;) suffix_bound[k] = suffix_bound[k + 1] + lb[k];
    }

    struct Option {
        TaskDecision d;
        double cost;
        StepUndo undo;
        bool dropped;
    };

    void record_best(double total) {
        best = current;
        best_total = total;
        trace.push_back({nodes, total});
    }

    void dfs(std::size_t pos, double g) {
        if (hit_limit) return;
        if (pos == order.size()) {
            if (g < best_total) record_best(g);
            return;
        }
        const Task& task = inst.tasks[order[pos]];

        std::vector<Option> options;
        for (double p : p_grid) {
            std::vector<TaskDecision> candidates;
            if (p == 1.0) {
                candidates.push_back({1.0, std::nullopt, rbs.front()});
            } else {
                for (const auto& srv : inst.servers)
                    for (int r : rbs) candidates.push_back({p, srv.id, r});
                if (allow_drops) candidates.push_back({p, std::nullopt, rbs.front()});
            }
            for (const auto& d : candidates) {
                StepResult step = apply_step(task, d, inst, state, drop_cost);
                undo_step(state, step.undo);
                if (step.dropped && !allow_drops) continue;  // Eq. 12 prunes the branch
                options.push_back({d, step.cost, {}, step.dropped});
            }
        }
        std::stable_sort(options.begin(), options.end(),
                         [](const Option& a, const Option& b) { return a.cost < b.cost; });

        for (const auto& opt : options) {
            if (g + opt.cost + suffix_bound[pos + 1] >= best_total) break;
            if (++nodes > cfg.node_limit) {
                hit_limit = true;
                return;
            }
            StepResult step = apply_step(task, opt.d, inst, state, drop_cost);
            current[order[pos]] = opt.d;
            dfs(pos + 1, g + step.cost);
            undo_step(state, step.undo);
            if (hit_limit) return;
        }
    }
};

Decision greedy_offload_decision(const Instance& inst);

}  // namespace

Decision all_local_decision(std::size_t task_count) {
    Decision d;
    d.per_task.assign(task_count, TaskDecision{1.0, std::nullopt, 1});
    return d;
}

SolveResult solve_exact(const Instance& inst, Mode mode, const ExactConfig& cfg) {
    const auto t0 = Clock::now();
    if (cfg.node_limit < 1) throw std::invalid_argument("node_limit must be >= 1");

    ExactSearch search(inst, mode, cfg);

    // Feasible incumbent before any branching.
    Decision incumbent = (mode == Mode::OffloadOnly) ? greedy_offload_decision(inst)
                                                     : all_local_decision(inst.tasks.size());
    const ObjectiveValue inc_value = evaluate(inst.tasks, incumbent, mode, inst.servers,
                                              inst.model, inst.radio, inst.penalty);
    search.best.assign(incumbent.per_task.begin(), incumbent.per_task.end());
    search.best_total = inc_value.total;
    search.trace.push_back({0, inc_value.total});

    if (mode != Mode::LocalOnly) search.dfs(0, 0.0);

    Decision best;
    best.per_task = search.best;
    return finish(inst, mode, std::move(best), std::move(search.trace), search.nodes + 1, t0);
}

// ---------------------------------------------------------------- cuckoo

namespace {

struct LevySampler {
    double lambda;
    double sigma_u;
    std::mt19937_64& rng;

    LevySampler(double lam, std::mt19937_64& r) : lambda(lam), rng(r) {
        const double num = std::tgamma(1.0 + lambda) * std::sin(M_PI * lambda / 2.0);
        const double den = std::tgamma((1.0 + lambda) / 2.0) * lambda *
                           std::pow(2.0, (lambda - 1.0) / 2.0);
        sigma_u = std::pow(num / den, 1.0 / lambda);
    }

    double uniform01() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

    double normal() {
        // Box-Muller on our own uniforms; keeps runs reproducible
        // across standard libraries.
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // Mantegna construction: u / |v|^(1/lambda).
    double operator()() {
        const double u = normal() * sigma_u;
        const double v = normal();
        return u / std::pow(std::abs(v), 1.0 / lambda);
    }
};

struct CuckooSpace {
    const Instance& inst;
    Mode mode;
    int cap;
    double p_step;

    CuckooSpace(const Instance& in, Mode m, double step)
        : inst(in), mode(m), cap(rb_max(in.radio)), p_step(step) {}

    std::size_t dims() const { return inst.tasks.size() * 3; }
    double server_span() const { return static_cast<double>(inst.servers.size()); }

    double lo(std::size_t d) const {
        switch (d % 3) {
            case 0: return 0.0;               // p
            case 1: return 0.0;               // server coordinate, < 1 means unassigned
            default: return 1.0;              // rb
        }
    }
    double hi(std::size_t d) const {
        switch (d % 3) {
            case 0: return 1.0;
            case 1: return server_span();
            default: return static_cast<double>(cap);
        }
    }

    Decision decode(const std::vector<double>& x) const {
        Decision dec;
        dec.per_task.resize(inst.tasks.size());
        for (std::size_t i = 0; i < inst.tasks.size(); ++i) {
            TaskDecision& d = dec.per_task[i];
            double p = std::clamp(x[3 * i], 0.0, 1.0);
            p = std::clamp(std::round(p / p_step) * p_step, 0.0, 1.0);
            if (mode == Mode::LocalOnly) p = 1.0;
            if (mode == Mode::OffloadOnly) p = 0.0;
            d.local_fraction = p;
            const double s = std::clamp(x[3 * i + 1], 0.0, server_span());
            if (s >= 1.0 && !inst.servers.empty()) {
                const long idx = std::min<long>(static_cast<long>(inst.servers.size()) - 1,
                                                std::lround(s) - 1);
                d.server = inst.servers[idx].id;
            }
            d.rb_count = static_cast<int>(std::clamp<long>(std::lround(x[3 * i + 2]), 1, cap));
        }
        return dec;
    }

    std::vector<double> encode(const Decision& dec) const {
        std::vector<double> x(dims());
        for (std::size_t i = 0; i < dec.per_task.size(); ++i) {
            const TaskDecision& d = dec.per_task[i];
            x[3 * i] = d.local_fraction;
            double s = 0.0;
            if (d.server) {
                for (std::size_t j = 0; j < inst.servers.size(); ++j)
                    if (inst.servers[j].id == *d.server) s = static_cast<double>(j + 1);
            }
            x[3 * i + 1] = s;
            x[3 * i + 2] = static_cast<double>(d.rb_count);
        }
        return x;
    }
};

}  // namespace

SolveResult solve_cuckoo(const Instance& inst, Mode mode, const CuckooConfig& cfg,
                         const std::vector<Decision>& initial_decisions) {
    const auto t0 = Clock::now();
    if (cfg.nest_count < 1) throw std::invalid_argument("nest_count must be >= 1");
    if (cfg.iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    if (cfg.abandonment_prob < 0.0 || cfg.abandonment_prob > 1.0)
        throw std::invalid_argument("abandonment_prob must be in [0,1]");
    if (!(cfg.levy_lambda > 1.0)) throw std::invalid_argument("levy_lambda must be > 1");
    if (!(cfg.p_grid_step > 0.0) || cfg.p_grid_step > 1.0 ||
        std::abs(1.0 / cfg.p_grid_step - std::round(1.0 / cfg.p_grid_step)) > 1e-9)
        throw std::invalid_argument("p_grid_step must divide 1 evenly");

    CuckooSpace space(inst, mode, cfg.p_grid_step);
    std::mt19937_64 rng(cfg.seed);
    LevySampler levy(cfg.levy_lambda, rng);
    long evaluations = 0;

    auto fitness = [&](const std::vector<double>& x, Decision& out) -> double {
        out = space.decode(x);
        ++evaluations;
        const ObjectiveValue v = evaluate(inst.tasks, out, mode, inst.servers, inst.model,
                                          inst.radio, inst.penalty);
        return v.feasible ? v.total : kInf;
    };

    auto random_nest = [&]() {
        std::vector<double> x(space.dims());
        for (std::size_t d = 0; d < x.size(); ++d)
            x[d] = space.lo(d) + levy.uniform01() * (space.hi(d) - space.lo(d));
        return x;
    };

    // Structured seeds keep a feasible region reachable: the all-local
    // point plus local/offload blends with round-robin server placement.
    std::vector<std::vector<double>> nests;
    nests.reserve(cfg.nest_count);
    for (const auto& d : initial_decisions)
        if (static_cast<int>(nests.size()) < cfg.nest_count) nests.push_back(space.encode(d));
    if (mode != Mode::OffloadOnly && static_cast<int>(nests.size()) < cfg.nest_count)
        nests.push_back(space.encode(all_local_decision(inst.tasks.size())));
    if (mode == Mode::Partition && !inst.servers.empty()) {
        for (double p : {0.8, 0.6, 0.4, 0.2, 0.0}) {
            if (static_cast<int>(nests.size()) >= cfg.nest_count) break;
            Decision blend;
            blend.per_task.resize(inst.tasks.size());
            for (std::size_t i = 0; i < inst.tasks.size(); ++i) {
                blend.per_task[i].local_fraction = p;
                blend.per_task[i].server = inst.servers[i % inst.servers.size()].id;
                blend.per_task[i].rb_count = space.cap;
            }
            nests.push_back(space.encode(blend));
        }
    }
    while (static_cast<int>(nests.size()) < cfg.nest_count) nests.push_back(random_nest());

    std::vector<double> fit(nests.size());
    std::vector<Decision> decoded(nests.size());
    for (std::size_t k = 0; k < nests.size(); ++k) fit[k] = fitness(nests[k], decoded[k]);

    Decision best_decision;
    double best_total = kInf;
    bool have_best = false;
    auto refresh_best = [&]() {
        for (std::size_t k = 0; k < nests.size(); ++k) {
            if (fit[k] < best_total) {
                best_total = fit[k];
                best_decision = decoded[k];
                have_best = true;
            }
        }
    };
    refresh_best();

    std::vector<TracePoint> trace;
    trace.push_back({0, best_total});

    const int abandoned = static_cast<int>(
        std::ceil(cfg.abandonment_prob * static_cast<double>(cfg.nest_count)));

    for (int it = 1; it <= cfg.iterations; ++it) {
        // Levy-flight proposals, greedy per-nest replacement.
        for (std::size_t k = 0; k < nests.size(); ++k) {
            std::vector<double> candidate = nests[k];
            for (std::size_t d = 0; d < candidate.size(); ++d) {
                const double step = cfg.step_scale * (space.hi(d) - space.lo(d)) * levy();
                candidate[d] = std::clamp(candidate[d] + step, space.lo(d), space.hi(d));
            }
            Decision dec;
            const double f = fitness(candidate, dec);
            if (f < fit[k]) {
                nests[k] = std::move(candidate);
                fit[k] = f;
                decoded[k] = std::move(dec);
            }
        }
        refresh_best();

        // Abandon the worst nests.
        if (abandoned > 0) {
            std::vector<std::size_t> by_fitness(nests.size());
            std::iota(by_fitness.begin(), by_fitness.end(), 0);
            std::stable_sort(by_fitness.begin(), by_fitness.end(),
                             [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });
            for (int w = 0; w < abandoned && w < static_cast<int>(by_fitness.size()); ++w) {
                const std::size_t k = by_fitness[w];
                nests[k] = random_nest();
                fit[k] = fitness(nests[k], decoded[k]);
            }
            refresh_best();
        }

        trace.push_back({it, best_total});
    }

    if (!have_best || !std::isfinite(best_total)) {
        // Every decode infeasible; fall back to the guaranteed point.
        best_decision = all_local_decision(inst.tasks.size());
        if (mode == Mode::OffloadOnly) best_decision = greedy_offload_decision(inst);
        const ObjectiveValue v = evaluate(inst.tasks, best_decision, mode, inst.servers,
                                          inst.model, inst.radio, inst.penalty);
        best_total = v.total;
        for (auto& tp : trace) tp.best_objective = best_total;
    }

    SolveResult result = finish(inst, mode, std::move(best_decision), std::move(trace),
                                evaluations, t0);
    return result;
}

// ---------------------------------------------------------------- baselines

namespace {

Decision greedy_offload_decision(const Instance& inst) {
    const int cap = rb_max(inst.radio);
    SimState state(inst.servers, ue_count_of(inst.tasks));
    Decision dec;
    dec.per_task.assign(inst.tasks.size(), TaskDecision{0.0, std::nullopt, cap});
    for (std::size_t idx : arrival_order(inst.tasks)) {
        const Task& task = inst.tasks[idx];
        const double rate = data_rate_for_rbs(cap, inst.radio);
        const double uplink = task.size_bits / rate;
        const double roundtrip = 2.0 * task.size_bits / rate;
        double best_start = kInf;
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < inst.servers.size(); ++j) {
            const double proc = task.size_bits / inst.model.mec_rate_bits_per_s /
                                inst.servers[j].speed_factor;
            const double cpu = *std::min_element(state.cpu_free[j].begin(),
                                                 state.cpu_free[j].end());
            const double start = std::max(task.arrival_s + uplink, cpu);
            if (start <= task.deadline_s - proc - roundtrip + kTimeTol && start < best_start) {
                best_start = start;
                best_j = j;
            }
        }
        if (std::isfinite(best_start)) {
            dec.per_task[idx].server = inst.servers[best_j].id;
            StepResult step = apply_step(task, dec.per_task[idx], inst, state, 0.0);
            (void)step;
        }
    }
    return dec;
}

}  // namespace

SolveResult solve_baseline(const Instance& inst, Mode mode) {
    const auto t0 = Clock::now();
    Decision dec;
    switch (mode) {
        case Mode::LocalOnly:
            dec = all_local_decision(inst.tasks.size());
            break;
        case Mode::OffloadOnly:
            dec = greedy_offload_decision(inst);
            break;
        case Mode::Partition:
            throw std::invalid_argument("no baseline heuristic for partition mode");
    }
    SolveResult result = finish(inst, mode, std::move(dec), {}, 1, t0);
    result.trace.push_back({0, result.best_value.total});
    return result;
}

}  // namespace mecsim
