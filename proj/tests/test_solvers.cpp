#include <doctest.h>

#include <cmath>
#include <random>

#include "mecsim/oracle.hpp"
#include "mecsim/solvers.hpp"

using namespace mecsim;

namespace {

Instance random_small_instance(std::uint64_t seed, int max_tasks = 4) {
    std::mt19937_64 rng(seed);
    Instance inst;
    const int n = 1 + static_cast<int>(rng() % max_tasks);
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

ExactConfig small_exact_config() {
    ExactConfig cfg;
    cfg.p_grid_step = 0.25;
    cfg.rb_choices = {50, 100};
    cfg.node_limit = 100000000;
    return cfg;
}

bool decision_is_clean(const Instance& inst, const Decision& d, Mode mode) {
    const auto outcome = simulate(inst.tasks, d, inst.servers, inst.model, inst.radio);
    return check_constraints(inst.tasks, d, outcome, mode, inst.radio).empty();
}

}  // namespace

TEST_CASE("exact solver equals exhaustive enumeration on small instances") {
    const ExactConfig cfg = small_exact_config();
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const Instance inst = random_small_instance(seed);
        for (Mode mode : {Mode::Partition, Mode::OffloadOnly}) {
            const auto brute = enumerate_exhaustive(inst, mode, cfg);
            const auto solved = solve_exact(inst, mode, cfg);
            CHECK(std::abs(solved.best_value.total - brute.value.total) < 1e-9);
            CHECK(solved.best_value.feasible);
            CHECK(decision_is_clean(inst, solved.best_decision, mode));
        }
    }
}

TEST_CASE("1 task, 1 server: optimum is the best p-grid point") {
    Instance inst;
    inst.tasks = {{0, 0, 4e6, 0.0, 10.0}};
    inst.servers = {{0, 1, 1.0}};
    ExactConfig cfg;
    cfg.p_grid_step = 0.05;
    cfg.rb_choices = {100};
    cfg.node_limit = 1000000;

    double best_grid = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 20; ++k) {
        Decision d;
        const double p = k / 20.0;
        d.per_task = {TaskDecision{p, p < 1.0 ? std::optional<int>(0) : std::nullopt, 100}};
        const auto v = evaluate(inst.tasks, d, Mode::Partition, inst.servers, inst.model,
                                inst.radio);
        if (v.feasible) best_grid = std::min(best_grid, v.total);
    }
    const auto solved = solve_exact(inst, Mode::Partition, cfg);
    CHECK(solved.best_value.total == doctest::Approx(best_grid).epsilon(1e-12));
}

TEST_CASE("offload dominance: idle MEC cheaper than local for every task") {
    Instance inst;
    // Loose deadlines, tiny tasks: roundtrip + MEC time is far below local time.
    for (int i = 0; i < 3; ++i)
        inst.tasks.push_back({i, i, 2e6, static_cast<double>(i), static_cast<double>(i) + 10.0});
    inst.servers = {{0, 1, 1.0}, {1, 1, 1.0}};
    ExactConfig cfg;
    cfg.p_grid_step = 0.25;
    cfg.node_limit = 1000000;
    const auto solved = solve_exact(inst, Mode::Partition, cfg);
    for (const auto& td : solved.best_decision.per_task) CHECK(td.local_fraction == 0.0);
}

TEST_CASE("partition optimum never exceeds the local-only objective") {
    for (std::uint64_t seed = 30; seed < 40; ++seed) {
        const Instance inst = random_small_instance(seed);
        const ExactConfig cfg = small_exact_config();
        const auto part = solve_exact(inst, Mode::Partition, cfg);
        const auto local = solve_baseline(inst, Mode::LocalOnly);
        CHECK(part.best_value.total <= local.best_value.total + 1e-9);
    }
}

TEST_CASE("cuckoo seeded at the optimum with no abandonment keeps a flat trace") {
    Instance inst;
    inst.tasks = {{0, 0, 4e6, 0.0, 10.0}};
    inst.servers = {{0, 1, 1.0}};
    ExactConfig ecfg;
    ecfg.p_grid_step = 0.05;
    ecfg.rb_choices = {100};
    ecfg.node_limit = 1000000;
    const auto exact = solve_exact(inst, Mode::Partition, ecfg);

    CuckooConfig ccfg;
    ccfg.abandonment_prob = 0.0;
    ccfg.iterations = 30;
    ccfg.seed = 77;
    const auto solved = solve_cuckoo(inst, Mode::Partition, ccfg, {exact.best_decision});
    for (const auto& tp : solved.trace)
        CHECK(tp.best_objective == doctest::Approx(exact.best_value.total).epsilon(1e-12));
}

TEST_CASE("cuckoo determinism and trace monotonicity") {
    const Instance inst = random_small_instance(99);
    CuckooConfig cfg;
    cfg.seed = 12345;
    cfg.iterations = 40;
    const auto a = solve_cuckoo(inst, Mode::Partition, cfg);
    const auto b = solve_cuckoo(inst, Mode::Partition, cfg);
    CHECK(a.best_value.total == b.best_value.total);
    CHECK(a.evaluations == b.evaluations);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i)
        CHECK(a.trace[i].best_objective == b.trace[i].best_objective);
    for (std::size_t i = 1; i < a.trace.size(); ++i)
        CHECK(a.trace[i].best_objective <= a.trace[i - 1].best_objective);
    REQUIRE(a.best_decision.per_task.size() == b.best_decision.per_task.size());
    for (std::size_t i = 0; i < a.best_decision.per_task.size(); ++i) {
        CHECK(a.best_decision.per_task[i].local_fraction ==
              b.best_decision.per_task[i].local_fraction);
        CHECK(a.best_decision.per_task[i].server == b.best_decision.per_task[i].server);
        CHECK(a.best_decision.per_task[i].rb_count == b.best_decision.per_task[i].rb_count);
    }
}

TEST_CASE("cuckoo never beats the exact solver and stays feasible") {
    const ExactConfig ecfg = small_exact_config();
    for (std::uint64_t seed = 50; seed < 56; ++seed) {
        const Instance inst = random_small_instance(seed);
        const auto exact = solve_exact(inst, Mode::Partition, ecfg);
        CuckooConfig ccfg;
        ccfg.seed = seed;
        ccfg.p_grid_step = ecfg.p_grid_step;
        const auto cuckoo = solve_cuckoo(inst, Mode::Partition, ccfg);
        CHECK(cuckoo.best_value.total >= exact.best_value.total - 1e-9);
        CHECK(cuckoo.best_value.feasible);
        CHECK(decision_is_clean(inst, cuckoo.best_decision, Mode::Partition));
    }
}

TEST_CASE("baselines") {
    Instance empty;
    empty.servers = {{0, 1, 1.0}};
    CHECK(solve_baseline(empty, Mode::LocalOnly).best_value.total == doctest::Approx(0.0));

    for (std::uint64_t seed = 60; seed < 66; ++seed) {
        const Instance inst = random_small_instance(seed);
        const auto local = solve_baseline(inst, Mode::LocalOnly);
        const auto sim = simulate(inst.tasks, local.best_decision, inst.servers, inst.model,
                                  inst.radio);
        CHECK(sim.drop_count == 0);

        const auto greedy = solve_baseline(inst, Mode::OffloadOnly);
        const auto exact = solve_exact(inst, Mode::OffloadOnly, small_exact_config());
        CHECK(greedy.best_value.total >= exact.best_value.total - 1e-9);
        CHECK(decision_is_clean(inst, greedy.best_decision, Mode::OffloadOnly));
    }
}

TEST_CASE("cuckoo config validation and defaults") {
    const CuckooConfig cfg;
    CHECK(cfg.nest_count == 25);
    CHECK(cfg.iterations == 100);
    CHECK(cfg.abandonment_prob == 0.25);
    CHECK(cfg.levy_lambda == 1.5);

    const Instance inst = random_small_instance(1);
    CuckooConfig bad = cfg;
    bad.nest_count = 0;
    CHECK_THROWS_AS(solve_cuckoo(inst, Mode::Partition, bad), std::invalid_argument);
    bad = cfg;
    bad.levy_lambda = 1.0;
    CHECK_THROWS_AS(solve_cuckoo(inst, Mode::Partition, bad), std::invalid_argument);
    bad = cfg;
    bad.abandonment_prob = 1.5;
    CHECK_THROWS_AS(solve_cuckoo(inst, Mode::Partition, bad), std::invalid_argument);

    ExactConfig ecfg;
    ecfg.p_grid_step = 0.3;  // 1/0.3 is not an integer
    CHECK_THROWS(solve_exact(inst, Mode::Partition, ecfg));
}
