#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mecsim/workload.hpp"

using namespace mecsim;

TEST_CASE("generate_workload determinism and invariants") {
    WorkloadSpec spec;
    spec.seed = 42;
    spec.max_tasks = 400;
    const auto a = generate_workload(spec);
    const auto b = generate_workload(spec);

    CHECK(a.size() == 400);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].ue_id == b[i].ue_id);
        CHECK(a[i].size_bits == b[i].size_bits);
        CHECK(a[i].arrival_s == b[i].arrival_s);
        CHECK(a[i].deadline_s == b[i].deadline_s);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].deadline_s > a[i].arrival_s);
        CHECK(a[i].size_bits > 0.0);
        CHECK(a[i].ue_id >= 0);
        CHECK(a[i].ue_id < spec.ue_count);
        if (i > 0) CHECK(a[i].arrival_s >= a[i - 1].arrival_s);
    }
}

TEST_CASE("huge arrival rate puts the single task at ~0") {
    WorkloadSpec spec;
    spec.max_tasks = 1;
    spec.arrival_rate_per_s = 1e12;
    const auto tasks = generate_workload(spec);
    REQUIRE(tasks.size() == 1);
    CHECK(tasks[0].arrival_s < 1e-6);
}

TEST_CASE("spec validation") {
    WorkloadSpec spec;
    spec.size_classes.clear();
    CHECK_THROWS_AS(generate_workload(spec), std::invalid_argument);

    spec = WorkloadSpec{};
    spec.size_classes = {{1e6, 0.5}, {2e6, 0.6}};
    CHECK_THROWS_AS(generate_workload(spec), std::invalid_argument);

    spec = WorkloadSpec{};
    spec.deadline_slack_min_s = 2.0;
    spec.deadline_slack_max_s = 1.0;
    CHECK_THROWS_AS(generate_workload(spec), std::invalid_argument);
}

TEST_CASE("inter-arrival sample mean within 5% of 1/rate") {
    WorkloadSpec spec;
    spec.max_tasks = 20000;
    spec.arrival_rate_per_s = 3.0;
    spec.seed = 9;
    const auto tasks = generate_workload(spec);
    double prev = 0.0, sum = 0.0;
    for (const auto& t : tasks) {
        sum += t.arrival_s - prev;
        prev = t.arrival_s;
    }
    const double mean = sum / static_cast<double>(tasks.size());
    CHECK(std::abs(mean - 1.0 / 3.0) / (1.0 / 3.0) < 0.05);
}

TEST_CASE("processing_time") {
    ProcessingModel model{2.5e6, 10e6};
    CHECK(processing_time(10e6, model, ProcessingSite::Mec) == doctest::Approx(1.0));
    CHECK(processing_time(10e6, model, ProcessingSite::Local) == doctest::Approx(4.0));
    // Linearity: half the bits, exactly half the time.
    CHECK(processing_time(5e6, model, ProcessingSite::Mec) ==
          0.5 * processing_time(10e6, model, ProcessingSite::Mec));

    ProcessingModel bad{10e6, 5e6};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("default model: median task local time is 4x its MEC time") {
    ProcessingModel model;
    const double median_bits = 2e6;  // middle size class
    CHECK(processing_time(median_bits, model, ProcessingSite::Local) ==
          doctest::Approx(4.0 * processing_time(median_bits, model, ProcessingSite::Mec)));
    CHECK(processing_time(median_bits, model, ProcessingSite::Local) == doctest::Approx(0.2));
}

TEST_CASE("workload file round trip is bit exact") {
    WorkloadSpec spec;
    spec.max_tasks = 57;
    spec.seed = 1234;
    const auto tasks = generate_workload(spec);

    std::stringstream buf;
    write_workload(tasks, buf);
    const auto back = read_workload(buf);
    REQUIRE(back.size() == tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        CHECK(back[i].id == tasks[i].id);
        CHECK(back[i].ue_id == tasks[i].ue_id);
        CHECK(back[i].size_bits == tasks[i].size_bits);
        CHECK(back[i].arrival_s == tasks[i].arrival_s);
        CHECK(back[i].deadline_s == tasks[i].deadline_s);
    }

    std::istringstream junk("not a workload\n");
    CHECK_THROWS(read_workload(junk));
}
