#include "mecsim/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mecsim {

namespace {

std::vector<TaskDecision> task_options(Mode mode, const std::vector<ServerSpec>& servers,
                                       const std::vector<int>& rbs, double p_step) {
    std::vector<double> p_values;
    if (mode == Mode::LocalOnly) {
        p_values = {1.0};
    } else if (mode == Mode::OffloadOnly) {
        p_values = {0.0};
    } else {
        const int n = static_cast<int>(std::round(1.0 / p_step));
        if (std::abs(1.0 / p_step - n) > 1e-9)
            throw std::invalid_argument("1/p_grid_step must be an integer");
        for (int k = 0; k <= n; ++k) p_values.push_back(static_cast<double>(k) / n);
    }

    std::vector<TaskDecision> options;
    for (double p : p_values) {
        if (p == 1.0) {
            options.push_back({1.0, std::nullopt, rbs.front()});
            continue;
        }
        for (const auto& srv : servers)
            for (int r : rbs) options.push_back({p, srv.id, r});
        if (mode == Mode::OffloadOnly) options.push_back({p, std::nullopt, rbs.front()});
    }
    return options;
}

}  // namespace

EnumerationResult enumerate_exhaustive(const Instance& inst, Mode mode, const ExactConfig& cfg) {
    std::vector<int> rbs = cfg.rb_choices;
    if (rbs.empty()) rbs = {rb_max(inst.radio)};
    const auto options = task_options(mode, inst.servers, rbs, cfg.p_grid_step);

    EnumerationResult result;
    result.value.total = std::numeric_limits<double>::infinity();
    result.value.feasible = false;

    Decision current;
    current.per_task.resize(inst.tasks.size());

    // Plain odometer over the cartesian product of per-task options.
    std::vector<std::size_t> pick(inst.tasks.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < pick.size(); ++i) current.per_task[i] = options[pick[i]];
        ++result.leaves;
        const ObjectiveValue v = evaluate(inst.tasks, current, mode, inst.servers, inst.model,
                                          inst.radio, inst.penalty);
        if (v.feasible && v.total < result.value.total) {
            result.value = v;
            result.best = current;
        }

        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == options.size()) pick[i++] = 0;
        if (i == pick.size()) break;
        if (pick.empty()) break;
    }
    return result;
}

}  // namespace mecsim
