#include "webdir/simulation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>

#include "webdir/error.hpp"

namespace webdir {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                          std::uint64_t b) {
    return splitmix64(base ^ splitmix64(a ^ splitmix64(b)));
}

namespace {

std::vector<CategoryId> bfs_path(const WebDirectory& wd, CategoryId from,
                                 CategoryId to) {
    if (from == to)
        return {from};
    std::map<CategoryId, CategoryId> parent;
    parent[from] = from;
    std::deque<CategoryId> queue{from};
    while (!queue.empty()) {
        CategoryId cur = queue.front();
        queue.pop_front();
        for (CategoryId next : wd.out_neighbors(cur)) {
            if (parent.count(next))
                continue;
            parent[next] = cur;
            if (next == to) {
                std::vector<CategoryId> path{to};
                for (CategoryId at = to; at != from; at = parent[at])
                    path.push_back(parent[at]);
                std::reverse(path.begin(), path.end());
                return path;
            }
            queue.push_back(next);
        }
    }
    throw Error(Errc::Unreachable,
                "no path from " + std::to_string(from) + " to " +
                    std::to_string(to));
}

} // namespace

BrowseTrace simulate_browse(const SimulationRun& run,
                            const ResourceId& target) {
    const WebDirectory& wd = *run.directory;
    const SemanticsBinding& binding = *run.binding;
    auto target_cat = wd.category_of_resource(target);
    if (!target_cat)
        throw Error(Errc::UnknownTarget,
                    "no category lists resource '" + target + "'");

    BrowseTrace trace;
    trace.target_resource = target;
    trace.target_category = *target_cat;

    std::size_t budget = run.strategy.step_budget
                             ? run.strategy.step_budget
                             : 10 * static_cast<std::size_t>(wd.depth());

    switch (run.strategy.kind) {
    case StrategyKind::OptimalBfs:
        trace.steps = bfs_path(wd, wd.root(), *target_cat);
        return trace;

    case StrategyKind::GreedySemantic: {
        ConceptVector goal = resolve_semantics(wd, binding, *target_cat);
        CategoryId cur = wd.root();
        CategoryId prev = kNoCategory;
        trace.steps.push_back(cur);
        for (std::size_t moves = 0; cur != *target_cat && moves < budget;
             ++moves) {
            std::vector<CategoryId> neighbors = wd.out_neighbors(cur);
            // one-step memory: no immediate backtracking unless forced
            if (neighbors.size() > 1)
                std::erase(neighbors, prev);
            CategoryId pick = neighbors.front();
            double best =
                distance(resolve_semantics(wd, binding, pick), goal);
            for (std::size_t i = 1; i < neighbors.size(); ++i) {
                double d = distance(
                    resolve_semantics(wd, binding, neighbors[i]), goal);
                if (d < best) {
                    best = d;
                    pick = neighbors[i];
                }
            }
            prev = cur;
            cur = pick;
            trace.steps.push_back(cur);
        }
        trace.truncated = cur != *target_cat;
        return trace;
    }

    case StrategyKind::RandomWalk: {
        std::mt19937_64 rng(run.strategy.rng_seed);
        CategoryId cur = wd.root();
        trace.steps.push_back(cur);
        for (std::size_t moves = 0; cur != *target_cat && moves < budget;
             ++moves) {
            std::vector<CategoryId> neighbors = wd.out_neighbors(cur);
            std::uniform_int_distribution<std::size_t> pick(
                0, neighbors.size() - 1);
            cur = neighbors[pick(rng)];
            trace.steps.push_back(cur);
        }
        trace.truncated = cur != *target_cat;
        return trace;
    }
    }
    throw Error(Errc::UnknownTarget, "unknown strategy");
}

ExperimentResult run_experiment_full(const SimulationRun& run,
                                     std::size_t repetitions,
                                     const MetricsOptions& options) {
    ExperimentResult result;
    for (std::size_t ti = 0; ti < run.targets.size(); ++ti) {
        for (std::size_t rep = 0; rep < repetitions; ++rep) {
            SimulationRun one = run;
            one.strategy.rng_seed =
                derive_seed(run.strategy.rng_seed, ti, rep);
            BrowseTrace trace = simulate_browse(one, run.targets[ti]);
            result.reports.push_back(
                evaluate_trace(*run.directory, *run.binding, trace, options));
            result.traces.push_back(std::move(trace));
        }
    }
    return result;
}

std::vector<MetricsReport> run_experiment(const SimulationRun& run,
                                          std::size_t repetitions,
                                          const MetricsOptions& options) {
    return run_experiment_full(run, repetitions, options).reports;
}

} // namespace webdir
