#ifndef WEBDIR_SIMULATION_HPP
#define WEBDIR_SIMULATION_HPP

#include <cstdint>

#include "webdir/metrics.hpp"

namespace webdir {

enum class StrategyKind {
    OptimalBfs,     // shortest root-to-target path
    GreedySemantic, // always step to the neighbor closest to the target
    RandomWalk,     // uniform random neighbor, seeded
};

struct AgentStrategy {
    StrategyKind kind = StrategyKind::OptimalBfs;
    std::size_t step_budget = 0; // moves before giving up; 0 = 10 x depth
    std::uint64_t rng_seed = 0;
};

struct SimulationRun {
    const WebDirectory* directory = nullptr;
    const SemanticsBinding* binding = nullptr;
    std::vector<ResourceId> targets;
    AgentStrategy strategy;
};

/// Deterministic per-trace seed from the base seed and two indexes
/// (splitmix-style mixing), so experiment output is replayable regardless of
/// evaluation order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                          std::uint64_t b);

/// One browsing session from the root toward the category holding `target`.
/// Greedy agents avoid stepping straight back unless there is no other
/// neighbor; walks that exhaust the budget come back flagged truncated.
/// Throws UnknownTarget when no category lists the resource.
BrowseTrace simulate_browse(const SimulationRun& run,
                            const ResourceId& target);

struct ExperimentResult {
    std::vector<BrowseTrace> traces;
    std::vector<MetricsReport> reports;
};

/// Every target, `repetitions` times each: simulate, then evaluate. Fully
/// deterministic for a fixed base seed.
ExperimentResult run_experiment_full(const SimulationRun& run,
                                     std::size_t repetitions,
                                     const MetricsOptions& options = {});

std::vector<MetricsReport> run_experiment(const SimulationRun& run,
                                          std::size_t repetitions,
                                          const MetricsOptions& options = {});

} // namespace webdir

#endif
