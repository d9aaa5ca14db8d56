#ifndef WEBDIR_METRICS_HPP
#define WEBDIR_METRICS_HPP

#include <optional>
#include <span>
#include <vector>

#include "webdir/semantics.hpp"

namespace webdir {

/// One browsing session: the categories visited in order, ending at the
/// category that holds the wanted resource. Truncated traces gave up before
/// reaching it (simulation budget ran out) and skip the target checks.
struct BrowseTrace {
    std::vector<CategoryId> steps;
    ResourceId target_resource;
    CategoryId target_category = kNoCategory;
    bool truncated = false;

    bool operator==(const BrowseTrace&) const = default;
};

/// Throws InvalidTrace unless the steps are non-empty, consecutive steps are
/// adjacent in the directory, and (for complete traces) the last step is the
/// target category and actually lists the target resource.
void validate_trace(const WebDirectory& wd, const BrowseTrace& b);

/// 1 - min|b| / |b|: how much longer the browse was than the shortest
/// possible path, in [0,1]; 0 means optimal. Lengths count categories.
double path_ratio(const WebDirectory& wd, const BrowseTrace& b);

/// Maximum number of repeated visits to any single category; 0 when all
/// steps are distinct. Assumes a validated trace.
std::size_t max_revisit(const BrowseTrace& b);

struct DdpSeries {
    std::vector<double> terms;        // step-wise distance decrease
    std::vector<double> partial_sums; // prefix sums of terms
    double final_sum = 0.0;           // telescopes to d(first,T) - d(last,T)
};

/// Distance-decrease progression toward the target category's vector.
/// Category vectors resolve through the resource/children/constant cascade.
/// Throws MissingSemantics when a trace category has no binding entry.
DdpSeries ddp(const WebDirectory& wd, const SemanticsBinding& binding,
              const BrowseTrace& b, double sim_floor = kDefaultSimFloor);

/// True iff the semantic distance from the root's content to each visited
/// category never decreases along the trace. The trace must start at the
/// root (throws TraceNotFromRoot otherwise).
bool root_distance_monotone(const WebDirectory& wd,
                            const SemanticsBinding& binding,
                            const BrowseTrace& b,
                            double sim_floor = kDefaultSimFloor);

struct MetricsOptions {
    bool bypass_non_semantic = false; // compute on the contracted view
    double ddp_tolerance = 1e-6;      // |final sum| <= tolerance counts as converged
    double sim_floor = kDefaultSimFloor;
};

struct MetricsReport {
    ResourceId target_resource;
    CategoryId target_category = kNoCategory;
    std::size_t trace_len = 0;
    std::size_t min_len = 0;
    double pr = 0.0; // meaningful only when !truncated
    std::size_t mr = 0;
    std::vector<double> ddp_terms;
    std::vector<double> ddp_partial_sums;
    double ddp_final = 0.0;
    bool ddp_converged = false;
    std::optional<bool> root_monotone; // unset when the trace starts elsewhere
    bool truncated = false;
};

/// All measures over one trace. With bypass_non_semantic set, everything is
/// computed on the contracted directory with flagged steps elided from the
/// trace (the target is remapped if it was flagged away).
MetricsReport evaluate_trace(const WebDirectory& wd,
                             const SemanticsBinding& binding,
                             const BrowseTrace& b,
                             const MetricsOptions& options = {});

struct Stats {
    std::size_t count = 0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double stddev = 0.0; // population
};

struct AggregateSummary {
    std::size_t total = 0;
    std::size_t truncated = 0;
    Stats pr;                           // complete traces only
    Stats mr;                           // all traces
    double ddp_converged_fraction = 0.0; // of complete traces
    double root_monotone_fraction = 0.0; // of traces starting at the root
};

/// Summary statistics over a batch of reports. Truncated traces never enter
/// the path-ratio or convergence statistics (their target was never reached)
/// but are counted. Throws EmptyReportSet for an empty batch.
AggregateSummary aggregate(std::span<const MetricsReport> reports);

} // namespace webdir

#endif
