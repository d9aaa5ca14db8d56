#include "webdir/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "webdir/error.hpp"

namespace webdir {

void validate_trace(const WebDirectory& wd, const BrowseTrace& b) {
    if (b.steps.empty())
        throw Error(Errc::InvalidTrace, "trace has no steps");
    for (CategoryId step : b.steps)
        if (!wd.contains(step))
            throw Error(Errc::InvalidTrace,
                        "step " + std::to_string(step) +
                            " is not a category");
    for (std::size_t i = 0; i + 1 < b.steps.size(); ++i) {
        auto neighbors = wd.out_neighbors(b.steps[i]);
        if (!std::binary_search(neighbors.begin(), neighbors.end(),
                                b.steps[i + 1]))
            throw Error(Errc::InvalidTrace,
                        "steps " + std::to_string(b.steps[i]) + " -> " +
                            std::to_string(b.steps[i + 1]) +
                            " are not adjacent");
    }
    if (b.truncated)
        return;
    if (!wd.contains(b.target_category))
        throw Error(Errc::InvalidTrace, "target category does not exist");
    if (b.steps.back() != b.target_category)
        throw Error(Errc::InvalidTrace,
                    "trace ends at " + std::to_string(b.steps.back()) +
                        ", not at the target category " +
                        std::to_string(b.target_category));
    const Category& target = wd.category(b.target_category);
    if (std::find(target.resources.begin(), target.resources.end(),
                  b.target_resource) == target.resources.end())
        throw Error(Errc::InvalidTrace,
                    "target category does not list resource '" +
                        b.target_resource + "'");
}

double path_ratio(const WebDirectory& wd, const BrowseTrace& b) {
    if (b.truncated)
        throw Error(Errc::InvalidTrace,
                    "path ratio is undefined for a truncated trace");
    validate_trace(wd, b);
    std::size_t len = b.steps.size();
    std::size_t min_len =
        wd.shortest_path_length(b.steps.front(), b.target_category);
    if (min_len > len)
        throw Error(Errc::InvalidTrace,
                    "trace shorter than the shortest path");
    return 1.0 - static_cast<double>(min_len) / static_cast<double>(len);
}

std::size_t max_revisit(const BrowseTrace& b) {
    std::map<CategoryId, std::size_t> visits;
    for (CategoryId step : b.steps)
        ++visits[step];
    std::size_t mr = 0;
    for (const auto& [id, n] : visits)
        mr = std::max(mr, n - 1);
    return mr;
}

namespace {

ConceptVector resolved_or_throw(const WebDirectory& wd,
                                const SemanticsBinding& binding,
                                CategoryId id) {
    if (!binding.contains(id))
        throw Error(Errc::MissingSemantics,
                    "category " + std::to_string(id) +
                        " has no semantics entry");
    return resolve_semantics(wd, binding, id);
}

} // namespace

DdpSeries ddp(const WebDirectory& wd, const SemanticsBinding& binding,
              const BrowseTrace& b, double sim_floor) {
    if (b.steps.empty())
        throw Error(Errc::InvalidTrace, "trace has no steps");
    ConceptVector target = resolved_or_throw(wd, binding, b.target_category);
    std::vector<double> dists;
    dists.reserve(b.steps.size());
    for (CategoryId step : b.steps)
        dists.push_back(
            distance(resolved_or_throw(wd, binding, step), target, sim_floor));

    DdpSeries series;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < dists.size(); ++i) {
        double term = dists[i] - dists[i + 1];
        sum += term;
        series.terms.push_back(term);
        series.partial_sums.push_back(sum);
    }
    series.final_sum = series.partial_sums.empty() ? 0.0
                                                   : series.partial_sums.back();
    return series;
}

bool root_distance_monotone(const WebDirectory& wd,
                            const SemanticsBinding& binding,
                            const BrowseTrace& b, double sim_floor) {
    if (b.steps.empty() || b.steps.front() != wd.root())
        throw Error(Errc::TraceNotFromRoot,
                    "trace does not start at the root");
    ConceptVector root_vec = resolved_or_throw(wd, binding, wd.root());
    double prev = 0.0;
    for (std::size_t i = 0; i < b.steps.size(); ++i) {
        double d = distance(resolved_or_throw(wd, binding, b.steps[i]),
                            root_vec, sim_floor);
        if (i > 0 && d < prev)
            return false;
        prev = d;
    }
    return true;
}

namespace {

/// Trace restated on the contracted directory: flagged steps drop out,
/// consecutive duplicates collapse, and a flagged target is replaced by the
/// surviving ancestor that inherited its resources.
BrowseTrace elide_flagged_steps(const WebDirectory& contracted,
                                const BrowseTrace& b) {
    BrowseTrace out;
    out.target_resource = b.target_resource;
    out.truncated = b.truncated;
    for (CategoryId step : b.steps) {
        if (!contracted.contains(step))
            continue;
        if (!out.steps.empty() && out.steps.back() == step)
            continue;
        out.steps.push_back(step);
    }
    out.target_category = b.target_category;
    if (!contracted.contains(out.target_category)) {
        auto moved = contracted.category_of_resource(b.target_resource);
        if (!moved)
            throw Error(Errc::InvalidTrace,
                        "target resource lost by contraction");
        out.target_category = *moved;
    }
    return out;
}

} // namespace

MetricsReport evaluate_trace(const WebDirectory& wd,
                             const SemanticsBinding& binding,
                             const BrowseTrace& b,
                             const MetricsOptions& options) {
    const WebDirectory* dir = &wd;
    WebDirectory contracted;
    BrowseTrace trace = b;
    if (options.bypass_non_semantic) {
        contracted = wd.contract_non_semantic_levels();
        trace = elide_flagged_steps(contracted, b);
        dir = &contracted;
    }
    validate_trace(*dir, trace);

    MetricsReport report;
    report.target_resource = trace.target_resource;
    report.target_category = trace.target_category;
    report.truncated = trace.truncated;
    report.trace_len = trace.steps.size();
    report.min_len =
        dir->shortest_path_length(trace.steps.front(), trace.target_category);
    report.mr = max_revisit(trace);
    if (!trace.truncated)
        report.pr = path_ratio(*dir, trace);

    DdpSeries series = ddp(*dir, binding, trace, options.sim_floor);
    report.ddp_terms = std::move(series.terms);
    report.ddp_partial_sums = std::move(series.partial_sums);
    report.ddp_final = series.final_sum;
    report.ddp_converged = std::fabs(report.ddp_final) <= options.ddp_tolerance;

    if (trace.steps.front() == dir->root())
        report.root_monotone =
            root_distance_monotone(*dir, binding, trace, options.sim_floor);
    return report;
}

namespace {

Stats compute_stats(const std::vector<double>& xs) {
    Stats s;
    s.count = xs.size();
    if (xs.empty())
        return s;
    s.min = xs.front();
    s.max = xs.front();
    double sum = 0.0;
    for (double x : xs) {
        sum += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = sum / static_cast<double>(xs.size());
    double sq = 0.0;
    for (double x : xs)
        sq += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(xs.size()));
    return s;
}

} // namespace

AggregateSummary aggregate(std::span<const MetricsReport> reports) {
    if (reports.empty())
        throw Error(Errc::EmptyReportSet, "no reports to aggregate");
    AggregateSummary summary;
    summary.total = reports.size();
    std::vector<double> prs;
    std::vector<double> mrs;
    std::size_t converged = 0;
    std::size_t monotone = 0;
    std::size_t monotone_known = 0;
    for (const MetricsReport& r : reports) {
        mrs.push_back(static_cast<double>(r.mr));
        if (r.truncated) {
            ++summary.truncated;
        } else {
            prs.push_back(r.pr);
            if (r.ddp_converged)
                ++converged;
        }
        if (r.root_monotone.has_value()) {
            ++monotone_known;
            if (*r.root_monotone)
                ++monotone;
        }
    }
    summary.pr = compute_stats(prs);
    summary.mr = compute_stats(mrs);
    if (!prs.empty())
        summary.ddp_converged_fraction =
            static_cast<double>(converged) / static_cast<double>(prs.size());
    if (monotone_known > 0)
        summary.root_monotone_fraction =
            static_cast<double>(monotone) /
            static_cast<double>(monotone_known);
    return summary;
}

} // namespace webdir
