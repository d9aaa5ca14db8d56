#ifndef WEBDIR_CONSTRUCTION_HPP
#define WEBDIR_CONSTRUCTION_HPP

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "webdir/semantics.hpp"

namespace webdir {

/// Which threshold is consulted first when both could fire. VerticalFirst is
/// the default: a distance beyond mindist_v opens a new level below the
/// anchor, otherwise a distance beyond mindist_h opens a sibling.
/// HorizontalFirst gives the sibling test precedence; with mindist_v >=
/// mindist_h that branch order can never create a child and is kept only for
/// comparison runs.
enum class BranchOrder { VerticalFirst, HorizontalFirst };

struct ThresholdConfig {
    double mindist_h = 1.0; // sibling threshold, >= 1
    double mindist_v = 1.0; // child threshold, >= mindist_h
    double sim_floor = kDefaultSimFloor;
    BranchOrder branch_order = BranchOrder::VerticalFirst;
};

enum class PlacementKind {
    NewChildCategory,   // distance > mindist_v
    NewSiblingCategory, // mindist_h < distance <= mindist_v
    MergeIntoExisting,  // distance <= mindist_h
};

const char* placement_name(PlacementKind kind);

/// Outcome of placing one resource. `anchor` is the closest category found;
/// for the very first resource (only the root exists, nothing to compare
/// against) the anchor is the root and the distance is +infinity.
struct PlacementDecision {
    PlacementKind kind;
    CategoryId anchor = kNoCategory;
    double distance = 0.0;

    bool operator==(const PlacementDecision&) const = default;
};

struct BuildLogEntry {
    ResourceId resource;
    PlacementDecision decision;
    CategoryId category = kNoCategory; // where the resource ended up

    bool operator==(const BuildLogEntry&) const = default;
};

/// One entry per input resource, in input order.
using BuildLog = std::vector<BuildLogEntry>;

/// The assignment step: receives the identified vector and may override it.
/// The identity hook is the fully automated pipeline; a lookup-table hook is
/// the manual override channel. Must return a non-empty vector.
using AssignmentHook =
    std::function<ConceptVector(const Resource&, const ConceptVector&)>;

AssignmentHook identity_hook();

/// Hook that replaces the proposal for resources present in `overrides`.
AssignmentHook override_hook(std::map<ResourceId, ConceptVector> overrides);

/// A predefined top-level topic: installed as a level-2 category with a
/// constant vector before any resource is placed.
struct TopicSeed {
    std::string url;
    ConceptVector semantics;
};

/// Non-root category whose bound vector is closest to `v`, with that
/// distance. Ties prefer the lower level, then the lower id. Throws
/// OnlyRootPresent when there is nothing to compare against.
std::pair<CategoryId, double>
find_closest_category(const WebDirectory& wd, const SemanticsBinding& binding,
                      const ConceptVector& v,
                      double sim_floor = kDefaultSimFloor);

struct PlacementOutcome {
    PlacementDecision decision;
    CategoryId category = kNoCategory;
};

/// Places one resource: derives its vector, lets the hook confirm or replace
/// it, then either merges into the closest category or opens a new one next
/// to or below it, per the thresholds. Mutates wd and binding together.
PlacementOutcome place_resource(WebDirectory& wd, SemanticsBinding& binding,
                                const Resource& r, const ThresholdConfig& cfg,
                                const AssignmentHook& hook);

struct BuildResult {
    WebDirectory directory;
    SemanticsBinding binding;
    BuildLog log;
};

/// Folds place_resource over the stream, starting from a root-only directory
/// (optionally pre-seeded with topics). The result depends on input order by
/// design. Errors carry the offending resource id.
BuildResult build_directory(std::span<const Resource> resources,
                            const ThresholdConfig& cfg,
                            const AssignmentHook& hook = identity_hook(),
                            std::span<const TopicSeed> topics = {});

/// Installs predefined topics as level-2 children of the root. The directory
/// must still be root-only.
void seed_top_categories(WebDirectory& wd, SemanticsBinding& binding,
                         std::span<const TopicSeed> topics);

/// Re-applies a build log mechanically (no similarity search): every entry's
/// recorded decision is executed against the named anchor. Produces the same
/// directory the original build did; a log that does not match the resources
/// throws ReplayMismatch.
std::pair<WebDirectory, SemanticsBinding>
replay_log(std::span<const Resource> resources, const BuildLog& log,
           const AssignmentHook& hook = identity_hook(),
           std::span<const TopicSeed> topics = {});

} // namespace webdir

#endif
