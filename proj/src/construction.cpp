#include "webdir/construction.hpp"

#include <cctype>
#include <limits>

#include "webdir/error.hpp"

namespace webdir {

const char* placement_name(PlacementKind kind) {
    switch (kind) {
    case PlacementKind::NewChildCategory: return "new_child";
    case PlacementKind::NewSiblingCategory: return "new_sibling";
    case PlacementKind::MergeIntoExisting: return "merge";
    }
    return "placement";
}

AssignmentHook identity_hook() {
    return [](const Resource&, const ConceptVector& proposal) {
        return proposal;
    };
}

AssignmentHook override_hook(std::map<ResourceId, ConceptVector> overrides) {
    return [table = std::move(overrides)](const Resource& r,
                                          const ConceptVector& proposal) {
        auto it = table.find(r.id);
        return it == table.end() ? proposal : it->second;
    };
}

namespace {

void check_thresholds(const ThresholdConfig& cfg) {
    if (!(cfg.mindist_h >= 1.0) || !(cfg.mindist_v >= cfg.mindist_h))
        throw Error(Errc::InvalidThresholds,
                    "need 1 <= mindist_h <= mindist_v");
    if (!(cfg.sim_floor > 0.0) || cfg.sim_floor > 1.0)
        throw Error(Errc::InvalidThresholds, "sim_floor must be in (0, 1]");
}

std::string slugify(const std::string& token) {
    std::string slug;
    for (char ch : token) {
        if (std::isalnum(static_cast<unsigned char>(ch)))
            slug += static_cast<char>(
                std::tolower(static_cast<unsigned char>(ch)));
        else if (!slug.empty() && slug.back() != '-')
            slug += '-';
    }
    while (!slug.empty() && slug.back() == '-')
        slug.pop_back();
    return slug.empty() ? "c" : slug;
}

/// Url for a freshly created category: top concept of its vector plus the id
/// it will receive, which keeps urls unique and readable.
std::string synthesize_url(const WebDirectory& wd, const ConceptVector& v) {
    std::string base =
        "/" + slugify(v.top_concept().value_or("c")) + "-" +
        std::to_string(wd.next_id());
    std::string url = base;
    for (int n = 2; wd.has_url(url); ++n)
        url = base + "-" + std::to_string(n);
    return url;
}

CategoryId create_category(WebDirectory& wd, SemanticsBinding& binding,
                           CategoryId parent, const Resource& r,
                           const ConceptVector& v) {
    CategoryId id = wd.add_category(parent, synthesize_url(wd, v));
    wd.add_resource(id, r.id);
    binding.bind(id, v);
    return id;
}

} // namespace

std::pair<CategoryId, double>
find_closest_category(const WebDirectory& wd, const SemanticsBinding& binding,
                      const ConceptVector& v, double sim_floor) {
    if (wd.category_count() < 2)
        throw Error(Errc::OnlyRootPresent,
                    "no categories besides the root to compare against");
    CategoryId best = kNoCategory;
    double best_dist = std::numeric_limits<double>::infinity();
    std::uint32_t best_level = 0;
    for (const auto& [id, c] : wd.categories()) {
        if (id == wd.root())
            continue;
        double d = distance(v, binding.vector_for(id), sim_floor);
        if (d < best_dist ||
            (d == best_dist && c.level < best_level)) {
            best = id;
            best_dist = d;
            best_level = c.level;
        }
        // equal distance and level: the map iterates ids ascending, keep first
    }
    return {best, best_dist};
}

PlacementOutcome place_resource(WebDirectory& wd, SemanticsBinding& binding,
                                const Resource& r, const ThresholdConfig& cfg,
                                const AssignmentHook& hook) {
    check_thresholds(cfg);
    ConceptVector v = hook(r, sem(r));
    if (v.empty())
        throw Error(Errc::EmptyResource,
                    "assignment hook returned an empty vector for '" + r.id +
                        "'");

    if (wd.category_count() == 1) {
        // only the root: no distances to compute, open the first category
        CategoryId id = create_category(wd, binding, wd.root(), r, v);
        return {{PlacementKind::NewChildCategory, wd.root(),
                 std::numeric_limits<double>::infinity()},
                id};
    }

    auto [anchor, d] = find_closest_category(wd, binding, v, cfg.sim_floor);
    PlacementKind kind;
    if (cfg.branch_order == BranchOrder::VerticalFirst) {
        kind = d > cfg.mindist_v   ? PlacementKind::NewChildCategory
               : d > cfg.mindist_h ? PlacementKind::NewSiblingCategory
                                   : PlacementKind::MergeIntoExisting;
    } else {
        kind = d > cfg.mindist_h   ? PlacementKind::NewSiblingCategory
               : d > cfg.mindist_v ? PlacementKind::NewChildCategory
                                   : PlacementKind::MergeIntoExisting;
    }
    switch (kind) {
    case PlacementKind::NewChildCategory:
        return {{kind, anchor, d}, create_category(wd, binding, anchor, r, v)};
    case PlacementKind::NewSiblingCategory: {
        CategoryId parent = wd.parent_of(anchor).value_or(wd.root());
        return {{kind, anchor, d}, create_category(wd, binding, parent, r, v)};
    }
    case PlacementKind::MergeIntoExisting:
        break;
    }
    wd.add_resource(anchor, r.id);
    binding.merge_into(anchor, v);
    return {{kind, anchor, d}, anchor};
}

void seed_top_categories(WebDirectory& wd, SemanticsBinding& binding,
                         std::span<const TopicSeed> topics) {
    if (wd.category_count() != 1)
        throw Error(Errc::DirectoryNotEmpty,
                    "topics can only seed a root-only directory");
    for (const auto& topic : topics) {
        CategoryId id = wd.add_category(wd.root(), topic.url);
        binding.bind(id, topic.semantics);
    }
}

BuildResult build_directory(std::span<const Resource> resources,
                            const ThresholdConfig& cfg,
                            const AssignmentHook& hook,
                            std::span<const TopicSeed> topics) {
    check_thresholds(cfg);
    BuildResult result;
    result.binding.bind(result.directory.root(), {});
    if (!topics.empty())
        seed_top_categories(result.directory, result.binding, topics);
    for (const Resource& r : resources) {
        try {
            PlacementOutcome out =
                place_resource(result.directory, result.binding, r, cfg, hook);
            result.log.push_back({r.id, out.decision, out.category});
        } catch (const Error& e) {
            throw Error(e.code(), "resource '" + r.id + "': " + e.message());
        }
    }
    return result;
}

std::pair<WebDirectory, SemanticsBinding>
replay_log(std::span<const Resource> resources, const BuildLog& log,
           const AssignmentHook& hook, std::span<const TopicSeed> topics) {
    std::map<ResourceId, const Resource*> by_id;
    for (const Resource& r : resources)
        by_id.emplace(r.id, &r);

    WebDirectory wd;
    SemanticsBinding binding;
    binding.bind(wd.root(), {});
    if (!topics.empty())
        seed_top_categories(wd, binding, topics);

    for (const BuildLogEntry& entry : log) {
        auto it = by_id.find(entry.resource);
        if (it == by_id.end())
            throw Error(Errc::ReplayMismatch,
                        "log names resource '" + entry.resource +
                            "' that is not in the input");
        const Resource& r = *it->second;
        ConceptVector v = hook(r, sem(r));
        CategoryId produced = kNoCategory;
        switch (entry.decision.kind) {
        case PlacementKind::NewChildCategory:
            produced = create_category(wd, binding, entry.decision.anchor, r, v);
            break;
        case PlacementKind::NewSiblingCategory: {
            CategoryId parent =
                wd.parent_of(entry.decision.anchor).value_or(wd.root());
            produced = create_category(wd, binding, parent, r, v);
            break;
        }
        case PlacementKind::MergeIntoExisting:
            wd.add_resource(entry.decision.anchor, r.id);
            binding.merge_into(entry.decision.anchor, v);
            produced = entry.decision.anchor;
            break;
        }
        if (produced != entry.category)
            throw Error(Errc::ReplayMismatch,
                        "resource '" + entry.resource + "' landed in " +
                            std::to_string(produced) + " but the log says " +
                            std::to_string(entry.category));
    }
    return {std::move(wd), std::move(binding)};
}

} // namespace webdir
