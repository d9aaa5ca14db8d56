#ifndef WEBDIR_DIRECTORY_HPP
#define WEBDIR_DIRECTORY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "webdir/types.hpp"

namespace webdir {

/// One node of the directory graph.
struct Category {
    CategoryId id = kNoCategory;
    std::uint32_t level = 0;           // root is level 1
    std::string url;                   // unique locator
    CategoryId parent = kNoCategory;   // kNoCategory for the root
    std::vector<CategoryId> children;  // insertion order
    std::vector<ResourceId> resources; // insertion order, single-homed
    bool non_semantic = false;         // alphabet/date partition marker

    bool operator==(const Category&) const = default;
};

/// Directed ad-hoc edge between two categories that are not parent/child.
struct CrossLink {
    CategoryId from = kNoCategory;
    CategoryId to = kNoCategory;

    bool operator==(const CrossLink&) const = default;
};

enum class ViolationKind {
    BadRoot,
    OrphanCategory,
    BadLevel,
    DuplicateUrl,
    DisjointComponent,
    BadDepth,
    BadCrossLink,
    DuplicateResource,
};

const char* violation_name(ViolationKind kind);

struct StructuralViolation {
    ViolationKind kind;
    CategoryId category = kNoCategory;
    std::string detail;
};

/// Whether queries may traverse cross-links against their stored direction.
/// Tree edges are always walkable both ways; the default keeps cross-links
/// one-way, matching how they are drawn.
enum class CrossLinkTraversal { Directed, Undirected };

/// Rooted graph of categories: a parent/child tree plus directed cross-links.
/// Mutating operations preserve the structural invariants (one root, levels
/// consistent, unique urls, no self-loops or parallel edges); from_parts()
/// skips the checks so deserialized data can be validated as a whole.
///
/// Plain value type: copy freely, hand copies to other threads. Mutation of
/// one instance must stay single-writer; all query methods are const.
class WebDirectory {
public:
    /// Root-only directory: one level-1 category with url "/".
    WebDirectory();

    /// Rebuilds a directory from raw parts without invariant checks.
    /// Call validate() on the result before trusting it.
    static WebDirectory from_parts(std::vector<Category> categories,
                                   std::vector<CrossLink> cross_links,
                                   CategoryId root);

    CategoryId root() const { return root_; }
    std::uint32_t depth() const { return depth_; }
    std::size_t category_count() const { return categories_.size(); }
    std::size_t resource_count() const { return resource_index_.size(); }

    bool contains(CategoryId id) const;
    bool has_url(const std::string& url) const;

    /// Throws UnknownCategory when the id is absent.
    const Category& category(CategoryId id) const;

    const std::map<CategoryId, Category>& categories() const { return categories_; }
    const std::vector<CrossLink>& cross_links() const { return cross_links_; }

    /// Id the next add_category() will assign.
    CategoryId next_id() const { return next_id_; }

    std::optional<CategoryId> parent_of(CategoryId id) const;
    std::optional<CategoryId> category_of_resource(const ResourceId& r) const;

    CrossLinkTraversal cross_link_traversal() const { return traversal_; }
    void set_cross_link_traversal(CrossLinkTraversal t) { traversal_ = t; }

    /// Appends a new child under `parent`; returns its id.
    /// Throws UnknownParent / DuplicateUrl.
    CategoryId add_category(CategoryId parent, std::string url);

    /// Throws UnknownCategory / SelfLoop / ParallelEdge / TreeEdgeShadow.
    void add_cross_link(CategoryId from, CategoryId to);

    /// Lists resource `r` under category `id`. A resource lives in exactly
    /// one category; relisting throws DuplicateResource.
    void add_resource(CategoryId id, ResourceId r);

    void set_non_semantic(CategoryId id, bool flag);

    /// Categories adjacent to `id`: its parent, its children, and cross-link
    /// targets (plus cross-link sources under Undirected traversal).
    /// Sorted ascending, no duplicates.
    std::vector<CategoryId> out_neighbors(CategoryId id) const;

    /// Number of categories on the shortest path, counting both endpoints
    /// (from == to gives 1). Tree edges are walked both ways, cross-links per
    /// the traversal policy. Throws Unreachable if no path exists (cannot
    /// happen in a validated directory).
    std::size_t shortest_path_length(CategoryId from, CategoryId to) const;

    /// Checks every structural invariant; an empty result means the
    /// directory is well formed. Violations are data, not errors.
    std::vector<StructuralViolation> validate() const;

    /// Derived view with every non_semantic category removed: its children
    /// are re-attached to its parent (keeping child order), its resources
    /// move to the nearest surviving ancestor, and cross-link endpoints are
    /// remapped the same way (links that would become self-loops, parallel
    /// edges or tree edges are dropped). Levels and depth are recomputed.
    /// Throws RootNonSemantic when the root itself is flagged.
    WebDirectory contract_non_semantic_levels() const;

    bool operator==(const WebDirectory&) const = default;

private:
    std::map<CategoryId, Category> categories_;
    std::vector<CrossLink> cross_links_;
    CategoryId root_ = kRootId;
    std::uint32_t depth_ = 1;
    CategoryId next_id_ = kRootId + 1;
    CrossLinkTraversal traversal_ = CrossLinkTraversal::Directed;

    // derived indexes, rebuilt by from_parts
    std::set<std::string> urls_;
    std::map<ResourceId, CategoryId> resource_index_;

    bool tree_adjacent(CategoryId a, CategoryId b) const;
};

} // namespace webdir

#endif
