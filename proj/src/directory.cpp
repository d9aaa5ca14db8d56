#include "webdir/directory.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "webdir/error.hpp"

namespace webdir {

const char* errc_name(Errc code) {
    switch (code) {
    case Errc::UnknownCategory: return "UnknownCategory";
    case Errc::UnknownParent: return "UnknownParent";
    case Errc::DuplicateUrl: return "DuplicateUrl";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::ParallelEdge: return "ParallelEdge";
    case Errc::TreeEdgeShadow: return "TreeEdgeShadow";
    case Errc::Unreachable: return "Unreachable";
    case Errc::RootNonSemantic: return "RootNonSemantic";
    case Errc::DuplicateResource: return "DuplicateResource";
    case Errc::EmptyResource: return "EmptyResource";
    case Errc::InvalidVector: return "InvalidVector";
    case Errc::ModeConditionUnmet: return "ModeConditionUnmet";
    case Errc::OnlyRootPresent: return "OnlyRootPresent";
    case Errc::InvalidThresholds: return "InvalidThresholds";
    case Errc::DirectoryNotEmpty: return "DirectoryNotEmpty";
    case Errc::ReplayMismatch: return "ReplayMismatch";
    case Errc::InvalidTrace: return "InvalidTrace";
    case Errc::MissingSemantics: return "MissingSemantics";
    case Errc::TraceNotFromRoot: return "TraceNotFromRoot";
    case Errc::EmptyReportSet: return "EmptyReportSet";
    case Errc::UnknownTarget: return "UnknownTarget";
    case Errc::ParseError: return "ParseError";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::SchemaInvalid: return "SchemaInvalid";
    case Errc::IoError: return "IoError";
    }
    return "Error";
}

const char* violation_name(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::BadRoot: return "BadRoot";
    case ViolationKind::OrphanCategory: return "OrphanCategory";
    case ViolationKind::BadLevel: return "BadLevel";
    case ViolationKind::DuplicateUrl: return "DuplicateUrl";
    case ViolationKind::DisjointComponent: return "DisjointComponent";
    case ViolationKind::BadDepth: return "BadDepth";
    case ViolationKind::BadCrossLink: return "BadCrossLink";
    case ViolationKind::DuplicateResource: return "DuplicateResource";
    }
    return "Violation";
}

WebDirectory::WebDirectory() {
    Category root;
    root.id = kRootId;
    root.level = 1;
    root.url = "/";
    root.parent = kNoCategory;
    urls_.insert(root.url);
    categories_.emplace(kRootId, std::move(root));
}

WebDirectory WebDirectory::from_parts(std::vector<Category> categories,
                                      std::vector<CrossLink> cross_links,
                                      CategoryId root) {
    WebDirectory wd;
    wd.categories_.clear();
    wd.urls_.clear();
    wd.root_ = root;
    wd.cross_links_ = std::move(cross_links);
    wd.depth_ = 0;
    wd.next_id_ = root + 1;
    for (auto& c : categories) {
        wd.depth_ = std::max(wd.depth_, c.level);
        wd.next_id_ = std::max(wd.next_id_, c.id + 1);
        wd.urls_.insert(c.url);
        for (const auto& r : c.resources)
            wd.resource_index_.emplace(r, c.id);
        wd.categories_.emplace(c.id, std::move(c));
    }
    return wd;
}

bool WebDirectory::contains(CategoryId id) const {
    return categories_.count(id) != 0;
}

bool WebDirectory::has_url(const std::string& url) const {
    return urls_.count(url) != 0;
}

const Category& WebDirectory::category(CategoryId id) const {
    auto it = categories_.find(id);
    if (it == categories_.end())
        throw Error(Errc::UnknownCategory,
                    "no category with id " + std::to_string(id));
    return it->second;
}

std::optional<CategoryId> WebDirectory::parent_of(CategoryId id) const {
    const Category& c = category(id);
    if (c.parent == kNoCategory)
        return std::nullopt;
    return c.parent;
}

std::optional<CategoryId>
WebDirectory::category_of_resource(const ResourceId& r) const {
    auto it = resource_index_.find(r);
    if (it == resource_index_.end())
        return std::nullopt;
    return it->second;
}

CategoryId WebDirectory::add_category(CategoryId parent, std::string url) {
    auto it = categories_.find(parent);
    if (it == categories_.end())
        throw Error(Errc::UnknownParent,
                    "parent id " + std::to_string(parent) + " does not exist");
    if (urls_.count(url))
        throw Error(Errc::DuplicateUrl, "url '" + url + "' already in use");

    Category c;
    c.id = next_id_++;
    c.level = it->second.level + 1;
    c.url = std::move(url);
    c.parent = parent;
    urls_.insert(c.url);
    it->second.children.push_back(c.id);
    depth_ = std::max(depth_, c.level);
    CategoryId id = c.id;
    categories_.emplace(id, std::move(c));
    return id;
}

bool WebDirectory::tree_adjacent(CategoryId a, CategoryId b) const {
    const Category& ca = category(a);
    const Category& cb = category(b);
    return ca.parent == b || cb.parent == a;
}

void WebDirectory::add_cross_link(CategoryId from, CategoryId to) {
    category(from);
    category(to);
    if (from == to)
        throw Error(Errc::SelfLoop,
                    "cross-link " + std::to_string(from) + " -> itself");
    for (const auto& l : cross_links_)
        if (l.from == from && l.to == to)
            throw Error(Errc::ParallelEdge,
                        "cross-link " + std::to_string(from) + " -> " +
                            std::to_string(to) + " already present");
    if (tree_adjacent(from, to))
        throw Error(Errc::TreeEdgeShadow,
                    "categories " + std::to_string(from) + " and " +
                        std::to_string(to) + " are already parent/child");
    cross_links_.push_back({from, to});
}

void WebDirectory::add_resource(CategoryId id, ResourceId r) {
    auto it = categories_.find(id);
    if (it == categories_.end())
        throw Error(Errc::UnknownCategory,
                    "no category with id " + std::to_string(id));
    if (resource_index_.count(r))
        throw Error(Errc::DuplicateResource,
                    "resource '" + r + "' is already listed");
    resource_index_.emplace(r, id);
    it->second.resources.push_back(std::move(r));
}

void WebDirectory::set_non_semantic(CategoryId id, bool flag) {
    auto it = categories_.find(id);
    if (it == categories_.end())
        throw Error(Errc::UnknownCategory,
                    "no category with id " + std::to_string(id));
    it->second.non_semantic = flag;
}

std::vector<CategoryId> WebDirectory::out_neighbors(CategoryId id) const {
    const Category& c = category(id);
    std::vector<CategoryId> out;
    if (c.parent != kNoCategory && contains(c.parent))
        out.push_back(c.parent);
    for (CategoryId child : c.children)
        if (contains(child))
            out.push_back(child);
    for (const auto& l : cross_links_) {
        if (l.from == id && contains(l.to))
            out.push_back(l.to);
        if (traversal_ == CrossLinkTraversal::Undirected && l.to == id &&
            contains(l.from))
            out.push_back(l.from);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t WebDirectory::shortest_path_length(CategoryId from,
                                               CategoryId to) const {
    category(from);
    category(to);
    if (from == to)
        return 1;
    std::map<CategoryId, std::size_t> dist;
    dist[from] = 1;
    std::deque<CategoryId> queue{from};
    while (!queue.empty()) {
        CategoryId cur = queue.front();
        queue.pop_front();
        std::size_t d = dist[cur];
        for (CategoryId next : out_neighbors(cur)) {
            if (dist.count(next))
                continue;
            if (next == to)
                return d + 1;
            dist[next] = d + 1;
            queue.push_back(next);
        }
    }
    throw Error(Errc::Unreachable,
                "no path from " + std::to_string(from) + " to " +
                    std::to_string(to));
}

std::vector<StructuralViolation> WebDirectory::validate() const {
    std::vector<StructuralViolation> out;
    auto report = [&](ViolationKind kind, CategoryId id, std::string detail) {
        out.push_back({kind, id, std::move(detail)});
    };

    auto root_it = categories_.find(root_);
    if (root_it == categories_.end()) {
        report(ViolationKind::BadRoot, root_, "root id is not a category");
        return out;
    }
    if (root_it->second.level != 1)
        report(ViolationKind::BadRoot, root_, "root level is not 1");
    if (root_it->second.parent != kNoCategory)
        report(ViolationKind::BadRoot, root_, "root has a parent");

    std::map<std::string, std::vector<CategoryId>> by_url;
    std::map<ResourceId, std::vector<CategoryId>> by_resource;
    std::uint32_t max_level = 0;

    for (const auto& [id, c] : categories_) {
        max_level = std::max(max_level, c.level);
        by_url[c.url].push_back(id);
        for (const auto& r : c.resources)
            by_resource[r].push_back(id);
        for (CategoryId child : c.children) {
            auto cit = categories_.find(child);
            if (cit == categories_.end()) {
                report(ViolationKind::OrphanCategory, id,
                       "lists unknown child " + std::to_string(child));
                continue;
            }
            if (cit->second.parent != id)
                report(ViolationKind::OrphanCategory, child,
                       "listed as child of " + std::to_string(id) +
                           " but has parent " +
                           std::to_string(cit->second.parent));
        }
        if (id == root_)
            continue;
        auto pit = categories_.find(c.parent);
        if (c.parent == kNoCategory || pit == categories_.end()) {
            report(ViolationKind::OrphanCategory, id, "has no valid parent");
            continue;
        }
        if (std::count(pit->second.children.begin(),
                       pit->second.children.end(), id) != 1)
            report(ViolationKind::OrphanCategory, id,
                   "not listed exactly once among parent's children");
        if (c.level != pit->second.level + 1)
            report(ViolationKind::BadLevel, id,
                   "level " + std::to_string(c.level) + " but parent level " +
                       std::to_string(pit->second.level));
    }

    for (const auto& [url, ids] : by_url)
        if (ids.size() > 1)
            report(ViolationKind::DuplicateUrl, ids.front(),
                   "url '" + url + "' used by " + std::to_string(ids.size()) +
                       " categories");
    for (const auto& [r, ids] : by_resource)
        if (ids.size() > 1)
            report(ViolationKind::DuplicateResource, ids.front(),
                   "resource '" + r + "' listed in " +
                       std::to_string(ids.size()) + " categories");

    if (depth_ != max_level)
        report(ViolationKind::BadDepth, root_,
               "stored depth " + std::to_string(depth_) +
                   " but max level is " + std::to_string(max_level));

    // reachability over tree edges only; the tree must already span everything
    std::set<CategoryId> seen{root_};
    std::deque<CategoryId> queue{root_};
    while (!queue.empty()) {
        CategoryId cur = queue.front();
        queue.pop_front();
        const Category& c = categories_.at(cur);
        std::vector<CategoryId> step(c.children.begin(), c.children.end());
        if (c.parent != kNoCategory)
            step.push_back(c.parent);
        for (CategoryId n : step)
            if (categories_.count(n) && seen.insert(n).second)
                queue.push_back(n);
    }
    for (const auto& [id, c] : categories_)
        if (!seen.count(id))
            report(ViolationKind::DisjointComponent, id,
                   "not reachable from the root via tree edges");

    std::set<std::pair<CategoryId, CategoryId>> link_pairs;
    for (const auto& l : cross_links_) {
        if (!categories_.count(l.from) || !categories_.count(l.to)) {
            report(ViolationKind::BadCrossLink, l.from,
                   "cross-link endpoint does not exist");
            continue;
        }
        if (l.from == l.to)
            report(ViolationKind::BadCrossLink, l.from, "self-loop");
        else if (tree_adjacent(l.from, l.to))
            report(ViolationKind::BadCrossLink, l.from,
                   "cross-link shadows a tree edge to " +
                       std::to_string(l.to));
        if (!link_pairs.insert({l.from, l.to}).second)
            report(ViolationKind::BadCrossLink, l.from,
                   "parallel cross-link to " + std::to_string(l.to));
    }
    return out;
}

WebDirectory WebDirectory::contract_non_semantic_levels() const {
    if (category(root_).non_semantic)
        throw Error(Errc::RootNonSemantic, "the root cannot be contracted");

    // nearest surviving ancestor for every category
    std::function<CategoryId(CategoryId)> survivor = [&](CategoryId id) {
        const Category& c = category(id);
        return c.non_semantic ? survivor(c.parent) : id;
    };

    // surviving child list with flagged nodes spliced out, order kept
    std::function<void(const Category&, std::vector<CategoryId>&)> expand =
        [&](const Category& c, std::vector<CategoryId>& out) {
            for (CategoryId child : c.children) {
                const Category& cc = category(child);
                if (cc.non_semantic)
                    expand(cc, out);
                else
                    out.push_back(child);
            }
        };

    std::vector<Category> cats;
    std::function<void(CategoryId, CategoryId, std::uint32_t)> build =
        [&](CategoryId id, CategoryId parent, std::uint32_t level) {
            const Category& src = category(id);
            Category c;
            c.id = src.id;
            c.level = level;
            c.url = src.url;
            c.parent = parent;
            c.resources = src.resources;
            c.non_semantic = false;
            expand(src, c.children);
            // pull in resources of contracted descendants, traversal order
            std::function<void(const Category&)> absorb =
                [&](const Category& from) {
                    for (CategoryId child : from.children) {
                        const Category& cc = category(child);
                        if (!cc.non_semantic)
                            continue;
                        c.resources.insert(c.resources.end(),
                                           cc.resources.begin(),
                                           cc.resources.end());
                        absorb(cc);
                    }
                };
            absorb(src);
            std::vector<CategoryId> children = c.children;
            cats.push_back(std::move(c));
            for (CategoryId child : children)
                build(child, id, level + 1);
        };
    build(root_, kNoCategory, 1);

    WebDirectory out =
        from_parts(std::move(cats), {}, root_);
    out.traversal_ = traversal_;
    for (const auto& l : cross_links_) {
        CategoryId f = survivor(l.from);
        CategoryId t = survivor(l.to);
        if (f == t || out.tree_adjacent(f, t))
            continue;
        bool dup = false;
        for (const auto& have : out.cross_links_)
            if (have.from == f && have.to == t)
                dup = true;
        if (!dup)
            out.cross_links_.push_back({f, t});
    }
    return out;
}

} // namespace webdir
