#include "webdir/semantics.hpp"

#include "webdir/error.hpp"

namespace webdir {

namespace {
const ConceptVector kEmptyVector;
}

const ConceptVector& SemanticsBinding::vector_for(CategoryId id) const {
    auto it = vectors_.find(id);
    return it == vectors_.end() ? kEmptyVector : it->second;
}

void SemanticsBinding::bind(CategoryId id, ConceptVector v) {
    vectors_[id] = std::move(v);
}

void SemanticsBinding::merge_into(CategoryId id, const ConceptVector& v) {
    vectors_[id] = merge(vectors_[id], v);
}

void SemanticsBinding::fill_missing(const WebDirectory& wd) {
    for (const auto& [id, c] : wd.categories())
        vectors_.try_emplace(id);
}

ConceptVector category_semantics(const WebDirectory& wd,
                                 const SemanticsBinding& binding,
                                 CategoryId id, SemMode mode) {
    const Category& c = wd.category(id);
    switch (mode) {
    case SemMode::FromResources:
        if (c.resources.empty())
            throw Error(Errc::ModeConditionUnmet,
                        "category " + std::to_string(id) + " has no resources");
        return binding.vector_for(id);
    case SemMode::FromChildren: {
        if (c.children.empty())
            throw Error(Errc::ModeConditionUnmet,
                        "category " + std::to_string(id) + " has no children");
        ConceptVector agg;
        for (CategoryId child : c.children)
            agg = merge(agg, resolve_semantics(wd, binding, child));
        return agg;
    }
    case SemMode::Constant:
        if (!c.resources.empty() || !c.children.empty())
            throw Error(Errc::ModeConditionUnmet,
                        "category " + std::to_string(id) +
                            " is not empty; constants apply to empty "
                            "categories only");
        return binding.vector_for(id);
    }
    throw Error(Errc::ModeConditionUnmet, "unknown mode");
}

ConceptVector resolve_semantics(const WebDirectory& wd,
                                const SemanticsBinding& binding,
                                CategoryId id) {
    const Category& c = wd.category(id);
    if (!c.resources.empty())
        return binding.vector_for(id);
    if (!c.children.empty())
        return category_semantics(wd, binding, id, SemMode::FromChildren);
    return binding.vector_for(id);
}

double ideality_gap(const WebDirectory& wd, const SemanticsBinding& binding,
                    CategoryId id) {
    const Category& c = wd.category(id);
    if (c.resources.empty() || c.children.empty())
        return 0.0;
    ConceptVector own = binding.vector_for(id);
    ConceptVector from_children =
        category_semantics(wd, binding, id, SemMode::FromChildren);
    return magnitude(diff(own, from_children));
}

IdealityReport ideality_audit(const WebDirectory& wd,
                              const SemanticsBinding& binding,
                              const EpsilonConfig& cfg) {
    IdealityReport report;
    report.epsilon = cfg.epsilon;
    report.ideal = true;
    report.realistically_ideal = true;
    for (const auto& [id, c] : wd.categories()) {
        double gap = ideality_gap(wd, binding, id);
        report.gaps.emplace(id, gap);
        if (gap != 0.0)
            report.ideal = false;
        if (gap > cfg.epsilon)
            report.realistically_ideal = false;
    }
    return report;
}

} // namespace webdir
