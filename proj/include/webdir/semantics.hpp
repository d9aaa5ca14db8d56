#ifndef WEBDIR_SEMANTICS_HPP
#define WEBDIR_SEMANTICS_HPP

#include <map>

#include "webdir/concept_vector.hpp"
#include "webdir/directory.hpp"

namespace webdir {

/// Per-category concept vectors. For categories with resources the entry is
/// the accumulated content of those resources (construction maintains it);
/// for empty categories it is the constant assigned by the administrator;
/// the root is bound to the empty vector. Every category of the paired
/// directory should have an entry, possibly empty.
class SemanticsBinding {
public:
    bool contains(CategoryId id) const { return vectors_.count(id) != 0; }

    /// Bound vector; the empty vector when no entry exists.
    const ConceptVector& vector_for(CategoryId id) const;

    void bind(CategoryId id, ConceptVector v);

    /// entry(id) = merge(entry(id), v)
    void merge_into(CategoryId id, const ConceptVector& v);

    void erase(CategoryId id) { vectors_.erase(id); }

    /// Adds an empty entry for every directory category that lacks one.
    void fill_missing(const WebDirectory& wd);

    const std::map<CategoryId, ConceptVector>& entries() const {
        return vectors_;
    }

    bool operator==(const SemanticsBinding&) const = default;

private:
    std::map<CategoryId, ConceptVector> vectors_;
};

/// Tolerances for the structure-quality checks.
struct EpsilonConfig {
    double epsilon = 0.0;              // ideality slack, >= 0
    double sim_floor = kDefaultSimFloor; // similarity clamp, in (0,1]
};

/// Which of the three definitions of category content to apply.
enum class SemMode { FromResources, FromChildren, Constant };

/// Semantic content of a category under an explicit definition:
///  - FromResources: the bound vector (requires listed resources);
///  - FromChildren: merge of each child's resolved content, bottom-up
///    (requires children);
///  - Constant: the bound vector (requires no resources and no children).
/// Throws ModeConditionUnmet when the mode's applicability condition fails.
ConceptVector category_semantics(const WebDirectory& wd,
                                 const SemanticsBinding& binding,
                                 CategoryId id, SemMode mode);

/// Content under whichever definition applies: resources first, then child
/// aggregation, then the bound constant.
ConceptVector resolve_semantics(const WebDirectory& wd,
                                const SemanticsBinding& binding,
                                CategoryId id);

/// How far a category's own resource content is from the aggregate of its
/// children's content: magnitude(diff(own, children)). Defined as 0 for
/// categories lacking either resources or children.
double ideality_gap(const WebDirectory& wd, const SemanticsBinding& binding,
                    CategoryId id);

struct IdealityReport {
    std::map<CategoryId, double> gaps;
    double epsilon = 0.0;
    bool ideal = false;              // every gap exactly 0
    bool realistically_ideal = false; // every gap <= epsilon
};

IdealityReport ideality_audit(const WebDirectory& wd,
                              const SemanticsBinding& binding,
                              const EpsilonConfig& cfg = {});

} // namespace webdir

#endif
