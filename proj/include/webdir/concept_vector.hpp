#ifndef WEBDIR_CONCEPT_VECTOR_HPP
#define WEBDIR_CONCEPT_VECTOR_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "webdir/types.hpp"

namespace webdir {

/// Sparse weighted bag of concept tokens. This is the lightweight ontology
/// realization: every semantic object in the library (resource content,
/// category content, seeded topic constants) is one of these.
///
/// Weights are non-negative and finite; zero entries are never stored, so an
/// empty vector is the unique representation of "no content". Weights carry
/// magnitude (term counts accumulate), which keeps merge() an exact
/// homomorphism over term-list concatenation. Similarity is cosine-based and
/// ignores scale, so thresholds behave the same for long and short texts.
class ConceptVector {
public:
    ConceptVector() = default;
    explicit ConceptVector(std::map<std::string, double> weights);

    static ConceptVector single(std::string token, double weight = 1.0);

    bool empty() const { return weights_.empty(); }
    std::size_t size() const { return weights_.size(); }

    /// Weight of a token, 0 when absent.
    double weight(std::string_view token) const;

    const std::map<std::string, double>& weights() const { return weights_; }

    /// Euclidean norm; 0 iff empty.
    double magnitude() const;

    /// Copy scaled to unit Euclidean length. Empty stays empty.
    ConceptVector normalized() const;

    /// Token with the highest weight (ties: lexicographically smallest).
    std::optional<std::string> top_concept() const;

    bool operator==(const ConceptVector&) const = default;

private:
    std::map<std::string, double> weights_;
};

/// Concept-wise weight sum. Exact, commutative and associative.
ConceptVector merge(const ConceptVector& a, const ConceptVector& b);

/// Concept-wise absolute difference; zero entries dropped. Symmetric, and
/// empty iff a == b.
ConceptVector diff(const ConceptVector& a, const ConceptVector& b);

double magnitude(const ConceptVector& v);

/// Cosine of the two weight vectors, in [0,1]. Two empty vectors are
/// identical absences of content and score 1; empty vs non-empty scores 0.
double similarity(const ConceptVector& a, const ConceptVector& b);

/// 1 / max(similarity, sim_floor). Identical directions give 1; disjoint
/// supports give the maximum 1/sim_floor.
double distance(const ConceptVector& a, const ConceptVector& b,
                double sim_floor = kDefaultSimFloor);

/// One token occurrence group of a resource.
struct TermCount {
    std::string token;
    std::uint32_t count = 1;

    bool operator==(const TermCount&) const = default;
};

/// A Web resource as it arrives: pre-tokenized terms, no text processing
/// happens here.
struct Resource {
    ResourceId id;
    std::string url;
    std::vector<TermCount> terms;

    bool operator==(const Resource&) const = default;
};

/// Builds the concept vector of a resource by accumulating its term counts.
/// Throws EmptyResource when there are no terms (or all counts are zero).
ConceptVector sem(const Resource& resource);

} // namespace webdir

#endif
