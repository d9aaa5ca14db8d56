#include "webdir/concept_vector.hpp"

#include <cmath>

#include "webdir/error.hpp"

namespace webdir {

ConceptVector::ConceptVector(std::map<std::string, double> weights) {
    for (auto& [token, w] : weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw Error(Errc::InvalidVector,
                        "weight for '" + token + "' must be finite and >= 0");
        if (w > 0.0)
            weights_.emplace(token, w);
    }
}

ConceptVector ConceptVector::single(std::string token, double weight) {
    std::map<std::string, double> m;
    m.emplace(std::move(token), weight);
    return ConceptVector(std::move(m));
}

double ConceptVector::weight(std::string_view token) const {
    auto it = weights_.find(std::string(token));
    return it == weights_.end() ? 0.0 : it->second;
}

double ConceptVector::magnitude() const {
    double sq = 0.0;
    for (const auto& [token, w] : weights_)
        sq += w * w;
    return std::sqrt(sq);
}

ConceptVector ConceptVector::normalized() const {
    if (weights_.empty())
        return {};
    double norm = magnitude();
    ConceptVector out;
    for (const auto& [token, w] : weights_)
        out.weights_.emplace(token, w / norm);
    return out;
}

std::optional<std::string> ConceptVector::top_concept() const {
    if (weights_.empty())
        return std::nullopt;
    auto best = weights_.begin();
    for (auto it = std::next(weights_.begin()); it != weights_.end(); ++it)
        if (it->second > best->second)
            best = it; // map order makes ties pick the smallest token
    return best->first;
}

ConceptVector merge(const ConceptVector& a, const ConceptVector& b) {
    std::map<std::string, double> sum = a.weights();
    for (const auto& [token, w] : b.weights())
        sum[token] += w;
    return ConceptVector(std::move(sum));
}

ConceptVector diff(const ConceptVector& a, const ConceptVector& b) {
    std::map<std::string, double> out = a.weights();
    for (const auto& [token, w] : b.weights()) {
        auto it = out.find(token);
        if (it == out.end())
            out.emplace(token, w);
        else
            it->second = std::fabs(it->second - w);
    }
    return ConceptVector(std::move(out));
}

double magnitude(const ConceptVector& v) {
    return v.magnitude();
}

double similarity(const ConceptVector& a, const ConceptVector& b) {
    if (a.empty() && b.empty())
        return 1.0;
    if (a.empty() || b.empty())
        return 0.0;
    // walk the smaller support
    const ConceptVector& small = a.size() <= b.size() ? a : b;
    const ConceptVector& large = a.size() <= b.size() ? b : a;
    double dot = 0.0;
    for (const auto& [token, w] : small.weights())
        dot += w * large.weight(token);
    double cos = dot / (a.magnitude() * b.magnitude());
    if (cos < 0.0)
        return 0.0;
    if (cos > 1.0)
        return 1.0;
    return cos;
}

double distance(const ConceptVector& a, const ConceptVector& b,
                double sim_floor) {
    if (!(sim_floor > 0.0) || sim_floor > 1.0)
        throw Error(Errc::InvalidThresholds, "sim_floor must be in (0, 1]");
    double s = similarity(a, b);
    return 1.0 / std::max(s, sim_floor);
}

ConceptVector sem(const Resource& resource) {
    std::map<std::string, double> counts;
    for (const auto& term : resource.terms)
        if (term.count > 0)
            counts[term.token] += static_cast<double>(term.count);
    if (counts.empty())
        throw Error(Errc::EmptyResource,
                    "resource '" + resource.id + "' has no terms");
    return ConceptVector(std::move(counts));
}

} // namespace webdir
