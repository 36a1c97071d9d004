#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rbds/core.hpp"

namespace rbds {

// A forest of closeness relations among distinct draws. Vertex labels are
// 0..vertex_count-1; labels carry no meaning beyond the edge structure.
struct PatternGraph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;

    // Throws InvalidPatternParams on self-loops, duplicate edges, cycles or
    // out-of-range endpoints.
    void validate() const;
    // Splits into connected components, each relabelled from 0.
    std::vector<PatternGraph> components() const;
};

enum class PatternFamily { omega, eta, xi, chain };

struct PatternKey {
    PatternFamily family = PatternFamily::chain;
    int l = 1;
    int r = 0;     // omega: pendant count
    int kappa = 0; // xi: pendant position

    static PatternKey chain(int l) { return {PatternFamily::chain, l, 0, 0}; }
    static PatternKey omega(int l, int r) { return {PatternFamily::omega, l, r, 0}; }
    static PatternKey eta(int l) { return {PatternFamily::eta, l, 0, 0}; }
    static PatternKey xi(int l, int kappa) { return {PatternFamily::xi, l, 0, kappa}; }

    std::string label() const;
};

PatternGraph build_pattern(const PatternKey& key);

// Isomorphism-invariant encoding: sorted AHU strings of the components,
// each rooted at its centre.
std::string canonical_form(const PatternGraph& g);

enum class VKernel {
    interval, // prefix sums over the sorted sample, O(edges * T)
    matvec,   // masked products against the packed matrix, O(edges * T^2)
};

// All-tuples (repeats allowed) average of the edge indicator product.
double estimate_pattern_v(const ProximityStructure& P, const PatternGraph& g,
                          VKernel kernel = VKernel::interval);

// Distinct-index average, by enumeration. Test oracle only.
double estimate_pattern_u_exact(const ProximityStructure& P, const PatternGraph& g);

// Exact distinct-index estimates of P(|u1-u2|<eps) and of the two-edge chain.
std::pair<double, double> omega12_hat(const ProximityStructure& P);

enum class Provenance { v_statistic, u_exact, external };

// Memoized pattern probabilities, keyed by canonical form of each connected
// component. A forest's value is the product of its components' values.
// Not thread-safe: each worker owns its own set.
class EstimatorSet {
public:
    using Source = std::function<std::pair<double, Provenance>(const PatternGraph& component)>;

    EstimatorSet() = default;
    explicit EstimatorSet(Source source) : source_(std::move(source)) {}

    double at(const PatternGraph& g) const;
    double at(const PatternKey& key) const { return at(build_pattern(key)); }
    double chain(int l) const { return at(PatternKey::chain(l)); }
    double omega(int l, int r) const { return at(PatternKey::omega(l, r)); }
    double xi(int l, int kappa) const { return at(PatternKey::xi(l, kappa)); }
    double eta(int l) const { return at(PatternKey::eta(l)); }

    // Looks up an already-canonical connected component.
    double component(const std::string& canonical, const PatternGraph& g) const;

    void put(const PatternGraph& component, double value, Provenance provenance);

    struct Entry {
        double value;
        Provenance provenance;
    };
    const std::map<std::string, Entry>& entries() const noexcept { return cache_; }

private:
    Source source_;
    mutable std::map<std::string, Entry> cache_;
};

// Production plug-in estimates: exact distinct-index values for patterns with
// at most three vertices, all-tuples values for larger ones.
EstimatorSet sample_estimators(const ProximityStructure& P);

// Every pattern the revised test consumes at embedding dimension m.
std::vector<PatternGraph> closure_patterns(int m);

EstimatorSet estimator_closure(const ProximityStructure& P, int m);

} // namespace rbds
