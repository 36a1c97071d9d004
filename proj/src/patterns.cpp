#include "rbds/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <string>

#include "rbds/kernels.hpp"
#include "rbds/overlap.hpp"

namespace rbds {

namespace {

using Adjacency = std::vector<std::vector<int>>;

Adjacency adjacency(const PatternGraph& g) {
    Adjacency adj(static_cast<std::size_t>(g.vertex_count));
    for (auto [a, b] : g.edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    return adj;
}

std::string ahu(const Adjacency& adj, int v, int parent) {
    std::vector<std::string> kids;
    for (int u : adj[static_cast<std::size_t>(v)])
        if (u != parent) kids.push_back(ahu(adj, u, v));
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (auto& k : kids) s += k;
    return s + ")";
}

std::string tree_form(const PatternGraph& tree) {
    if (tree.vertex_count <= 1) return "()";
    Adjacency adj = adjacency(tree);
    std::vector<int> degree(adj.size());
    std::vector<int> leaves;
    for (std::size_t v = 0; v < adj.size(); ++v) {
        degree[v] = static_cast<int>(adj[v].size());
        if (degree[v] <= 1) leaves.push_back(static_cast<int>(v));
    }
    int remaining = tree.vertex_count;
    while (remaining > 2) {
        std::vector<int> next;
        for (int v : leaves) {
            --remaining;
            for (int u : adj[static_cast<std::size_t>(v)])
                if (--degree[static_cast<std::size_t>(u)] == 1) next.push_back(u);
        }
        leaves = std::move(next);
    }
    std::string best = ahu(adj, leaves[0], -1);
    if (leaves.size() > 1) best = std::min(best, ahu(adj, leaves[1], -1));
    return best;
}

// Post-order over a tree rooted at vertex 0: (vertex, parent) with the
// root last.
std::vector<std::pair<int, int>> post_order(const PatternGraph& tree) {
    Adjacency adj = adjacency(tree);
    std::vector<std::pair<int, int>> pre;
    std::vector<std::pair<int, int>> stack{{0, -1}};
    while (!stack.empty()) {
        auto [v, p] = stack.back();
        stack.pop_back();
        pre.emplace_back(v, p);
        for (int u : adj[static_cast<std::size_t>(v)])
            if (u != p) stack.emplace_back(u, v);
    }
    std::reverse(pre.begin(), pre.end());
    return pre;
}

double tree_v(const ProximityStructure& P, const PatternGraph& tree, VKernel kernel) {
    const std::size_t T = P.size();
    const double inv = 1.0 / static_cast<double>(T);
    if (tree.vertex_count <= 1) return 1.0;
    const std::size_t padded = P.words_per_row() * 64;
    std::vector<std::vector<double>> f(static_cast<std::size_t>(tree.vertex_count));
    std::vector<double> prefix(T + 1), g(padded, 0.0);
    auto ensure = [&](int v) -> std::vector<double>& {
        auto& fv = f[static_cast<std::size_t>(v)];
        if (fv.empty()) fv.assign(padded, 0.0), std::fill_n(fv.begin(), T, 1.0);
        return fv;
    };
    for (auto [v, parent] : post_order(tree)) {
        auto& fv = ensure(v);
        if (parent < 0) {
            double sum = 0.0;
            for (std::size_t x = 0; x < T; ++x) sum += fv[x];
            return sum * inv;
        }
        if (kernel == VKernel::interval) {
            // Vectors live in sorted order; row i is the range [lo_i, hi_i).
            prefix[0] = 0.0;
            for (std::size_t x = 0; x < T; ++x) prefix[x + 1] = prefix[x] + fv[x];
            for (std::size_t x = 0; x < T; ++x) g[x] = (prefix[P.hi(x)] - prefix[P.lo(x)]) * inv;
        } else {
            kernels::masked_matvec(P.row(0), T, P.words_per_row(), fv.data(), g.data());
            for (std::size_t x = 0; x < T; ++x) g[x] *= inv;
        }
        auto& fp = ensure(parent);
        for (std::size_t x = 0; x < T; ++x) fp[x] *= g[x];
    }
    return 0.0;
}

} // namespace

void PatternGraph::validate() const {
    if (vertex_count < 1) fail(ErrorCode::InvalidPatternParams, "pattern needs a vertex");
    std::vector<int> parent(static_cast<std::size_t>(vertex_count));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x)
            x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= vertex_count || b >= vertex_count)
            fail(ErrorCode::InvalidPatternParams, "edge endpoint out of range");
        if (a == b) fail(ErrorCode::InvalidPatternParams, "self-loop");
        if (!seen.insert(std::minmax(a, b)).second) fail(ErrorCode::InvalidPatternParams, "duplicate edge");
        int ra = find(a), rb = find(b);
        if (ra == rb) fail(ErrorCode::InvalidPatternParams, "pattern contains a cycle");
        parent[static_cast<std::size_t>(ra)] = rb;
    }
}

std::vector<PatternGraph> PatternGraph::components() const {
    Adjacency adj = adjacency(*this);
    std::vector<int> comp(static_cast<std::size_t>(vertex_count), -1), local(comp.size());
    std::vector<PatternGraph> out;
    for (int v0 = 0; v0 < vertex_count; ++v0) {
        if (comp[static_cast<std::size_t>(v0)] >= 0) continue;
        const int id = static_cast<int>(out.size());
        out.emplace_back();
        // Breadth-first from the lowest unvisited label keeps that vertex as 0.
        std::vector<int> queue{v0};
        comp[static_cast<std::size_t>(v0)] = id;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            int v = queue[q];
            local[static_cast<std::size_t>(v)] = static_cast<int>(q);
            for (int u : adj[static_cast<std::size_t>(v)])
                if (comp[static_cast<std::size_t>(u)] < 0) comp[static_cast<std::size_t>(u)] = id, queue.push_back(u);
        }
        out.back().vertex_count = static_cast<int>(queue.size());
    }
    for (auto [a, b] : edges)
        out[static_cast<std::size_t>(comp[static_cast<std::size_t>(a)])].edges.emplace_back(
            local[static_cast<std::size_t>(a)], local[static_cast<std::size_t>(b)]);
    return out;
}

std::string PatternKey::label() const {
    switch (family) {
    case PatternFamily::chain: return "chain(" + std::to_string(l) + ")";
    case PatternFamily::omega: return "omega(" + std::to_string(l) + "," + std::to_string(r) + ")";
    case PatternFamily::eta: return "eta(" + std::to_string(l) + ")";
    case PatternFamily::xi: return "xi(" + std::to_string(l) + "," + std::to_string(kappa) + ")";
    }
    return "?";
}

PatternGraph build_pattern(const PatternKey& key) {
    const int l = key.l;
    if (l < 1) fail(ErrorCode::InvalidPatternParams, key.label() + ": l must be >= 1");
    PatternGraph g;
    auto path = [&](int len) {
        g.vertex_count = len + 1;
        for (int j = 0; j < len; ++j) g.edges.emplace_back(j, j + 1);
    };
    auto pendant = [&](int at) {
        g.edges.emplace_back(at, g.vertex_count);
        ++g.vertex_count;
    };
    switch (key.family) {
    case PatternFamily::chain:
        path(l);
        break;
    case PatternFamily::omega:
        if (key.r < 0 || key.r > l + 1)
            fail(ErrorCode::InvalidPatternParams, key.label() + ": need 0 <= r <= l+1");
        path(l);
        for (int j = 0; j < key.r; ++j) pendant(j);
        break;
    case PatternFamily::eta:
        path(l + 1);
        for (int j = 1; j <= l - 1; ++j) pendant(j);
        break;
    case PatternFamily::xi:
        if (key.kappa < 1 || key.kappa > l - 1)
            fail(ErrorCode::InvalidPatternParams, key.label() + ": need 1 <= kappa <= l-1");
        path(l);
        pendant(key.kappa);
        break;
    }
    return g;
}

std::string canonical_form(const PatternGraph& g) {
    std::vector<std::string> parts;
    for (const auto& c : g.components()) parts.push_back(tree_form(c));
    std::sort(parts.begin(), parts.end());
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "|" : "") + parts[i];
    return s;
}

double estimate_pattern_v(const ProximityStructure& P, const PatternGraph& g, VKernel kernel) {
    g.validate();
    double value = 1.0;
    for (const auto& c : g.components()) value *= tree_v(P, c, kernel);
    return value;
}

double estimate_pattern_u_exact(const ProximityStructure& P, const PatternGraph& g) {
    g.validate();
    const std::size_t T = P.size();
    const int n = g.vertex_count;
    if (static_cast<std::size_t>(n) > T) fail(ErrorCode::PatternTooLarge, "pattern has more vertices than the sample");
    if (std::pow(static_cast<double>(T), n) > 1e8) fail(ErrorCode::OracleTooLarge, "T^vertices exceeds 1e8");

    // Each vertex after a component root has exactly one earlier neighbour.
    Adjacency adj = adjacency(g);
    std::vector<int> order, parent(static_cast<std::size_t>(n), -1);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int r = 0; r < n; ++r) {
        if (seen[static_cast<std::size_t>(r)]) continue;
        std::size_t start = order.size();
        order.push_back(r);
        seen[static_cast<std::size_t>(r)] = true;
        for (std::size_t q = start; q < order.size(); ++q)
            for (int u : adj[static_cast<std::size_t>(order[q])])
                if (!seen[static_cast<std::size_t>(u)]) {
                    seen[static_cast<std::size_t>(u)] = true;
                    parent[static_cast<std::size_t>(u)] = order[q];
                    order.push_back(u);
                }
    }
    std::vector<std::size_t> assign(static_cast<std::size_t>(n));
    std::vector<bool> used(T, false);
    double count = 0;
    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (depth == order.size()) {
            count += 1;
            return;
        }
        const int v = order[depth];
        const int p = parent[static_cast<std::size_t>(v)];
        for (std::size_t x = 0; x < T; ++x) {
            if (used[x]) continue;
            if (p >= 0 && !P.bit(assign[static_cast<std::size_t>(p)], x)) continue;
            used[x] = true;
            assign[static_cast<std::size_t>(v)] = x;
            self(self, depth + 1);
            used[x] = false;
        }
    };
    rec(rec, 0);
    double denom = 1.0;
    for (int j = 0; j < n; ++j) denom *= static_cast<double>(T) - j;
    return count / denom;
}

std::pair<double, double> omega12_hat(const ProximityStructure& P) {
    const std::size_t T = P.size();
    if (T < 3) fail(ErrorCode::SeriesTooShort, "need T >= 3 for the two-edge chain");
    double s1 = 0, s2 = 0;
    for (std::uint32_t r : P.row_counts()) {
        const double rc = r;
        s1 += rc;
        s2 += (rc - 1) * (rc - 2);
    }
    const double t = static_cast<double>(T);
    return {(s1 - t) / (t * (t - 1)), s2 / (t * (t - 1) * (t - 2))};
}

double EstimatorSet::component(const std::string& canonical, const PatternGraph& g) const {
    auto it = cache_.find(canonical);
    if (it != cache_.end()) return it->second.value;
    if (!source_) fail(ErrorCode::InvalidArgument, "pattern " + canonical + " missing from estimator set");
    auto [value, prov] = source_(g);
    cache_.emplace(canonical, Entry{value, prov});
    return value;
}

double EstimatorSet::at(const PatternGraph& g) const {
    std::vector<std::pair<std::string, PatternGraph>> parts;
    for (auto& c : g.components()) parts.emplace_back(tree_form(c), std::move(c));
    std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    double value = 1.0;
    for (const auto& [key, c] : parts) value *= component(key, c);
    return value;
}

void EstimatorSet::put(const PatternGraph& component, double value, Provenance provenance) {
    cache_[canonical_form(component)] = Entry{value, provenance};
}

EstimatorSet sample_estimators(const ProximityStructure& P) {
    const auto [w1, w2] = omega12_hat(P);
    return EstimatorSet([&P, w1, w2](const PatternGraph& c) -> std::pair<double, Provenance> {
        switch (c.vertex_count) {
        case 1: return {1.0, Provenance::u_exact};
        case 2: return {w1, Provenance::u_exact};
        case 3: return {w2, Provenance::u_exact};
        default: return {estimate_pattern_v(P, c), Provenance::v_statistic};
        }
    });
}

std::vector<PatternGraph> closure_patterns(int m) {
    static std::mutex mu;
    static std::map<int, std::vector<PatternGraph>> memo;
    std::lock_guard lock(mu);
    if (auto it = memo.find(m); it != memo.end()) return it->second;

    std::map<std::string, PatternGraph> uniq;
    auto add = [&](const PatternGraph& g) {
        for (auto& c : g.components()) uniq.emplace(tree_form(c), c);
    };
    for (int l = 1; l <= 3; ++l) add(build_pattern(PatternKey::chain(l)));
    add(build_pattern(PatternKey::omega(1, 1)));
    for (int k = 1; k < m; ++k) {
        const int h = m / k;
        for (int l : {h, h + 1}) {
            add(build_pattern(PatternKey::chain(l)));
            for (int r = 0; r <= std::min(h + 1, l + 1); ++r) add(build_pattern(PatternKey::omega(l, r)));
            for (int kappa = 1; kappa <= l - 1; ++kappa) add(build_pattern(PatternKey::xi(l, kappa)));
        }
        add(build_pattern(PatternKey::eta(h + 1)));
        add(build_pattern(PatternKey::chain(h + 2)));
        for (int p = -(m - 1); p <= m + k - 1; ++p) add(near_far_union(m, k, p));
    }
    for (const auto& cls : covariance_classes(m)) add(cls.joint);
    std::vector<PatternGraph> out;
    for (auto& [key, g] : uniq) out.push_back(g);
    memo.emplace(m, out);
    return out;
}

EstimatorSet estimator_closure(const ProximityStructure& P, int m) {
    if (m < 2) fail(ErrorCode::InvalidArgument, "closure needs m >= 2");
    EstimatorSet set = sample_estimators(P);
    for (const auto& g : closure_patterns(m)) {
        if (static_cast<std::size_t>(g.vertex_count) > P.size())
            fail(ErrorCode::PatternTooLarge, "sample too short for the m=" + std::to_string(m) + " closure");
        set.at(g);
    }
    return set;
}

} // namespace rbds
