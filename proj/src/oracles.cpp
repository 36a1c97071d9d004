#include "rbds/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "rbds/overlap.hpp"

namespace rbds::oracle {

namespace {

std::vector<std::vector<int>> adjacency(const PatternGraph& g) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.vertex_count));
    for (auto [a, b] : g.edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    return adj;
}

// Vertices ordered so each non-root has its parent earlier; parent -1 marks
// a component root.
void bfs_order(const PatternGraph& g, std::vector<int>& order, std::vector<int>& parent) {
    auto adj = adjacency(g);
    order.clear();
    parent.assign(static_cast<std::size_t>(g.vertex_count), -1);
    std::vector<bool> seen(static_cast<std::size_t>(g.vertex_count), false);
    for (int r = 0; r < g.vertex_count; ++r) {
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
}

double tree_on_grid(const PatternGraph& tree, double eps, int K) {
    const double h = eps / K;
    const double L = std::ceil(9.0 / h) * h;
    const std::size_t n = static_cast<std::size_t>(std::llround(2 * L / h)) + 1;
    std::vector<double> phi(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = -L + static_cast<double>(j) * h;
        phi[j] = std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
    }
    std::vector<int> order, parent;
    bfs_order(tree, order, parent);
    std::vector<std::vector<double>> f(static_cast<std::size_t>(tree.vertex_count), std::vector<double>(n, 1.0));
    std::vector<double> F(n);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int v = *it;
        const auto& fv = f[static_cast<std::size_t>(v)];
        F[0] = 0.0;
        for (std::size_t j = 1; j < n; ++j) F[j] = F[j - 1] + 0.5 * h * (phi[j - 1] * fv[j - 1] + phi[j] * fv[j]);
        const int p = parent[static_cast<std::size_t>(v)];
        if (p < 0) return F[n - 1];
        auto& fp = f[static_cast<std::size_t>(p)];
        const std::size_t k = static_cast<std::size_t>(K);
        for (std::size_t j = 0; j < n; ++j) fp[j] *= F[std::min(j + k, n - 1)] - F[j >= k ? j - k : 0];
    }
    return 1.0;
}

} // namespace

double v_enumerate(const ProximityStructure& P, const PatternGraph& g) {
    g.validate();
    std::vector<int> order, parent;
    bfs_order(g, order, parent);
    const std::size_t T = P.size();
    std::vector<std::size_t> assign(static_cast<std::size_t>(g.vertex_count));
    double count = 0;
    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (depth == order.size()) {
            count += 1;
            return;
        }
        const int v = order[depth], p = parent[static_cast<std::size_t>(v)];
        for (std::size_t x = 0; x < T; ++x) {
            if (p >= 0 && !P.bit(assign[static_cast<std::size_t>(p)], x)) continue;
            assign[static_cast<std::size_t>(v)] = x;
            self(self, depth + 1);
        }
    };
    rec(rec, 0);
    return count / std::pow(static_cast<double>(T), g.vertex_count);
}

double c_full_naive(const TimeSeries& series, double eps, int m) {
    const std::size_t Tm = series.size() - static_cast<std::size_t>(m) + 1;
    double close = 0;
    for (std::size_t t = 0; t < Tm; ++t)
        for (std::size_t s = t + 1; s < Tm; ++s) {
            double dist = 0;
            for (int r = 0; r < m; ++r) dist = std::max(dist, std::fabs(series[t + r] - series[s + r]));
            if (dist < eps) close += 1;
        }
    return close / (static_cast<double>(Tm) * (static_cast<double>(Tm) - 1) / 2);
}

double tilde_sigma_sq_exhaustive(const EstimatorSet& est, std::size_t T, int m) {
    const long Tm = static_cast<long>(T) - m + 1;
    std::vector<WindowPair> far;
    for (long t = 0; t < Tm; ++t)
        for (long s = t + m; s < Tm; ++s) far.push_back({t, s});
    const double single = std::pow(est.chain(1), m);
    // Joint expectations are translation invariant; memoize on the shifted
    // quadruple to keep the sweep affordable.
    std::map<std::array<long, 4>, double> memo;
    double sum = 0;
    for (const auto& a : far)
        for (const auto& b : far) {
            bool touch = false;
            for (long x : {a.t, a.s})
                for (long y : {b.t, b.s})
                    if (std::labs(x - y) < m) touch = true;
            if (!touch) continue;
            const long base = std::min(a.t, b.t);
            const std::array<long, 4> key{a.t - base, a.s - base, b.t - base, b.s - base};
            auto it = memo.find(key);
            if (it == memo.end()) {
                const std::array<WindowPair, 2> both{a, b};
                it = memo.emplace(key, est.at(union_graph(m, both))).first;
            }
            sum += it->second - single * single;
        }
    const double n0 = static_cast<double>(far.size());
    return sum / (n0 * n0);
}

double gaussian_pattern_probability(const PatternGraph& g, double eps) {
    g.validate();
    double value = 1.0;
    for (const auto& c : g.components()) {
        if (c.vertex_count == 1) continue;
        const int K = std::max(50, static_cast<int>(std::ceil(eps / 0.004)));
        const double coarse = tree_on_grid(c, eps, K);
        const double fine = tree_on_grid(c, eps, 2 * K);
        value *= (4.0 * fine - coarse) / 3.0;
    }
    return value;
}

EstimatorSet gaussian_population(double eps) {
    return EstimatorSet([eps](const PatternGraph& c) -> std::pair<double, Provenance> {
        return {gaussian_pattern_probability(c, eps), Provenance::external};
    });
}

} // namespace rbds::oracle
