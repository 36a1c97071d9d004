#include "rbds/overlap.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>

namespace rbds {

PatternGraph union_graph(int m, std::span<const WindowPair> pairs) {
    std::map<long, int> label;
    auto id = [&](long x) {
        auto [it, fresh] = label.emplace(x, static_cast<int>(label.size()));
        return it->second;
    };
    std::vector<std::pair<long, long>> raw;
    for (auto [t, s] : pairs)
        for (int rho = 0; rho < m; ++rho) raw.emplace_back(std::min(t, s) + rho, std::max(t, s) + rho);
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    // Label vertices in index order so the output is reproducible.
    std::vector<long> verts;
    for (auto [a, b] : raw) verts.push_back(a), verts.push_back(b);
    std::sort(verts.begin(), verts.end());
    for (long v : verts) id(v);
    PatternGraph g;
    g.vertex_count = static_cast<int>(label.size());
    for (auto [a, b] : raw) g.edges.emplace_back(label[a], label[b]);
    g.validate();
    return g;
}

PatternGraph near_far_union(int m, int k, long p) {
    const long fresh = 4L * m + 2L * k + std::labs(p) + 8;
    const std::array<WindowPair, 2> pairs{WindowPair{0, k}, WindowPair{p, fresh}};
    return union_graph(m, pairs);
}

double CovarianceClass::count(std::size_t T_m, int m) const {
    const long L = static_cast<long>(T_m) - 1 - exact_span - static_cast<long>(far_gaps) * m;
    if (L < 0) return 0.0;
    // Placements: p1 >= 1 plus far_gaps slack variables, total slack <= L.
    double c = 1.0;
    const int r = far_gaps + 1;
    for (int j = 1; j <= r; ++j) c = c * static_cast<double>(L + j) / j;
    return c;
}

namespace {

std::vector<CovarianceClass> enumerate(int m, bool keep_all) {
    std::vector<CovarianceClass> out;
    std::array<int, 4> perm{0, 1, 2, 3};
    const int far = m; // placeholder gap for "at least m"
    do {
        for (int g0 = 0; g0 <= m; ++g0)
            for (int g1 = 0; g1 <= m; ++g1)
                for (int g2 = 0; g2 <= m; ++g2) {
                    const std::array<int, 3> gap{g0, g1, g2};
                    bool ok = true;
                    // Tied starts are counted once, in label order.
                    for (int j = 0; j < 3; ++j)
                        if (gap[static_cast<std::size_t>(j)] == 0 &&
                            perm[static_cast<std::size_t>(j)] > perm[static_cast<std::size_t>(j + 1)])
                            ok = false;
                    if (!ok) continue;
                    std::array<long, 4> pos{};
                    int span = 0, nfar = 0;
                    pos[static_cast<std::size_t>(perm[0])] = 0;
                    for (int j = 0; j < 3; ++j) {
                        const int gj = gap[static_cast<std::size_t>(j)];
                        pos[static_cast<std::size_t>(perm[static_cast<std::size_t>(j + 1)])] =
                            pos[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] + gj;
                        if (gj == far) ++nfar;
                        else span += gj;
                    }
                    const long t = pos[0], s = pos[1], t2 = pos[2], s2 = pos[3];
                    if (!(t < s && t2 < s2)) continue;
                    CovarianceClass c;
                    c.lag1 = static_cast<int>(std::min<long>(s - t, m));
                    c.lag2 = static_cast<int>(std::min<long>(s2 - t2, m));
                    c.exact_span = span;
                    c.far_gaps = nfar;
                    bool touch = false;
                    for (long a : {t, s})
                        for (long b : {t2, s2})
                            if (std::labs(a - b) < m) touch = true;
                    const bool near_near = c.lag1 < m && c.lag2 < m;
                    if (touch && !near_near) {
                        const std::array<WindowPair, 2> both{WindowPair{t, s}, WindowPair{t2, s2}};
                        try {
                            c.joint = union_graph(m, both);
                        } catch (const Error&) {
                            c.cyclic = true;
                        }
                        if (c.cyclic && !keep_all) continue;
                        c.first = union_graph(m, std::span(both).subspan(0, 1));
                        c.second = union_graph(m, std::span(both).subspan(1, 1));
                    } else if (!keep_all) {
                        continue;
                    }
                    out.push_back(std::move(c));
                }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

std::vector<std::pair<std::string, PatternGraph>> keyed(const PatternGraph& g) {
    std::vector<std::pair<std::string, PatternGraph>> parts;
    for (auto& c : g.components()) parts.emplace_back(canonical_form(c), std::move(c));
    std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return parts;
}

double product(const EstimatorSet& est, const std::vector<std::pair<std::string, PatternGraph>>& parts) {
    double v = 1.0;
    for (const auto& [key, g] : parts) v *= est.component(key, g);
    return v;
}

} // namespace

const std::vector<CovarianceClass>& covariance_classes(int m) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<std::vector<CovarianceClass>>> memo;
    std::lock_guard lock(mu);
    auto& slot = memo[m];
    if (!slot) slot = std::make_unique<std::vector<CovarianceClass>>(enumerate(m, false));
    return *slot;
}

std::vector<CovarianceClass> all_pair_classes(int m) { return enumerate(m, true); }

const CovarianceTable& covariance_table(std::size_t T, int m) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, int>, std::unique_ptr<CovarianceTable>> memo;
    const auto& classes = covariance_classes(m);
    std::lock_guard lock(mu);
    auto& slot = memo[{T, m}];
    if (slot) return *slot;
    const std::size_t T_m = T - static_cast<std::size_t>(m) + 1;
    std::map<std::string, std::size_t> index;
    auto table = std::make_unique<CovarianceTable>();
    table->T = T;
    table->m = m;
    for (const auto& c : classes) {
        const double n = c.count(T_m, m);
        if (n == 0.0) continue;
        const bool ff = c.first_far(m) && c.second_far(m);
        std::string key = (ff ? "F:" : "N:") + canonical_form(c.joint) + "/" + canonical_form(c.first) + "/" +
                          canonical_form(c.second);
        auto [it, fresh] = index.emplace(key, table->rows.size());
        if (fresh) table->rows.push_back({0.0, ff, keyed(c.joint), keyed(c.first), keyed(c.second)});
        table->rows[it->second].count += n;
    }
    slot = std::move(table);
    return *slot;
}

double CovarianceTable::tilde_variance(const EstimatorSet& est, double N0) const {
    double sum = 0.0;
    for (const auto& r : rows)
        if (r.far_far) sum += r.count * (product(est, r.joint) - product(est, r.first) * product(est, r.second));
    return sum / (N0 * N0);
}

double CovarianceTable::near_far_covariance(const EstimatorSet& est, double N) const {
    double sum = 0.0;
    for (const auto& r : rows)
        if (!r.far_far) sum += r.count * (product(est, r.joint) - product(est, r.first) * product(est, r.second));
    return sum / (N * N);
}

} // namespace rbds
