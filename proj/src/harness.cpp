#include "rbds/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include <nlohmann/json.hpp>

#include "rbds/rbds.hpp"
#include "rbds/stats.hpp"

namespace rbds {

const char* dgp_name(DgpKind kind) noexcept {
    switch (kind) {
    case DgpKind::iid_normal: return "iid";
    case DgpKind::garch11: return "garch11";
    case DgpKind::egarch11: return "egarch11";
    }
    return "?";
}

void ExperimentSpec::validate() const {
    if (replications < 1) fail(ErrorCode::InvalidArgument, "replications must be >= 1");
    if (T_grid.empty() || m_grid.empty() || alpha_grid.empty() || methods.empty())
        fail(ErrorCode::InvalidArgument, "experiment grids must be nonempty");
    if (!(eps_fraction > 0)) fail(ErrorCode::NonPositiveEpsilon, "eps fraction must be positive");
    for (double a : alpha_grid)
        if (!(a > 0 && a < 1)) fail(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
    for (int m : m_grid)
        if (m < 2 || m > 64) fail(ErrorCode::InvalidArgument, "m must lie in [2, 64]");
    for (std::size_t T : T_grid)
        if (T < 4) fail(ErrorCode::SeriesTooShort, "T must be at least 4");
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RBDS_THREADS")) {
        unsigned v = 0;
        auto [p, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), v);
        if (ec == std::errc() && v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    for (auto& t : pool) t.join();
}

TimeSeries generate_series(const DgpSpec& dgp, std::size_t T, std::uint64_t seed, std::size_t r) {
    const CounterRng rng = CounterRng(substream_key(seed, r)).split(T);
    switch (dgp.kind) {
    case DgpKind::iid_normal: return gen_iid_normal(T, rng);
    case DgpKind::garch11: {
        GarchParams p = dgp.garch;
        p.T = T;
        return gen_garch11(p, rng);
    }
    case DgpKind::egarch11: {
        EgarchParams p = dgp.egarch;
        p.T = T;
        return gen_egarch11(p, rng);
    }
    }
    fail(ErrorCode::InvalidArgument, "unknown data-generating process");
}

namespace {

double evaluate(Method method, const ProximityStructure& P, const TestConfig& cfg) {
    return method == Method::bds ? bds_statistic(P, cfg).statistic : rbds_statistic(P, cfg).statistic;
}

// Statistic per replication for each (m, method) cell; NaN flags an error.
std::vector<std::vector<double>> collect(const ExperimentSpec& spec, std::size_t T) {
    const std::size_t cells = spec.m_grid.size() * spec.methods.size();
    std::vector<std::vector<double>> stats(cells, std::vector<double>(spec.replications));
    parallel_for(spec.replications, resolve_threads(spec.threads), [&](std::size_t r) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        std::optional<ProximityStructure> P;
        double eps = 0;
        try {
            const TimeSeries series = generate_series(spec.dgp, T, spec.seed, r);
            eps = epsilon_from_fraction(series, spec.eps_fraction);
            P = build_proximity(series, eps);
        } catch (const Error&) {
        }
        std::size_t cell = 0;
        for (int m : spec.m_grid)
            for (Method method : spec.methods) {
                double z = nan;
                if (P) {
                    try {
                        z = evaluate(method, *P, TestConfig{m, eps, 0.05, spec.mean_correction});
                    } catch (const Error&) {
                    }
                }
                stats[cell++][r] = z;
            }
    });
    return stats;
}

std::string num(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

} // namespace

RejectionTable run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    RejectionTable table;
    for (std::size_t T : spec.T_grid) {
        const auto stats = collect(spec, T);
        std::size_t cell = 0;
        for (int m : spec.m_grid)
            for (Method method : spec.methods) {
                const auto& z = stats[cell++];
                for (double alpha : spec.alpha_grid) {
                    std::size_t ok = 0, errors = 0, rejected = 0;
                    for (double v : z) {
                        if (std::isnan(v)) {
                            ++errors;
                            continue;
                        }
                        ++ok;
                        if (two_sided_p(v) < alpha) ++rejected;
                    }
                    const double rate = ok ? static_cast<double>(rejected) / static_cast<double>(ok) : 0.0;
                    const double se = ok ? std::sqrt(rate * (1 - rate) / static_cast<double>(ok)) : 0.0;
                    table.rows.push_back({method, T, m, alpha, rate, se, errors, ok});
                }
            }
    }
    return table;
}

KsSummary null_distribution_check(const ExperimentSpec& spec, Method method) {
    ExperimentSpec one = spec;
    one.validate();
    if (spec.dgp.kind != DgpKind::iid_normal)
        fail(ErrorCode::InvalidArgument, "null distribution check needs the i.i.d. normal process");
    one.T_grid.resize(1);
    one.m_grid.resize(1);
    one.methods = {method};
    KsSummary out{};
    out.method = method;
    out.T = one.T_grid[0];
    out.m = one.m_grid[0];
    const auto z = collect(one, out.T)[0];
    std::size_t rejected = 0;
    for (double v : z) {
        if (std::isnan(v)) {
            ++out.errors;
            continue;
        }
        out.statistics.push_back(v);
        if (two_sided_p(v) < 0.05) ++rejected;
    }
    out.n = out.statistics.size();
    if (out.n == 0) fail(ErrorCode::DegenerateScale, "no replication produced a statistic");
    out.ks_distance = ks_distance_normal(out.statistics);
    out.p_value = kolmogorov_pvalue(out.ks_distance, out.n);
    out.critical_1pct = kolmogorov_critical(0.01, out.n);
    out.rejection_05 = static_cast<double>(rejected) / static_cast<double>(out.n);
    return out;
}

std::string emit_report(const RejectionTable& table, ReportFormat format) {
    std::string out;
    switch (format) {
    case ReportFormat::csv:
        out = "method,T,m,alpha,rejection_rate,mc_se,errors,reps\n";
        for (const auto& r : table.rows)
            out += std::string(method_name(r.method)) + "," + std::to_string(r.T) + "," + std::to_string(r.m) + "," +
                   num(r.alpha) + "," + num(r.rate) + "," + num(r.mc_se) + "," + std::to_string(r.errors) + "," +
                   std::to_string(r.reps) + "\n";
        break;
    case ReportFormat::markdown:
        out = "| method | T | m | alpha | rejection_rate | mc_se | errors | reps |\n"
              "|---|---:|---:|---:|---:|---:|---:|---:|\n";
        for (const auto& r : table.rows)
            out += "| " + std::string(method_name(r.method)) + " | " + std::to_string(r.T) + " | " +
                   std::to_string(r.m) + " | " + num(r.alpha) + " | " + num(r.rate) + " | " + num(r.mc_se) + " | " +
                   std::to_string(r.errors) + " | " + std::to_string(r.reps) + " |\n";
        break;
    case ReportFormat::json: {
        nlohmann::ordered_json j;
        j["schema"] = 1;
        j["rows"] = nlohmann::ordered_json::array();
        for (const auto& r : table.rows)
            j["rows"].push_back({{"method", method_name(r.method)},
                                 {"T", r.T},
                                 {"m", r.m},
                                 {"alpha", r.alpha},
                                 {"rejection_rate", r.rate},
                                 {"mc_se", r.mc_se},
                                 {"errors", r.errors},
                                 {"reps", r.reps}});
        out = j.dump(2) + "\n";
        break;
    }
    }
    return out;
}

} // namespace rbds
