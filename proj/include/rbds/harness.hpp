#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rbds/bds.hpp"
#include "rbds/dgp.hpp"

namespace rbds {

enum class DgpKind { iid_normal, garch11, egarch11 };
const char* dgp_name(DgpKind kind) noexcept;

struct DgpSpec {
    DgpKind kind = DgpKind::iid_normal;
    GarchParams garch;   // T is taken from the grid
    EgarchParams egarch; // T is taken from the grid
};

struct ExperimentSpec {
    DgpSpec dgp;
    std::vector<std::size_t> T_grid{200};
    std::vector<int> m_grid{2};
    std::vector<double> alpha_grid{0.05};
    double eps_fraction = 0.5;
    bool mean_correction = true; // see TestConfig
    std::size_t replications = 1000;
    std::uint64_t seed = 1;
    std::vector<Method> methods{Method::bds, Method::rbds};
    unsigned threads = 0; // 0: RBDS_THREADS, else hardware concurrency

    void validate() const;
};

struct RejectionRow {
    Method method;
    std::size_t T;
    int m;
    double alpha;
    double rate;
    double mc_se;
    std::size_t errors;
    std::size_t reps; // replications that produced a statistic
};

struct RejectionTable {
    std::vector<RejectionRow> rows;
};

// Worker count: explicit value, else RBDS_THREADS (0 = auto), else hardware.
unsigned resolve_threads(unsigned requested);

// Runs fn(i) for i in [0, n) on a pool; fn must write only to slot i of
// caller-owned storage so the outcome is independent of scheduling.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

// Series for replication r at length T under the experiment's master seed.
TimeSeries generate_series(const DgpSpec& dgp, std::size_t T, std::uint64_t seed, std::size_t r);

RejectionTable run_experiment(const ExperimentSpec& spec);

struct KsSummary {
    Method method;
    std::size_t T;
    int m;
    std::size_t n;      // statistics collected
    std::size_t errors; // replications that failed
    double ks_distance;
    double p_value;
    double critical_1pct;
    double rejection_05; // fraction with p < 0.05
    std::vector<double> statistics; // replication order
};

KsSummary null_distribution_check(const ExperimentSpec& spec, Method method);

enum class ReportFormat { csv, markdown, json };
std::string emit_report(const RejectionTable& table, ReportFormat format);

} // namespace rbds
