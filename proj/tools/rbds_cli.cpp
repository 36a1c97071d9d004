// rbds: test a series for serial dependence, simulate the reference
// processes, or run size/power experiments.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rbds/bds.hpp"
#include "rbds/dgp.hpp"
#include "rbds/harness.hpp"
#include "rbds/io.hpp"
#include "rbds/rbds.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kUsage = 2;
constexpr int kData = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int diagnose(int code, const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}, {"exit", code}}.dump() << "\n";
    return code;
}

std::string read_all(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in) rbds::fail(rbds::ErrorCode::ParseError, "cannot open " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("--params: not a number: " + item);
        }
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Model parameters from --params, in the order the help text lists them.
rbds::DgpSpec dgp_from(const std::string& model, const std::string& params) {
    rbds::DgpSpec d;
    const auto p = params.empty() ? std::vector<double>{} : parse_list(params);
    if (model == "iid") {
        d.kind = rbds::DgpKind::iid_normal;
        if (!p.empty()) throw UsageError("--params takes no values for iid");
    } else if (model == "garch11") {
        d.kind = rbds::DgpKind::garch11;
        if (!p.empty() && p.size() != 3) throw UsageError("--params for garch11 is omega0,a1,b1");
        if (p.size() == 3) d.garch.omega0 = p[0], d.garch.a1 = p[1], d.garch.b1 = p[2];
        if (!(d.garch.omega0 > 0) || d.garch.a1 < 0 || d.garch.b1 < 0 || !(d.garch.a1 + d.garch.b1 < 1))
            throw UsageError("garch11 needs omega0 > 0, a1, b1 >= 0 and a1 + b1 < 1");
    } else {
        d.kind = rbds::DgpKind::egarch11;
        if (!p.empty() && p.size() != 3) throw UsageError("--params for egarch11 is c_abs,c_sign,b_log");
        if (p.size() == 3) d.egarch.c_abs = p[0], d.egarch.c_sign = p[1], d.egarch.b_log = p[2];
        if (!(std::fabs(d.egarch.b_log) < 1)) throw UsageError("egarch11 needs |b_log| < 1");
    }
    return d;
}

json result_json(const rbds::TestResult& r) {
    json j{{"schema", 1},
           {"method", rbds::method_name(r.method)},
           {"m", r.m},
           {"epsilon", r.epsilon},
           {"T", r.T},
           {"statistic", r.statistic},
           {"p_value", r.p_value},
           {"reject", r.reject},
           {"alpha", r.alpha},
           {"c_full", r.c_full},
           {"omega1_hat", r.omega1_hat},
           {"omega2_hat", r.omega2_hat}};
    if (r.rbds) {
        const auto& x = *r.rbds;
        j["mu_hat"] = x.mu_hat;
        j["mu_correction"] = x.mu_correction;
        j["nu_sq"] = x.nu_sq;
        j["sigma_terms"] = {{"breve", x.breve_sigma_sq}, {"tilde", x.tilde_sigma_sq}, {"mm", x.sigma_mm},
                            {"11", x.sigma_11},          {"mh", x.sigma_mh},          {"mh1", x.sigma_mh1},
                            {"m1", x.sigma_m1},          {"1h", x.sigma_1h},          {"1h1", x.sigma_1h1}};
    }
    return j;
}

std::string result_text(const rbds::TestResult& r) {
    std::string s;
    auto line = [&s](const std::string& k, const std::string& v) { s += k + ": " + v + "\n"; };
    line("method", rbds::method_name(r.method));
    line("T", std::to_string(r.T));
    line("m", std::to_string(r.m));
    line("epsilon", fmt(r.epsilon));
    line("statistic", fmt(r.statistic));
    line("p_value", fmt(r.p_value));
    line("alpha", fmt(r.alpha));
    line("reject", r.reject ? "true" : "false");
    line("c_full", fmt(r.c_full));
    line("omega1_hat", fmt(r.omega1_hat));
    line("omega2_hat", fmt(r.omega2_hat));
    if (r.rbds) {
        line("mu_hat", fmt(r.rbds->mu_hat));
        line("mu_correction", fmt(r.rbds->mu_correction));
        line("nu_sq", fmt(r.rbds->nu_sq));
    }
    return s;
}

const CLI::Validator kUnitInterval(
    [](std::string& in) -> std::string {
        double v = 0;
        auto [p, ec] = std::from_chars(in.data(), in.data() + in.size(), v);
        if (ec != std::errc() || p != in.data() + in.size() || !(v > 0 && v < 1)) return "must lie in (0,1): " + in;
        return {};
    },
    "(0,1)");

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation-integral tests for serial dependence"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "rbds 1.0.0");

    // test
    auto* test = app.add_subcommand("test", "Test one series for i.i.d.-ness");
    std::string input;
    std::size_t column = 0;
    int m = 2;
    double eps = 0, eps_frac = 0, alpha = 0.05;
    std::string method = "rbds", transform = "none", out_fmt = "json";
    test->add_option("--input", input, "Series file, '-' for stdin")->required();
    test->add_option("--column", column, "Zero-based column")->capture_default_str();
    test->add_option("--m", m, "Embedding dimension")->capture_default_str()->check(CLI::Range(1, 64));
    auto* eps_opt = test->add_option("--eps", eps, "Absolute tolerance")->check(CLI::PositiveNumber);
    auto* frac_opt = test->add_option("--eps-frac", eps_frac, "Tolerance as a multiple of the sd")->check(CLI::PositiveNumber);
    eps_opt->excludes(frac_opt);
    test->add_option("--method", method)->check(CLI::IsMember({"bds", "rbds"}))->capture_default_str();
    test->add_option("--alpha", alpha)->check(kUnitInterval)->capture_default_str();
    test->add_option("--transform", transform)->check(CLI::IsMember({"none", "square", "log-square"}))->capture_default_str();
    bool plain_mean = false;
    test->add_flag("--plain-mean", plain_mean, "rbds: skip the small-sample mean correction");
    test->add_option("--out", out_fmt)->check(CLI::IsMember({"json", "text"}))->capture_default_str();

    // simulate
    auto* sim = app.add_subcommand("simulate", "Write a simulated series, one value per line");
    std::string model = "iid", params, sim_out = "-";
    std::size_t sim_T = 1000, burn_in = 500;
    std::uint64_t sim_seed = 1;
    sim->add_option("--model", model)->check(CLI::IsMember({"iid", "garch11", "egarch11"}))->capture_default_str();
    sim->add_option("--params", params, "garch11: omega0,a1,b1; egarch11: c_abs,c_sign,b_log");
    sim->add_option("--T", sim_T)->check(CLI::Range(2, 100000000))->capture_default_str();
    sim->add_option("--seed", sim_seed)->capture_default_str();
    sim->add_option("--burn-in", burn_in)->capture_default_str();
    sim->add_option("--out", sim_out, "Output path, '-' for stdout")->capture_default_str();

    // experiment size|power
    auto* exp = app.add_subcommand("experiment", "Monte Carlo rejection rates");
    exp->require_subcommand(1);
    auto* size = exp->add_subcommand("size", "Rejection rates under i.i.d. N(0,1) by default");
    auto* power = exp->add_subcommand("power", "Rejection rates under GARCH(1,1) by default");
    struct ExpFlags {
        std::string dist, params, methods = "bds,rbds", report = "csv";
        std::vector<std::size_t> T{200};
        std::vector<int> m{2};
        std::vector<double> alpha{0.05};
        double eps_frac = 0.5;
        std::size_t reps = 1000;
        std::uint64_t seed = 1;
        unsigned threads = 0;
        bool plain_mean = false;
    } ef;
    for (auto* sc : {size, power}) {
        sc->add_option("--dist", ef.dist)->check(CLI::IsMember({"iid", "garch11", "egarch11"}));
        sc->add_option("--params", ef.params, "Process parameters, as for simulate");
        sc->add_option("--T", ef.T, "Lengths")->delimiter(',')->check(CLI::Range(4, 10000000));
        sc->add_option("--m", ef.m, "Embedding dimensions")->delimiter(',')->check(CLI::Range(2, 64));
        sc->add_option("--alpha", ef.alpha, "Levels")->delimiter(',')->check(kUnitInterval);
        sc->add_option("--eps-frac", ef.eps_frac)->check(CLI::PositiveNumber);
        sc->add_option("--reps", ef.reps)->check(CLI::Range(1, 100000000));
        sc->add_option("--seed", ef.seed);
        sc->add_option("--methods", ef.methods, "Subset of bds,rbds");
        sc->add_option("--threads", ef.threads, "Workers; 0 defers to RBDS_THREADS");
        sc->add_flag("--plain-mean", ef.plain_mean, "rbds: skip the small-sample mean correction");
        sc->add_option("--report", ef.report)->check(CLI::IsMember({"csv", "markdown", "json"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return diagnose(kUsage, "UsageError", e.what());
    }

    try {
        if (*test) {
            if (eps_opt->count() + frac_opt->count() != 1)
                throw UsageError("exactly one of --eps and --eps-frac is required");
            rbds::TimeSeries series(rbds::parse_series(read_all(input), column));
            if (transform == "square")
                series = rbds::transform_residuals(series, rbds::Transform::square);
            else if (transform == "log-square")
                series = rbds::transform_residuals(series, rbds::Transform::log_square);
            const double e = frac_opt->count() ? rbds::epsilon_from_fraction(series, eps_frac) : eps;
            const rbds::TestConfig cfg{m, e, alpha, !plain_mean};
            const auto r = method == "bds" ? rbds::bds_statistic(series, cfg) : rbds::rbds_statistic(series, cfg);
            std::cout << (out_fmt == "json" ? result_json(r).dump(2) + "\n" : result_text(r));
            return 0;
        }
        if (*sim) {
            auto d = dgp_from(model, params);
            d.garch.T = d.egarch.T = sim_T;
            d.garch.burn_in = d.egarch.burn_in = burn_in;
            const rbds::CounterRng rng(sim_seed);
            const auto series = d.kind == rbds::DgpKind::iid_normal ? rbds::gen_iid_normal(sim_T, rng)
                                : d.kind == rbds::DgpKind::garch11  ? rbds::gen_garch11(d.garch, rng)
                                                                    : rbds::gen_egarch11(d.egarch, rng);
            std::string text;
            char buf[32];
            for (double v : series.values()) text += std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr) + "\n";
            if (sim_out == "-") {
                std::cout << text;
            } else {
                std::ofstream os(sim_out, std::ios::binary);
                if (!(os << text)) throw UsageError("cannot write " + sim_out);
            }
            return 0;
        }
        const bool is_power = power->parsed();
        rbds::ExperimentSpec spec;
        spec.dgp = dgp_from(ef.dist.empty() ? (is_power ? "garch11" : "iid") : ef.dist, ef.params);
        spec.T_grid = ef.T;
        spec.m_grid = ef.m;
        spec.alpha_grid = ef.alpha;
        spec.eps_fraction = ef.eps_frac;
        spec.replications = ef.reps;
        spec.seed = ef.seed;
        spec.threads = ef.threads;
        spec.mean_correction = !ef.plain_mean;
        spec.methods.clear();
        for (const auto& name : {std::string("bds"), std::string("rbds")})
            if (("," + ef.methods + ",").find("," + name + ",") != std::string::npos)
                spec.methods.push_back(name == "bds" ? rbds::Method::bds : rbds::Method::rbds);
        if (spec.methods.empty()) throw UsageError("--methods must name bds and/or rbds");
        try {
            spec.validate();
        } catch (const rbds::Error& e) {
            throw UsageError(e.what());
        }
        const auto format = ef.report == "json"       ? rbds::ReportFormat::json
                            : ef.report == "markdown" ? rbds::ReportFormat::markdown
                                                      : rbds::ReportFormat::csv;
        std::cout << rbds::emit_report(rbds::run_experiment(spec), format);
        return 0;
    } catch (const UsageError& e) {
        return diagnose(kUsage, "UsageError", e.what());
    } catch (const rbds::Error& e) {
        const bool usage = e.code() == rbds::ErrorCode::InvalidArgument;
        return diagnose(usage ? kUsage : kData, rbds::error_name(e.code()), e.what());
    } catch (const std::exception& e) {
        return diagnose(kData, "InternalError", e.what());
    }
}
