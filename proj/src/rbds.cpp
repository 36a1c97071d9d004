#include "rbds/rbds.hpp"

#include <cmath>
#include <string>

#include "rbds/correlation.hpp"
#include "rbds/overlap.hpp"
#include "rbds/stats.hpp"

namespace rbds {

namespace {

// x^e that never touches x when e == 0, so absent patterns are not built.
double ipow(const EstimatorSet& est, const PatternKey& key, int e) {
    if (e < 0) fail(ErrorCode::ExponentNegative, key.label() + " raised to " + std::to_string(e));
    return e == 0 ? 1.0 : std::pow(est.at(key), e);
}

double w_k0(const EstimatorSet& est, int m, int k) {
    const int h = m / k, i = m - h * k;
    return ipow(est, PatternKey::chain(h), k - i) * ipow(est, PatternKey::chain(h + 1), i);
}

void check_lag(int m, int k) {
    if (m < 1 || k < 1 || k > m)
        fail(ErrorCode::InvalidArgument, "need 1 <= k <= m (m=" + std::to_string(m) + ", k=" + std::to_string(k) + ")");
}

// Sum over the closeness patterns of one chain length: pendant at an end
// counted twice, interior pendants once.
double pendant_sum(const EstimatorSet& est, int l) {
    double s = 2.0 * est.chain(l + 1);
    for (int kappa = 1; kappa <= l - 1; ++kappa) s += est.xi(l, kappa);
    return s;
}

} // namespace

LagDecomposition lag_decomposition(int m, int k, int d) {
    check_lag(m, k);
    LagDecomposition L{};
    L.h = m / k;
    L.i = m - L.h * k;
    L.r = d / k;
    L.tau = d - L.r * k;
    L.h1 = (m - k) / k;
    L.i1 = m - k - L.h1 * k;
    return L;
}

double w_function(const EstimatorSet& est, int m, int k, int d) {
    check_lag(m, k);
    if (d < 0 || d > m) fail(ErrorCode::InvalidArgument, "need 0 <= d <= m");
    const auto L = lag_decomposition(m, k, d);
    const int h = L.h, i = L.i, r = L.r, tau = L.tau;
    if (i - tau >= 0)
        return ipow(est, PatternKey::omega(h + 1, r + 1), tau) * ipow(est, PatternKey::omega(h + 1, r), i - tau) *
               ipow(est, PatternKey::omega(h, r), k - i);
    return ipow(est, PatternKey::omega(h + 1, r + 1), i) * ipow(est, PatternKey::omega(h, r + 1), tau - i) *
           ipow(est, PatternKey::omega(h, r), k - tau);
}

double u_function(const EstimatorSet& est, int m, int k, int d) {
    if (k < 1 || k >= m) fail(ErrorCode::InvalidArgument, "need 1 <= k <= m-1");
    const auto L = lag_decomposition(m, k, 0);
    const int h = L.h, i = L.i;
    const double joint = ipow(est, PatternKey::omega(h + 1, h + 1), i - d) * ipow(est, PatternKey::eta(h + 1), d) *
                         ipow(est, PatternKey::omega(h, h + 1), d) * ipow(est, PatternKey::omega(h, h), k - i - d);
    return joint - w_k0(est, m, k) * w_k0(est, m, m);
}

double union_graph_expectation(const EstimatorSet& est, int m, int k, long p) {
    if (k < 1 || k >= m) fail(ErrorCode::InvalidArgument, "need 1 <= k <= m-1");
    return est.at(near_far_union(m, k, p));
}

double w_reference(const EstimatorSet& est, int m, int k, int d) {
    if (d < 0 || d > m) fail(ErrorCode::InvalidArgument, "need 0 <= d <= m");
    if (d == 0) {
        const WindowPair alone{0, k};
        return est.at(union_graph(m, std::span(&alone, 1)));
    }
    return union_graph_expectation(est, m, k, d - m);
}

double u_reference(const EstimatorSet& est, int m, int k, int d) {
    return union_graph_expectation(est, m, k, d) - w_reference(est, m, k, 0) * std::pow(est.chain(1), m);
}

WPartials w_partials(const EstimatorSet& est, int m, int k) {
    check_lag(m, k);
    const int h = m / k, i = m - h * k;
    const double wh = est.chain(h), wh1 = est.chain(h + 1);
    WPartials p;
    p.wh = (k - i) * (k - i - 1 > 0 ? std::pow(wh, k - i - 1) : 1.0) * (i > 0 ? std::pow(wh1, i) : 1.0);
    p.wh1 = i == 0 ? 0.0 : i * (k - i > 0 ? std::pow(wh, k - i) : 1.0) * (i - 1 > 0 ? std::pow(wh1, i - 1) : 1.0);
    p.w1 = m * std::pow(est.chain(1), m - 1);
    return p;
}

double mu_hat(const EstimatorSet& est, const CombinatoricFactors& f) {
    const int m = f.m;
    double s = 0.0;
    for (int k = 1; k < m; ++k) s += (static_cast<double>(f.T_m) - k) * w_k0(est, m, k);
    return s / f.N + f.N0 / f.N * w_k0(est, m, m);
}

double mu_bias(const EstimatorSet& est, const CombinatoricFactors& f) {
    const int m = f.m;
    const double T = static_cast<double>(f.T);
    const double w1 = est.chain(1), w2 = est.chain(2);
    // Exact variance of the order-2 U-statistic omega1_hat.
    const double var_w1 = 2.0 * f.c_ratio(1) * (w1 + 2.0 * (T - 2) * w2 - (2.0 * T - 3) * w1 * w1);
    return f.N0 / f.N * 0.5 * m * (m - 1) * std::pow(w1, m - 2) * var_w1;
}

double breve_sigma_sq(const EstimatorSet& est, const CombinatoricFactors& f) {
    const int m = f.m;
    const double wm0 = std::pow(est.chain(1), m);
    double total = 0.0;
    for (int k = 1; k < m; ++k) {
        const int h = m / k, i = m - h * k;
        (void)h;
        const double base = w_k0(est, m, k) * wm0;
        auto U = [&](int d) { return u_reference(est, m, k, d); };
        double s = 0.0;
        for (int d1 = 1; d1 <= m; ++d1) s += 2.0 * (w_reference(est, m, k, d1) - base);
        if (k - 2 * i >= 0) {
            for (int d2 = 1; d2 <= i; ++d2) s += U(d2);
            // Interior starts i+1..min(k-i, k-1); for i = 0 the start k is
            // the aligned right window, already counted with the W terms.
            s += (std::min(k - i, k - 1) - i) * U(i);
            for (int d2 = k - i + 1; d2 <= k - 1; ++d2) s += U(k - d2);
        } else {
            for (int d2 = 1; d2 <= k - i; ++d2) s += U(d2);
            s += (2 * i - k) * U(k - i);
            for (int d2 = i + 1; d2 <= k - 1; ++d2) s += U(k - d2);
        }
        total += f.script_M(k) * s;
    }
    return 2.0 * total / (f.N * f.N);
}

double breve_sigma_sq_exact(const EstimatorSet& est, const CombinatoricFactors& f) {
    return covariance_table(f.T, f.m).near_far_covariance(est, f.N);
}

double tilde_sigma_sq(const EstimatorSet& est, const CombinatoricFactors& f) {
    return covariance_table(f.T, f.m).tilde_variance(est, f.N0);
}

RbdsIntermediates nu_sq(const EstimatorSet& est, const CombinatoricFactors& f) {
    const int m = f.m;
    const double T = static_cast<double>(f.T), Tm = static_cast<double>(f.T_m);
    const double N = f.N, N0 = f.N0;
    const double w1 = est.chain(1), w2 = est.chain(2), w3 = est.chain(3);
    const double wm0 = std::pow(w1, m);
    const double W1 = m * std::pow(w1, m - 1);
    const double c1 = f.c_ratio(1);

    RbdsIntermediates r;
    r.mu_hat = mu_hat(est, f);
    r.breve_sigma_sq = breve_sigma_sq(est, f);
    r.tilde_sigma_sq = tilde_sigma_sq(est, f);
    r.sigma_mm = r.breve_sigma_sq + (N0 / N) * (N0 / N) * r.tilde_sigma_sq;

    const double lead = N0 / N * W1;
    r.sigma_11 = 2.0 * lead * lead * c1 * (w1 + 2.0 * (T - 2) * w2 - (2.0 * T - 3) * w1 * w1);

    // Covariances of C with the plug-ins of the overlapping-pair mean, and of
    // those plug-ins with omega1_hat; leading order only, as they enter with
    // an O(1/T) weight.
    double mh = 0, mh1 = 0, oneh = 0, oneh1 = 0, near_m1 = 0;
    for (int k = 1; k < m; ++k) {
        const int h = m / k;
        const auto P = w_partials(est, m, k);
        const double a = Tm - k;
        const double wh = est.chain(h), wh1 = est.chain(h + 1);
        const double ph = pendant_sum(est, h);
        const double ph1 = P.wh1 != 0.0 ? pendant_sum(est, h + 1) : 0.0;
        mh += a * P.wh * f.c_ratio(h) * f.falling(h + 2) * (W1 * ph - m * (h + 1) * wm0 * wh);
        if (P.wh1 != 0.0) {
            mh1 += a * P.wh1 * f.c_ratio(h + 1) * f.falling(h + 3) * (W1 * ph1 - m * (h + 2) * wm0 * wh1);
            oneh1 += a * P.wh1 * (T - h - 2) * (ph1 - (h + 2) * w1 * wh1);
        }
        oneh += a * P.wh * (T - h - 1) * (ph - (h + 1) * w1 * wh);
        near_m1 += a * (T - m - k) * (P.wh * ph + P.wh1 * ph1 - (m + k) * w1 * w_k0(est, m, k));
    }
    r.sigma_mh = 2.0 / (N * N) * mh;
    r.sigma_mh1 = 2.0 / (N * N) * mh1;
    r.sigma_1h = 4.0 * N0 * c1 / (N * N) * W1 * oneh;
    r.sigma_1h1 = 4.0 * N0 * c1 / (N * N) * W1 * oneh1;

    // Cov(C, omega1_hat) in full: a disjoint-window pair meets an index pair
    // through one shared index, through one of its own edges, or by joining
    // two of its edges into a three-edge chain.
    const double far_m1 = N0 * (2.0 * m * (T - 2.0 * m) * (std::pow(w1, m - 1) * w2 - std::pow(w1, m + 1)) +
                                m * (wm0 - std::pow(w1, m + 1)) +
                                2.0 * m * (m - 1) * (std::pow(w1, m - 2) * w3 - std::pow(w1, m + 1)));
    const double cov_c_w1 = 2.0 * c1 / N * (near_m1 + far_m1);
    r.sigma_m1 = 2.0 * lead * cov_c_w1;

    r.nu_sq = r.sigma_mm + r.sigma_11 - r.sigma_mh - r.sigma_mh1 - r.sigma_m1 + r.sigma_1h + r.sigma_1h1;
    return r;
}

TestResult rbds_statistic(const ProximityStructure& P, const TestConfig& config) {
    const std::size_t T = P.size();
    config.validate(T, 2);
    const auto f = combinatoric_factors(T, config.m, true);
    const auto parts = correlation_integral(P, config.m);
    const auto [w1, w2] = omega12_hat(P);
    if (!(w1 > 0.0 && w1 < 1.0)) fail(ErrorCode::DegenerateScale, "omega1 estimate at the boundary of [0,1]");
    const EstimatorSet est = estimator_closure(P, config.m);
    RbdsIntermediates in = nu_sq(est, f);
    if (config.mean_correction) in.mu_correction = mu_bias(est, f);
    if (!(in.nu_sq > 0.0))
        fail(ErrorCode::NonPositiveVariance, "variance combination is not positive (nu^2=" + std::to_string(in.nu_sq) + ")");

    TestResult r;
    r.method = Method::rbds;
    r.m = config.m;
    r.epsilon = config.epsilon;
    r.alpha = config.alpha;
    r.T = T;
    r.c_full = parts.c_full;
    r.omega1_hat = w1;
    r.omega2_hat = w2;
    r.variance = in.nu_sq;
    r.rbds = in;
    r.statistic = (parts.c_full - in.mu_hat + in.mu_correction) / std::sqrt(in.nu_sq);
    r.p_value = two_sided_p(r.statistic);
    r.reject = r.p_value < config.alpha;
    return r;
}

TestResult rbds_statistic(const TimeSeries& series, const TestConfig& config) {
    config.validate(series.size(), 2);
    return rbds_statistic(build_proximity(series, config.epsilon), config);
}

} // namespace rbds
