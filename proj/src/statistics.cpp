#include "yule/statistics.hpp"

#include "yule/harmonic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace yule {

namespace {

constexpr std::array<StatisticId, kStatisticCount> kAll = {
    StatisticId::e_u,
    StatisticId::e_u_sq,
    StatisticId::e_tau,
    StatisticId::e_tau_sq,
    StatisticId::e_shared,
    StatisticId::e_u_shared,
    StatisticId::e_u_shared_cond,
    StatisticId::e_shared_sq,
    StatisticId::e_u_tau,
    StatisticId::e_cond_shared_sq,
    StatisticId::e_cond_tau_sq,
    StatisticId::e_tau_resid_sq,
    StatisticId::var_tau,
    StatisticId::var_cond_tau,
    StatisticId::var_shared,
    StatisticId::var_cond_shared,
    StatisticId::cov_tau_cond_tau,
    StatisticId::corr_tau_cond_tau,
    StatisticId::cov_shared_cond_shared,
    StatisticId::corr_shared_cond_shared,
    StatisticId::cov_shared_tau_resid,
    StatisticId::corr_shared_tau_resid,
};

constexpr std::array<std::string_view, kStatisticCount> kNames = {
    "e_u",
    "e_u_sq",
    "e_tau",
    "e_tau_sq",
    "e_shared",
    "e_u_shared",
    "e_u_shared_cond",
    "e_shared_sq",
    "e_u_tau",
    "e_cond_shared_sq",
    "e_cond_tau_sq",
    "e_tau_resid_sq",
    "var_tau",
    "var_cond_tau",
    "var_shared",
    "var_cond_shared",
    "cov_tau_cond_tau",
    "corr_tau_cond_tau",
    "cov_shared_cond_shared",
    "corr_shared_cond_shared",
    "cov_shared_tau_resid",
    "corr_shared_tau_resid",
};

void check_n(int n) {
    if (n < 2) throw std::domain_error("statistics require n >= 2");
}

// All non-correlation statistics are rational functions of n, H_{n,1} and
// H_{n,2}; this single template is instantiated for exact (Rat) and double
// arithmetic.  Formulas are kept term-wise so that no individual term grows
// with a positive power of n — that keeps the double instantiation free of
// catastrophic cancellation for large n.
template <class S>
S registry_eval(StatisticId id, int n, const S& h1, const S& h2) {
    const S N = S(long(n));
    const S np1 = S(long(n) + 1);
    const S nm1 = S(long(n) - 1);
    const S nm1_sq = nm1 * nm1;
    switch (id) {
        case StatisticId::e_u:
            return h1;
        case StatisticId::e_u_sq:
            return h1 * h1 + h2;
        case StatisticId::e_tau:
            return np1 / nm1 * h1 - S(2) * N / nm1;
        case StatisticId::e_tau_sq: {
            const S d = h1 - S(2);
            return np1 / nm1 * (d * d + h2) - S(4) / nm1;
        }
        case StatisticId::e_shared:
            return S(2) * (N - h1) / nm1;
        case StatisticId::e_u_shared:
        case StatisticId::e_u_shared_cond:
            // E[U * E[U - tau | tree]] equals E[U (U - tau)] because U is
            // measurable with respect to the tree.
            return S(2) * N / nm1 * (h1 + h2 - S(1) - h1 * h1 / N);
        case StatisticId::e_shared_sq:
            return (S(4) * N + S(2)) / nm1 * h2 - S(2) * h1 * h1 / nm1 -
                   S(4) * h1 / nm1;
        case StatisticId::e_u_tau:
            return np1 / nm1 * (h1 * h1 - h2) - S(2) * N / nm1 * (h1 - S(1));
        case StatisticId::e_cond_shared_sq:
            return S(4) * h2 * N * N / (S(3) * nm1_sq) + S(3) * N * N / nm1_sq -
                   S(8) * h1 * N / nm1_sq - S(8) * h2 * N / nm1_sq +
                   S(34) * N / (S(3) * nm1_sq) + S(4) * h1 * h1 / nm1_sq -
                   S(16) * h2 / (S(3) * nm1_sq) + S(13) / (S(3) * nm1_sq) -
                   S(8) * h1 / (S(3) * N * nm1_sq);
        case StatisticId::e_cond_tau_sq:
            return h1 * h1 - S(4) * h1 - S(5) * h2 / S(3) + S(7) +
                   S(4) * h1 * h1 / N - S(12) * h1 / nm1 -
                   S(28) * h2 / (S(3) * nm1) + S(64) / (S(3) * nm1) +
                   S(8) * h1 * h1 / nm1_sq - S(8) * h1 / nm1_sq -
                   S(12) * h2 / nm1_sq + S(56) / (S(3) * nm1_sq) -
                   S(4) * h1 * h1 / (N * nm1_sq) -
                   S(8) * h1 / (S(3) * N * nm1_sq);
        case StatisticId::e_tau_resid_sq:
            return S(8) * h2 / S(3) - S(3) - S(2) * h1 * h1 / nm1 +
                   S(4) * h1 / nm1 + S(34) * h2 / (S(3) * nm1) -
                   S(52) / (S(3) * nm1) - S(4) * h1 * h1 / nm1_sq +
                   S(8) * h1 / nm1_sq + S(12) * h2 / nm1_sq -
                   S(56) / (S(3) * nm1_sq) + S(8) * h1 / (S(3) * N * nm1_sq);
        case StatisticId::var_tau:
            return np1 / nm1 * h2 - S(2) * np1 / nm1_sq * h1 * h1 +
                   S(4) * np1 / nm1_sq * h1 - S(4) / nm1 - S(4) / nm1_sq;
        case StatisticId::var_cond_tau:
        case StatisticId::cov_tau_cond_tau:
            // Cov(tau, E[tau|tree]) = Var(E[tau|tree]) by the tower property.
            return S(3) - S(5) * h2 / S(3) - S(28) * h2 / (S(3) * nm1) +
                   S(40) / (S(3) * nm1) - S(12) * h2 / nm1_sq +
                   S(44) / (S(3) * nm1_sq) - S(8) * h1 / (S(3) * N * nm1_sq);
        case StatisticId::var_shared: {
            const S d = h1 - S(1);
            return S(4) * (h2 - S(1)) - S(2) * h1 * h1 / nm1 +
                   S(4) * h1 / nm1 + S(6) * h2 / nm1 - S(8) / nm1 -
                   S(4) * d * d / nm1_sq;
        }
        case StatisticId::var_cond_shared:
        case StatisticId::cov_shared_cond_shared:
            return S(4) * h2 / S(3) - S(1) - S(16) * h2 / (S(3) * nm1) +
                   S(28) / (S(3) * nm1) - S(12) * h2 / nm1_sq +
                   S(44) / (S(3) * nm1_sq) - S(8) * h1 / (S(3) * N * nm1_sq);
        case StatisticId::cov_shared_tau_resid:
            // The residual tau - E[tau|tree] is orthogonal to tau, so its
            // covariance with the shared path U - tau is minus its own
            // second moment.
            return -registry_eval<S>(StatisticId::e_tau_resid_sq, n, h1, h2);
        default:
            throw std::invalid_argument("statistic has no rational closed form");
    }
}

struct CorrelationParts {
    StatisticId cov;
    StatisticId var_lhs;
    StatisticId var_rhs;
};

CorrelationParts correlation_parts(StatisticId id) {
    switch (id) {
        case StatisticId::corr_tau_cond_tau:
            return {StatisticId::cov_tau_cond_tau, StatisticId::var_tau,
                    StatisticId::var_cond_tau};
        case StatisticId::corr_shared_cond_shared:
            return {StatisticId::cov_shared_cond_shared, StatisticId::var_shared,
                    StatisticId::var_cond_shared};
        case StatisticId::corr_shared_tau_resid:
            // Var(tau - E[tau|tree]) equals the residual second moment: the
            // residual has mean zero.
            return {StatisticId::cov_shared_tau_resid, StatisticId::var_shared,
                    StatisticId::e_tau_resid_sq};
        default:
            throw std::invalid_argument("not a correlation statistic");
    }
}

int sign_of(const Rat& q) { return sgn(q); }

} // namespace

std::span<const StatisticId> all_statistics() { return kAll; }

std::string_view statistic_name(StatisticId id) {
    return kNames[static_cast<size_t>(id)];
}

std::optional<StatisticId> statistic_from_name(std::string_view name) {
    for (size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) return kAll[i];
    }
    return std::nullopt;
}

bool is_correlation(StatisticId id) {
    return id == StatisticId::corr_tau_cond_tau ||
           id == StatisticId::corr_shared_cond_shared ||
           id == StatisticId::corr_shared_tau_resid;
}

bool statistic_defined(StatisticId id, int n) {
    check_n(n);
    // At n = 2 the pair is forced, so tau == E[tau|tree] and the residual is
    // identically zero; the residual correlation is 0/0 there.  Everything
    // else stays strictly positive in the denominators (checked by the exact
    // positivity property tests across n).
    return !(id == StatisticId::corr_shared_tau_resid && n == 2);
}

std::optional<Rat> statistic_exact(StatisticId id, int n) {
    check_n(n);
    if (is_correlation(id))
        throw std::invalid_argument(
            "correlations are irrational; use statistic() or statistic_real()");
    if (!statistic_defined(id, n)) return std::nullopt;
    const Rat h1 = harmonic_exact(n, 1);
    const Rat h2 = harmonic_exact(n, 2);
    return registry_eval<Rat>(id, n, h1, h2);
}

std::optional<double> statistic_real(StatisticId id, int n) {
    check_n(n);
    if (!statistic_defined(id, n)) return std::nullopt;
    const double h1 = harmonic_real(n, 1);
    const double h2 = harmonic_real(n, 2);
    if (!is_correlation(id)) return registry_eval<double>(id, n, h1, h2);
    const auto parts = correlation_parts(id);
    const double c = registry_eval<double>(parts.cov, n, h1, h2);
    const double v1 = registry_eval<double>(parts.var_lhs, n, h1, h2);
    const double v2 = registry_eval<double>(parts.var_rhs, n, h1, h2);
    if (!(v1 > 0.0) || !(v2 > 0.0)) return std::nullopt;
    return c / std::sqrt(v1 * v2);
}

std::optional<Value> statistic(StatisticId id, int n, Mode mode) {
    check_n(n);
    if (!statistic_defined(id, n)) return std::nullopt;
    if (is_correlation(id)) {
        if (mode == Mode::real) {
            auto v = statistic_real(id, n);
            if (!v) return std::nullopt;
            return Value::of(*v);
        }
        // Rational mode: assemble the squared correlation exactly, then take
        // the one square root in double.
        const Rat h1 = harmonic_exact(n, 1);
        const Rat h2 = harmonic_exact(n, 2);
        const auto parts = correlation_parts(id);
        const Rat c = registry_eval<Rat>(parts.cov, n, h1, h2);
        const Rat v1 = registry_eval<Rat>(parts.var_lhs, n, h1, h2);
        const Rat v2 = registry_eval<Rat>(parts.var_rhs, n, h1, h2);
        if (sgn(v1) <= 0 || sgn(v2) <= 0) return std::nullopt;
        const Rat ratio = (c * c) / (v1 * v2);
        const double mag = std::sqrt(ratio.get_d());
        return Value::of(sign_of(c) >= 0 ? mag : -mag);
    }
    if (mode == Mode::rational) {
        auto v = statistic_exact(id, n);
        if (!v) return std::nullopt;
        return Value::of(*v);
    }
    auto v = statistic_real(id, n);
    if (!v) return std::nullopt;
    return Value::of(*v);
}

std::optional<double> asymptote(StatisticId id) {
    constexpr double pi_sq = std::numbers::pi * std::numbers::pi;
    switch (id) {
        case StatisticId::e_shared:
            return 2.0;
        case StatisticId::e_shared_sq:
            return 2.0 * pi_sq / 3.0;
        case StatisticId::e_cond_shared_sq:
            return 2.0 * pi_sq / 9.0 + 3.0;
        case StatisticId::e_tau_resid_sq:
            return 4.0 * pi_sq / 9.0 - 3.0;
        case StatisticId::var_tau:
            return pi_sq / 6.0;
        case StatisticId::var_cond_tau:
        case StatisticId::cov_tau_cond_tau:
            return 3.0 - 5.0 * pi_sq / 18.0;
        case StatisticId::var_shared:
            return 2.0 * pi_sq / 3.0 - 4.0;
        case StatisticId::var_cond_shared:
        case StatisticId::cov_shared_cond_shared:
            return 2.0 * pi_sq / 9.0 - 1.0;
        case StatisticId::cov_shared_tau_resid:
            return 3.0 - 4.0 * pi_sq / 9.0;
        case StatisticId::corr_tau_cond_tau:
            return std::sqrt((3.0 - 5.0 * pi_sq / 18.0) / (pi_sq / 6.0));
        case StatisticId::corr_shared_cond_shared:
            return std::sqrt((2.0 * pi_sq / 9.0 - 1.0) /
                             (2.0 * pi_sq / 3.0 - 4.0));
        case StatisticId::corr_shared_tau_resid:
            return -std::sqrt((4.0 * pi_sq / 9.0 - 3.0) /
                              (2.0 * pi_sq / 3.0 - 4.0));
        default:
            // The remaining statistics grow like log n (or log^2 n).
            return std::nullopt;
    }
}

Rat pair_event_pmf_exact(int n, int k) {
    check_n(n);
    if (k < 1 || k > n - 1)
        throw std::domain_error("pair event index must satisfy 1 <= k <= n-1");
    return frac(2 * (long(n) + 1),
                (long(n) - 1) * (long(k) + 1) * (long(k) + 2));
}

double pair_event_pmf_real(int n, int k) {
    check_n(n);
    if (k < 1 || k > n - 1)
        throw std::domain_error("pair event index must satisfy 1 <= k <= n-1");
    return 2.0 * (double(n) + 1.0) /
           ((double(n) - 1.0) * (double(k) + 1.0) * (double(k) + 2.0));
}

Rat indicator_second_moment_exact(int n, int k) {
    check_n(n);
    if (k < 1 || k > n - 1)
        throw std::domain_error("pair event index must satisfy 1 <= k <= n-1");
    const long N = n;
    const Rat w = Rat(N + 1) / Rat((N - 1) * (N - 1));
    const Int d12 = Int(k + 1) * Int(k + 2);
    const Int d123 = d12 * Int(k + 3);
    const Int d1234 = d123 * Int(k + 4);
    Rat total = 0;
    total += w * Rat(16 * N) / Rat(d1234);
    total -= w * Rat(16) / Rat(d123);
    total += w * Rat(80) / Rat(d1234);
    total += w * Rat(4) / Rat(Int(N) * d12);
    total -= w * Rat(32) / Rat(Int(N) * d123);
    total += w * Rat(96) / Rat(Int(N) * d1234);
    return total;
}

Rat indicator_cross_moment_exact(int n, int k1, int k2) {
    check_n(n);
    if (k1 == k2) return indicator_second_moment_exact(n, k1);
    if (k1 > k2) std::swap(k1, k2);
    if (k1 < 1 || k2 > n - 1)
        throw std::domain_error("pair event indices must satisfy 1 <= k <= n-1");
    const long N = n;
    const Rat w = Rat(N + 1) / Rat((N - 1) * (N - 1));
    const Int a = Int(k1 + 1) * Int(k1 + 2);
    const Int b12 = Int(k2 + 1) * Int(k2 + 2);
    const Int b123 = b12 * Int(k2 + 3);
    const Int b1234 = b123 * Int(k2 + 4);
    Rat total = 0;
    total += w * Rat(4 * (N + 1)) / Rat(a * b12);
    total -= w * Rat(24 * N) / Rat(a * b1234);
    total += w * Rat(32) / Rat(a * b123);
    total -= w * Rat(120) / Rat(a * b1234);
    total -= w * Rat(8) / Rat(Int(N) * a * b12);
    total += w * Rat(64) / Rat(Int(N) * a * b123);
    total -= w * Rat(144) / Rat(Int(N) * a * b1234);
    return total;
}

Rat indicator_variance_exact(int n, int k) {
    check_n(n);
    if (k < 1 || k > n - 1)
        throw std::domain_error("pair event index must satisfy 1 <= k <= n-1");
    const long N = n, K = k;
    const Rat pref = frac(4 * (N + 1), N * (N - 1) * (N - 1));
    const Int poly = Int(N) * Int(3 * K * K + 5 * K - 4) -
                     Int(K * K * K + K * K + 2 * K + 8);
    const Int den = Int((K + 1) * (K + 1)) * Int((K + 2) * (K + 2)) *
                    Int((K + 3) * (K + 4));
    Rat tail(Int(N - (K + 1)) * poly, den);
    tail.canonicalize();
    return pref * tail;
}

} // namespace yule
