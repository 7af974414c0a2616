#include "yule/oracle.hpp"

#include <map>
#include <mutex>

namespace yule {

namespace {

void check_order(int m) {
    if (m < 0 || m > 20) throw std::domain_error("moment order must be in [0, 20]");
}

// Pair weights s_k of one topology (same convention as finish_tree, without
// the waits).
void pair_weights(int n, const std::vector<std::array<int, 2>>& child,
                  std::vector<long>& pairs, std::vector<int>& tips) {
    pairs.assign(static_cast<size_t>(n), 0);
    tips.assign(static_cast<size_t>(n), 0);
    for (int k = n - 1; k >= 1; --k) {
        const auto cnt = [&](int ref) {
            return ref < 0 ? 1L : long(tips[static_cast<size_t>(ref)]);
        };
        const long left = cnt(child[static_cast<size_t>(k)][0]);
        const long right = cnt(child[static_cast<size_t>(k)][1]);
        tips[static_cast<size_t>(k)] = static_cast<int>(left + right);
        pairs[static_cast<size_t>(k)] = left * right;
    }
}

std::vector<std::vector<Int>> binomial_table(int m) {
    std::vector<std::vector<Int>> c(static_cast<size_t>(m) + 1);
    for (int p = 0; p <= m; ++p) {
        c[static_cast<size_t>(p)].assign(static_cast<size_t>(p) + 1, Int(1));
        for (int q = 1; q < p; ++q)
            c[static_cast<size_t>(p)][static_cast<size_t>(q)] =
                c[static_cast<size_t>(p) - 1][static_cast<size_t>(q) - 1] +
                c[static_cast<size_t>(p) - 1][static_cast<size_t>(q)];
    }
    return c;
}

// E[T^q] = q! / rate^q for an exponential holding time.
std::vector<Rat> exp_moments(long rate, int m) {
    std::vector<Rat> mom(static_cast<size_t>(m) + 1, Rat(1));
    for (int q = 1; q <= m; ++q)
        mom[static_cast<size_t>(q)] =
            mom[static_cast<size_t>(q) - 1] * Rat(q) / Rat(rate);
    return mom;
}

// Shared convolution step: moments of (sum + one more exponential term).
std::vector<Rat> convolve_step(const std::vector<Rat>& prev, long rate, int m,
                               const std::vector<std::vector<Int>>& binom) {
    const auto term = exp_moments(rate, m);
    std::vector<Rat> next(static_cast<size_t>(m) + 1, Rat(0));
    for (int p = 0; p <= m; ++p) {
        Rat acc = 0;
        for (int q = 0; q <= p; ++q)
            acc += Rat(binom[static_cast<size_t>(p)][static_cast<size_t>(q)]) *
                   prev[static_cast<size_t>(p - q)] *
                   term[static_cast<size_t>(q)];
        next[static_cast<size_t>(p)] = acc;
    }
    return next;
}

struct OracleComponents {
    Rat u2, tau1, tau2, shared1, shared2, cond_shared2;
};

OracleComponents compute_oracle_components(int n) {
    const auto P = prefix_sum_moments(n, 2);
    const auto Q = suffix_sum_moments(n, 2);
    OracleComponents c;
    c.u2 = P[static_cast<size_t>(n)][2];
    c.tau1 = c.tau2 = c.shared1 = c.shared2 = 0;
    for (int k = 1; k <= n - 1; ++k) {
        const Rat pk = pair_event_pmf_exact(n, k);
        c.tau1 += pk * Q[static_cast<size_t>(k)][1];
        c.tau2 += pk * Q[static_cast<size_t>(k)][2];
        c.shared1 += pk * P[static_cast<size_t>(k)][1];
        c.shared2 += pk * P[static_cast<size_t>(k)][2];
    }
    // E[(sum_k w_k S_k)^2] with w_k the pair weights and S_k the prefix
    // sums; weights and waits are independent, and for k1 < k2 the prefix
    // sums satisfy E[S_k1 S_k2] = E[S_k1^2] + E[S_k1](E[S_k2] - E[S_k1]).
    c.cond_shared2 = 0;
    for (int k = 1; k <= n - 1; ++k)
        c.cond_shared2 +=
            indicator_second_moment_exact(n, k) * P[static_cast<size_t>(k)][2];
    for (int k1 = 1; k1 <= n - 2; ++k1) {
        const Rat s1_sq = P[static_cast<size_t>(k1)][2];
        const Rat s1 = P[static_cast<size_t>(k1)][1];
        for (int k2 = k1 + 1; k2 <= n - 1; ++k2) {
            const Rat cross_s =
                s1_sq + s1 * (P[static_cast<size_t>(k2)][1] - s1);
            c.cond_shared2 += Rat(2) *
                              indicator_cross_moment_exact(n, k1, k2) * cross_s;
        }
    }
    return c;
}

// The component DP is quadratic in n with exact arithmetic; memoize it so
// checking several statistics at the same n pays the cost once.
const OracleComponents& oracle_components(int n) {
    static std::mutex mutex;
    static std::map<int, OracleComponents> memo;
    std::scoped_lock lock(mutex);
    auto it = memo.find(n);
    if (it == memo.end()) it = memo.emplace(n, compute_oracle_components(n)).first;
    return it->second;
}

} // namespace

long history_count(int n) {
    if (n < 2) throw std::domain_error("histories require n >= 2 tips");
    if (n > 21) throw std::domain_error("history count overflows past n = 21");
    long f = 1;
    for (int k = 2; k <= n - 1; ++k) f *= k;
    return f;
}

IndicatorMoments enumerate_indicator_moments(int n) {
    if (n < 2 || n > kEnumerationMaxTips)
        throw std::domain_error("exhaustive enumeration is limited to 2 <= n <= 9");
    const size_t nn = static_cast<size_t>(n);
    std::vector<long> sum1(nn, 0), sum2(nn, 0);
    std::vector<std::vector<long>> sum_x(nn, std::vector<long>(nn, 0));
    std::vector<long> pairs;
    std::vector<int> tips;
    long count = 0;
    for_each_history(n, [&](const std::vector<std::array<int, 2>>& child) {
        pair_weights(n, child, pairs, tips);
        ++count;
        for (int k = 1; k <= n - 1; ++k) {
            const long s = pairs[static_cast<size_t>(k)];
            sum1[static_cast<size_t>(k)] += s;
            sum2[static_cast<size_t>(k)] += s * s;
            for (int k2 = k + 1; k2 <= n - 1; ++k2)
                sum_x[static_cast<size_t>(k)][static_cast<size_t>(k2)] +=
                    s * pairs[static_cast<size_t>(k2)];
        }
    });
    if (count != history_count(n))
        throw std::logic_error("history enumeration count mismatch");
    const long C = pair_count(n);
    IndicatorMoments im;
    im.n = n;
    im.mean.assign(nn, Rat(0));
    im.second.assign(nn, Rat(0));
    im.cross.assign(nn, std::vector<Rat>(nn, Rat(0)));
    for (int k = 1; k <= n - 1; ++k) {
        im.mean[static_cast<size_t>(k)] =
            frac(sum1[static_cast<size_t>(k)], count * C);
        im.second[static_cast<size_t>(k)] =
            frac(sum2[static_cast<size_t>(k)], count * C * C);
        for (int k2 = k + 1; k2 <= n - 1; ++k2)
            im.cross[static_cast<size_t>(k)][static_cast<size_t>(k2)] =
                frac(sum_x[static_cast<size_t>(k)][static_cast<size_t>(k2)],
                     count * C * C);
    }
    return im;
}

std::vector<std::vector<Rat>> prefix_sum_moments(int n, int max_order) {
    if (n < 0) throw std::domain_error("prefix moments require n >= 0");
    check_order(max_order);
    const auto binom = binomial_table(max_order);
    std::vector<std::vector<Rat>> P(static_cast<size_t>(n) + 1);
    P[0].assign(static_cast<size_t>(max_order) + 1, Rat(0));
    P[0][0] = 1;
    for (int j = 1; j <= n; ++j)
        P[static_cast<size_t>(j)] =
            convolve_step(P[static_cast<size_t>(j) - 1], j, max_order, binom);
    return P;
}

std::vector<std::vector<Rat>> suffix_sum_moments(int n, int max_order) {
    if (n < 0) throw std::domain_error("suffix moments require n >= 0");
    check_order(max_order);
    const auto binom = binomial_table(max_order);
    std::vector<std::vector<Rat>> Q(static_cast<size_t>(n) + 1);
    Q[static_cast<size_t>(n)].assign(static_cast<size_t>(max_order) + 1, Rat(0));
    Q[static_cast<size_t>(n)][0] = 1;
    for (int k = n - 1; k >= 0; --k)
        Q[static_cast<size_t>(k)] = convolve_step(
            Q[static_cast<size_t>(k) + 1], k + 1, max_order, binom);
    return Q;
}

Rat oracle_height_moment(int n, int m) {
    if (n < 1) throw std::domain_error("height moments require n >= 1");
    check_order(m);
    return prefix_sum_moments(n, m)[static_cast<size_t>(n)][static_cast<size_t>(m)];
}

Rat oracle_tau_moment(int n, int m) {
    if (n < 2) throw std::domain_error("pair moments require n >= 2");
    check_order(m);
    const auto Q = suffix_sum_moments(n, m);
    Rat acc = 0;
    for (int k = 1; k <= n - 1; ++k)
        acc += pair_event_pmf_exact(n, k) *
               Q[static_cast<size_t>(k)][static_cast<size_t>(m)];
    return acc;
}

Rat oracle_shared_moment(int n, int m) {
    if (n < 2) throw std::domain_error("pair moments require n >= 2");
    check_order(m);
    const auto P = prefix_sum_moments(n, m);
    Rat acc = 0;
    for (int k = 1; k <= n - 1; ++k)
        acc += pair_event_pmf_exact(n, k) *
               P[static_cast<size_t>(k)][static_cast<size_t>(m)];
    return acc;
}

Rat enumerated_tau_moment(int n, int m) {
    check_order(m);
    const auto im = enumerate_indicator_moments(n);
    const auto Q = suffix_sum_moments(n, m);
    Rat acc = 0;
    for (int k = 1; k <= n - 1; ++k)
        acc += im.mean[static_cast<size_t>(k)] *
               Q[static_cast<size_t>(k)][static_cast<size_t>(m)];
    return acc;
}

Rat enumerated_shared_moment(int n, int m) {
    check_order(m);
    const auto im = enumerate_indicator_moments(n);
    const auto P = prefix_sum_moments(n, m);
    Rat acc = 0;
    for (int k = 1; k <= n - 1; ++k)
        acc += im.mean[static_cast<size_t>(k)] *
               P[static_cast<size_t>(k)][static_cast<size_t>(m)];
    return acc;
}

bool oracle_supports(StatisticId id) {
    switch (id) {
        case StatisticId::e_tau:
        case StatisticId::e_tau_sq:
        case StatisticId::e_shared:
        case StatisticId::e_shared_sq:
        case StatisticId::e_cond_shared_sq:
        case StatisticId::e_cond_tau_sq:
        case StatisticId::e_u_tau:
        case StatisticId::e_tau_resid_sq:
        case StatisticId::var_tau:
        case StatisticId::var_cond_tau:
        case StatisticId::var_shared:
        case StatisticId::var_cond_shared:
            return true;
        default:
            return false;
    }
}

Rat oracle_statistic(StatisticId id, int n) {
    if (n < 2) throw std::domain_error("statistics require n >= 2");
    if (!oracle_supports(id))
        throw std::invalid_argument("statistic has no oracle route");
    const auto& c = oracle_components(n);
    const Rat resid2 = c.shared2 - c.cond_shared2;
    switch (id) {
        case StatisticId::e_tau:
            return c.tau1;
        case StatisticId::e_tau_sq:
            return c.tau2;
        case StatisticId::e_shared:
            return c.shared1;
        case StatisticId::e_shared_sq:
            return c.shared2;
        case StatisticId::e_cond_shared_sq:
            return c.cond_shared2;
        case StatisticId::e_cond_tau_sq:
            return c.tau2 - resid2;
        case StatisticId::e_u_tau:
            return (c.u2 + c.tau2 - c.shared2) / Rat(2);
        case StatisticId::e_tau_resid_sq:
            return resid2;
        case StatisticId::var_tau:
            return c.tau2 - c.tau1 * c.tau1;
        case StatisticId::var_cond_tau:
            return (c.tau2 - resid2) - c.tau1 * c.tau1;
        case StatisticId::var_shared:
            return c.shared2 - c.shared1 * c.shared1;
        case StatisticId::var_cond_shared:
            return c.cond_shared2 - c.shared1 * c.shared1;
        default:
            throw std::invalid_argument("statistic has no oracle route");
    }
}

} // namespace yule
