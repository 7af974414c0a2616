#pragma once

#include "yule/numeric.hpp"
#include "yule/sim.hpp"
#include "yule/statistics.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace yule {

// Independent cross-checks for the closed-form registry.  Two routes:
//  - exhaustive enumeration of all (n-1)! equally likely event-order
//    topologies (small n), averaging the exact pair weights per tree;
//  - a moment DP over prefix/suffix sums of the independent holding times,
//    which never touches the partition/harmonic machinery.

inline constexpr int kEnumerationMaxTips = 9;

// (n-1)!; guarded against overflow.
long history_count(int n);

// Visits every event-order topology of an n-tip tree exactly once.  The
// chooser digits run in mixed radix (digit for event k ranges over [0, k)),
// so the visit order is deterministic.
template <class Fn>
void for_each_history(int n, Fn&& fn) {
    if (n < 2) throw std::domain_error("histories require n >= 2 tips");
    std::vector<int> digit(static_cast<size_t>(n > 2 ? n - 2 : 0), 0);
    std::vector<std::array<int, 2>> child;
    while (true) {
        build_topology(
            n, [&digit](int k) { return digit[static_cast<size_t>(k - 2)]; },
            child);
        fn(static_cast<const std::vector<std::array<int, 2>>&>(child));
        size_t i = 0;
        for (; i < digit.size(); ++i) {
            if (++digit[i] < static_cast<int>(i) + 2) break;
            digit[i] = 0;
        }
        if (i == digit.size()) return;
    }
}

// Exact moments of the normalized pair weights w_k = s_k / (n choose 2)
// across all histories: mean[k] = E[w_k], second[k] = E[w_k^2],
// cross[k1][k2] = E[w_k1 w_k2] (k1 < k2).  Index 0 is unused padding.
struct IndicatorMoments {
    int n = 0;
    std::vector<Rat> mean;
    std::vector<Rat> second;
    std::vector<std::vector<Rat>> cross;
};

IndicatorMoments enumerate_indicator_moments(int n); // n <= kEnumerationMaxTips

// P[j][p] = E[(T_1 + ... + T_j)^p] for 0 <= j <= n, 0 <= p <= max_order,
// with T_i independent exponentials of rate i.
std::vector<std::vector<Rat>> prefix_sum_moments(int n, int max_order);

// Q[k][p] = E[(T_{k+1} + ... + T_n)^p] for 0 <= k <= n.
std::vector<std::vector<Rat>> suffix_sum_moments(int n, int max_order);

// Moment cross-checks built purely from the DP tables and the pair-event
// pmf; valid for any n within time budget.
Rat oracle_height_moment(int n, int m);
Rat oracle_tau_moment(int n, int m);
Rat oracle_shared_moment(int n, int m);

// Same moments with the pmf replaced by enumeration-averaged pair weights;
// fully independent of every closed form (n <= kEnumerationMaxTips).
Rat enumerated_tau_moment(int n, int m);
Rat enumerated_shared_moment(int n, int m);

// Registry statistics reproducible through the DP + indicator-moment route.
bool oracle_supports(StatisticId id);
Rat oracle_statistic(StatisticId id, int n);

} // namespace yule
