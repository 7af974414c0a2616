#pragma once

#include "yule/numeric.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace yule {

// Registry of the closed-form statistics for the height U, the random-pair
// coalescent time tau, its conditional expectation E[tau|Y] given the tree,
// and the shared path U - tau.  "cond" marks quantities built from E[tau|Y],
// "resid" the residual tau - E[tau|Y], and "_sq" second moments.
enum class StatisticId {
    e_u,
    e_u_sq,
    e_tau,
    e_tau_sq,
    e_shared,
    e_u_shared,
    e_u_shared_cond,
    e_shared_sq,
    e_u_tau,
    e_cond_shared_sq,
    e_cond_tau_sq,
    e_tau_resid_sq,
    var_tau,
    var_cond_tau,
    var_shared,
    var_cond_shared,
    cov_tau_cond_tau,
    corr_tau_cond_tau,
    cov_shared_cond_shared,
    corr_shared_cond_shared,
    cov_shared_tau_resid,
    corr_shared_tau_resid,
};

inline constexpr int kStatisticCount = 22;

std::span<const StatisticId> all_statistics();
std::string_view statistic_name(StatisticId id);
std::optional<StatisticId> statistic_from_name(std::string_view name);
bool is_correlation(StatisticId id);

// True unless the statistic's defining variance ratio degenerates at this n
// (the residual tau - E[tau|Y] is identically zero at n = 2, killing
// corr_shared_tau_resid; every other statistic is defined for all n >= 2).
bool statistic_defined(StatisticId id, int n);

// Exact value at n.  Correlations are irrational and not representable here;
// asking for one throws std::invalid_argument.  nullopt = undefined at this n.
std::optional<Rat> statistic_exact(StatisticId id, int n);

// Double-precision value at n (correlations included).
std::optional<double> statistic_real(StatisticId id, int n);

// Mode dispatch.  Correlation values always come back Kind::real: their
// covariance/variance components are computed exactly in rational mode and
// the single square root is taken in double at the end.
std::optional<Value> statistic(StatisticId id, int n, Mode mode);

// n -> infinity limit; nullopt for the statistics that diverge like log n.
std::optional<double> asymptote(StatisticId id);

// pmf of the event index at which a uniformly random tip pair coalesces:
// P(kappa = k) = 2(n+1) / ((n-1)(k+1)(k+2)), 1 <= k <= n-1.
Rat pair_event_pmf_exact(int n, int k);
double pair_event_pmf_real(int n, int k);

// Moments of the per-tree conditional indicator weights E[1_k|Y] = s_k/C(n,2):
// the second moment, the cross moment for two distinct event indices, and the
// variance.
Rat indicator_second_moment_exact(int n, int k);
Rat indicator_cross_moment_exact(int n, int k1, int k2);
Rat indicator_variance_exact(int n, int k);

} // namespace yule
