// Acceptance gate: every release requirement as one pass/fail line.
// Run with no arguments for all criteria, or --criterion K for one.
// Exit status is nonzero when any executed criterion fails.

#include "yule/moments.hpp"
#include "yule/oracle.hpp"
#include "yule/partitions.hpp"
#include "yule/statistics.hpp"
#include "yule/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

using namespace yule;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool g_all_pass = true;

void report(int k, bool pass, const char* description) {
    std::printf("criterion %d: %s — %s\n", k, pass ? "PASS" : "FAIL",
                description);
    if (!pass) g_all_pass = false;
}

Rat ex(StatisticId id, int n) { return *statistic_exact(id, n); }

// -- criterion 1: partition coefficients ------------------------------------

bool criterion_partitions() {
    const auto start = Clock::now();
    bool ok = true;
    for (int m = 1; m <= 2; ++m)
        for (const auto& part : partitions(m))
            if (coefficient(part) != 1) {
                ok = false;
                std::printf("  order-%d coefficient differs from 1\n", m);
            }
    for (int m = 1; m <= 10; ++m) {
        Int factorial = 1;
        for (int i = 2; i <= m; ++i) factorial *= i;
        const Int sum = coefficient_sum(m);
        if (sum != factorial) {
            ok = false;
            std::printf("  coefficient sum at order %d: %s expected %s\n", m,
                        sum.get_str().c_str(), factorial.get_str().c_str());
        }
    }
    const double elapsed = seconds_since(start);
    std::printf("  orders 1..10 checked in %.3f s (budget 1 s)\n", elapsed);
    if (elapsed >= 1.0) ok = false;
    return ok;
}

// -- criterion 2: low moments equal registry closed forms --------------------

bool criterion_low_moments() {
    bool ok = true;
    long checked = 0;
    for (int n = 2; n <= 200; ++n) {
        const bool agree = ex(StatisticId::e_u, n) == height_moment_exact(n, 1) &&
                           ex(StatisticId::e_u_sq, n) == height_moment_exact(n, 2) &&
                           ex(StatisticId::e_tau, n) == tau_moment_exact(n, 1) &&
                           ex(StatisticId::e_tau_sq, n) == tau_moment_exact(n, 2) &&
                           ex(StatisticId::e_shared, n) == shared_moment_exact(n, 1) &&
                           ex(StatisticId::e_shared_sq, n) == shared_moment_exact(n, 2);
        checked += 6;
        if (!agree) {
            ok = false;
            std::printf("  mismatch at n = %d\n", n);
        }
    }
    std::printf("  %ld exact equalities over n = 2..200\n", checked);
    return ok;
}

// -- criterion 3: structural identities, exact for n = 2..200 ----------------

bool criterion_identities() {
    bool ok = true;
    long checked = 0;
    for (int n = 2; n <= 200; ++n) {
        struct Named {
            const char* what;
            bool holds;
        };
        const Rat resid2 = ex(StatisticId::e_tau_resid_sq, n);
        const Named identities[] = {
            {"var_tau = var_cond_tau + e_tau_resid_sq",
             ex(StatisticId::var_tau, n) ==
                 ex(StatisticId::var_cond_tau, n) + resid2},
            {"e_tau_resid_sq = e_shared_sq - e_cond_shared_sq",
             resid2 == ex(StatisticId::e_shared_sq, n) -
                           ex(StatisticId::e_cond_shared_sq, n)},
            {"e_u_tau = (e_u_sq + e_tau_sq - e_shared_sq) / 2",
             ex(StatisticId::e_u_tau, n) ==
                 (ex(StatisticId::e_u_sq, n) + ex(StatisticId::e_tau_sq, n) -
                  ex(StatisticId::e_shared_sq, n)) /
                     2},
            {"e_u_shared = e_u_shared_cond",
             ex(StatisticId::e_u_shared, n) ==
                 ex(StatisticId::e_u_shared_cond, n)},
            {"cov_tau_cond_tau = var_cond_tau",
             ex(StatisticId::cov_tau_cond_tau, n) ==
                 ex(StatisticId::var_cond_tau, n)},
            {"cov_shared_cond_shared = var_cond_shared",
             ex(StatisticId::cov_shared_cond_shared, n) ==
                 ex(StatisticId::var_cond_shared, n)},
            {"cov_shared_tau_resid = -e_tau_resid_sq",
             ex(StatisticId::cov_shared_tau_resid, n) == -resid2},
        };
        for (const auto& identity : identities) {
            ++checked;
            if (!identity.holds) {
                ok = false;
                std::printf("  broken at n = %d: %s\n", n, identity.what);
            }
        }
    }
    std::printf("  %ld exact identities over n = 2..200\n", checked);
    return ok;
}

// -- criterion 4: enumeration and moment-DP oracles --------------------------

bool criterion_oracles() {
    const auto start = Clock::now();
    bool ok = true;
    for (int n = 2; n <= kEnumerationMaxTips - 1; ++n) {
        const auto im = enumerate_indicator_moments(n);
        for (int k = 1; k <= n - 1; ++k) {
            if (im.mean[size_t(k)] != pair_event_pmf_exact(n, k) ||
                im.second[size_t(k)] != indicator_second_moment_exact(n, k)) {
                ok = false;
                std::printf("  enumeration mismatch at n = %d, k = %d\n", n, k);
            }
            for (int k2 = k + 1; k2 <= n - 1; ++k2)
                if (im.cross[size_t(k)][size_t(k2)] !=
                    indicator_cross_moment_exact(n, k, k2)) {
                    ok = false;
                    std::printf("  cross mismatch at n = %d, (%d, %d)\n", n, k,
                                k2);
                }
        }
    }
    std::printf("  enumeration agrees with indicator closed forms, n = 2..8\n");
    long compared = 0;
    for (int n = 2; n <= 100; ++n)
        for (const auto id : all_statistics()) {
            if (!oracle_supports(id)) continue;
            ++compared;
            if (oracle_statistic(id, n) != ex(id, n)) {
                ok = false;
                std::printf("  oracle mismatch: %s at n = %d\n",
                            std::string(statistic_name(id)).c_str(), n);
            }
        }
    const double elapsed = seconds_since(start);
    std::printf("  %ld oracle/registry equalities over n = 2..100 in %.1f s "
                "(budget 60 s)\n",
                compared, elapsed);
    if (elapsed >= 60.0) ok = false;
    return ok;
}

// -- criterion 5: named constants at n = 2500 --------------------------------

bool criterion_constants() {
    struct Target {
        StatisticId id;
        double value;
    };
    const Target targets[] = {
        {StatisticId::e_cond_shared_sq, 5.19325},
        {StatisticId::var_tau, 1.645},
        {StatisticId::var_cond_tau, 0.258},
        {StatisticId::var_shared, 2.5797},
        {StatisticId::var_cond_shared, 1.193},
        {StatisticId::e_tau_resid_sq, 1.38649},
        {StatisticId::corr_tau_cond_tau, 0.396},
        {StatisticId::corr_shared_cond_shared, 0.680},
        {StatisticId::corr_shared_tau_resid, -0.733},
    };
    const double tolerance = 0.02;
    bool ok = true;
    for (const auto& target : targets) {
        const double got = *statistic_real(target.id, 2500);
        const double delta = std::fabs(got - target.value);
        const bool within = delta <= tolerance;
        std::printf("  %-24s computed %.6f target %.5f |delta| %.5f %s\n",
                    std::string(statistic_name(target.id)).c_str(), got,
                    target.value, delta, within ? "ok" : "EXCEEDS 0.02");
        if (!within) ok = false;
    }
    return ok;
}

// -- criterion 6: default Monte Carlo experiment -----------------------------

bool criterion_monte_carlo() {
    const auto start = Clock::now();
    ExperimentConfig config; // defaults: full grid, default budgets, z = 4
    config.threads = 1;      // the time budget is a single-threaded bound
    const auto report = run_experiment(config);
    const double elapsed = seconds_since(start);

    long checkable = 0, passed = 0, skipped = 0;
    for (const auto& row : report.rows) {
        if (row.status == RowStatus::skipped) {
            ++skipped;
            continue;
        }
        ++checkable;
        passed += row.status == RowStatus::pass;
    }
    const double fraction = checkable ? double(passed) / double(checkable) : 1.0;

    bool degenerate_zero = false, degenerate_skip = false;
    for (const auto& row : report.rows) {
        if (row.n != 2) continue;
        if (row.id == StatisticId::e_tau_resid_sq)
            degenerate_zero = row.estimate.has_value() && *row.estimate == 0.0 &&
                              row.status == RowStatus::pass;
        if (row.id == StatisticId::corr_shared_tau_resid)
            degenerate_skip = row.status == RowStatus::skipped;
    }

    std::printf("  %ld rows: %ld checkable, %ld passed (%.4f), %ld skipped\n",
                long(report.rows.size()), checkable, passed, fraction, skipped);
    std::printf("  n = 2 residual second moment estimate is exactly 0: %s\n",
                degenerate_zero ? "yes" : "NO");
    std::printf("  n = 2 residual correlation row skipped: %s\n",
                degenerate_skip ? "yes" : "NO");
    std::printf("  wall time %.1f s single-threaded (budget 600 s)\n", elapsed);
    return fraction >= 0.99 && degenerate_zero && degenerate_skip &&
           elapsed <= 600.0;
}

// -- criterion 7: byte-identical reports ------------------------------------

bool criterion_determinism() {
    ExperimentConfig base;
    base.grid = {2, 5, 25, 200};
    base.replicates_override = 5000;
    base.seed = 123;
    std::vector<int> thread_counts = {1, 1, 3, 0};
    std::string first_csv, first_json;
    bool ok = true;
    for (size_t i = 0; i < thread_counts.size(); ++i) {
        ExperimentConfig config = base;
        config.threads = thread_counts[i];
        const auto report = run_experiment(config);
        const auto csv = render_csv(report);
        const auto json = render_json(report);
        if (i == 0) {
            first_csv = csv;
            first_json = json;
        } else if (csv != first_csv || json != first_json) {
            ok = false;
            std::printf("  run %zu (threads = %d) diverged\n", i,
                        thread_counts[i]);
        }
    }
    std::printf("  4 runs (threads 1, 1, 3, all) produced identical CSV and "
                "JSON: %s\n",
                ok ? "yes" : "NO");
    return ok;
}

// -- criterion 8: scope statement --------------------------------------------

bool criterion_scope() {
    std::printf("  out of scope by design: the extreme-value limit law of the "
                "height and asymptotic error-order statements.\n");
    std::printf("  the exact identities of criterion 3 and the oracle checks "
                "of criterion 4 are the substituted guarantees.\n");
    return true;
}

} // namespace

int main(int argc, char** argv) {
    int selected = 0; // 0 = all
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            selected = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion K]\n", argv[0]);
            return 2;
        }
    }
    if (selected < 0 || selected > 8) {
        std::fprintf(stderr, "criterion must be 1..8\n");
        return 2;
    }

    struct Entry {
        int k;
        bool (*run)();
        const char* what;
    };
    const Entry entries[] = {
        {1, criterion_partitions,
         "order-1/2 partition coefficients are 1; sums equal m! for m <= 10"},
        {2, criterion_low_moments,
         "registry first/second moments equal the engine closed forms, n = 2..200"},
        {3, criterion_identities,
         "structural identities hold in exact arithmetic, n = 2..200"},
        {4, criterion_oracles,
         "enumeration and moment-DP oracles agree with the registry"},
        {5, criterion_constants,
         "float registry values at n = 2500 within 0.02 of reference constants"},
        {6, criterion_monte_carlo,
         "default Monte Carlo experiment passes >= 99% of checkable rows"},
        {7, criterion_determinism,
         "verification reports are byte-identical across thread counts"},
        {8, criterion_scope, "documented scope exclusions"},
    };
    for (const auto& entry : entries) {
        if (selected != 0 && entry.k != selected) continue;
        report(entry.k, entry.run(), entry.what);
    }
    return g_all_pass ? 0 : 1;
}
