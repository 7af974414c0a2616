#include "doctest.h"

#include "yule/moments.hpp"
#include "yule/statistics.hpp"

#include <cmath>
#include <stdexcept>

using namespace yule;

namespace {

Rat ex(StatisticId id, int n) { return *statistic_exact(id, n); }

} // namespace

TEST_SUITE("statistics") {

TEST_CASE("registry enumeration and names") {
    CHECK(all_statistics().size() == size_t(kStatisticCount));
    for (const auto id : all_statistics()) {
        const auto back = statistic_from_name(statistic_name(id));
        REQUIRE(back.has_value());
        CHECK(*back == id);
    }
    CHECK(!statistic_from_name("no_such_statistic").has_value());
    CHECK(is_correlation(StatisticId::corr_tau_cond_tau));
    CHECK(is_correlation(StatisticId::corr_shared_cond_shared));
    CHECK(is_correlation(StatisticId::corr_shared_tau_resid));
    int corr = 0;
    for (const auto id : all_statistics()) corr += is_correlation(id) ? 1 : 0;
    CHECK(corr == 3);
}

TEST_CASE("frozen values at n = 2") {
    CHECK(ex(StatisticId::e_u, 2) == frac(3, 2));
    CHECK(ex(StatisticId::e_u_sq, 2) == frac(7, 2));
    CHECK(ex(StatisticId::e_tau, 2) == frac(1, 2));
    CHECK(ex(StatisticId::e_tau_sq, 2) == frac(1, 2));
    CHECK(ex(StatisticId::e_shared, 2) == Rat(1));
    CHECK(ex(StatisticId::e_u_shared, 2) == frac(5, 2));
    CHECK(ex(StatisticId::e_u_shared_cond, 2) == frac(5, 2));
    CHECK(ex(StatisticId::e_shared_sq, 2) == Rat(2));
    CHECK(ex(StatisticId::e_u_tau, 2) == Rat(1));
    CHECK(ex(StatisticId::e_cond_shared_sq, 2) == Rat(2));
    CHECK(ex(StatisticId::e_cond_tau_sq, 2) == frac(1, 2));
    CHECK(ex(StatisticId::e_tau_resid_sq, 2) == Rat(0));
    CHECK(ex(StatisticId::var_tau, 2) == frac(1, 4));
    CHECK(ex(StatisticId::var_cond_tau, 2) == frac(1, 4));
    CHECK(ex(StatisticId::var_shared, 2) == Rat(1));
    CHECK(ex(StatisticId::var_cond_shared, 2) == Rat(1));
    CHECK(ex(StatisticId::cov_tau_cond_tau, 2) == frac(1, 4));
    CHECK(ex(StatisticId::cov_shared_cond_shared, 2) == Rat(1));
    CHECK(ex(StatisticId::cov_shared_tau_resid, 2) == Rat(0));
    // Both conditional correlations are exactly 1 at n = 2 (tau is a
    // deterministic function of the tree there).
    CHECK(statistic(StatisticId::corr_tau_cond_tau, 2, Mode::rational)
              ->as_double() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(statistic(StatisticId::corr_shared_cond_shared, 2, Mode::rational)
              ->as_double() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(!statistic(StatisticId::corr_shared_tau_resid, 2, Mode::rational)
               .has_value());
}

TEST_CASE("first and second moments agree with the moment engine") {
    for (int n = 2; n <= 40; ++n) {
        CHECK(ex(StatisticId::e_u, n) == height_moment_exact(n, 1));
        CHECK(ex(StatisticId::e_u_sq, n) == height_moment_exact(n, 2));
        CHECK(ex(StatisticId::e_tau, n) == tau_moment_exact(n, 1));
        CHECK(ex(StatisticId::e_tau_sq, n) == tau_moment_exact(n, 2));
        CHECK(ex(StatisticId::e_shared, n) == shared_moment_exact(n, 1));
        CHECK(ex(StatisticId::e_shared_sq, n) == shared_moment_exact(n, 2));
    }
}

TEST_CASE("exact structural identities") {
    for (int n = 2; n <= 60; ++n) {
        // U = tau + shared path.
        CHECK(ex(StatisticId::e_u, n) ==
              ex(StatisticId::e_tau, n) + ex(StatisticId::e_shared, n));
        // Product expansion of (U - tau)^2.
        CHECK(ex(StatisticId::e_u_tau, n) ==
              (ex(StatisticId::e_u_sq, n) + ex(StatisticId::e_tau_sq, n) -
               ex(StatisticId::e_shared_sq, n)) /
                  Rat(2));
        // E[U(U - tau)] = E[U^2] - E[U tau].
        CHECK(ex(StatisticId::e_u_shared, n) ==
              ex(StatisticId::e_u_sq, n) - ex(StatisticId::e_u_tau, n));
        // Tower property through the tree sigma-field.
        CHECK(ex(StatisticId::e_tau_resid_sq, n) ==
              ex(StatisticId::e_shared_sq, n) -
                  ex(StatisticId::e_cond_shared_sq, n));
        CHECK(ex(StatisticId::e_cond_tau_sq, n) ==
              ex(StatisticId::e_tau_sq, n) -
                  ex(StatisticId::e_tau_resid_sq, n));
        // Variance decompositions.
        CHECK(ex(StatisticId::var_tau, n) ==
              ex(StatisticId::e_tau_sq, n) -
                  ex(StatisticId::e_tau, n) * ex(StatisticId::e_tau, n));
        CHECK(ex(StatisticId::var_shared, n) ==
              ex(StatisticId::e_shared_sq, n) -
                  ex(StatisticId::e_shared, n) * ex(StatisticId::e_shared, n));
        CHECK(ex(StatisticId::var_cond_tau, n) ==
              ex(StatisticId::e_cond_tau_sq, n) -
                  ex(StatisticId::e_tau, n) * ex(StatisticId::e_tau, n));
        CHECK(ex(StatisticId::var_cond_shared, n) ==
              ex(StatisticId::e_cond_shared_sq, n) -
                  ex(StatisticId::e_shared, n) * ex(StatisticId::e_shared, n));
        CHECK(ex(StatisticId::var_tau, n) ==
              ex(StatisticId::var_cond_tau, n) +
                  ex(StatisticId::e_tau_resid_sq, n));
        // Covariances collapse onto conditional variances / residual moments.
        CHECK(ex(StatisticId::cov_tau_cond_tau, n) ==
              ex(StatisticId::var_cond_tau, n));
        CHECK(ex(StatisticId::cov_shared_cond_shared, n) ==
              ex(StatisticId::var_cond_shared, n));
        CHECK(ex(StatisticId::cov_shared_tau_resid, n) ==
              -ex(StatisticId::e_tau_resid_sq, n));
        CHECK(ex(StatisticId::e_u_shared, n) ==
              ex(StatisticId::e_u_shared_cond, n));
    }
}

TEST_CASE("pair event pmf sums to one and stays positive") {
    for (int n = 2; n <= 500; ++n) {
        Rat total(0);
        for (int k = 1; k <= n - 1; ++k) {
            const Rat p = pair_event_pmf_exact(n, k);
            CHECK(sgn(p) > 0);
            total += p;
        }
        CHECK(total == Rat(1));
    }
    CHECK(pair_event_pmf_exact(4, 1) == frac(10, 18));
    CHECK(pair_event_pmf_real(4, 1) ==
          doctest::Approx(10.0 / 18.0).epsilon(1e-15));
    CHECK_THROWS_AS(pair_event_pmf_exact(4, 0), std::domain_error);
    CHECK_THROWS_AS(pair_event_pmf_exact(4, 4), std::domain_error);
}

TEST_CASE("indicator moment identities") {
    for (int n : {2, 3, 4, 5, 6, 7, 8, 12, 40}) {
        // sum_k E[w_k^2] + 2 sum_{k1<k2} E[w_k1 w_k2] = E[(sum_k w_k)^2] = 1.
        Rat total(0);
        for (int k = 1; k <= n - 1; ++k)
            total += indicator_second_moment_exact(n, k);
        for (int k1 = 1; k1 <= n - 2; ++k1)
            for (int k2 = k1 + 1; k2 <= n - 1; ++k2)
                total += Rat(2) * indicator_cross_moment_exact(n, k1, k2);
        CHECK(total == Rat(1));
        // Variance form agrees with second moment minus squared pmf.
        for (int k = 1; k <= n - 1; ++k) {
            const Rat p = pair_event_pmf_exact(n, k);
            CHECK(indicator_variance_exact(n, k) ==
                  indicator_second_moment_exact(n, k) - p * p);
        }
    }
    // Degenerate points: the last event always has weight 1/C(n,2), and at
    // (n,k) = (3,1) the weight is deterministic as well.
    for (int n : {2, 3, 4, 9, 30})
        CHECK(indicator_variance_exact(n, n - 1) == Rat(0));
    CHECK(indicator_variance_exact(3, 1) == Rat(0));
    CHECK(indicator_variance_exact(4, 2) == frac(1, 162));
    // Hand-expanded small values.
    CHECK(indicator_second_moment_exact(2, 1) == Rat(1));
    CHECK(indicator_second_moment_exact(3, 1) == frac(4, 9));
    CHECK(indicator_second_moment_exact(3, 2) == frac(1, 9));
    CHECK(indicator_cross_moment_exact(3, 1, 2) == frac(2, 9));
    CHECK(indicator_cross_moment_exact(3, 2, 1) == frac(2, 9)); // symmetric
}

TEST_CASE("defined-ness rule") {
    for (int n = 2; n <= 60; ++n)
        for (const auto id : all_statistics())
            CHECK(statistic_defined(id, n) ==
                  !(id == StatisticId::corr_shared_tau_resid && n == 2));
    CHECK_THROWS_AS(statistic_defined(StatisticId::e_u, 1), std::domain_error);
}

TEST_CASE("positivity backing the defined-ness rule") {
    for (int n = 3; n <= 300; ++n) {
        CHECK(sgn(ex(StatisticId::var_tau, n)) > 0);
        CHECK(sgn(ex(StatisticId::var_cond_tau, n)) > 0);
        CHECK(sgn(ex(StatisticId::var_shared, n)) > 0);
        CHECK(sgn(ex(StatisticId::var_cond_shared, n)) > 0);
        CHECK(sgn(ex(StatisticId::e_tau_resid_sq, n)) > 0);
    }
    CHECK(sgn(ex(StatisticId::var_tau, 2)) > 0);
    CHECK(sgn(ex(StatisticId::var_shared, 2)) > 0);
    CHECK(ex(StatisticId::e_tau_resid_sq, 2) == Rat(0)); // the lone zero
}

TEST_CASE("exact-vs-real and mode dispatch") {
    for (int n : {2, 3, 10, 100, 1000}) {
        for (const auto id : all_statistics()) {
            if (is_correlation(id)) {
                CHECK_THROWS_AS(statistic_exact(id, n), std::invalid_argument);
                const auto exact_mode = statistic(id, n, Mode::rational);
                const auto real_mode = statistic(id, n, Mode::real);
                CHECK(exact_mode.has_value() == real_mode.has_value());
                if (!exact_mode) continue;
                CHECK(exact_mode->kind == Value::Kind::real);
                CHECK(real_mode->as_double() ==
                      doctest::Approx(exact_mode->as_double()).epsilon(1e-10));
                continue;
            }
            const auto exact = statistic_exact(id, n);
            const auto real = statistic_real(id, n);
            REQUIRE(exact.has_value());
            REQUIRE(real.has_value());
            constexpr double kTol = 1e-11;
            CHECK(*real == doctest::Approx(exact->get_d()).epsilon(kTol));
            const auto v = statistic(id, n, Mode::rational);
            CHECK(v->kind == Value::Kind::rational);
            CHECK(v->exact == *exact);
            const auto w = statistic(id, n, Mode::real);
            CHECK(w->kind == Value::Kind::real);
            CHECK(w->approx == *real);
        }
    }
}

TEST_CASE("asymptote coverage and convergence") {
    const StatisticId finite[] = {
        StatisticId::e_shared,          StatisticId::e_shared_sq,
        StatisticId::e_cond_shared_sq,  StatisticId::e_tau_resid_sq,
        StatisticId::var_tau,           StatisticId::var_cond_tau,
        StatisticId::var_shared,        StatisticId::var_cond_shared,
        StatisticId::cov_tau_cond_tau,  StatisticId::cov_shared_cond_shared,
        StatisticId::cov_shared_tau_resid,
        StatisticId::corr_tau_cond_tau, StatisticId::corr_shared_cond_shared,
        StatisticId::corr_shared_tau_resid,
    };
    int finite_count = 0;
    for (const auto id : all_statistics())
        finite_count += asymptote(id).has_value() ? 1 : 0;
    CHECK(finite_count == 14);
    for (const auto id : finite) {
        const auto limit = asymptote(id);
        REQUIRE(limit.has_value());
        const double near = *statistic_real(id, 5000);
        const double far = *statistic_real(id, 250);
        CHECK(std::abs(near - *limit) < std::abs(far - *limit));
        CHECK(std::abs(near - *limit) < 0.1);
    }
    // Divergent ones grow with n and advertise no limit.
    for (const auto id :
         {StatisticId::e_u, StatisticId::e_u_sq, StatisticId::e_tau,
          StatisticId::e_tau_sq, StatisticId::e_u_tau,
          StatisticId::e_cond_tau_sq, StatisticId::e_u_shared,
          StatisticId::e_u_shared_cond}) {
        CHECK(!asymptote(id).has_value());
        CHECK(*statistic_real(id, 4000) > *statistic_real(id, 400));
    }
}

TEST_CASE("known limit constants") {
    const double pi_sq = 9.869604401089358;
    CHECK(*asymptote(StatisticId::var_tau) ==
          doctest::Approx(pi_sq / 6.0).epsilon(1e-12));
    CHECK(*asymptote(StatisticId::e_shared) == 2.0);
    CHECK(*asymptote(StatisticId::corr_tau_cond_tau) ==
          doctest::Approx(0.396).epsilon(2e-3));
    CHECK(*asymptote(StatisticId::corr_shared_cond_shared) ==
          doctest::Approx(0.680).epsilon(2e-3));
    CHECK(*asymptote(StatisticId::corr_shared_tau_resid) ==
          doctest::Approx(-0.733).epsilon(2e-3));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(statistic_exact(StatisticId::e_u, 1), std::domain_error);
    CHECK_THROWS_AS(statistic_real(StatisticId::e_u, 0), std::domain_error);
    CHECK_THROWS_AS(statistic(StatisticId::e_u, -3, Mode::rational),
                    std::domain_error);
}

} // TEST_SUITE
