#include "yule/harmonic.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace yule {

namespace {

constexpr int kMaxOrder = 64;

void check_args(int n, int r) {
    if (n < 0) throw std::domain_error("harmonic: n must be >= 0");
    if (r < 1 || r > kMaxOrder) throw std::domain_error("harmonic: order out of range");
}

// One prefix-sum row per order r.  Rational rows store exact partial sums;
// real rows keep the compensation term so the sum can continue where it
// stopped without re-adding earlier terms.
struct ExactRow {
    std::vector<Rat> h{Rat(0)}; // h[i] = H(i, r)
};

struct RealRow {
    std::vector<double> h{0.0};
    KahanSum acc;
};

std::mutex g_mutex;
std::vector<ExactRow>& exact_rows() {
    static std::vector<ExactRow> rows;
    return rows;
}
std::vector<RealRow>& real_rows() {
    static std::vector<RealRow> rows;
    return rows;
}

const Rat& exact_entry(int n, int r) {
    auto& rows = exact_rows();
    if ((int)rows.size() < r) rows.resize(r);
    ExactRow& row = rows[r - 1];
    while ((int)row.h.size() <= n) {
        long i = (long)row.h.size();
        Rat term(1);
        for (int p = 0; p < r; ++p) term /= i;
        row.h.push_back(row.h.back() + term);
    }
    return row.h[n];
}

double real_entry(int n, int r) {
    auto& rows = real_rows();
    if ((int)rows.size() < r) rows.resize(r);
    RealRow& row = rows[r - 1];
    while ((int)row.h.size() <= n) {
        double i = (double)row.h.size();
        row.acc.add(std::pow(i, -r));
        row.h.push_back(row.acc.value());
    }
    return row.h[n];
}

} // namespace

Rat harmonic_exact(int n, int r) {
    check_args(n, r);
    std::lock_guard<std::mutex> lock(g_mutex);
    return exact_entry(n, r);
}

double harmonic_real(int n, int r) {
    check_args(n, r);
    std::lock_guard<std::mutex> lock(g_mutex);
    return real_entry(n, r);
}

void harmonic_warm_up(int n_max, int r_max) {
    check_args(n_max, r_max);
    std::lock_guard<std::mutex> lock(g_mutex);
    for (int r = 1; r <= r_max; ++r) {
        exact_entry(n_max, r);
        real_entry(n_max, r);
    }
}

Rat b_factor_exact(int n, const Rat& x) {
    if (n < 0) throw std::domain_error("b_factor: n must be >= 0");
    if (x <= -1) throw std::domain_error("b_factor: requires x > -1");
    Rat acc(1);
    for (long i = 1; i <= n; ++i) acc *= Rat(i) / (Rat(i) + x);
    return acc;
}

double b_factor_real(int n, double x) {
    if (n < 0) throw std::domain_error("b_factor: n must be >= 0");
    if (!(x > -1.0)) throw std::domain_error("b_factor: requires x > -1");
    // Direct product keeps the relative error near n ulps, which matters
    // when callers difference this function; the gamma route takes over
    // where the loop would cost more than the ~1e-13 lgamma noise saves.
    if (n <= 100000) {
        double acc = 1.0;
        for (int i = 1; i <= n; ++i) acc *= double(i) / (double(i) + x);
        return acc;
    }
    // All lgamma arguments are positive here.
    return std::exp(std::lgamma((double)n + 1.0) + std::lgamma(x + 1.0) -
                    std::lgamma((double)n + x + 1.0));
}

} // namespace yule
