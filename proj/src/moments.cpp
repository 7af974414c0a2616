#include "yule/moments.hpp"

#include "yule/harmonic.hpp"
#include "yule/partitions.hpp"

#include <cmath>
#include <stdexcept>

namespace yule {

namespace {

void check_moment_args(int n, int m, int n_min) {
    if (n < n_min) throw std::domain_error("moment: n below the kind's minimum");
    if (m < 0 || m > kMaxMomentOrder)
        throw std::domain_error("moment: order must be in 0..20");
}

Int factorial(int m) {
    Int f(1);
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

// Product over parts i of base_i^{k_i}, with the bases supplied per part.
template <class S, class BaseFn>
S partition_term(const PartitionVec& k, BaseFn base) {
    S prod(1);
    for (size_t idx = 0; idx < k.size(); ++idx) {
        int count = k[idx];
        if (count == 0) continue;
        S b = base((int)(idx + 1));
        for (int c = 0; c < count; ++c) prod *= b;
    }
    return prod;
}

} // namespace

Rat height_moment_exact(int n, int m) {
    check_moment_args(n, m, 1);
    if (m == 0) return Rat(1);
    Rat total(0);
    for (const PartitionVec& k : partitions(m)) {
        Rat term = partition_term<Rat>(k, [&](int i) { return harmonic_exact(n, i); });
        total += Rat(coefficient(k)) * term;
    }
    return total;
}

double height_moment_real(int n, int m) {
    check_moment_args(n, m, 1);
    if (m == 0) return 1.0;
    KahanSum total;
    for (const PartitionVec& k : partitions(m)) {
        double term = partition_term<double>(k, [&](int i) { return harmonic_real(n, i); });
        total.add(coefficient(k).get_d() * term);
    }
    return total.value();
}

Rat tau_moment_exact(int n, int m) {
    check_moment_args(n, m, 2);
    if (m == 0) return Rat(1);
    Rat sum(0);
    for (const PartitionVec& k : partitions(m)) {
        Rat term = partition_term<Rat>(k, [&](int i) {
            Rat h = harmonic_exact(n, i);
            return (i % 2 == 1) ? Rat(h - 2) : h;
        });
        sum += Rat(coefficient(k)) * term;
    }
    int sign = (m % 2 == 1) ? 1 : -1; // (-1)^{m+1}
    Rat head = Rat(sign) * Rat(2) * Rat(factorial(m)) / Rat(n - 1);
    return head + Rat(n + 1) / Rat(n - 1) * sum;
}

double tau_moment_real(int n, int m) {
    check_moment_args(n, m, 2);
    if (m == 0) return 1.0;
    KahanSum sum;
    for (const PartitionVec& k : partitions(m)) {
        double term = partition_term<double>(k, [&](int i) {
            double h = harmonic_real(n, i);
            return (i % 2 == 1) ? h - 2.0 : h;
        });
        sum.add(coefficient(k).get_d() * term);
    }
    double sign = (m % 2 == 1) ? 1.0 : -1.0;
    double head = sign * 2.0 * factorial(m).get_d() / (double)(n - 1);
    return head + (double)(n + 1) / (double)(n - 1) * sum.value();
}

Rat shared_moment_exact(int n, int m) {
    check_moment_args(n, m, 2);
    if (m == 0) return Rat(1);
    auto parts = partitions(m);
    std::vector<Rat> coeffs;
    coeffs.reserve(parts.size());
    for (const PartitionVec& k : parts) coeffs.emplace_back(coefficient(k));
    Rat outer(0);
    for (int j = 1; j <= n - 1; ++j) {
        Rat inner(0);
        for (size_t t = 0; t < parts.size(); ++t) {
            Rat term = partition_term<Rat>(parts[t], [&](int i) { return harmonic_exact(j, i); });
            inner += coeffs[t] * term;
        }
        outer += inner / Rat((long)(j + 1) * (j + 2));
    }
    return Rat(2) * Rat(n + 1) / Rat(n - 1) * outer;
}

double shared_moment_real(int n, int m) {
    check_moment_args(n, m, 2);
    if (m == 0) return 1.0;
    auto parts = partitions(m);
    std::vector<double> coeffs;
    coeffs.reserve(parts.size());
    for (const PartitionVec& k : parts) coeffs.push_back(coefficient(k).get_d());
    KahanSum outer;
    for (int j = 1; j <= n - 1; ++j) {
        KahanSum inner;
        for (size_t t = 0; t < parts.size(); ++t) {
            double term = partition_term<double>(parts[t], [&](int i) { return harmonic_real(j, i); });
            inner.add(coeffs[t] * term);
        }
        outer.add(inner.value() / ((double)(j + 1) * (double)(j + 2)));
    }
    return 2.0 * (double)(n + 1) / (double)(n - 1) * outer.value();
}

Value moment(MomentKind kind, int n, int m, Mode mode) {
    switch (kind) {
        case MomentKind::height:
            return mode == Mode::rational ? Value::of(height_moment_exact(n, m))
                                          : Value::of(height_moment_real(n, m));
        case MomentKind::tau:
            return mode == Mode::rational ? Value::of(tau_moment_exact(n, m))
                                          : Value::of(tau_moment_real(n, m));
        case MomentKind::shared:
            return mode == Mode::rational ? Value::of(shared_moment_exact(n, m))
                                          : Value::of(shared_moment_real(n, m));
    }
    throw std::logic_error("moment: unknown kind");
}

double laplace_height(int n, double x) {
    if (n < 1) throw std::domain_error("laplace_height: n must be >= 1");
    return b_factor_real(n, x);
}

Rat laplace_height_exact(int n, const Rat& x) {
    if (n < 1) throw std::domain_error("laplace_height: n must be >= 1");
    return b_factor_exact(n, x);
}

double laplace_tau(int n, double x) {
    if (n < 2) throw std::domain_error("laplace_tau: n must be >= 2");
    if (x == 1.0) throw std::domain_error("laplace_tau: x = 1 is excluded");
    double b = b_factor_real(n, x);
    return (2.0 - (double)(n + 1) * (x + 1.0) * b) / ((double)(n - 1) * (x - 1.0));
}

Rat laplace_tau_exact(int n, const Rat& x) {
    if (n < 2) throw std::domain_error("laplace_tau: n must be >= 2");
    if (x == 1) throw std::domain_error("laplace_tau: x = 1 is excluded");
    Rat b = b_factor_exact(n, x);
    return (Rat(2) - Rat(n + 1) * (x + 1) * b) / (Rat(n - 1) * (x - 1));
}

double moment_from_transform(MomentKind kind, int n, int m) {
    if (kind == MomentKind::shared)
        throw std::invalid_argument("moment_from_transform: no transform for the shared path");
    if (m < 1 || m > 3)
        throw std::domain_error("moment_from_transform: m must be in 1..3");
    auto f = [&](double x) {
        return kind == MomentKind::height ? laplace_height(n, x) : laplace_tau(n, x);
    };
    auto diff = [&](double h) {
        switch (m) {
            case 1: return (f(h) - f(-h)) / (2.0 * h);
            case 2: return (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
            default: return (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) /
                            (2.0 * h * h * h);
        }
    };
    // Step sizes balance truncation against rounding noise per stencil
    // order; Richardson removes the leading h^2 truncation term.
    const double h = m == 1 ? 1e-4 : m == 2 ? 1e-3 : 5e-3;
    double richardson = (4.0 * diff(h / 2.0) - diff(h)) / 3.0;
    return (m % 2 == 0) ? richardson : -richardson;
}

} // namespace yule
