#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

namespace yule {

// Exact arbitrary-precision scalars.
using Rat = mpq_class;
using Int = mpz_class;

// Numeric evaluation mode: exact rationals, or doubles with compensated sums.
enum class Mode { rational, real };

// Builds a canonical rational from a numerator/denominator pair.  The raw
// two-argument mpq_class constructor does not reduce, so route through here.
inline Rat frac(long num, long den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat rat_pow(const Rat& base, unsigned e) {
    Rat acc(1);
    Rat b = base;
    while (e) {
        if (e & 1u) acc *= b;
        b *= b;
        e >>= 1u;
    }
    return acc;
}

// A scalar tagged with the representation that produced it.  Correlations are
// square roots of rationals, so they stay Kind::real even under rational-mode
// computation; everything else keeps the mode it was computed in.
struct Value {
    enum class Kind { rational, real };
    Kind kind;
    Rat exact;     // meaningful when kind == rational
    double approx; // meaningful when kind == real

    static Value of(Rat q) { return Value{Kind::rational, std::move(q), 0.0}; }
    static Value of(double d) { return Value{Kind::real, Rat(), d}; }
    double as_double() const { return kind == Kind::rational ? exact.get_d() : approx; }
};

// Neumaier variant of Kahan summation; state is storable so accumulation can
// be resumed (the harmonic cache grows tables incrementally).
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

// Canonical "p/q" (plain "p" when the denominator is 1).
std::string format_rational(const Rat& q);

// Shortest decimal string that parses back to the same double.
std::string format_double(double d);

} // namespace yule
