#pragma once

#include "yule/numeric.hpp"

namespace yule {

// Generalized harmonic numbers H(n, r) = sum_{i=1..n} 1/i^r, cached per r.
// The cache grows lazily under a lock; call harmonic_warm_up() first if reads
// will happen concurrently.
Rat harmonic_exact(int n, int r);
double harmonic_real(int n, int r);
void harmonic_warm_up(int n_max, int r_max);

// b(n, x) = prod_{i=1..n} i/(i+x) = Gamma(n+1)Gamma(x+1)/Gamma(n+x+1).
// This is the Laplace transform of the tree height at x.  Requires x > -1.
Rat b_factor_exact(int n, const Rat& x);
double b_factor_real(int n, double x);

// Sums term(i) over lo..hi inclusive.  The real version compensates rounding
// by default; pass compensated = false for a plain left-to-right sum.
// Exact-version callers: a lambda term must return Rat explicitly (-> Rat);
// a deduced GMP expression template would dangle once its operands die.
template <class Term>
double finite_sum_real(long long lo, long long hi, Term term, bool compensated = true) {
    if (compensated) {
        KahanSum acc;
        for (long long i = lo; i <= hi; ++i) acc.add(term(i));
        return acc.value();
    }
    double acc = 0.0;
    for (long long i = lo; i <= hi; ++i) acc += term(i);
    return acc;
}

template <class Term>
Rat finite_sum_exact(long long lo, long long hi, Term term) {
    Rat acc(0);
    for (long long i = lo; i <= hi; ++i) acc += term(i);
    return acc;
}

} // namespace yule
