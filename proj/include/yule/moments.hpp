#pragma once

#include "yule/numeric.hpp"

namespace yule {

enum class MomentKind { height, tau, shared };

// E[U^m]: moments of the total tree height U = T_1 + ... + T_n where
// T_i ~ Exp(i) independently.  n >= 1, 0 <= m <= kMaxMomentOrder.
Rat height_moment_exact(int n, int m);
double height_moment_real(int n, int m);

// E[tau^m]: moments of the coalescent time of a uniformly random tip pair,
// tau = T_{kappa+1} + ... + T_n.  n >= 2.
Rat tau_moment_exact(int n, int m);
double tau_moment_real(int n, int m);

// E[(U - tau)^m]: moments of the shared root-to-ancestor path of a random
// pair.  Nonnegative sum convention.  n >= 2.
Rat shared_moment_exact(int n, int m);
double shared_moment_real(int n, int m);

Value moment(MomentKind kind, int n, int m, Mode mode);

// Laplace transforms E[e^{-xU}] and E[e^{-x tau}], valid for x > -1 (tau
// additionally excludes the removable point x = 1).
double laplace_height(int n, double x);
double laplace_tau(int n, double x);
Rat laplace_height_exact(int n, const Rat& x);
Rat laplace_tau_exact(int n, const Rat& x);

// Diagnostic cross-check only, never a primary path: estimates E[X^m] from
// the transform via Richardson-extrapolated central differences at 0 with
// step 1e-4.  kind must be height or tau; m in 1..3.
double moment_from_transform(MomentKind kind, int n, int m);

} // namespace yule
