#pragma once

#include "yule/numeric.hpp"

#include <vector>

namespace yule {

// Multiplicity vector for a partition of m: k[i-1] parts of size i, so the
// mass is sum_i i*k[i-1].  Vectors carry exactly m slots.
using PartitionVec = std::vector<int>;

// Time guard for the partition-sum engines; coefficients stay exact
// (arbitrary precision) regardless.
inline constexpr int kMaxMomentOrder = 20;

// All multiplicity vectors of mass m, deterministic order (the all-ones
// partition first, the single part m last).
std::vector<PartitionVec> partitions(int m);

// Weight attached to a multiplicity vector in the moment expansions, defined
// by the recursion
//   c_k = c_{k,0} + sum_j j*(k_j + 1)*c_{k,j}
// where c_{k,0} drops one part of size 1 and c_{k,j} trades a part of size
// j+1 for a part of size j; vectors with any negative slot count as 0, and
// (k_1, 0, ..., 0) anchors the recursion at 1 for k_1 >= 1.
Int coefficient(const PartitionVec& k);

// sum over A_m of coefficient(k); equals m! (property-tested).
Int coefficient_sum(int m);

} // namespace yule
