#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace yule {

// Counter-mode generator built on the SplitMix64 finalizer.  Each logical
// stream is keyed by (seed, tag, n, replicate), so any replicate can be
// generated independently of every other one: parallel runs partition the
// replicate index range without sharing generator state, and results are
// bit-identical for any thread count.
struct RngStream {
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    std::uint64_t key = 0;
    std::uint64_t counter = 0;

    static std::uint64_t mix(std::uint64_t z);
    static RngStream derive(std::uint64_t seed, std::uint64_t tag,
                            std::uint64_t n, std::uint64_t replicate);

    std::uint64_t next_u64();
    // Uniform on (0, 1]; never returns 0, so -log stays finite.
    double next_unit();
    double next_exponential(double rate);
    // Unbiased uniform integer in [0, bound) via 128-bit multiply rejection.
    std::uint64_t next_below(std::uint64_t bound);
};

// Stream tag separating tree replicates from any future consumer of the
// same seed.
inline constexpr std::uint64_t kReplicateStreamTag = 0x59554C45ull;

inline long pair_count(int n) { return long(n) * (long(n) - 1) / 2; }

// One pure-birth tree with n tips.  Events are numbered 1..n-1 in time
// order (event 1 is the root split); index 0 of each per-event array is
// unused padding so indices match event numbers.
//  wait[i]  : holding time T_i with i lineages, i = 1..n
//  tail[k]  : sum of wait[k+1..n] = time from event k to the tips
//  child[k] : the two child references of event k; an internal child is the
//             child's event number, a tip t (0-based) is encoded as -(t+1)
//  tip_count[k], pairs[k] : tips below event k and the product of the tip
//             counts of its two subtrees (the number of tip pairs whose
//             most recent common ancestor is event k)
struct YuleTree {
    int n = 0;
    std::vector<double> wait;
    std::vector<double> tail;
    std::vector<std::array<int, 2>> child;
    std::vector<int> tip_count;
    std::vector<long> pairs;
};

// Fills child[1..n-1] given a chooser: choose(k) in [0, k) selects which of
// the k open lineages event k splits.  Shared by the simulator (random
// chooser) and the exhaustive enumerator (mixed-radix chooser).
template <class Choose>
void build_topology(int n, Choose&& choose,
                    std::vector<std::array<int, 2>>& child) {
    child.assign(static_cast<size_t>(n), {0, 0});
    // Open lineages as (event, child slot); event k replaces one entry in
    // place and appends one, so after event k there are k+1 entries.
    std::vector<std::pair<int, int>> open;
    open.reserve(static_cast<size_t>(n));
    open.push_back({1, 0});
    open.push_back({1, 1});
    for (int k = 2; k <= n - 1; ++k) {
        const int pick = static_cast<int>(choose(k));
        const auto [ev, slot] = open[static_cast<size_t>(pick)];
        child[static_cast<size_t>(ev)][static_cast<size_t>(slot)] = k;
        open[static_cast<size_t>(pick)] = {k, 0};
        open.push_back({k, 1});
    }
    for (int t = 0; t < static_cast<int>(open.size()); ++t) {
        const auto [ev, slot] = open[static_cast<size_t>(t)];
        child[static_cast<size_t>(ev)][static_cast<size_t>(slot)] = -(t + 1);
    }
}

// Recomputes tail, tip_count and pairs from wait and child; verifies that
// the pair weights sum to n choose 2.
void finish_tree(YuleTree& tree);

// Draws waits and topology from the stream (n-1 exponentials would not be
// enough: all of T_1..T_n are drawn, then the n-2 topology choices).
void generate_tree_into(int n, RngStream& g, YuleTree& tree);
YuleTree generate_tree(int n, RngStream& g);

double tree_height(const YuleTree& tree);

// E[tau | tree] = sum_k pairs[k] * tail[k] / (n choose 2).
double conditional_expected_tau(const YuleTree& tree);

// sum_k pairs[k] * (time from the origin down to event k); identity:
// equals (n choose 2) * (U - E[tau|tree]).
double total_pair_mrca_depth(const YuleTree& tree);

// Event index at which a uniformly random tip pair coalesces, sampled
// exactly by integer inversion of the pair weights (consumes one
// next_below draw).
int sample_kappa(const YuleTree& tree, RngStream& g);

// Coalescent time of a pair that joins at event k.
double tau_after(const YuleTree& tree, int k);

// Newick serialization with branch lengths (shortest round-trip doubles);
// tips are labeled x1..xn in creation order and the root carries the stem
// length T_1.
std::string newick(const YuleTree& tree);

struct ReplicateSample {
    double u = 0.0;
    double tau = 0.0;
    double cond_tau = 0.0;
};

// One replicate: tree draw, one random pair, the conditional expectation.
ReplicateSample simulate_replicate(int n, RngStream& g, YuleTree& scratch);

// out[r] is replicate r under stream (seed, kReplicateStreamTag, n, r);
// the parallel version fills the same array with identical bytes for any
// thread count.
void simulate_batch_serial(int n, std::uint64_t seed,
                           std::span<ReplicateSample> out);
void simulate_batch_parallel(int n, std::uint64_t seed,
                             std::span<ReplicateSample> out, int threads);

} // namespace yule
