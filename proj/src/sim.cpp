#include "yule/sim.hpp"

#include "yule/numeric.hpp"

#include <cmath>
#include <omp.h>
#include <stdexcept>

namespace yule {

std::uint64_t RngStream::mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

RngStream RngStream::derive(std::uint64_t seed, std::uint64_t tag,
                            std::uint64_t n, std::uint64_t replicate) {
    RngStream s;
    s.key = mix(mix(mix(mix(seed) ^ tag) ^ n) ^ replicate);
    s.counter = 0;
    return s;
}

std::uint64_t RngStream::next_u64() {
    counter += 1;
    return mix(key + counter * kGamma);
}

double RngStream::next_unit() {
    // 53 top bits, shifted into (0, 1]: the +1 excludes zero.
    return (double((next_u64() >> 11)) + 1.0) * 0x1.0p-53;
}

double RngStream::next_exponential(double rate) {
    return -std::log(next_unit()) / rate;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
    if (bound == 0) throw std::domain_error("next_below requires bound > 0");
    while (true) {
        const std::uint64_t x = next_u64();
        const unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        const std::uint64_t low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = -bound % bound;
            if (low < threshold) continue;
        }
        return static_cast<std::uint64_t>(m >> 64);
    }
}

void finish_tree(YuleTree& tree) {
    const int n = tree.n;
    tree.tail.assign(static_cast<size_t>(n), 0.0);
    double acc = 0.0;
    for (int k = n - 1; k >= 0; --k) {
        acc += tree.wait[static_cast<size_t>(k) + 1];
        tree.tail[static_cast<size_t>(k)] = acc;
    }
    tree.tip_count.assign(static_cast<size_t>(n), 0);
    tree.pairs.assign(static_cast<size_t>(n), 0);
    long total = 0;
    for (int k = n - 1; k >= 1; --k) {
        const auto cnt = [&](int ref) {
            return ref < 0 ? 1L : long(tree.tip_count[static_cast<size_t>(ref)]);
        };
        const long left = cnt(tree.child[static_cast<size_t>(k)][0]);
        const long right = cnt(tree.child[static_cast<size_t>(k)][1]);
        tree.tip_count[static_cast<size_t>(k)] = static_cast<int>(left + right);
        tree.pairs[static_cast<size_t>(k)] = left * right;
        total += left * right;
    }
    if (tree.tip_count[1] != n || total != pair_count(n))
        throw std::logic_error("pair weights do not sum to n choose 2");
}

void generate_tree_into(int n, RngStream& g, YuleTree& tree) {
    if (n < 2) throw std::domain_error("trees require n >= 2 tips");
    tree.n = n;
    tree.wait.assign(static_cast<size_t>(n) + 1, 0.0);
    for (int i = 1; i <= n; ++i)
        tree.wait[static_cast<size_t>(i)] = g.next_exponential(double(i));
    build_topology(
        n, [&g](int k) { return g.next_below(static_cast<std::uint64_t>(k)); },
        tree.child);
    finish_tree(tree);
}

YuleTree generate_tree(int n, RngStream& g) {
    YuleTree tree;
    generate_tree_into(n, g, tree);
    return tree;
}

double tree_height(const YuleTree& tree) { return tree.tail[0]; }

double conditional_expected_tau(const YuleTree& tree) {
    double acc = 0.0;
    for (int k = 1; k <= tree.n - 1; ++k)
        acc += double(tree.pairs[static_cast<size_t>(k)]) *
               tree.tail[static_cast<size_t>(k)];
    return acc / double(pair_count(tree.n));
}

double total_pair_mrca_depth(const YuleTree& tree) {
    double acc = 0.0;
    for (int k = 1; k <= tree.n - 1; ++k)
        acc += double(tree.pairs[static_cast<size_t>(k)]) *
               (tree.tail[0] - tree.tail[static_cast<size_t>(k)]);
    return acc;
}

int sample_kappa(const YuleTree& tree, RngStream& g) {
    const std::uint64_t r =
        g.next_below(static_cast<std::uint64_t>(pair_count(tree.n)));
    std::uint64_t acc = 0;
    for (int k = 1; k <= tree.n - 1; ++k) {
        acc += static_cast<std::uint64_t>(tree.pairs[static_cast<size_t>(k)]);
        if (r < acc) return k;
    }
    throw std::logic_error("pair weight inversion ran past the last event");
}

double tau_after(const YuleTree& tree, int k) {
    if (k < 1 || k > tree.n - 1)
        throw std::domain_error("event index must satisfy 1 <= k <= n-1");
    return tree.tail[static_cast<size_t>(k)];
}

std::string newick(const YuleTree& tree) {
    const int n = tree.n;
    std::vector<std::string> fragment(static_cast<size_t>(n));
    const auto part = [&](int parent, int ref) {
        const double t_parent = tree.tail[static_cast<size_t>(parent)];
        if (ref < 0) {
            const int tip = -ref; // 1-based label
            return "x" + std::to_string(tip) + ":" + format_double(t_parent);
        }
        const double len = t_parent - tree.tail[static_cast<size_t>(ref)];
        return fragment[static_cast<size_t>(ref)] + ":" + format_double(len);
    };
    // Children carry larger event numbers than their parent, so a single
    // descending pass has every child fragment ready before its parent.
    for (int k = n - 1; k >= 1; --k) {
        fragment[static_cast<size_t>(k)] =
            "(" + part(k, tree.child[static_cast<size_t>(k)][0]) + "," +
            part(k, tree.child[static_cast<size_t>(k)][1]) + ")";
    }
    return fragment[1] + ":" + format_double(tree.wait[1]) + ";";
}

ReplicateSample simulate_replicate(int n, RngStream& g, YuleTree& scratch) {
    generate_tree_into(n, g, scratch);
    const int kappa = sample_kappa(scratch, g);
    ReplicateSample s;
    s.u = scratch.tail[0];
    s.tau = scratch.tail[static_cast<size_t>(kappa)];
    s.cond_tau = conditional_expected_tau(scratch);
    return s;
}

void simulate_batch_serial(int n, std::uint64_t seed,
                           std::span<ReplicateSample> out) {
    YuleTree scratch;
    for (size_t r = 0; r < out.size(); ++r) {
        RngStream g = RngStream::derive(seed, kReplicateStreamTag,uint64_t(n),
                                        static_cast<std::uint64_t>(r));
        out[r] = simulate_replicate(n, g, scratch);
    }
}

void simulate_batch_parallel(int n, std::uint64_t seed,
                             std::span<ReplicateSample> out, int threads) {
    if (threads <= 0) threads = omp_get_max_threads();
    const long count = static_cast<long>(out.size());
#pragma omp parallel num_threads(threads)
    {
        YuleTree scratch;
#pragma omp for schedule(static)
        for (long r = 0; r < count; ++r) {
            RngStream g = RngStream::derive(
                seed, kReplicateStreamTag, uint64_t(n), static_cast<std::uint64_t>(r));
            out[static_cast<size_t>(r)] = simulate_replicate(n, g, scratch);
        }
    }
}

} // namespace yule
