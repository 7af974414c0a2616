#include "yule/partitions.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace yule {

namespace {

void check_order(int m) {
    if (m < 1 || m > kMaxMomentOrder)
        throw std::domain_error("partitions: order must be in 1..20");
}

void emit(int part, int rem, PartitionVec& current,
          std::vector<PartitionVec>& out) {
    if (part == 1) {
        current[0] = rem;
        out.push_back(current);
        current[0] = 0;
        return;
    }
    for (int count = 0; count * part <= rem; ++count) {
        current[part - 1] = count;
        emit(part - 1, rem - count * part, current, out);
    }
    current[part - 1] = 0;
}

PartitionVec trimmed(const PartitionVec& k) {
    PartitionVec key = k;
    while (!key.empty() && key.back() == 0) key.pop_back();
    return key;
}

std::mutex g_mutex;

Int coefficient_rec(const PartitionVec& k, std::map<PartitionVec, Int>& memo) {
    for (int v : k)
        if (v < 0) return Int(0);
    PartitionVec key = trimmed(k);
    if (key.size() <= 1) // (k_1) alone, or the empty vector
        return Int(key.empty() ? 0 : (key[0] >= 1 ? 1 : 0));
    auto hit = memo.find(key);
    if (hit != memo.end()) return hit->second;

    PartitionVec probe = key;
    probe[0] -= 1;
    Int total = coefficient_rec(probe, memo);
    probe[0] += 1;
    for (int j = 1; j + 1 <= (int)key.size(); ++j) {
        if (key[j] == 0) continue; // probe would go negative at slot j+1
        probe[j - 1] += 1;
        probe[j] -= 1;
        total += Int(j) * Int(key[j - 1] + 1) * coefficient_rec(probe, memo);
        probe[j - 1] -= 1;
        probe[j] += 1;
    }
    memo.emplace(std::move(key), total);
    return total;
}

} // namespace

std::vector<PartitionVec> partitions(int m) {
    check_order(m);
    std::vector<PartitionVec> out;
    PartitionVec current(m, 0);
    emit(m, m, current, out);
    return out;
}

Int coefficient(const PartitionVec& k) {
    long mass = 0;
    for (size_t i = 0; i < k.size(); ++i) {
        if (k[i] < 0) return Int(0);
        mass += (long)(i + 1) * k[i];
    }
    if (mass > kMaxMomentOrder)
        throw std::domain_error("coefficient: partition mass exceeds the order cap");
    static std::map<PartitionVec, Int> memo;
    std::lock_guard<std::mutex> lock(g_mutex);
    return coefficient_rec(k, memo);
}

Int coefficient_sum(int m) {
    check_order(m);
    Int total(0);
    for (const PartitionVec& k : partitions(m)) total += coefficient(k);
    return total;
}

} // namespace yule
