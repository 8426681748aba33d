#include "caseq/error.hpp"
#include "caseq/factorlab.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace caseq::factorlab {

bool satisfies_restriction_a(std::span<const std::uint64_t> parts) {
    if (parts.size() < 3) return false;
    std::uint64_t total = 0;
    std::uint64_t largest = 0;
    for (auto p : parts) {
        total += p;
        largest = std::max(largest, p);
    }
    return 2 * largest < total;
}

Decomposition Decomposition::from_parts(std::vector<std::uint64_t> parts) {
    if (parts.empty()) throw DomainError("decomposition needs at least one part");
    Decomposition d;
    std::sort(parts.begin(), parts.end(), std::greater<>());
    d.n = 0;
    d.min_omega = std::numeric_limits<int>::max();
    for (auto p : parts) {
        if (p < 2) throw DomainError("decomposition parts must be >= 2");
        d.n += p;
        d.min_omega = std::min(d.min_omega, prime_omega(p));
    }
    d.parts = std::move(parts);
    d.satisfies_restriction_a = factorlab::satisfies_restriction_a(d.parts);
    return d;
}

namespace {

constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

// Omega(v) for v in [0, n] by a smallest-prime-factor sieve.
std::vector<int> omega_table(std::uint64_t n) {
    std::vector<std::uint64_t> spf(n + 1, 0);
    std::vector<int> om(n + 1, 0);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (spf[i] == 0)
            for (std::uint64_t j = i; j <= n; j += i)
                if (spf[j] == 0) spf[j] = i;
        om[i] = om[i / spf[i]] + 1;
    }
    return om;
}

std::vector<std::uint64_t> part_values(const std::vector<int>& om, std::uint64_t n, int level,
                                       bool restriction_a) {
    std::vector<std::uint64_t> vals;
    for (std::uint64_t v = 2; v <= n; ++v) {
        if (om[v] < level) continue;
        if (restriction_a && 2 * v >= n) continue;
        vals.push_back(v);
    }
    return vals;
}

// Minimum number of parts (values from vals, repetition allowed) summing to s.
std::vector<std::uint32_t> min_part_counts(std::uint64_t n, const std::vector<std::uint64_t>& vals) {
    std::vector<std::uint32_t> cnt(n + 1, kUnreachable);
    cnt[0] = 0;
    for (std::uint64_t s = 1; s <= n; ++s) {
        std::uint32_t best = kUnreachable;
        for (auto v : vals) {
            if (v > s) break;
            if (cnt[s - v] != kUnreachable) best = std::min(best, cnt[s - v] + 1);
        }
        cnt[s] = best;
    }
    return cnt;
}

// Fewest parts, then lexicographically largest non-increasing list. Taking the
// largest admissible value first never forces a later part above it (a later
// larger part could itself have been chosen first).
std::vector<std::uint64_t> greedy_witness(std::uint64_t n, const std::vector<std::uint64_t>& vals,
                                          const std::vector<std::uint32_t>& cnt) {
    std::vector<std::uint64_t> parts;
    std::uint64_t rest = n;
    while (rest > 0) {
        std::uint32_t need = cnt[rest];
        for (auto it = vals.rbegin(); it != vals.rend(); ++it) {
            if (*it <= rest && cnt[rest - *it] == need - 1) {
                parts.push_back(*it);
                rest -= *it;
                break;
            }
        }
    }
    return parts;
}

bool reachable(std::uint64_t n, const std::vector<std::uint64_t>& vals) {
    std::vector<std::uint8_t> r(n + 1, 0);
    r[0] = 1;
    for (auto v : vals)
        for (std::uint64_t s = v; s <= n; ++s)
            if (r[s - v]) r[s] = 1;
    return r[n] != 0;
}

}  // namespace

MpoResult mpo_decompose(std::uint64_t n, bool require_restriction_a) {
    if (n < 2) throw DomainError("mpo_decompose: n must be >= 2, got " + std::to_string(n));
    const auto om = omega_table(n);
    MpoResult res;
    res.omega = om[n];
    res.mpo = res.omega;
    while (true) {
        auto vals = part_values(om, n, res.mpo + 1, false);
        if (vals.empty() || !reachable(n, vals)) break;
        ++res.mpo;
    }

    if (!require_restriction_a) {
        if (res.mpo == res.omega) {
            res.witness = Decomposition::from_parts({n});
        } else {
            auto vals = part_values(om, n, res.mpo, false);
            res.witness = Decomposition::from_parts(greedy_witness(n, vals, min_part_counts(n, vals)));
        }
        return res;
    }

    for (int level = res.mpo; level >= 1; --level) {
        auto vals = part_values(om, n, level, true);
        if (vals.empty()) continue;
        auto cnt = min_part_counts(n, vals);
        if (cnt[n] == kUnreachable) continue;
        res.witness = Decomposition::from_parts(greedy_witness(n, vals, cnt));
        res.restriction_level_reduced = level < res.mpo;
        return res;
    }
    throw InfeasibleError("no decomposition of " + std::to_string(n) +
                          " satisfies Restriction A (at least 3 parts, each below n/2)");
}

bool mpo_exceeds_omega_by_form(std::uint64_t n) {
    auto pf = prime_factorize(n);
    std::uint64_t other = 0;
    int mult = 0;
    for (auto p : pf.primes) {
        if (p == 2 || p == 3) continue;
        if (other != 0 && p != other) return true;
        other = p;
        ++mult;
    }
    if (other == 0) return false;
    if (other == 5) return mult >= 4;
    if (other == 7) return mult >= 3;
    if (other == 11) return mult >= 2;
    return true;
}

std::vector<Decomposition> restriction_a_decompositions(std::uint64_t n, int min_omega,
                                                        std::size_t count) {
    std::vector<Decomposition> out;
    if (count < 3 || n < 2) return out;
    const auto om = omega_table(n);
    const auto vals = part_values(om, n, min_omega, true);
    if (vals.empty()) return out;
    std::vector<std::uint64_t> cur;
    auto rec = [&](auto&& self, std::uint64_t rest, std::size_t slots, std::size_t max_idx) -> void {
        if (slots == 0) {
            if (rest == 0) out.push_back(Decomposition::from_parts(cur));
            return;
        }
        for (std::size_t i = max_idx + 1; i-- > 0;) {
            std::uint64_t v = vals[i];
            if (v > rest) continue;
            if (v * slots < rest) break;  // remaining parts are <= v
            if (vals.front() * (slots - 1) > rest - v) continue;
            cur.push_back(v);
            self(self, rest - v, slots - 1, i);
            cur.pop_back();
        }
    };
    rec(rec, n, count, vals.size() - 1);
    return out;
}

}  // namespace caseq::factorlab
