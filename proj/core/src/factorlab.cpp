#include "caseq/factorlab.hpp"

#include "caseq/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace caseq::factorlab {

PrimeFactorization prime_factorize(std::uint64_t n) {
    if (n < 2) throw DomainError("prime_factorize: n must be >= 2, got " + std::to_string(n));
    PrimeFactorization pf;
    pf.n = n;
    std::uint64_t rest = n;
    for (std::uint64_t p = 2; p * p <= rest; p += (p == 2 ? 1 : 2)) {
        while (rest % p == 0) {
            pf.primes.push_back(p);
            rest /= p;
        }
    }
    if (rest > 1) pf.primes.push_back(rest);
    return pf;
}

int prime_omega(std::uint64_t n) { return prime_factorize(n).omega(); }

Rational size_ratio(std::span<const std::uint64_t> factors) {
    if (factors.empty()) throw DomainError("size_ratio: empty factor list");
    std::int64_t prod = 1;
    std::int64_t prod_minus = 1;
    for (auto a : factors) {
        if (a <= 1) throw DomainError("size_ratio: factors must exceed 1");
        prod *= static_cast<std::int64_t>(a);
        prod_minus *= static_cast<std::int64_t>(a) - 1;
    }
    return Rational(prod - 1, prod_minus);
}

FactorSet FactorSet::from_factors(std::vector<std::uint64_t> factors, int omega_n) {
    if (factors.empty()) throw DomainError("factor set must not be empty");
    FactorSet fs;
    std::sort(factors.begin(), factors.end());
    fs.n = 1;
    fs.family_size = 1;
    for (auto a : factors) {
        if (a < 2) throw DomainError("factor set entries must be >= 2");
        fs.n *= a;
        fs.family_size *= a - 1;
    }
    fs.factors = std::move(factors);
    fs.kappa = omega_n - fs.level();
    fs.family_csd = fs.n / fs.factors.back();
    return fs;
}

std::vector<std::uint64_t> FactorSet::descending() const {
    return {factors.rbegin(), factors.rend()};
}

FactorSet prime_factor_set(const PrimeFactorization& pf) {
    return FactorSet::from_factors(pf.primes, pf.omega());
}

FactorSet proper_factorization_kappa1(const PrimeFactorization& pf) {
    if (pf.omega() <= 2)
        throw UnsupportedLevelError("level-(Omega-1) closed form needs Omega(N) > 2, N=" +
                                    std::to_string(pf.n));
    const auto& p = pf.primes;
    std::vector<std::uint64_t> f{p[0] * p[1]};
    f.insert(f.end(), p.begin() + 2, p.end());
    return FactorSet::from_factors(std::move(f), pf.omega());
}

namespace {

// One level-2 merge step on an ascending list with at least four entries:
// three smallest when a1*a2 < a3, otherwise {a0*a3} and {a1*a2}.
std::vector<std::uint64_t> merge_two_levels(std::vector<std::uint64_t> a) {
    std::sort(a.begin(), a.end());
    std::vector<std::uint64_t> out;
    if (a[1] * a[2] < a[3]) {
        out.push_back(a[0] * a[1] * a[2]);
        out.insert(out.end(), a.begin() + 3, a.end());
    } else {
        out.push_back(a[0] * a[3]);
        out.push_back(a[1] * a[2]);
        out.insert(out.end(), a.begin() + 4, a.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

FactorSet proper_factorization_kappa2(const PrimeFactorization& pf) {
    if (pf.omega() <= 3)
        throw UnsupportedLevelError("level-(Omega-2) closed form needs Omega(N) > 3, N=" +
                                    std::to_string(pf.n));
    return FactorSet::from_factors(merge_two_levels(pf.primes), pf.omega());
}

std::vector<OmegaPattern> integer_partitions(int total, int parts) {
    std::vector<OmegaPattern> out;
    if (parts < 1 || total < 1 || parts > total) return out;
    OmegaPattern cur;
    // remaining sum, slots left, max allowed entry
    auto rec = [&](auto&& self, int remaining, int slots, int cap) -> void {
        if (slots == 0) {
            if (remaining == 0) out.push_back(cur);
            return;
        }
        int hi = std::min(cap, remaining - (slots - 1));
        int lo = (remaining + slots - 1) / slots;  // ceil: keeps entries non-increasing
        for (int v = hi; v >= lo; --v) {
            cur.push_back(v);
            self(self, remaining - v, slots - 1, v);
            cur.pop_back();
        }
    };
    rec(rec, total, parts, total);
    return out;
}

std::uint64_t gosper_next(std::uint64_t x) {
    std::uint64_t c = x & (~x + 1);
    std::uint64_t r = x + c;
    return (((r ^ x) >> 2) / c) | r;
}

GosperRange::GosperRange(int length, int weight) : length_(length), weight_(weight) {
    if (length < 1 || length > 62)
        throw DomainError("gosper_enumerate: length must be in [1, 62]");
    if (weight < 1 || weight > length)
        throw DomainError("gosper_enumerate: weight must be in [1, length]");
    first_ = (std::uint64_t{1} << weight) - 1;
    limit_ = std::uint64_t{1} << length;
}

GosperRange gosper_enumerate(int length, int weight) { return GosperRange(length, weight); }

Codeword to_codeword(std::uint64_t word, int length) {
    Codeword cw(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i) cw[i] = (word >> (length - 1 - i)) & 1u;
    return cw;
}

std::uint64_t from_codeword(const Codeword& cw) {
    std::uint64_t w = 0;
    for (auto b : cw) w = (w << 1) | (b ? 1u : 0u);
    return w;
}

std::vector<Codeword> codeword_conversion(std::span<const Codeword> codewords) {
    if (codewords.empty()) return {};
    const std::size_t total = codewords.front().size();
    std::vector<std::size_t> free_pos(total);
    std::iota(free_pos.begin(), free_pos.end(), std::size_t{0});
    std::vector<Codeword> out;
    out.reserve(codewords.size());
    for (const auto& cw : codewords) {
        if (cw.size() != free_pos.size())
            throw DomainError("codeword_conversion: codeword length " + std::to_string(cw.size()) +
                              " does not match " + std::to_string(free_pos.size()) +
                              " unclaimed positions");
        Codeword full(total, 0);
        std::vector<std::size_t> still_free;
        for (std::size_t i = 0; i < cw.size(); ++i) {
            if (cw[i] > 1) throw DomainError("codeword_conversion: entries must be 0 or 1");
            if (cw[i])
                full[free_pos[i]] = 1;
            else
                still_free.push_back(free_pos[i]);
        }
        if (still_free.size() == free_pos.size())
            throw DomainError("codeword_conversion: codeword of weight 0");
        free_pos = std::move(still_free);
        out.push_back(std::move(full));
    }
    if (!free_pos.empty())
        throw DomainError("codeword_conversion: codewords leave positions unclaimed");
    return out;
}

namespace {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
    return r;
}

// Visits every codeword set of a pattern, passing for each group the list of
// claimed positions (indices into 0..Omega-1).
template <class Visit>
void for_each_codeword_set(const OmegaPattern& pattern, Visit&& visit) {
    const int groups = static_cast<int>(pattern.size());
    int omega = std::accumulate(pattern.begin(), pattern.end(), 0);
    std::vector<std::vector<int>> claimed(groups);
    std::vector<int> free_pos(omega);
    std::iota(free_pos.begin(), free_pos.end(), 0);

    auto rec = [&](auto&& self, int g, const std::vector<int>& avail) -> void {
        if (g == groups) {
            visit(claimed);
            return;
        }
        const int len = static_cast<int>(avail.size());
        if (g == groups - 1) {
            // last group takes what is left (its only codeword is all ones)
            claimed[g] = avail;
            visit(claimed);
            return;
        }
        for (std::uint64_t word : gosper_enumerate(len, pattern[g])) {
            claimed[g].clear();
            std::vector<int> rest;
            rest.reserve(len);
            for (int i = 0; i < len; ++i) {
                if ((word >> (len - 1 - i)) & 1u)
                    claimed[g].push_back(avail[i]);
                else
                    rest.push_back(avail[i]);
            }
            self(self, g + 1, rest);
        }
    };
    rec(rec, 0, free_pos);
}

}  // namespace

std::uint64_t codeword_set_count(const OmegaPattern& pattern) {
    int tail = std::accumulate(pattern.begin(), pattern.end(), 0);
    std::uint64_t count = 1;
    for (int w : pattern) {
        count *= binomial(tail, w);
        tail -= w;
    }
    return count;
}

std::vector<std::vector<std::uint64_t>> enumerate_factor_sets(const PrimeFactorization& pf,
                                                              int kappa) {
    const int omega = pf.omega();
    if (kappa < 0 || kappa > omega - 1)
        throw DomainError("kappa must be in [0, Omega(N)-1] = [0, " + std::to_string(omega - 1) +
                          "], got " + std::to_string(kappa));
    if (omega > 62) throw DomainError("Omega(N) exceeds the 62-bit codeword width");
    std::set<std::vector<std::uint64_t>> seen;
    for (const auto& pattern : integer_partitions(omega, omega - kappa)) {
        for_each_codeword_set(pattern, [&](const std::vector<std::vector<int>>& claimed) {
            std::vector<std::uint64_t> set;
            set.reserve(claimed.size());
            for (const auto& group : claimed) {
                std::uint64_t prod = 1;
                for (int pos : group) prod *= pf.primes[pos];
                set.push_back(prod);
            }
            std::sort(set.begin(), set.end());
            seen.insert(std::move(set));
        });
    }
    return {seen.begin(), seen.end()};
}

FactorSet exclusive_search_proper(const PrimeFactorization& pf, int kappa) {
    if (kappa < 1 || kappa > pf.omega() - 1)
        throw DomainError("exclusive search: kappa must be in [1, Omega(N)-1] = [1, " +
                          std::to_string(pf.omega() - 1) + "], got " + std::to_string(kappa));
    // the candidate list is sorted ascending, so the first maximum wins ties
    auto sets = enumerate_factor_sets(pf, kappa);
    const std::vector<std::uint64_t>* best = nullptr;
    std::uint64_t best_size = 0;
    for (const auto& s : sets) {
        std::uint64_t size = 1;
        for (auto a : s) size *= a - 1;
        if (!best || size > best_size) {
            best = &s;
            best_size = size;
        }
    }
    return FactorSet::from_factors(*best, pf.omega());
}

FactorSet proper_factor_set(const PrimeFactorization& pf, int kappa) {
    if (kappa < 0 || kappa > pf.omega() - 1)
        throw DomainError("kappa must be in [0, Omega(N)-1] = [0, " +
                          std::to_string(pf.omega() - 1) + "] for N=" + std::to_string(pf.n) +
                          ", got " + std::to_string(kappa));
    if (kappa == 0) return prime_factor_set(pf);
    if (kappa == 1 && pf.omega() > 2) return proper_factorization_kappa1(pf);
    if (kappa == 2 && pf.omega() > 3) return proper_factorization_kappa2(pf);
    return exclusive_search_proper(pf, kappa);
}

FactorSet near_proper_factorization(const PrimeFactorization& pf, int kappa) {
    const int omega = pf.omega();
    if (omega <= 4 || kappa < 3 || kappa > omega - 2)
        throw DomainError("near-proper factorization needs Omega(N) > 4 and 3 <= kappa <= "
                          "Omega(N)-2 (N=" +
                          std::to_string(pf.n) + ", kappa=" + std::to_string(kappa) + ")");
    FactorSet seed = (kappa % 2 == 1) ? proper_factorization_kappa1(pf)
                                      : proper_factorization_kappa2(pf);
    std::vector<std::uint64_t> cur = seed.factors;
    for (int k = seed.kappa; k < kappa; k += 2) cur = merge_two_levels(std::move(cur));
    return FactorSet::from_factors(std::move(cur), omega);
}

std::uint64_t available_with_min_csd(const FactorSet& fs, std::uint64_t min_csd) {
    if (min_csd == 0) throw DomainError("min_csd must be >= 1");
    std::uint64_t amax_minus = fs.max_factor() - 1;
    std::uint64_t subfamilies = fs.family_size / amax_minus;
    std::uint64_t step = (min_csd + fs.family_csd - 1) / fs.family_csd;
    return subfamilies * (amax_minus / step);
}

}  // namespace caseq::factorlab
