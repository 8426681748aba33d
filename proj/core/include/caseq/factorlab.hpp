#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <iterator>
#include <span>
#include <vector>

namespace caseq {

using Rational = boost::rational<std::int64_t>;

namespace factorlab {

struct PrimeFactorization {
    std::uint64_t n = 0;
    std::vector<std::uint64_t> primes;  // ascending, with multiplicity

    int omega() const { return static_cast<int>(primes.size()); }
};

// Trial division. Throws DomainError for n < 2.
PrimeFactorization prime_factorize(std::uint64_t n);
int prime_omega(std::uint64_t n);

// (prod a - 1) / prod (a - 1), exact.
Rational size_ratio(std::span<const std::uint64_t> factors);

struct FactorSet {
    std::uint64_t n = 0;
    std::vector<std::uint64_t> factors;  // ascending
    int kappa = 0;
    std::uint64_t family_size = 0;  // prod (A_m - 1)
    std::uint64_t family_csd = 0;   // n / max factor

    // Validates the factors (each >= 2), sorts them and fills the derived
    // fields. omega_n is Omega(prod factors), used for kappa.
    static FactorSet from_factors(std::vector<std::uint64_t> factors, int omega_n);

    std::uint64_t max_factor() const { return factors.back(); }
    int level() const { return static_cast<int>(factors.size()); }
    std::vector<std::uint64_t> descending() const;
};

// kappa = 0: the primes themselves.
FactorSet prime_factor_set(const PrimeFactorization& pf);
FactorSet proper_factorization_kappa1(const PrimeFactorization& pf);
FactorSet proper_factorization_kappa2(const PrimeFactorization& pf);

// Closed forms for kappa <= 2, exclusive search above.
FactorSet proper_factor_set(const PrimeFactorization& pf, int kappa);

// Non-increasing patterns of `parts` positive entries summing to `total`,
// in reverse lexicographic order ([3,1,1] before [2,2,1]).
using OmegaPattern = std::vector<int>;
std::vector<OmegaPattern> integer_partitions(int total, int parts);

// Next integer with the same popcount (Gosper's hack).
std::uint64_t gosper_next(std::uint64_t x);

// All length-bit words of the given weight, ascending as integers.
class GosperRange {
public:
    GosperRange(int length, int weight);

    class iterator {
    public:
        using value_type = std::uint64_t;
        using difference_type = std::ptrdiff_t;
        using iterator_category = std::input_iterator_tag;
        using pointer = const std::uint64_t*;
        using reference = std::uint64_t;

        iterator() = default;
        iterator(std::uint64_t word, std::uint64_t limit) : word_(word), limit_(limit) {}
        std::uint64_t operator*() const { return word_; }
        iterator& operator++() {
            word_ = gosper_next(word_);
            if (word_ >= limit_) word_ = limit_;
            return *this;
        }
        iterator operator++(int) {
            iterator old = *this;
            ++*this;
            return old;
        }
        bool operator==(const iterator& o) const { return word_ == o.word_; }

    private:
        std::uint64_t word_ = 0;
        std::uint64_t limit_ = 0;
    };

    iterator begin() const { return {first_, limit_}; }
    iterator end() const { return {limit_, limit_}; }
    int length() const { return length_; }
    int weight() const { return weight_; }

private:
    int length_;
    int weight_;
    std::uint64_t first_;
    std::uint64_t limit_;
};

GosperRange gosper_enumerate(int length, int weight);

// Codewords as bit lists; position 0 is the most significant bit of the
// integer form, so the word 0b011 of length 3 is {0,1,1}.
using Codeword = std::vector<std::uint8_t>;
Codeword to_codeword(std::uint64_t word, int length);
std::uint64_t from_codeword(const Codeword& cw);

// Maps short codewords b^(n) (length = positions still unclaimed) to full
// length codewords. Throws DomainError on inconsistent lengths.
std::vector<Codeword> codeword_conversion(std::span<const Codeword> codewords);

// Number of codeword sets produced for a pattern: prod C(tail_n, omega_n).
std::uint64_t codeword_set_count(const OmegaPattern& pattern);

// Every distinct level-(Omega - kappa) factor multiset, ascending, sorted.
std::vector<std::vector<std::uint64_t>> enumerate_factor_sets(const PrimeFactorization& pf,
                                                              int kappa);

// Exhaustive search for the factor set maximizing prod (A - 1); ties go to the
// lexicographically smallest ascending multiset.
FactorSet exclusive_search_proper(const PrimeFactorization& pf, int kappa);

FactorSet near_proper_factorization(const PrimeFactorization& pf, int kappa);

// Psi(N | min_csd).
std::uint64_t available_with_min_csd(const FactorSet& fs, std::uint64_t min_csd);

// ---- additive decompositions ------------------------------------------------

struct Decomposition {
    std::uint64_t n = 0;
    std::vector<std::uint64_t> parts;  // non-increasing
    int min_omega = 0;
    bool satisfies_restriction_a = false;

    // Sorts the parts and derives the remaining fields.
    static Decomposition from_parts(std::vector<std::uint64_t> parts);
};

bool satisfies_restriction_a(std::span<const std::uint64_t> parts);

struct MpoResult {
    int omega = 0;      // Omega(n)
    int mpo = 0;        // modified prime omega
    Decomposition witness;
    // Set when Restriction A was required and no compliant decomposition exists
    // at level mpo; witness.min_omega then holds the best compliant level.
    bool restriction_level_reduced = false;
};

// Throws InfeasibleError if Restriction A is required and no compliant
// decomposition exists at any level.
MpoResult mpo_decompose(std::uint64_t n, bool require_restriction_a);

// Closed-form test: the MPO exceeds Omega(n) unless n is 2^a 3^b 5^c (c < 4),
// 2^a 3^b 7^d (d < 3) or 2^a 3^b 11^e (e < 2).
bool mpo_exceeds_omega_by_form(std::uint64_t n);

// All Restriction-A decompositions of n with exactly `count` parts, each part
// having Omega >= min_omega. Parts non-increasing; list in descending
// lexicographic order.
std::vector<Decomposition> restriction_a_decompositions(std::uint64_t n, int min_omega,
                                                        std::size_t count);

}  // namespace factorlab
}  // namespace caseq
