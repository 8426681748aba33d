#include "caseq/error.hpp"
#include "caseq/seqforge.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace caseq::seqforge {

namespace {

using u128 = unsigned __int128;

cdouble unit_root(std::uint64_t num, std::uint64_t den) {
    double frac = static_cast<double>(num) / static_cast<double>(den);
    if (frac > 0.5) frac -= 1.0;
    double ang = 2.0 * std::numbers::pi * frac;
    return {std::cos(ang), std::sin(ang)};
}

std::int64_t next_coprime_root(std::int64_t after, std::uint64_t n) {
    for (std::int64_t r = after + 1;; ++r)
        if (std::gcd(static_cast<std::uint64_t>(r), n) == 1) return r;
}

}  // namespace

CaSequence build_zc_sequence(std::int64_t root, std::uint64_t n, std::uint32_t gamma) {
    if (n < 2) throw DomainError("ZC length must be >= 2");
    std::uint64_t r_abs = static_cast<std::uint64_t>(root < 0 ? -root : root);
    if (root == 0 || std::gcd(r_abs, n) != 1)
        throw DomainError("ZC root " + std::to_string(root) + " is not coprime to " +
                          std::to_string(n));
    // -pi r k(k+1)/n = 2 pi * (-r k(k+1)) / (2n); odd n uses k(k+1), even n k^2
    const std::uint64_t den = 2 * n;
    const std::uint64_t r_mod = static_cast<std::uint64_t>(((root % static_cast<std::int64_t>(den)) +
                                                            static_cast<std::int64_t>(den)) %
                                                           static_cast<std::int64_t>(den));
    std::vector<cdouble> chi(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        std::uint64_t poly = (n % 2 == 1) ? static_cast<std::uint64_t>(static_cast<u128>(k) * (k + 1) % den)
                                          : static_cast<std::uint64_t>(static_cast<u128>(k) * k % den);
        std::uint64_t num = static_cast<std::uint64_t>(static_cast<u128>(r_mod) * poly % den);
        chi[k] = unit_root((den - num) % den, den);
    }
    SequenceMeta meta;
    meta.kind = FamilyKind::zc;
    meta.zc_root = root;
    return make_sequence(std::move(chi), gamma, std::move(meta));
}

Family build_zc_family(const WaveformConfig& cfg, std::uint64_t count, std::uint64_t min_csd,
                       std::vector<std::int64_t> roots) {
    cfg.validate();
    const std::uint64_t n = cfg.n_seq;
    if (min_csd < 1 || min_csd > n) throw DomainError("ZC minimum CSD must be in [1, N]");
    if (count < 1) throw DomainError("ZC family needs at least one member");
    const std::uint64_t per_root = n / min_csd;
    const std::uint64_t roots_needed = (count + per_root - 1) / per_root;
    const bool auto_roots = roots.empty();
    if (auto_roots) {
        std::int64_t r = 0;
        while (roots.size() < std::max<std::uint64_t>(roots_needed, 2)) {
            r = next_coprime_root(r, n);
            roots.push_back(r);
        }
    }
    if (roots.size() < roots_needed)
        throw DomainError(std::to_string(count) + " ZC members with CSD " +
                          std::to_string(min_csd) + " need " + std::to_string(roots_needed) +
                          " roots, got " + std::to_string(roots.size()));

    Family fam;
    fam.kind = FamilyKind::zc;
    fam.config = cfg;
    fam.sd_order_bound = 0;
    fam.family_csd = min_csd;
    fam.zc_roots = roots;
    fam.baseline_count = count;
    fam.min_csd = min_csd;
    for (std::size_t ri = 0; ri < roots.size() && fam.sequences.size() < count; ++ri) {
        CaSequence base = build_zc_sequence(roots[ri], n, cfg.gamma);
        for (std::uint64_t i = 0; i < per_root && fam.sequences.size() < count; ++i)
            fam.sequences.push_back(i == 0 ? base : apply_cyclic_shift(base, i * min_csd));
    }
    return fam;
}

std::vector<std::uint8_t> lfsr_msequence() {
    // Fibonacci register for X^15 + X^14 + 1: feedback from stages 15 and 14.
    std::vector<std::uint8_t> bits(kMsequencePeriod);
    std::uint32_t reg = 0x7FFF;
    for (std::uint64_t i = 0; i < kMsequencePeriod; ++i) {
        std::uint32_t out = (reg >> 14) & 1u;
        std::uint32_t fb = ((reg >> 14) ^ (reg >> 13)) & 1u;
        bits[i] = static_cast<std::uint8_t>(out);
        reg = ((reg << 1) | fb) & 0x7FFF;
    }
    return bits;
}

Family build_pn_family(const WaveformConfig& cfg, std::uint64_t count, std::uint64_t min_csd) {
    cfg.validate();
    const std::uint64_t n = cfg.n_seq;
    if (n > kMsequencePeriod)
        throw DomainError("PN length " + std::to_string(n) + " exceeds the m-sequence period 32767");
    if (count < 1 || min_csd < 1) throw DomainError("PN family needs count >= 1 and min_csd >= 1");
    if (count * min_csd > kMsequencePeriod)
        throw DomainError(std::to_string(count) + " PN members at offsets of " +
                          std::to_string(min_csd) + " exceed the m-sequence period 32767");
    const auto bits = lfsr_msequence();
    Family fam;
    fam.kind = FamilyKind::pn;
    fam.config = cfg;
    fam.sd_order_bound = 0;
    fam.family_csd = min_csd;
    fam.baseline_count = count;
    fam.min_csd = min_csd;
    for (std::uint64_t k = 0; k < count; ++k) {
        std::vector<cdouble> chi(n);
        const std::uint64_t offset = k * min_csd;
        for (std::uint64_t i = 0; i < n; ++i)
            chi[i] = bits[(i + offset) % kMsequencePeriod] ? -1.0 : 1.0;
        SequenceMeta meta;
        meta.kind = FamilyKind::pn;
        meta.pn_offset = offset;
        fam.sequences.push_back(make_sequence(std::move(chi), cfg.gamma, std::move(meta)));
    }
    return fam;
}

}  // namespace caseq::seqforge
