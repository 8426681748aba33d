#include "caseq/seqforge.hpp"

#include "caseq/error.hpp"
#include "caseq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

namespace caseq::seqforge {

namespace {

constexpr std::uint64_t kMaxFamilyEntries = 200'000'000;  // members x length

using u128 = unsigned __int128;

// exp(j 2 pi num / den) with num already reduced modulo den.
cdouble unit_root(std::uint64_t num, std::uint64_t den) {
    double frac = static_cast<double>(num) / static_cast<double>(den);
    if (frac > 0.5) frac -= 1.0;
    double ang = 2.0 * std::numbers::pi * frac;
    return {std::cos(ang), std::sin(ang)};
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

void check_nu(std::span<const std::uint64_t> factors, std::span<const std::uint64_t> nu) {
    if (nu.size() != factors.size())
        throw DomainError("index vector has " + std::to_string(nu.size()) + " entries for " +
                          std::to_string(factors.size()) + " factors");
    for (std::size_t m = 0; m < factors.size(); ++m) {
        if (factors[m] < 2) throw DomainError("factors must be >= 2");
        if (nu[m] < 1 || nu[m] >= factors[m])
            throw DomainError("index nu[" + std::to_string(m) + "]=" + std::to_string(nu[m]) +
                              " outside [1, " + std::to_string(factors[m] - 1) + "]");
    }
}

// chi[n] over one mixed radix, n = sum l_m w_m. Phase fraction is kept as an
// exact integer numerator over N*q (q = denominator of alpha*gamma) and turned
// into a root of unity once.
std::vector<cdouble> mixed_radix_chi(std::span<const std::uint64_t> factors,
                                     std::span<const std::uint64_t> weights,
                                     std::span<const std::uint64_t> nu, const Rational& ag,
                                     bool condition_b) {
    std::uint64_t n = 1;
    for (auto a : factors) n *= a;
    const std::uint64_t q = static_cast<std::uint64_t>(ag.denominator());
    const std::uint64_t p = static_cast<std::uint64_t>(ag.numerator()) % q;
    const std::uint64_t den = n * q;
    const std::size_t m_count = factors.size();

    // per-digit coefficients: phase numerator contribution per unit of l_m
    std::vector<std::uint64_t> coef(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
        std::uint64_t c = mulmod(nu[m], (n / factors[m]) * q, den);
        if (condition_b && (m % 2 == 1)) c = (c + mulmod(mulmod(p, weights[m], den), n, den)) % den;
        coef[m] = c;
    }
    std::vector<cdouble> chi(n);
    for (std::uint64_t idx = 0; idx < n; ++idx) {
        std::uint64_t num = 0;
        for (std::size_t m = 0; m < m_count; ++m) {
            std::uint64_t digit = (idx / weights[m]) % factors[m];
            num = (num + mulmod(digit, coef[m], den)) % den;
        }
        chi[idx] = unit_root(num, den);
    }
    return chi;
}

std::vector<std::uint64_t> phi_weights(std::span<const std::uint64_t> factors) {
    std::vector<std::uint64_t> w(factors.size());
    std::uint64_t acc = 1;
    for (std::size_t m = 0; m < factors.size(); ++m) {
        w[m] = acc;
        acc *= factors[m];
    }
    return w;
}

std::vector<std::uint64_t> psi_weights(std::span<const std::uint64_t> factors) {
    std::vector<std::uint64_t> w(factors.size());
    std::uint64_t acc = 1;
    for (std::size_t m = factors.size(); m-- > 0;) {
        w[m] = acc;
        acc *= factors[m];
    }
    return w;
}

int sd_bound_for_level(int level, Condition c) { return c == Condition::A ? level : level / 2; }

void guard_family_size(std::uint64_t members, std::uint64_t n) {
    if (members > 0 && n > kMaxFamilyEntries / members)
        throw DomainError("family of " + std::to_string(members) + " sequences of length " +
                          std::to_string(n) + " is too large to materialize");
}

}  // namespace

std::string_view to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::pma: return "pma";
        case FamilyKind::dpma: return "dpma";
        case FamilyKind::near_dpma: return "near_dpma";
        case FamilyKind::hat_pma: return "hat_pma";
        case FamilyKind::hat_dpma: return "hat_dpma";
        case FamilyKind::apma: return "apma";
        case FamilyKind::adpma: return "adpma";
        case FamilyKind::zc: return "zc";
        case FamilyKind::pn: return "pn";
    }
    return "?";
}

FamilyKind parse_family_kind(std::string_view name) {
    for (auto k : {FamilyKind::pma, FamilyKind::dpma, FamilyKind::near_dpma, FamilyKind::hat_pma,
                   FamilyKind::hat_dpma, FamilyKind::apma, FamilyKind::adpma, FamilyKind::zc,
                   FamilyKind::pn})
        if (to_string(k) == name) return k;
    throw DomainError("unknown family kind '" + std::string(name) + "'");
}

bool is_hat_kind(FamilyKind k) {
    return k == FamilyKind::hat_pma || k == FamilyKind::hat_dpma || is_augmented_kind(k);
}
bool is_augmented_kind(FamilyKind k) { return k == FamilyKind::apma || k == FamilyKind::adpma; }
bool is_baseline_kind(FamilyKind k) { return k == FamilyKind::zc || k == FamilyKind::pn; }

std::uint64_t Family::psi_max() const {
    std::uint64_t i = static_cast<std::uint64_t>(sd_order_bound);
    return config.condition() == Condition::A ? config.n_seq - i : config.n_seq - 2 * i;
}

CaSequence make_sequence(std::vector<cdouble> chi, std::uint32_t gamma, SequenceMeta meta) {
    CaSequence s;
    const double scale = 1.0 / std::sqrt(static_cast<double>(chi.size()));
    s.q.resize(chi.size());
    for (std::size_t n = 0; n < chi.size(); ++n) {
        bool odd = ((n % 2) * (gamma % 2)) == 1;
        s.q[n] = chi[n] * (odd ? -scale : scale);
    }
    s.chi = std::move(chi);
    s.meta = std::move(meta);
    return s;
}

CaSequence build_g_sequence(std::span<const std::uint64_t> factors_desc,
                            std::span<const std::uint64_t> nu, const WaveformConfig& cfg) {
    check_nu(factors_desc, nu);
    auto chi = mixed_radix_chi(factors_desc, phi_weights(factors_desc), nu, cfg.alpha_gamma(),
                               cfg.condition() == Condition::B);
    SequenceMeta meta;
    meta.factors = {{factors_desc.begin(), factors_desc.end()}};
    meta.nu = {{nu.begin(), nu.end()}};
    return make_sequence(std::move(chi), cfg.gamma, std::move(meta));
}

CaSequence build_i_sequence(std::span<const std::uint64_t> factors_asc,
                            std::span<const std::uint64_t> nu, const WaveformConfig& cfg) {
    check_nu(factors_asc, nu);
    auto chi = mixed_radix_chi(factors_asc, psi_weights(factors_asc), nu, cfg.alpha_gamma(),
                               cfg.condition() == Condition::B);
    SequenceMeta meta;
    meta.factors = {{factors_asc.begin(), factors_asc.end()}};
    meta.nu = {{nu.begin(), nu.end()}};
    meta.reversed_weights = true;
    return make_sequence(std::move(chi), cfg.gamma, std::move(meta));
}

CaSequence build_hat_sequence(const Decomposition& decomp,
                              std::span<const std::vector<std::uint64_t>> per_part_factors,
                              std::span<const std::vector<std::uint64_t>> per_part_nu,
                              std::span<const double> rotation, const WaveformConfig& cfg) {
    const std::size_t parts = decomp.parts.size();
    if (per_part_factors.size() != parts || per_part_nu.size() != parts)
        throw DomainError("need one factor set and one index vector per part");
    if (!rotation.empty() && rotation.size() != parts)
        throw DomainError("rotation needs one phase per part");
    for (std::size_t r = 1; r < parts; ++r)
        if (decomp.parts[r] > decomp.parts[r - 1])
            throw DomainError("decomposition parts must be non-increasing");

    const Rational ag = cfg.alpha_gamma();
    const bool cond_b = cfg.condition() == Condition::B;
    std::vector<cdouble> chi;
    chi.reserve(decomp.n);
    for (std::size_t r = 0; r < parts; ++r) {
        const auto& f = per_part_factors[r];
        std::uint64_t prod = 1;
        for (auto a : f) prod *= a;
        if (prod != decomp.parts[r])
            throw DomainError("factor set of part " + std::to_string(r) + " multiplies to " +
                              std::to_string(prod) + ", expected " +
                              std::to_string(decomp.parts[r]));
        check_nu(f, per_part_nu[r]);
        auto sub = mixed_radix_chi(f, phi_weights(f), per_part_nu[r], ag, cond_b);
        if (!rotation.empty() && rotation[r] != 0.0) {
            cdouble rot = std::polar(1.0, rotation[r]);
            for (auto& v : sub) v *= rot;
        }
        chi.insert(chi.end(), sub.begin(), sub.end());
    }
    SequenceMeta meta;
    meta.factors.assign(per_part_factors.begin(), per_part_factors.end());
    meta.nu.assign(per_part_nu.begin(), per_part_nu.end());
    meta.parts = decomp.parts;
    meta.theta.assign(rotation.begin(), rotation.end());
    return make_sequence(std::move(chi), cfg.gamma, std::move(meta));
}

std::vector<std::vector<std::uint64_t>> enumerate_index_vectors(
    std::span<const std::uint64_t> factors) {
    std::uint64_t total = 1;
    for (auto a : factors) {
        if (a < 2) throw DomainError("factors must be >= 2");
        total *= a - 1;
    }
    std::vector<std::vector<std::uint64_t>> out;
    out.reserve(total);
    std::vector<std::uint64_t> cur(factors.size(), 1);
    for (std::uint64_t i = 0; i < total; ++i) {
        out.push_back(cur);
        for (std::size_t m = factors.size(); m-- > 0;) {
            if (++cur[m] < factors[m]) break;
            cur[m] = 1;
        }
    }
    return out;
}

std::vector<std::vector<std::uint64_t>> hat_part_factor_sets(const Decomposition& decomp,
                                                             int kappa) {
    if (kappa < 0 || kappa > decomp.min_omega - 1)
        throw DomainError("kappa must be in [0, " + std::to_string(decomp.min_omega - 1) +
                          "] for this decomposition, got " + std::to_string(kappa));
    // each part uses its own proper level-(Omega(part) - kappa) factorization
    std::vector<std::vector<std::uint64_t>> out;
    std::map<std::uint64_t, std::vector<std::uint64_t>> cache;
    for (auto part : decomp.parts) {
        auto it = cache.find(part);
        if (it == cache.end()) {
            auto pf = factorlab::prime_factorize(part);
            it = cache.emplace(part, factorlab::proper_factor_set(pf, kappa).descending()).first;
        }
        out.push_back(it->second);
    }
    return out;
}

namespace {

std::uint64_t hat_family_size(const std::vector<std::vector<std::uint64_t>>& sets) {
    std::uint64_t best = 0;
    bool first = true;
    for (const auto& f : sets) {
        std::uint64_t s = 1;
        for (auto a : f) s *= a - 1;
        if (first || s < best) best = s;
        first = false;
    }
    return best;
}

}  // namespace

Decomposition default_hat_decomposition(std::uint64_t n, int kappa) {
    auto plain = factorlab::mpo_decompose(n, false);
    factorlab::MpoResult ra;
    try {
        ra = factorlab::mpo_decompose(n, true);
    } catch (const InfeasibleError&) {
        return plain.witness;
    }
    if (ra.restriction_level_reduced) return plain.witness;

    auto candidates =
        factorlab::restriction_a_decompositions(n, plain.mpo, ra.witness.parts.size());
    const Decomposition* best = nullptr;
    std::uint64_t best_size = 0;
    // candidates come in descending lexicographic order, so the first maximum
    // is the lexicographically largest one
    std::map<std::uint64_t, std::uint64_t> part_size;
    for (const auto& d : candidates) {
        if (d.min_omega - kappa < 1) continue;
        std::uint64_t size = 0;
        bool first = true;
        for (auto part : d.parts) {
            auto it = part_size.find(part);
            if (it == part_size.end()) {
                auto pf = factorlab::prime_factorize(part);
                it = part_size.emplace(part, factorlab::proper_factor_set(pf, kappa).family_size)
                         .first;
            }
            if (first || it->second < size) size = it->second;
            first = false;
        }
        if (!best || size > best_size) {
            best = &d;
            best_size = size;
        }
    }
    if (!best) return ra.witness;
    return *best;
}

Family build_family(FamilyKind kind, int kappa, const WaveformConfig& cfg,
                    std::optional<Decomposition> decomp) {
    FamilyRequest req;
    req.kind = kind;
    req.kappa = kappa;
    req.config = cfg;
    req.decomposition = std::move(decomp);
    return build_family(req);
}

Family build_family(const FamilyRequest& req) {
    const WaveformConfig& cfg = req.config;
    cfg.validate();
    const std::uint64_t n = cfg.n_seq;
    const FamilyKind kind = req.kind;

    if (kind == FamilyKind::zc)
        return build_zc_family(cfg, req.baseline_count, req.min_csd, req.zc_roots);
    if (kind == FamilyKind::pn) return build_pn_family(cfg, req.baseline_count, req.min_csd);

    if (req.kappa < 0) throw DomainError("kappa must be >= 0");
    if ((kind == FamilyKind::pma || kind == FamilyKind::hat_pma || kind == FamilyKind::apma) &&
        req.kappa != 0)
        throw DomainError(std::string(to_string(kind)) +
                          " families are kappa = 0; use the degenerate kind for kappa > 0");

    Family fam;
    fam.kind = kind;
    fam.config = cfg;
    fam.kappa = req.kappa;

    if (!is_hat_kind(kind)) {
        auto pf = factorlab::prime_factorize(n);
        if (req.kappa > pf.omega() - 1)
            throw DomainError("kappa must be in [0, " + std::to_string(pf.omega() - 1) +
                              "] for N=" + std::to_string(n) + ", got " +
                              std::to_string(req.kappa));
        factorlab::FactorSet fs;
        if (kind == FamilyKind::near_dpma && req.kappa >= 3)
            fs = factorlab::near_proper_factorization(pf, req.kappa);
        else
            fs = factorlab::proper_factor_set(pf, req.kappa);
        auto desc = fs.descending();
        guard_family_size(fs.family_size, n);
        auto nus = enumerate_index_vectors(desc);
        fam.sequences.resize(nus.size());
        parallel_chunks(nus.size(), req.threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                fam.sequences[i] = build_g_sequence(desc, nus[i], cfg);
                fam.sequences[i].meta.kind = kind;
            }
        });
        fam.base_omega = pf.omega();
        fam.sd_order_bound = sd_bound_for_level(fs.level(), cfg.condition());
        fam.family_csd = fs.family_csd;
        fam.factor_sets = {desc};
        return fam;
    }

    Decomposition decomp =
        req.decomposition ? *req.decomposition : default_hat_decomposition(n, req.kappa);
    if (decomp.n != n)
        throw DomainError("decomposition sums to " + std::to_string(decomp.n) + ", expected N=" +
                          std::to_string(n));
    if (is_augmented_kind(kind) && !decomp.satisfies_restriction_a) {
        auto mpo = factorlab::mpo_decompose(n, false);
        std::string why = "N=" + std::to_string(n) + ": augmentation needs a decomposition with "
                          "at least 3 parts, each below N/2 (Restriction A)";
        if (req.decomposition)
            why += "; the supplied decomposition violates it";
        else
            why += "; none exists at the MPO level " + std::to_string(mpo.mpo) +
                   " (Omega(N)=" + std::to_string(mpo.omega) + ")";
        if (!req.decomposition && mpo.mpo == mpo.omega)
            why += "; the MPO equals Omega(N), so concatenation cannot raise the SD order either";
        throw InfeasibleError(why);
    }

    std::vector<std::vector<std::uint64_t>> sets;
    if (!req.part_factor_sets.empty()) {
        if (req.part_factor_sets.size() != decomp.parts.size())
            throw DomainError("need one factor set per decomposition part");
        for (std::size_t r = 0; r < decomp.parts.size(); ++r) {
            auto f = req.part_factor_sets[r];
            std::sort(f.begin(), f.end(), std::greater<>());
            std::uint64_t prod = 1;
            for (auto a : f) {
                if (a < 2) throw DomainError("factor set entries must be >= 2");
                prod *= a;
            }
            if (prod != decomp.parts[r])
                throw DomainError("factor set for part " + std::to_string(decomp.parts[r]) +
                                  " multiplies to " + std::to_string(prod));
            sets.push_back(std::move(f));
        }
    } else {
        sets = hat_part_factor_sets(decomp, req.kappa);
    }

    std::size_t level = sets.front().size();
    for (const auto& f : sets) level = std::min(level, f.size());
    const std::uint64_t count = hat_family_size(sets);
    guard_family_size(count * (is_augmented_kind(kind) ? 2 : 1), n);

    std::vector<std::vector<std::vector<std::uint64_t>>> nus;
    for (const auto& f : sets) nus.push_back(enumerate_index_vectors(f));

    fam.sequences.resize(count);
    parallel_chunks(count, req.threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            std::vector<std::vector<std::uint64_t>> nu;
            for (const auto& list : nus) nu.push_back(list[i]);
            fam.sequences[i] = build_hat_sequence(decomp, sets, nu, {}, cfg);
            fam.sequences[i].meta.kind = kind;
        }
    });
    fam.base_omega = decomp.min_omega;
    fam.sd_order_bound = sd_bound_for_level(static_cast<int>(level), cfg.condition());
    fam.factor_sets = sets;
    fam.decomposition = decomp;
    fam.no_sd_gain = decomp.min_omega <= factorlab::prime_omega(n);

    if (is_augmented_kind(kind)) {
        fam.kind = kind == FamilyKind::apma ? FamilyKind::hat_pma : FamilyKind::hat_dpma;
        return augment_family(fam, req.rotation_epsilon);
    }
    return fam;
}

Family augment_family(const Family& base, double epsilon) {
    if (base.kind != FamilyKind::hat_pma && base.kind != FamilyKind::hat_dpma)
        throw DomainError("augmentation applies to hat_pma / hat_dpma families");
    if (!base.decomposition || !base.decomposition->satisfies_restriction_a)
        throw InfeasibleError(
            "augmentation needs a decomposition with at least 3 parts, each below N/2");
    const auto& decomp = *base.decomposition;
    auto sol = solve_rotation(decomp.parts, epsilon);

    Family fam = base;
    fam.kind = base.kind == FamilyKind::hat_pma ? FamilyKind::apma : FamilyKind::adpma;
    fam.theta = sol.theta;
    const std::size_t count = base.sequences.size();
    fam.sequences.reserve(2 * count);
    for (auto& s : fam.sequences) s.meta.kind = fam.kind;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& src = base.sequences[i];
        auto rotated = build_hat_sequence(decomp, src.meta.factors, src.meta.nu, sol.theta,
                                          base.config);
        rotated.meta.kind = fam.kind;
        fam.sequences.push_back(std::move(rotated));
    }
    return fam;
}

CaSequence apply_cyclic_shift(const CaSequence& seq, std::uint64_t k) {
    const std::uint64_t n = seq.size();
    CaSequence out = seq;
    for (std::uint64_t i = 0; i < n; ++i) {
        cdouble ramp = unit_root(mulmod(i, k % n, n), n);
        out.chi[i] *= ramp;
        out.q[i] *= ramp;
    }
    out.meta.cyclic_shift = (seq.meta.cyclic_shift + k) % n;
    return out;
}

std::vector<CaSequence> cs_subfamily(const CaSequence& leader, std::uint64_t p_max) {
    if (leader.meta.factors.size() != 1 || leader.meta.reversed_weights ||
        leader.meta.factors[0].empty() || leader.meta.factors[0][0] != p_max)
        throw DomainError("cyclic-shift subfamily needs a G-type leader whose leading factor is "
                          "the largest factor p_max");
    const std::uint64_t n = leader.size();
    const std::uint64_t nu0 = leader.meta.nu[0][0];
    std::vector<CaSequence> out;
    for (std::uint64_t l = 0; l < p_max; ++l) {
        if (l == p_max - nu0) continue;
        auto member = apply_cyclic_shift(leader, l * (n / p_max));
        member.meta.nu[0][0] = (nu0 + l) % p_max;
        out.push_back(std::move(member));
    }
    return out;
}

}  // namespace caseq::seqforge
