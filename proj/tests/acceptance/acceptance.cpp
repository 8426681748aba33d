// Acceptance checks: one PASS/FAIL line per criterion.
//
// Usage: caseq_acceptance [--only 1,3] [--known-red 2,10]
// Exit status is 0 when every criterion outside --known-red passes and every
// criterion listed in --known-red still fails (so a fix is noticed).

#include "oracles.hpp"

#include "caseq/error.hpp"
#include "caseq/factorlab.hpp"
#include "caseq/rachsim.hpp"
#include "caseq/seqforge.hpp"
#include "caseq/seqverify.hpp"
#include "caseq/spectra.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace caseq;
using namespace caseq::factorlab;
using namespace caseq::seqforge;
using u64 = std::uint64_t;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    // Records a failed expectation; keeps the first few messages.
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        if (pass || failures < 6) detail << (pass ? "" : "; ") << what;
        pass = false;
        ++failures;
    }
    int failures = 0;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;  // 0: no runtime limit
    std::function<void(Outcome&)> run;
};

WaveformConfig cond_a(u64 n) { return {n, 4, Rational(1, 4)}; }
WaveformConfig cond_b(u64 n) { return {n, 1, Rational(33, 256)}; }

std::string join(const std::vector<u64>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// ---- 1: factor sets of the short lengths -----------------------------------

void factor_set_table(Outcome& out) {
    struct Row {
        u64 n;
        int kappa;
        u64 size, csd, min_csd, available;
    };
    const Row rows[] = {
        {48, 0, 2, 16, 4, 2},       {48, 1, 6, 12, 4, 6},       {48, 2, 18, 12, 4, 18},
        {48, 3, 35, 6, 4, 35},      {144, 0, 4, 48, 12, 4},     {144, 1, 12, 36, 12, 12},
        {144, 2, 36, 36, 12, 36},   {144, 3, 75, 24, 12, 75},   {144, 4, 121, 12, 12, 121},
        {288, 0, 4, 96, 24, 4},     {288, 1, 12, 72, 24, 12},   {288, 2, 36, 72, 24, 36},
        {288, 3, 90, 48, 24, 90},   {288, 4, 175, 36, 24, 175}, {288, 5, 255, 16, 24, 120},
    };
    for (const auto& r : rows) {
        auto pf = prime_factorize(r.n);
        auto fs = proper_factor_set(pf, r.kappa);
        std::string tag = std::to_string(r.n) + "/k" + std::to_string(r.kappa);
        out.expect(fs.family_size == r.size, tag + " size " + std::to_string(fs.family_size));
        out.expect(fs.family_csd == r.csd, tag + " csd " + std::to_string(fs.family_csd));
        out.expect(available_with_min_csd(fs, r.min_csd) == r.available,
                   tag + " available " + std::to_string(available_with_min_csd(fs, r.min_csd)));
        out.expect(fs.family_size == oracle::best_family_size(r.n, pf.omega() - r.kappa),
                   tag + " not the best size");
    }
    auto near = near_proper_factorization(prime_factorize(288), 4);
    out.expect(near.factors == std::vector<u64>{4, 8, 9} && near.family_size == 168 && near.family_csd == 32,
               "288/k4 near-proper {" + join(near.factors) + "}");
    out.expect(available_with_min_csd(near, 24) == 168, "288/k4 near-proper available");
    auto n48 = near_proper_factorization(prime_factorize(48), 3);
    out.expect(n48.factors == std::vector<u64>{6, 8}, "48/k3 near-proper {" + join(n48.factors) + "}");
    if (out.pass) out.detail << "15 rows and near-proper sets match (288/k5: 255, CSD 16, available 120)";
}

// ---- 2: concatenated-length family sizes -----------------------------------

void concatenated_sizes(Outcome& out) {
    struct Row {
        u64 n;
        std::vector<u64> parts;
        std::vector<u64> sizes;
        int mpo;
    };
    const Row rows[] = {
        {139, {50, 45, 44}, {10, 30}, 3},
        {571, {225, 196, 150}, {32, 80, 126}, 4},
        {839, {396, 243, 200}, {16, 48, 112, 171}, 5},
        {1151, {468, 440, 243}, {32, 64, 128, 208}, 5},
    };
    for (const auto& r : rows) {
        auto decomp = Decomposition::from_parts(r.parts);
        for (std::size_t k = 0; k < r.sizes.size(); ++k) {
            int kappa = static_cast<int>(k);
            auto plain = build_family(kappa == 0 ? FamilyKind::hat_pma : FamilyKind::hat_dpma, kappa,
                                      cond_b(r.n), decomp);
            auto aug = build_family(kappa == 0 ? FamilyKind::apma : FamilyKind::adpma, kappa, cond_b(r.n),
                                    decomp);
            std::string tag = std::to_string(r.n) + "/k" + std::to_string(kappa);
            out.expect(plain.size() == r.sizes[k], tag + " size " + std::to_string(plain.size()));
            out.expect(aug.size() == 2 * r.sizes[k], tag + " augmented size " + std::to_string(aug.size()));
        }
        out.expect(decomp.min_omega == r.mpo, std::to_string(r.n) + " parts reach min Omega " +
                                                  std::to_string(decomp.min_omega));
        auto m = mpo_decompose(r.n, false);
        out.expect(m.mpo == r.mpo, std::to_string(r.n) + ": mpo_decompose gives " + std::to_string(m.mpo) +
                                       " via (" + join(m.witness.parts) + "), expected " +
                                       std::to_string(r.mpo));
    }
    if (out.pass) out.detail << "sizes, augmented sizes and MPO values {3,4,5,5} match";
}

// ---- 3: rotation solver -----------------------------------------------------

void rotation(Outcome& out) {
    struct Row {
        std::vector<u64> parts;
        double deg1, deg2;
    };
    const Row rows[] = {{{50, 45, 44}, 125.12, 236.77}, {{225, 196, 150}, 138.98, 239.06}};
    for (const auto& r : rows) {
        auto s = solve_rotation(r.parts, 1e-9);
        auto deg = [](double x) { return x * 180.0 / std::numbers::pi; };
        u64 n = r.parts[0] + r.parts[1] + r.parts[2];
        cdouble acc{0, 0};
        for (std::size_t i = 0; i < r.parts.size(); ++i) acc += double(r.parts[i]) * std::polar(1.0, s.theta[i]);
        out.expect(s.theta[0] == 0.0, "theta0 not zero");
        out.expect(std::abs(deg(s.theta[1]) - r.deg1) < 0.05, join(r.parts) + " theta1 " + fmt(deg(s.theta[1])));
        out.expect(std::abs(deg(s.theta[2]) - r.deg2) < 0.05, join(r.parts) + " theta2 " + fmt(deg(s.theta[2])));
        out.expect(std::abs(acc) <= 1e-6 * double(n), join(r.parts) + " residual " + fmt(std::abs(acc)));
        if (out.pass)
            out.detail << "(" << join(r.parts) << ") -> " << fmt(deg(s.theta[1])) << ", " << fmt(deg(s.theta[2]))
                       << " deg, residual " << fmt(std::abs(acc)) << " ";
    }
}

// ---- families shared by 4 and 5 ---------------------------------------------

struct Built {
    std::string tag;
    Family family;
};

std::vector<Built> constructed_families() {
    std::vector<Built> all;
    for (u64 n : {48, 144, 288}) {
        int om = prime_omega(n);
        for (auto cfg : {cond_a(n), cond_b(n)}) {
            std::string c = cfg.condition() == Condition::A ? "A" : "B";
            all.push_back({std::to_string(n) + " pma " + c, build_family(FamilyKind::pma, 0, cfg)});
            for (int k = 1; k < om; ++k)
                all.push_back({std::to_string(n) + " dpma k" + std::to_string(k) + " " + c,
                               build_family(FamilyKind::dpma, k, cfg)});
            for (int k = 3; k <= om - 2; ++k)
                all.push_back({std::to_string(n) + " near_dpma k" + std::to_string(k) + " " + c,
                               build_family(FamilyKind::near_dpma, k, cfg)});
        }
    }
    const std::pair<u64, std::vector<u64>> hats[] = {
        {139, {50, 45, 44}}, {571, {225, 196, 150}}, {839, {396, 243, 200}}, {1151, {468, 440, 243}}};
    for (const auto& [n, parts] : hats) {
        auto decomp = Decomposition::from_parts(parts);
        for (auto cfg : {cond_a(n), cond_b(n)}) {
            std::string c = cfg.condition() == Condition::A ? "A" : "B";
            for (int k = 0; k < decomp.min_omega - 1; ++k) {
                FamilyKind plain = k == 0 ? FamilyKind::hat_pma : FamilyKind::hat_dpma;
                FamilyKind aug = k == 0 ? FamilyKind::apma : FamilyKind::adpma;
                all.push_back({std::to_string(n) + " " + std::string(to_string(plain)) + " k" + std::to_string(k) +
                                   " " + c,
                               build_family(plain, k, cfg, decomp)});
                all.push_back({std::to_string(n) + " " + std::string(to_string(aug)) + " k" + std::to_string(k) +
                                   " " + c,
                               build_family(aug, k, cfg, decomp)});
            }
        }
    }
    return all;
}

void orthogonality(Outcome& out) {
    std::size_t families = 0, members = 0;
    double worst_gram = 0, worst_ca = 0, worst_zac_rel = 0;
    for (const auto& b : constructed_families()) {
        auto rep = seqverify::check_family(b.family, 1);
        double n = double(b.family.config.n_seq);
        out.expect(rep.gram_max_offdiag <= 1e-9, b.tag + " gram " + fmt(rep.gram_max_offdiag));
        out.expect(rep.ca_max_dev <= 1e-12, b.tag + " ca " + fmt(rep.ca_max_dev));
        out.expect(rep.zac_max_offpeak <= 1e-9 * n, b.tag + " zac " + fmt(rep.zac_max_offpeak));
        worst_gram = std::max(worst_gram, rep.gram_max_offdiag);
        worst_ca = std::max(worst_ca, rep.ca_max_dev);
        worst_zac_rel = std::max(worst_zac_rel, rep.zac_max_offpeak / n);
        ++families;
        members += rep.members;
    }
    // baselines are not mutually orthogonal; each member is still CA and ZAC
    for (u64 n : {139, 839}) {
        auto zc = build_zc_family(cond_b(n), 64, 26);
        auto pn = build_pn_family(cond_b(n), 8, 26);
        for (const auto* fam : {&zc, &pn})
            for (const auto& s : fam->sequences) {
                out.expect(seqverify::check_ca(s) <= 1e-12, std::to_string(n) + " baseline ca");
                out.expect(seqverify::check_zac(s) <= 1e-9 * double(n), std::to_string(n) + " baseline zac");
            }
    }
    if (out.pass)
        out.detail << families << " families, " << members << " members; max gram " << fmt(worst_gram)
                   << ", max CA dev " << fmt(worst_ca) << ", max ZAC/N " << fmt(worst_zac_rel)
                   << "; ZC and PN members CA and ZAC";
}

// ---- 5: vanishing moments ---------------------------------------------------

void sd_orders(Outcome& out) {
    std::size_t checked = 0;
    for (const auto& b : constructed_families()) {
        for (const auto& s : b.family.sequences) {
            auto r = seqverify::measure_sd_order(s, b.family.config, seqverify::kMaxBetaCap);
            out.expect(r.order >= b.family.sd_order_bound,
                       b.tag + " order " + std::to_string(r.order) + " < " + std::to_string(b.family.sd_order_bound));
            if (!r.capped)
                out.expect(r.first_nonvanishing_magnitude > r.first_nonvanishing_tolerance,
                           b.tag + " first non-vanishing moment within tolerance");
            ++checked;
        }
    }
    auto min_order = [](const Family& f) {
        int m = seqverify::kMaxBetaCap;
        for (const auto& s : f.sequences)
            m = std::min(m, seqverify::measure_sd_order(s, f.config, seqverify::kMaxBetaCap).order);
        return m;
    };
    int pma48 = min_order(build_family(FamilyKind::pma, 0, cond_a(48)));
    int dpma48 = min_order(build_family(FamilyKind::dpma, 2, cond_a(48)));
    int hat839 = min_order(build_family(FamilyKind::hat_dpma, 2, cond_b(839),
                                        Decomposition::from_parts({396, 243, 200})));
    out.expect(pma48 >= 5, "48 pma order " + std::to_string(pma48));
    out.expect(dpma48 >= 3, "48 dpma k2 order " + std::to_string(dpma48));
    out.expect(hat839 >= 1, "839 hat_dpma k2 order " + std::to_string(hat839));
    if (out.pass)
        out.detail << checked << " members at or above their bound; 48 pma " << pma48 << ", 48 dpma k2 " << dpma48
                   << ", 839 hat_dpma k2 (B) " << hat839;
}

// ---- 6: size-ratio properties and closed forms -------------------------------

bool same(const Rational& r, const oracle::Frac& f) {
    return static_cast<oracle::i128>(r.numerator()) * f.den == static_cast<oracle::i128>(r.denominator()) * f.num;
}

void ratio_properties(Outcome& out) {
    std::mt19937_64 rng(20240601);
    for (int t = 0; t < 10000; ++t) {
        std::size_t m = 2 + rng() % 5;
        std::vector<u64> a(m), b(m);
        for (std::size_t i = 0; i < m; ++i) {
            a[i] = 2 + rng() % 60;
            b[i] = a[i] + rng() % 40;
        }
        bool strict = a != b;
        int c = oracle::cmp(oracle::f_ratio(a), oracle::f_ratio(b));
        out.expect(c >= 0 && (!strict || c > 0), "larger entries raised the ratio: " + join(a) + " vs " + join(b));
        out.expect(same(size_ratio(a), oracle::f_ratio(a)), "ratio mismatch for " + join(a));
    }
    for (int t = 0; t < 10000; ++t) {
        std::vector<u64> p(4);
        for (auto& v : p) v = 2 + rng() % 500;
        std::sort(p.begin(), p.end());
        auto f2 = [](u64 x, u64 y) { return oracle::f_ratio({x, y}); };
        auto ad_bc = oracle::mul(f2(p[0], p[3]), f2(p[1], p[2]));
        auto ac_bd = oracle::mul(f2(p[0], p[2]), f2(p[1], p[3]));
        auto ab_cd = oracle::mul(f2(p[0], p[1]), f2(p[2], p[3]));
        out.expect(oracle::cmp(ad_bc, ac_bd) >= 0 && oracle::cmp(ac_bd, ab_cd) >= 0, "pairing order " + join(p));
    }
    for (int t = 0; t < 10000;) {
        std::vector<u64> p(4);
        for (int i = 0; i < 3; ++i) p[i] = 2 + rng() % 40;
        p[3] = 2 + rng() % 3000;
        std::sort(p.begin(), p.end());
        if (p[1] * p[2] > p[3]) continue;
        ++t;
        auto triple = oracle::f_ratio({p[0], p[1], p[2]});
        auto paired = oracle::mul(oracle::f_ratio({p[0], p[3]}), oracle::f_ratio({p[1], p[2]}));
        out.expect(oracle::cmp(triple, paired) >= 0, "triple merge " + join(p));
    }
    std::size_t lengths = 0;
    for (u64 n = 8; n <= 10000; ++n) {
        auto pf = prime_factorize(n);
        int om = pf.omega();
        if (om < 3 || om > 7) continue;
        ++lengths;
        auto k1 = proper_factorization_kappa1(pf);
        auto e1 = exclusive_search_proper(pf, 1);
        out.expect(k1.factors == e1.factors, std::to_string(n) + " k1 {" + join(k1.factors) + "} vs {" +
                                                 join(e1.factors) + "}");
        if (om >= 4) {
            auto k2 = proper_factorization_kappa2(pf);
            auto e2 = exclusive_search_proper(pf, 2);
            out.expect(k2.factors == e2.factors, std::to_string(n) + " k2 {" + join(k2.factors) + "} vs {" +
                                                     join(e2.factors) + "}");
        }
    }
    if (out.pass)
        out.detail << "3 x 10000 random tuples hold exactly; closed forms equal exclusive search for " << lengths
                   << " lengths";
}

// ---- 7: Gosper enumeration and codeword conversion -----------------------------

void gosper_counts(Outcome& out) {
    std::set<std::vector<Codeword>> sets;
    std::size_t produced = 0;
    for (u64 w0 : gosper_enumerate(6, 3))
        for (u64 w1 : gosper_enumerate(3, 2))
            for (u64 w2 : gosper_enumerate(1, 1)) {
                std::vector<Codeword> in{to_codeword(w0, 6), to_codeword(w1, 3), to_codeword(w2, 1)};
                auto full = codeword_conversion(in);
                std::vector<int> claimed(6, 0);
                for (const auto& cw : full)
                    for (std::size_t i = 0; i < cw.size(); ++i) claimed[i] += cw[i];
                out.expect(std::all_of(claimed.begin(), claimed.end(), [](int c) { return c == 1; }),
                           "converted set is not a partition");
                sets.insert(full);
                ++produced;
            }
    out.expect(produced == 60 && sets.size() == 60,
               "codeword sets " + std::to_string(produced) + " (" + std::to_string(sets.size()) + " distinct)");
    out.expect(codeword_set_count({3, 2, 1}) == 60, "codeword_set_count");

    std::vector<Codeword> example{{0, 1, 0, 1, 1, 0}, {0, 1, 1}, {1}};
    auto conv = codeword_conversion(example);
    out.expect(conv == std::vector<Codeword>{{0, 1, 0, 1, 1, 0}, {0, 0, 1, 0, 0, 1}, {1, 0, 0, 0, 0, 0}},
               "worked conversion example differs");

    for (int n = 1; n <= 20; ++n)
        for (int k = 1; k <= n; ++k) {
            u64 count = 0;
            for ([[maybe_unused]] u64 w : gosper_enumerate(n, k)) ++count;
            out.expect(count == oracle::binomial(n, k),
                       "C(" + std::to_string(n) + "," + std::to_string(k) + ") gave " + std::to_string(count));
        }
    if (out.pass) out.detail << "60 distinct partitions, worked example exact, binomial counts for n <= 20";
}

// ---- 8: spectral decay -------------------------------------------------------

void spectral_slopes(Outcome& out) {
    const std::size_t points = std::size_t{1} << 20;
    auto zcfg = cond_b(839);
    auto zc = build_zc_sequence(1, 839);
    auto zspec = spectra::compute_spectrum(zc, zcfg, 64.0, points);
    double zslope = spectra::fit_decay(zspec, 4, 30).slope;
    out.expect(std::abs(zslope + 2.0) <= 0.3, "ZC slope " + fmt(zslope));
    out.detail << "ZC " << fmt(zslope);

    double prev = -1e9;
    for (int kappa = 0; kappa <= 3; ++kappa) {
        auto fam = build_family(kappa == 0 ? FamilyKind::pma : FamilyKind::dpma, kappa, cond_a(48));
        auto spec = spectra::compute_family_spectrum(fam, 64.0, points);
        double slope = spectra::fit_decay(spec, 4, 30).slope;
        if (kappa == 0) out.expect(slope <= -10.0, "48 pma slope " + fmt(slope));
        out.expect(slope > prev, "slope not ordered at kappa " + std::to_string(kappa));
        prev = slope;
        out.detail << (kappa == 0 ? "; 48 pma " : (", k" + std::to_string(kappa) + " ")) << fmt(slope);
    }
}

// ---- 9: Monte Carlo versus closed form under flat fading ---------------------------

void flat_fading_mc(Outcome& out) {
    auto fam = build_family(FamilyKind::apma, 0, cond_b(139), Decomposition::from_parts({50, 45, 44}));
    rachsim::RaSimConfig cfg;
    cfg.identification_count = fam.size();
    cfg.snr_db_list = {-8.0, 0.0};
    cfg.pfa_target = 1e-2;
    cfg.trials = 1000000;
    cfg.seed = 9;
    auto res = rachsim::run_simulation(fam, cfg);
    const double z = 3.0;
    for (const auto& pt : res.points) {
        double phi = rachsim::snr_linear_from_db(pt.snr_db);
        double pfa = std::exp(-pt.beta * phi);
        double pc = std::exp(-pt.beta * phi / (1 + phi * double(fam.config.n_seq)));
        auto check = [&](const rachsim::McEstimate& e, double cf, const char* what) {
            auto iv = rachsim::wilson_interval(e.successes, e.trials, z);
            out.expect(iv.lo <= cf && cf <= iv.hi, std::string(what) + " at " + fmt(pt.snr_db) + " dB: MC " +
                                                       fmt(e.value) + " vs " + fmt(cf));
        };
        check(pt.p_fa, pfa, "P_fa");
        check(pt.p_fid, pfa, "P_fid");
        check(pt.p_c, pc, "P_c");
        out.detail << fmt(pt.snr_db) << " dB: P_fa " << fmt(pt.p_fa.value) << ", P_fid " << fmt(pt.p_fid.value)
                   << ", P_c " << fmt(pt.p_c.value) << " vs " << fmt(pc) << "; ";
    }

    // 839-length family, J = 64, beta = 5 ln 10 / phi: 1 - P_c at the ends of the SNR axis
    auto big = build_family(FamilyKind::adpma, 3, cond_b(839), Decomposition::from_parts({396, 243, 200}));
    auto idx = rachsim::select_members(big.size(), 64, 1);
    std::vector<CaSequence> seqs;
    for (auto i : idx) seqs.push_back(big.sequences[i]);
    auto miss = [&](double snr_db) {
        double phi = rachsim::snr_linear_from_db(snr_db);
        double beta = 5.0 * std::log(10.0) / phi;
        return 1.0 - rachsim::closed_form_metrics(seqs, rachsim::ChannelProfile::flat(), 1250.0, phi, beta).p_c;
    };
    double lo_end = miss(12.0), hi_end = miss(-8.0), inner = miss(-7.99);
    auto sig3 = [](double x, double ref) { return std::abs(x - ref) <= 0.005 * ref; };
    out.expect(sig3(hi_end, 8.23e-2), "1-P_c at -8 dB " + fmt(hi_end));
    out.expect(sig3(lo_end, 8.65e-4), "1-P_c at 12 dB " + fmt(lo_end));
    out.expect(inner <= 8.23e-2 && lo_end >= 8.65e-4, "1-P_c range [" + fmt(lo_end) + ", " + fmt(inner) + "]");
    out.detail << "N=839 J=64: 1-P_c " << fmt(hi_end) << " at -8 dB, " << fmt(lo_end) << " at 12 dB";
}

// ---- 10: identification under delay spread --------------------------------------

void delay_spread_ordering(Outcome& out, const std::string& profile_dir) {
    auto adpma = build_family(FamilyKind::adpma, 1, cond_b(839), Decomposition::from_parts({396, 243, 200}));
    auto zc = build_zc_family(cond_b(839), 64, 26);
    const std::vector<double> snrs{-8, -4, 0, 4, 8, 12};
    auto run = [&](const Family& fam, const rachsim::ChannelProfile& prof) {
        rachsim::RaSimConfig cfg;
        cfg.identification_count = 64;
        cfg.snr_db_list = snrs;
        cfg.pfa_target = 1e-5;
        cfg.trials = 10000;
        cfg.seed = 2024;
        cfg.profile = prof;
        auto res = rachsim::run_simulation(fam, cfg);
        std::vector<double> v;
        for (const auto& p : res.points) v.push_back(p.p_fid.value);
        return v;
    };
    auto p65 = rachsim::load_profile(profile_dir + "/synthetic_umi_65ns.json");
    auto p20 = rachsim::load_profile(profile_dir + "/synthetic_ind_20ns.json");
    auto a65 = run(adpma, p65), z65 = run(zc, p65);
    auto a20 = run(adpma, p20), z20 = run(zc, p20);
    for (std::size_t i = 0; i < snrs.size(); ++i) {
        std::string at = " at " + fmt(snrs[i]) + " dB";
        out.expect(a65[i] < z65[i], "65 ns: adpma " + fmt(a65[i]) + " >= ZC " + fmt(z65[i]) + at);
        out.expect(a20[i] < z20[i], "20 ns: adpma " + fmt(a20[i]) + " >= ZC " + fmt(z20[i]) + at);
        out.expect(z20[i] - a20[i] > z65[i] - a65[i], "gap does not widen on 20 ns" + at);
    }
    if (out.pass) {
        out.detail << "P_fid adpma/ZC (65 ns):";
        for (std::size_t i = 0; i < snrs.size(); ++i) out.detail << " " << fmt(a65[i]) << "/" << fmt(z65[i]);
    }
}

std::set<int> parse_ids(const std::string& s) {
    std::set<int> ids;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) ids.insert(std::stoi(tok));
    return ids;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    std::string only, known_red;
    std::string profile_dir = CASEQ_PROFILE_DIR;
    app.add_option("--only", only, "comma-separated criteria to run");
    app.add_option("--known-red", known_red, "criteria expected to fail");
    app.add_option("--profiles", profile_dir, "directory with channel profile JSON files");
    CLI11_PARSE(app, argc, argv);
    auto selected = parse_ids(only);
    auto red = parse_ids(known_red);

    const std::vector<Criterion> criteria = {
        {1, "factor sets, family sizes and CSD for N = 48, 144, 288", 10, factor_set_table},
        {2, "concatenated-length family sizes and MPO values", 60, concatenated_sizes},
        {3, "rotation angles and closure residual", 0, rotation},
        {4, "orthogonality, constant amplitude and ZAC", 0, orthogonality},
        {5, "vanishing-moment orders versus bounds", 0, sd_orders},
        {6, "size-ratio properties and closed-form factor sets", 0, ratio_properties},
        {7, "Gosper enumeration and codeword conversion", 0, gosper_counts},
        {8, "spectral decay slopes at 2^20 points", 300, spectral_slopes},
        {9, "flat-fading Monte Carlo versus closed form", 600, flat_fading_mc},
        {10, "identification ordering under delay spread", 0,
         [&](Outcome& o) { delay_spread_ordering(o, profile_dir); }},
    };

    int unexpected = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        Outcome out;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(out);
        } catch (const std::exception& e) {
            out.expect(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0) out.expect(secs < c.budget_s, "runtime over " + fmt(c.budget_s) + " s");
        bool expected_red = red.count(c.id) > 0;
        std::printf("%s %2d  %s (%.1f s): %s%s\n", out.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    out.detail.str().c_str(), expected_red ? "  [known red]" : "");
        std::fflush(stdout);
        if (out.pass == expected_red) ++unexpected;
    }
    if (unexpected) std::printf("%d criterion result(s) differ from expectation\n", unexpected);
    return unexpected ? 1 : 0;
}
