#include "caseq/rachsim.hpp"

#include "caseq/error.hpp"
#include "caseq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace caseq::rachsim {

double ChannelProfile::total_power() const {
    double s = 0;
    for (const auto& t : taps) s += t.power;
    return s;
}

double ChannelProfile::sigma_rms() const {
    double p = total_power();
    if (p <= 0) return 0;
    double m1 = 0, m2 = 0;
    for (const auto& t : taps) {
        m1 += t.power * t.delay_s;
        m2 += t.power * t.delay_s * t.delay_s;
    }
    m1 /= p;
    m2 /= p;
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

void ChannelProfile::validate(double max_delay_s) const {
    if (taps.empty()) throw DomainError("channel profile '" + name + "' has no taps");
    if (taps.front().delay_s < 0) throw DomainError("tap delays must be >= 0");
    for (std::size_t l = 1; l < taps.size(); ++l)
        if (!(taps[l].delay_s > taps[l - 1].delay_s))
            throw DomainError("tap delays must be strictly increasing");
    for (const auto& t : taps)
        if (!(t.power >= 0)) throw DomainError("tap powers must be >= 0");
    if (max_delay_s >= 0 && taps.back().delay_s > max_delay_s)
        throw DomainError("last tap delay exceeds the guard interval");
    if (std::abs(total_power() - 1.0) > 1e-9)
        throw DomainError("tap powers of profile '" + name + "' must sum to 1");
}

ChannelProfile ChannelProfile::flat() { return {"flat", {{0.0, 1.0}}}; }

ChannelProfile ChannelProfile::normalized(std::string name, std::vector<Tap> taps) {
    ChannelProfile p{std::move(name), std::move(taps)};
    double s = p.total_power();
    if (!(s > 0)) throw DomainError("channel profile has zero total power");
    for (auto& t : p.taps) t.power /= s;
    return p;
}

double Rng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Rng::uniform_open0() { return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw DomainError("Rng::below needs a positive bound");
    // rejection keeps the draw exactly uniform
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = eng_();
    } while (x >= limit);
    return x % bound;
}

cdouble Rng::complex_normal(double variance) {
    double radius = std::sqrt(-std::log(uniform_open0()) * variance);
    double ang = 2.0 * std::numbers::pi * uniform();
    return {radius * std::cos(ang), radius * std::sin(ang)};
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

namespace {

// exp(-j 2 pi delta_f n tau_l), tap-major.
std::vector<cdouble> tap_phasors(const ChannelProfile& profile, std::size_t n, double delta_f) {
    std::vector<cdouble> table(profile.taps.size() * n);
    for (std::size_t l = 0; l < profile.taps.size(); ++l) {
        double step = delta_f * profile.taps[l].delay_s;  // cycles per subcarrier
        for (std::size_t i = 0; i < n; ++i) {
            double cycles = step * static_cast<double>(i);
            cycles -= std::floor(cycles);
            table[l * n + i] = std::polar(1.0, -2.0 * std::numbers::pi * cycles);
        }
    }
    return table;
}

void cfr_from_table(const ChannelProfile& profile, const std::vector<cdouble>& table,
                    std::size_t n, Rng& rng, std::vector<cdouble>& h) {
    h.assign(n, cdouble{0, 0});
    for (std::size_t l = 0; l < profile.taps.size(); ++l) {
        cdouble g = rng.complex_normal(profile.taps[l].power);
        const cdouble* row = &table[l * n];
        for (std::size_t i = 0; i < n; ++i) h[i] += g * row[i];
    }
}

}  // namespace

std::vector<cdouble> sample_cfr(const ChannelProfile& profile, std::size_t n, double delta_f,
                                Rng& rng) {
    std::vector<cdouble> h;
    cfr_from_table(profile, tap_phasors(profile, n, delta_f), n, rng, h);
    return h;
}

std::vector<cdouble> received_vector(std::span<const cdouble> q, std::span<const cdouble> h,
                                     double snr_linear, Rng& rng) {
    if (q.size() != h.size()) throw DomainError("sequence and channel lengths differ");
    const double amp = std::sqrt(static_cast<double>(q.size()));
    const double noise_var = 1.0 / snr_linear;
    std::vector<cdouble> r(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        r[i] = amp * q[i] * h[i];
        if (std::isfinite(noise_var) && noise_var > 0) r[i] += rng.complex_normal(noise_var);
    }
    return r;
}

std::vector<cdouble> noise_vector(std::size_t n, double snr_linear, Rng& rng) {
    std::vector<cdouble> z(n);
    for (auto& v : z) v = rng.complex_normal(1.0 / snr_linear);
    return z;
}

double correlation_power(std::span<const cdouble> q, std::span<const cdouble> r) {
    cdouble acc{0, 0};
    for (std::size_t i = 0; i < q.size(); ++i) acc += std::conj(q[i]) * r[i];
    return std::norm(acc);
}

std::vector<std::size_t> detect(std::span<const cdouble> r, std::span<const CaSequence> seqs,
                                double beta) {
    if (!(beta > 0)) throw DomainError("detection threshold must be positive");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < seqs.size(); ++i)
        if (correlation_power(seqs[i].q, r) > beta) out.push_back(i);
    return out;
}

double snr_linear_from_db(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

double threshold_for_pfa(double p_fa, double snr_linear) {
    if (!(p_fa > 0 && p_fa < 1)) throw DomainError("target false-alarm probability must be in (0,1)");
    return -std::log(p_fa) / snr_linear;
}

ClosedForm closed_form_metrics(std::span<const CaSequence> seqs, const ChannelProfile& profile,
                               double delta_f, double snr_linear, double beta) {
    if (seqs.empty()) throw DomainError("empty identification set");
    const std::size_t j = seqs.size();
    const std::size_t n = seqs.front().size();
    const auto table = tap_phasors(profile, n, delta_f);
    const double bphi = beta * snr_linear;

    ClosedForm cf;
    cf.p_fa = std::exp(-bphi);

    double sc = 0;
    for (std::size_t l = 0; l < profile.taps.size(); ++l) {
        cdouble acc{0, 0};
        for (std::size_t i = 0; i < n; ++i) acc += table[l * n + i];
        sc += profile.taps[l].power * std::norm(acc);
    }
    cf.sigma_c2 = sc / static_cast<double>(n);
    cf.p_c = std::exp(-bphi / (1.0 + snr_linear * cf.sigma_c2));

    cf.sigma_fie2.assign(j * j, 0.0);
    for (std::size_t a = 0; a < j; ++a) {
        for (std::size_t b = 0; b < j; ++b) {
            if (a == b) continue;
            double s = 0;
            for (std::size_t l = 0; l < profile.taps.size(); ++l) {
                cdouble acc{0, 0};
                const cdouble* row = &table[l * n];
                for (std::size_t i = 0; i < n; ++i) acc += std::conj(seqs[a].q[i]) * seqs[b].q[i] * row[i];
                s += profile.taps[l].power * std::norm(acc);
            }
            cf.sigma_fie2[a * j + b] = s * static_cast<double>(n);
        }
    }

    cf.p_fid_k.assign(j, 0.0);
    double sum_sigma = 0;
    for (std::size_t k = 0; k < j; ++k) {
        double acc = 0;
        for (std::size_t i = 0; i < j; ++i) {
            if (i == k) continue;
            double s2 = cf.sigma_fie2[i * j + k];
            acc += std::exp(-bphi / (1.0 + snr_linear * s2));
            cf.sigma_fie2_max = std::max(cf.sigma_fie2_max, s2);
            sum_sigma += s2;
        }
        cf.p_fid_k[k] = j > 1 ? acc / static_cast<double>(j - 1) : 0.0;
    }
    cf.p_fid_avg = std::accumulate(cf.p_fid_k.begin(), cf.p_fid_k.end(), 0.0) / static_cast<double>(j);
    if (j > 1) cf.sigma_fie2_mean = sum_sigma / static_cast<double>(j * (j - 1));
    return cf;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::vector<std::size_t> select_members(std::size_t family_size, std::size_t count,
                                        std::uint64_t seed) {
    std::vector<std::size_t> idx(family_size);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (count >= family_size) return idx;
    Rng rng(derive_seed(seed, 0x5e1ec7, 0));
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t pick = i + static_cast<std::size_t>(rng.below(family_size - i));
        std::swap(idx[i], idx[pick]);
    }
    idx.resize(count);
    return idx;
}

namespace {

struct Tally {
    std::uint64_t fa = 0, fid = 0, correct = 0;
};

McEstimate estimate(std::uint64_t hits, std::uint64_t trials) {
    McEstimate e;
    e.successes = hits;
    e.trials = trials;
    e.value = trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
    auto iv = wilson_interval(hits, trials, 1.959963984540054);
    e.ci_halfwidth = 0.5 * (iv.hi - iv.lo);
    return e;
}

}  // namespace

RaResult run_simulation(const Family& family, const RaSimConfig& cfg) {
    if (family.sequences.empty()) throw DomainError("empty family");
    if (cfg.trials < 1) throw DomainError("trials must be >= 1");
    if (cfg.identification_count < 1) throw DomainError("identification count must be >= 1");
    if (cfg.block_size < 1) throw DomainError("block size must be >= 1");
    const double guard_s =
        boost::rational_cast<double>(family.config.alpha) / cfg.delta_f;  // T_g = alpha T_d
    cfg.profile.validate(guard_s);

    if (cfg.identification_count > family.size())
        throw DomainError("identification set size J=" + std::to_string(cfg.identification_count) +
                          " exceeds the family size " + std::to_string(family.size()));
    RaResult res;
    res.selected = select_members(family.size(), cfg.identification_count, cfg.seed);
    std::vector<CaSequence> seqs;
    for (auto i : res.selected) seqs.push_back(family.sequences[i]);
    const std::size_t j = seqs.size();
    const std::size_t n = seqs.front().size();
    const auto table = tap_phasors(cfg.profile, n, cfg.delta_f);
    const std::uint64_t blocks = (cfg.trials + cfg.block_size - 1) / cfg.block_size;

    for (std::size_t s = 0; s < cfg.snr_db_list.size(); ++s) {
        const double snr_db = cfg.snr_db_list[s];
        const double phi = snr_linear_from_db(snr_db);
        const double beta =
            cfg.rule == ThresholdRule::pfa_target ? threshold_for_pfa(cfg.pfa_target, phi) : cfg.beta_fixed;
        if (!(beta > 0)) throw DomainError("detection threshold must be positive");

        std::vector<Tally> tallies(blocks);
        parallel_chunks(blocks, cfg.threads, [&](std::size_t lo, std::size_t hi) {
            std::vector<cdouble> h, r(n);
            const double amp = std::sqrt(static_cast<double>(n));
            const double noise_var = 1.0 / phi;
            for (std::size_t b = lo; b < hi; ++b) {
                Rng rng(derive_seed(cfg.seed, s + 1, b));
                const std::uint64_t first = b * cfg.block_size;
                const std::uint64_t count = std::min<std::uint64_t>(cfg.block_size, cfg.trials - first);
                Tally t;
                for (std::uint64_t trial = 0; trial < count; ++trial) {
                    // request: channel, requested index, noise
                    cfr_from_table(cfg.profile, table, n, rng, h);
                    const std::size_t k = static_cast<std::size_t>(rng.below(j));
                    for (std::size_t i = 0; i < n; ++i)
                        r[i] = amp * seqs[k].q[i] * h[i] + rng.complex_normal(noise_var);
                    for (std::size_t i = 0; i < j; ++i) {
                        bool hit = correlation_power(seqs[i].q, r) > beta;
                        if (i == k)
                            t.correct += hit;
                        else
                            t.fid += hit;
                    }
                    // no request: noise only
                    for (std::size_t i = 0; i < n; ++i) r[i] = rng.complex_normal(noise_var);
                    for (std::size_t i = 0; i < j; ++i) t.fa += correlation_power(seqs[i].q, r) > beta;
                }
                tallies[b] = t;
            }
        });
        Tally total;
        for (const auto& t : tallies) {
            total.fa += t.fa;
            total.fid += t.fid;
            total.correct += t.correct;
        }

        SnrPoint pt;
        pt.snr_db = snr_db;
        pt.beta = beta;
        pt.p_fa = estimate(total.fa, cfg.trials * j);
        pt.p_fid = estimate(total.fid, cfg.trials * (j - 1));
        pt.p_c = estimate(total.correct, cfg.trials);
        pt.closed_form = closed_form_metrics(seqs, cfg.profile, cfg.delta_f, phi, beta);
        const double expected_fa = pt.closed_form.p_fa * static_cast<double>(cfg.trials * j);
        if (expected_fa < 10)
            pt.warnings.push_back("trials too few to resolve p_fa (expected " +
                                  std::to_string(expected_fa) +
                                  " false alarms); use the closed form or relax the threshold");
        const double expected_fid = pt.closed_form.p_fid_avg * static_cast<double>(cfg.trials * (j - 1));
        if (j > 1 && expected_fid < 10)
            pt.warnings.push_back("trials too few to resolve p_fid (expected " +
                                  std::to_string(expected_fid) + " false identifications)");
        res.points.push_back(std::move(pt));
    }
    return res;
}

}  // namespace caseq::rachsim
