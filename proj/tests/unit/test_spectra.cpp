#include "doctest.h"
#include "oracles.hpp"

#include "caseq/error.hpp"
#include "caseq/spectra.hpp"

#include <cmath>
#include <numbers>

using namespace caseq;
using namespace caseq::seqforge;
using namespace caseq::spectra;
using u64 = std::uint64_t;

namespace {

constexpr double kPi = std::numbers::pi;

WaveformConfig cond_a(u64 n) { return {n, 4, Rational(1, 4)}; }

// Per-subcarrier integral of q_n exp(j 2 pi (f_n - f) t) over [a, b].
cdouble transform_oracle(const CaSequence& s, const WaveformConfig& cfg, double f) {
    const double a = -(0.5 + boost::rational_cast<double>(cfg.alpha)), b = 0.5;
    const double centre = 0.5 * double(s.size() - 1);
    cdouble acc{0, 0};
    for (std::size_t n = 0; n < s.size(); ++n) {
        double d = (double(n) - centre) * cfg.gamma - f;
        if (std::abs(d) < 1e-12) {
            acc += s.q[n] * (b - a);
            continue;
        }
        acc += s.q[n] * (std::polar(1.0, 2 * kPi * d * b) - std::polar(1.0, 2 * kPi * d * a)) / cdouble(0, 2 * kPi * d);
    }
    return acc;
}

// Energy of the time-domain symbol: sum q_n q_m^* integral of exp(j 2 pi (f_n - f_m) t).
double energy_oracle(const CaSequence& s, const WaveformConfig& cfg) {
    const double a = -(0.5 + boost::rational_cast<double>(cfg.alpha)), b = 0.5;
    cdouble acc{0, 0};
    for (std::size_t n = 0; n < s.size(); ++n)
        for (std::size_t m = 0; m < s.size(); ++m) {
            double d = (double(n) - double(m)) * cfg.gamma;
            cdouble integral = n == m ? cdouble(b - a)
                                      : (std::polar(1.0, 2 * kPi * d * b) - std::polar(1.0, 2 * kPi * d * a)) /
                                            cdouble(0, 2 * kPi * d);
            acc += s.q[n] * std::conj(s.q[m]) * integral;
        }
    return acc.real();
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("transform matches per-subcarrier integration") {
    auto fam = build_family(FamilyKind::dpma, 1, cond_a(48));
    const auto& s = fam.sequences[2];
    for (double f : {0.0, 0.3, 4.0, 17.25, 96.0, 150.5, 400.0, -333.3}) {
        CAPTURE(f);
        auto got = symbol_transform(s, cond_a(48), f);
        auto want = transform_oracle(s, cond_a(48), f);
        CHECK(std::abs(got - want) < 1e-10);
    }
}

TEST_CASE("single tone gives a sinc squared") {
    WaveformConfig cfg{16, 1, Rational(1, 8)};
    CaSequence tone;
    tone.q.assign(16, 0.0);
    tone.chi.assign(16, 0.0);
    tone.q[5] = 1.0;
    const double T = 1.125, fk = 5 - 7.5;
    for (double f : {fk, fk + 0.2, fk + 0.5, fk + 3.7, fk - 11.1}) {
        double x = kPi * (f - fk) * T;
        double want = f == fk ? T * T : std::pow(T * std::sin(x) / x, 2);
        CHECK(std::norm(symbol_transform(tone, cfg, f)) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("integrated spectrum equals symbol energy") {
    auto cfg = cond_a(48);
    auto fam = build_family(FamilyKind::pma, 0, cfg);
    auto spec = compute_spectrum(fam.sequences[1], cfg, 64.0, std::size_t{1} << 17);
    double scale = double(cfg.gamma) * double(cfg.n_seq);
    CHECK(spec.total_power * scale == doctest::Approx(energy_oracle(fam.sequences[1], cfg)).epsilon(1e-4));
    CHECK(spec.freqs.front() == doctest::Approx(-32.0));
    CHECK(spec.freqs.back() == doctest::Approx(32.0));
}

TEST_CASE("grid checks") {
    auto cfg = cond_a(48);
    auto fam = build_family(FamilyKind::pma, 0, cfg);
    CHECK_THROWS_AS(compute_spectrum(fam.sequences[0], cfg, 64.0, 1024), ResolutionError);
    CHECK_THROWS_AS(compute_spectrum(fam.sequences[0], cfg, 64.0, 8192), ResolutionError);
    CHECK_THROWS_AS(compute_spectrum(fam.sequences[0], cfg, 2.0, 8192), DomainError);
    CHECK_THROWS_AS(compute_spectrum(fam.sequences[0], cond_a(50), 64.0, 1 << 17), DomainError);
}

TEST_CASE("decay slopes follow the vanishing-moment order") {
    WaveformConfig zcfg{139, 1, Rational(33, 256)};
    auto zc = build_zc_family(zcfg, 1, 26);
    auto zspec = compute_spectrum(zc.sequences[0], zcfg, 64.0, std::size_t{1} << 18);
    CHECK(fit_decay(zspec, 4, 30).slope == doctest::Approx(-2.0).epsilon(0.15));

    auto cfg = cond_a(48);
    double prev = 0;
    for (int kappa = 0; kappa <= 3; ++kappa) {
        auto fam = build_family(kappa == 0 ? FamilyKind::pma : FamilyKind::dpma, kappa, cfg);
        auto spec = compute_family_spectrum(fam, 64.0, std::size_t{1} << 18);
        double slope = fit_decay(spec, 4, 30).slope;
        CAPTURE(kappa);
        CAPTURE(slope);
        CHECK(slope <= -2.0 * fam.sd_order_bound - 2.0 + 0.5);
        if (kappa > 0) CHECK(slope > prev);
        prev = slope;
    }
    auto fam = build_family(FamilyKind::pma, 0, cfg);
    auto spec = compute_spectrum(fam.sequences[0], cfg, 64.0, std::size_t{1} << 17);
    CHECK_THROWS_AS(fit_decay(spec, 0.5, 10), DomainError);
    CHECK_THROWS_AS(fit_decay(spec, 4, 40), DomainError);
    CHECK_THROWS_AS(fit_decay(spec, 4, 4.01), InsufficientDataError);
}

TEST_CASE("out-of-band fraction") {
    auto cfg = cond_a(48);
    auto fam = build_family(FamilyKind::dpma, 1, cfg);
    std::vector<double> bw{1.0, 1.1, 1.5, 2.0, 3.0, 5.0, 8.0};
    auto eta = out_of_band_fraction(fam, bw);
    REQUIRE(eta.size() == bw.size());
    for (std::size_t i = 1; i < eta.size(); ++i) CHECK(eta[i].eta_db < eta[i - 1].eta_db);
    // reference: trapezoid integration on a wider, finer grid
    auto spec = compute_family_spectrum(fam, 64.0, std::size_t{1} << 18);
    for (std::size_t b = 0; b < bw.size(); ++b) {
        double out = 0, all = 0;
        for (std::size_t i = 1; i < spec.freqs.size(); ++i) {
            double seg = 0.5 * (spec.power[i] + spec.power[i - 1]) * (spec.freqs[i] - spec.freqs[i - 1]);
            all += seg;
            double mid = 0.5 * (spec.freqs[i] + spec.freqs[i - 1]);
            if (std::abs(mid) > 0.5 * bw[b]) out += seg;
        }
        double ref_db = 10 * std::log10(out / all);
        CAPTURE(bw[b]);
        CHECK(eta[b].eta_db == doctest::Approx(ref_db).epsilon(0.01));
    }
    std::vector<double> too_wide{20.0};
    CHECK_THROWS_AS(out_of_band_fraction(fam, too_wide), DomainError);
}

}  // TEST_SUITE
