#include "caseq/seqverify.hpp"

#include "caseq/error.hpp"
#include "caseq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace caseq::seqverify {

namespace {

// Neumaier-compensated accumulation in extended precision.
struct CompensatedSum {
    long double sum = 0;
    long double comp = 0;
    void add(long double x) {
        long double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    long double value() const { return sum + comp; }
};

std::vector<cdouble> twiddles(std::size_t n) {
    std::vector<cdouble> w(n);
    for (std::size_t k = 0; k < n; ++k) {
        double frac = static_cast<double>(k) / static_cast<double>(n);
        if (frac > 0.5) frac -= 1.0;
        w[k] = std::polar(1.0, 2.0 * std::numbers::pi * frac);
    }
    return w;
}

}  // namespace

double check_ca(const CaSequence& seq) {
    double dev = 0;
    for (const auto& v : seq.chi) dev = std::max(dev, std::abs(std::abs(v) - 1.0));
    return dev;
}

std::vector<cdouble> inverse_dft(std::span<const cdouble> q) {
    const std::size_t n = q.size();
    auto w = twiddles(n);
    std::vector<cdouble> out(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t m = 0; m < n; ++m) {
        cdouble acc{0, 0};
        std::size_t idx = 0;  // (m * k) mod n
        for (std::size_t k = 0; k < n; ++k) {
            acc += q[k] * w[idx];
            idx += m;
            if (idx >= n) idx -= n;
        }
        out[m] = acc * scale;
    }
    return out;
}

double check_zac(const CaSequence& seq) {
    auto t = inverse_dft(seq.q);
    const std::size_t n = t.size();
    double worst = 0;
    for (std::size_t lag = 1; lag < n; ++lag) {
        cdouble acc{0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t j = i + lag;
            if (j >= n) j -= n;
            acc += t[j] * std::conj(t[i]);
        }
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

SdOrderResult measure_sd_order(const CaSequence& seq, const WaveformConfig& cfg, int beta_cap) {
    if (beta_cap < 1) throw DomainError("beta cap must be >= 1");
    SdOrderResult res;
    if (beta_cap > kMaxBetaCap) beta_cap = kMaxBetaCap;
    const std::size_t n = seq.size();
    const bool cond_b = cfg.condition() == Condition::B;

    // exp(-j 2 pi n alpha gamma) from the exact fraction (n p mod q) / q
    std::vector<std::complex<long double>> tilt;
    if (cond_b) {
        const Rational ag = cfg.alpha_gamma();
        const std::uint64_t p = static_cast<std::uint64_t>(ag.numerator());
        const std::uint64_t q = static_cast<std::uint64_t>(ag.denominator());
        tilt.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            long double frac = static_cast<long double>((i % q) * (p % q) % q) / q;
            long double ang = -2.0L * std::numbers::pi_v<long double> * frac;
            tilt[i] = {std::cos(ang), std::sin(ang)};
        }
    }

    for (int beta = 0; beta < beta_cap; ++beta) {
        CompensatedSum re, im, tre, tim, scale;
        for (std::size_t i = 0; i < n; ++i) {
            long double w = (beta == 0) ? 1.0L : std::pow(static_cast<long double>(i), beta);
            std::complex<long double> c(seq.chi[i].real(), seq.chi[i].imag());
            re.add(w * c.real());
            im.add(w * c.imag());
            scale.add(w);
            if (cond_b) {
                auto tc = tilt[i] * c;
                tre.add(w * tc.real());
                tim.add(w * tc.imag());
            }
        }
        long double tol = static_cast<long double>(kMomentRelTol) * scale.value();
        long double mag = std::hypot(re.value(), im.value());
        if (cond_b) mag = std::max(mag, std::hypot(tre.value(), tim.value()));
        if (mag > tol) {
            res.order = beta;
            res.first_nonvanishing_beta = beta;
            res.first_nonvanishing_magnitude = static_cast<double>(mag);
            res.first_nonvanishing_tolerance = static_cast<double>(tol);
            return res;
        }
    }
    res.order = beta_cap;
    res.capped = true;
    return res;
}

double gram_max_offdiag(std::span<const CaSequence> seqs, unsigned threads) {
    const std::size_t count = seqs.size();
    std::vector<double> row_max(count, 0.0);
    parallel_chunks(count, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double worst = 0;
            const auto& a = seqs[i].q;
            for (std::size_t k = i + 1; k < count; ++k) {
                const auto& b = seqs[k].q;
                cdouble acc{0, 0};
                for (std::size_t m = 0; m < a.size(); ++m) acc += std::conj(a[m]) * b[m];
                worst = std::max(worst, std::abs(acc));
            }
            row_max[i] = worst;
        }
    });
    double worst = 0;
    for (double v : row_max) worst = std::max(worst, v);
    return worst;
}

VerifyReport check_family(const Family& family, int beta_cap, unsigned threads) {
    VerifyReport rep;
    rep.members = family.size();
    rep.condition = family.config.condition();
    rep.sd_order_bound = family.sd_order_bound;
    rep.beta_cap = std::min(beta_cap, kMaxBetaCap);
    const std::size_t count = family.size();

    std::vector<double> ca(count), zac(count);
    std::vector<SdOrderResult> sd(count);
    parallel_chunks(count, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            ca[i] = check_ca(family.sequences[i]);
            zac[i] = check_zac(family.sequences[i]);
            sd[i] = measure_sd_order(family.sequences[i], family.config, beta_cap);
        }
    });
    rep.measured_sd_order = count ? sd[0].order : 0;
    rep.sd_order_capped = count > 0;
    for (std::size_t i = 0; i < count; ++i) {
        rep.ca_max_dev = std::max(rep.ca_max_dev, ca[i]);
        rep.zac_max_offpeak = std::max(rep.zac_max_offpeak, zac[i]);
        if (sd[i].order < rep.measured_sd_order) rep.measured_sd_order = sd[i].order;
        rep.sd_order_capped = rep.sd_order_capped && sd[i].capped;
    }
    rep.gram_max_offdiag = gram_max_offdiag(family.sequences, threads);
    rep.orthogonal = rep.gram_max_offdiag <= rep.orthogonality_tol;
    return rep;
}

}  // namespace caseq::seqverify
