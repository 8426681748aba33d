#include "caseq/spectra.hpp"

#include "caseq/error.hpp"
#include "caseq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace caseq::spectra {

namespace {

using cdouble = std::complex<double>;

// Per-sequence constants of the closed-form transform
//   X(f) = [e^{-j2pi f b} sum U_n/(f_n - f) - e^{-j2pi f a} sum V_n/(f_n - f)] / (j 2 pi)
// with U_n = q_n e^{j2pi f_n b}, V_n = q_n e^{j2pi f_n a}.
struct Evaluator {
    std::vector<double> fn;
    std::vector<cdouble> u, v, q;
    double a = 0, b = 0, gamma = 1, centre = 0;

    Evaluator(const CaSequence& seq, const WaveformConfig& cfg) {
        const std::size_t n = seq.size();
        gamma = cfg.gamma;
        a = -(0.5 + boost::rational_cast<double>(cfg.alpha));
        b = 0.5;
        centre = 0.5 * static_cast<double>(n - 1);
        fn.resize(n);
        u.resize(n);
        v.resize(n);
        q = seq.q;
        for (std::size_t i = 0; i < n; ++i) {
            fn[i] = (static_cast<double>(i) - centre) * gamma;
            u[i] = seq.q[i] * std::polar(1.0, 2.0 * std::numbers::pi * fn[i] * b);
            v[i] = seq.q[i] * std::polar(1.0, 2.0 * std::numbers::pi * fn[i] * a);
        }
    }

    cdouble operator()(double f) const {
        const std::size_t n = fn.size();
        // subcarrier sitting exactly on f contributes q_n * T
        double k_real = f / gamma + centre;
        long long k = std::llround(k_real);
        bool on_carrier = k >= 0 && k < static_cast<long long>(n) &&
                          std::abs(f - fn[static_cast<std::size_t>(k)]) < 1e-9 * gamma;
        cdouble su{0, 0}, sv{0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            if (on_carrier && static_cast<long long>(i) == k) continue;
            double inv = 1.0 / (fn[i] - f);
            su += u[i] * inv;
            sv += v[i] * inv;
        }
        const double two_pi = 2.0 * std::numbers::pi;
        cdouble x = (std::polar(1.0, -two_pi * f * b) * su - std::polar(1.0, -two_pi * f * a) * sv) /
                    cdouble(0.0, two_pi);
        if (on_carrier) x += q[static_cast<std::size_t>(k)] * (b - a);
        return x;
    }
};

void check_grid(const WaveformConfig& cfg, double span, std::size_t points) {
    if (points < 4096) throw ResolutionError("spectrum grid needs at least 4096 points");
    if (!(span >= 4.0)) throw DomainError("spectrum grid span must be >= 4 signal bandwidths");
    const double step = span / static_cast<double>(points - 1);
    // at least four points per sidelobe width 1/(T gamma N)
    const double lobe = 1.0 / (cfg.symbol_duration() * cfg.gamma * static_cast<double>(cfg.n_seq));
    if (step > 0.25 * lobe)
        throw ResolutionError("grid step " + std::to_string(step) +
                              " does not resolve the sidelobe width " + std::to_string(lobe) +
                              "; use more points or a narrower span");
}

std::vector<double> make_grid(double span, std::size_t points) {
    std::vector<double> g(points);
    const double half = 0.5 * static_cast<double>(points - 1);
    const double step = span / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) g[i] = (static_cast<double>(i) - half) * step;
    return g;
}

void accumulate_power(const CaSequence& seq, const WaveformConfig& cfg,
                      const std::vector<double>& grid, std::vector<double>& power,
                      unsigned threads) {
    Evaluator eval(seq, cfg);
    const double scale = static_cast<double>(cfg.gamma) * static_cast<double>(cfg.n_seq);
    parallel_chunks(grid.size(), threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) power[i] += std::norm(eval(grid[i] * scale));
    });
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0;
    for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return acc;
}

SpectrumResult empty_result(const WaveformConfig& cfg, double span, std::size_t points) {
    SpectrumResult r;
    r.freqs = make_grid(span, points);
    r.power.assign(points, 0.0);
    r.n = cfg.n_seq;
    r.gamma = cfg.gamma;
    r.alpha = cfg.alpha;
    r.grid_span = span;
    r.grid_points = points;
    r.resolution = span / static_cast<double>(points - 1);
    return r;
}

}  // namespace

std::complex<double> symbol_transform(const CaSequence& seq, const WaveformConfig& cfg, double f) {
    return Evaluator(seq, cfg)(f);
}

SpectrumResult compute_spectrum(const CaSequence& seq, const WaveformConfig& cfg, double grid_span,
                                std::size_t grid_points, unsigned threads) {
    if (seq.size() != cfg.n_seq) throw DomainError("sequence length does not match the config");
    check_grid(cfg, grid_span, grid_points);
    auto r = empty_result(cfg, grid_span, grid_points);
    accumulate_power(seq, cfg, r.freqs, r.power, threads);
    r.total_power = trapezoid(r.freqs, r.power);
    return r;
}

SpectrumResult compute_family_spectrum(const Family& family, double grid_span,
                                       std::size_t grid_points, unsigned threads) {
    if (family.sequences.empty()) throw DomainError("empty family");
    const auto& cfg = family.config;
    check_grid(cfg, grid_span, grid_points);
    auto r = empty_result(cfg, grid_span, grid_points);
    for (const auto& s : family.sequences) accumulate_power(s, cfg, r.freqs, r.power, threads);
    const double inv = 1.0 / static_cast<double>(family.sequences.size());
    for (auto& p : r.power) p *= inv;
    r.members = family.sequences.size();
    r.total_power = trapezoid(r.freqs, r.power);
    return r;
}

std::vector<EtaPoint> out_of_band_fraction(const Family& family, std::span<const double> bandwidths,
                                           double grid_span, std::size_t grid_points,
                                           unsigned threads) {
    if (family.sequences.empty()) throw DomainError("empty family");
    for (double bw : bandwidths)
        if (!(bw >= 0) || bw > grid_span)
            throw DomainError("bandwidth " + std::to_string(bw) + " exceeds the grid span " +
                              std::to_string(grid_span));
    const auto& cfg = family.config;
    check_grid(cfg, grid_span, grid_points);
    const auto grid = make_grid(grid_span, grid_points);
    const std::size_t pts = grid.size();
    const double step = grid_span / static_cast<double>(pts - 1);
    const double edge = 0.5 * grid_span;
    const double lobe = 1.0 / (cfg.symbol_duration() * cfg.gamma * static_cast<double>(cfg.n_seq));
    const std::size_t edge_window =
        std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(2.0 * lobe / step)));
    const double decay_exp = 2.0 * family.sd_order_bound + 1.0;

    std::vector<double> frac_sum(bandwidths.size(), 0.0);
    std::vector<double> power(pts);
    std::vector<double> cum(pts), rcum(pts);
    for (const auto& seq : family.sequences) {
        std::fill(power.begin(), power.end(), 0.0);
        accumulate_power(seq, cfg, grid, power, threads);
        // prefix and suffix integrals, so out-of-band power is never a
        // difference of two nearly equal totals
        cum[0] = 0;
        for (std::size_t i = 1; i < pts; ++i) cum[i] = cum[i - 1] + 0.5 * (power[i] + power[i - 1]) * step;
        rcum[pts - 1] = 0;
        for (std::size_t i = pts - 1; i-- > 0;) rcum[i] = rcum[i + 1] + 0.5 * (power[i] + power[i + 1]) * step;
        // tail beyond each edge: envelope E at the edge, integral of E (F/f)^(2I+2)
        double env_lo = *std::max_element(power.begin(), power.begin() + edge_window);
        double env_hi = *std::max_element(power.end() - edge_window, power.end());
        double tail_lo = env_lo * edge / decay_exp;
        double tail_hi = env_hi * edge / decay_exp;
        double total = cum[pts - 1] + tail_lo + tail_hi;

        auto locate = [&](double f, std::size_t& i, double& t) {
            double pos = (f + edge) / step;
            i = std::min<std::size_t>(pts - 2, static_cast<std::size_t>(std::floor(pos)));
            t = pos - static_cast<double>(i);
        };
        for (std::size_t b = 0; b < bandwidths.size(); ++b) {
            double half = 0.5 * bandwidths[b];
            std::size_t i;
            double t;
            locate(-half, i, t);
            double p_at = power[i] + t * (power[i + 1] - power[i]);
            double below = cum[i] + 0.5 * (power[i] + p_at) * t * step;
            locate(half, i, t);
            p_at = power[i] + t * (power[i + 1] - power[i]);
            double above = rcum[i + 1] + 0.5 * (p_at + power[i + 1]) * (1.0 - t) * step;
            frac_sum[b] += (below + above + tail_lo + tail_hi) / total;
        }
    }
    std::vector<EtaPoint> out;
    for (std::size_t b = 0; b < bandwidths.size(); ++b) {
        double avg = frac_sum[b] / static_cast<double>(family.sequences.size());
        out.push_back({bandwidths[b], 10.0 * std::log10(std::max(avg, 1e-300))});
    }
    return out;
}

std::vector<std::pair<double, double>> lobe_maxima(const SpectrumResult& spec, double lo, double hi) {
    std::vector<std::pair<double, double>> out;
    const auto& f = spec.freqs;
    const auto& p = spec.power;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        if (f[i] < lo || f[i] > hi) continue;
        if (p[i] >= p[i - 1] && p[i] > p[i + 1] && p[i] > 0) out.emplace_back(f[i], p[i]);
    }
    return out;
}

DecayFit fit_decay(const SpectrumResult& spec, double lo, double hi) {
    if (!(lo > 0.75) || !(hi > lo))
        throw DomainError("fit window must lie above 1.5x the half bandwidth (0.75)");
    if (hi > 0.5 * spec.grid_span) throw DomainError("fit window exceeds the spectrum grid");
    auto peaks = lobe_maxima(spec, lo, hi);
    if (peaks.size() < 10)
        throw InsufficientDataError("only " + std::to_string(peaks.size()) +
                                    " sidelobes in the fit window (need 10)");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(peaks.size());
    for (auto [f, p] : peaks) {
        double x = std::log10(f), y = std::log10(p);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    DecayFit fit;
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / m;
    fit.lobes = peaks.size();
    return fit;
}

double estimate_decay_order(const SpectrumResult& spec, double lo, double hi) {
    return fit_decay(spec, lo, hi).slope;
}

}  // namespace caseq::spectra
