#pragma once

#include "caseq/seqforge.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace caseq::spectra {

using seqforge::CaSequence;
using seqforge::Family;

constexpr double kDefaultSpan = 64.0;
constexpr std::size_t kSlopeGridPoints = std::size_t{1} << 20;
constexpr double kEtaSpan = 16.0;
constexpr std::size_t kEtaGridPoints = std::size_t{1} << 16;

// Power spectrum of one rectangularly pulsed CP-OFDM symbol. Frequencies are
// normalized by the occupied bandwidth gamma*N/T_d, so the band is [-1/2, 1/2].
struct SpectrumResult {
    std::vector<double> freqs;
    std::vector<double> power;
    double total_power = 0;  // trapezoid integral over the grid
    std::uint64_t n = 0;
    std::uint32_t gamma = 1;
    Rational alpha{0};
    double grid_span = 0;
    std::size_t grid_points = 0;
    double resolution = 0;  // grid step
    std::size_t members = 1;  // sequences averaged
};

// Continuous Fourier transform of the symbol carrying q at frequency f (in
// units of 1/T_d). The symbol occupies t in [-(1/2 + alpha), 1/2) with
// subcarriers centred on 0 and spaced gamma apart.
std::complex<double> symbol_transform(const CaSequence& seq, const WaveformConfig& cfg, double f);

SpectrumResult compute_spectrum(const CaSequence& seq, const WaveformConfig& cfg,
                                double grid_span = kDefaultSpan,
                                std::size_t grid_points = kSlopeGridPoints, unsigned threads = 1);

// Member-averaged spectrum.
SpectrumResult compute_family_spectrum(const Family& family, double grid_span = kDefaultSpan,
                                       std::size_t grid_points = kSlopeGridPoints,
                                       unsigned threads = 1);

struct EtaPoint {
    double bandwidth = 0;  // normalized
    double eta_db = 0;
};

// Average out-of-band power fraction in dB for each normalized bandwidth.
std::vector<EtaPoint> out_of_band_fraction(const Family& family, std::span<const double> bandwidths,
                                           double grid_span = kEtaSpan,
                                           std::size_t grid_points = kEtaGridPoints,
                                           unsigned threads = 1);

struct DecayFit {
    double slope = 0;
    double intercept = 0;
    std::size_t lobes = 0;
};

// Local maxima (freq, power) of the positive-frequency spectrum inside [lo, hi].
std::vector<std::pair<double, double>> lobe_maxima(const SpectrumResult& spec, double lo, double hi);

// Least-squares fit of log10(lobe maxima) against log10(freq).
DecayFit fit_decay(const SpectrumResult& spec, double lo, double hi);
double estimate_decay_order(const SpectrumResult& spec, double lo, double hi);

}  // namespace caseq::spectra
