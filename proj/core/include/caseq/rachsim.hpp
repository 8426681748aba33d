#pragma once

#include "caseq/seqforge.hpp"

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace caseq::rachsim {

using seqforge::CaSequence;
using seqforge::cdouble;
using seqforge::Family;

struct Tap {
    double delay_s = 0;
    double power = 0;  // linear
};

struct ChannelProfile {
    std::string name;
    std::vector<Tap> taps;

    double sigma_rms() const;  // seconds
    double total_power() const;
    // Throws DomainError unless delays are strictly increasing, start at >= 0,
    // end at <= max_delay_s (pass a negative value to skip) and powers sum to 1.
    void validate(double max_delay_s = -1) const;

    static ChannelProfile flat();  // one tap at 0, unit power
    // Powers scaled to sum to one.
    static ChannelProfile normalized(std::string name, std::vector<Tap> taps);
};

// Profile JSON: {"name": ..., "taps": [{"delay_ns": d, "power_db": p}, ...],
// "normalize": true}. Throws FormatError / DomainError.
ChannelProfile parse_profile(const std::string& json_text);
ChannelProfile load_profile(const std::string& path);
std::string profile_to_json(const ChannelProfile& profile);

// mt19937_64 with fixed conversions, so draws are identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform();        // [0, 1)
    double uniform_open0();  // (0, 1]
    std::uint64_t below(std::uint64_t bound);  // uniform in [0, bound)
    cdouble complex_normal(double variance);   // circularly symmetric, Box-Muller

private:
    std::mt19937_64 eng_;
};

std::uint64_t splitmix64(std::uint64_t x);
// Seed for an independent stream identified by (seed, a, b).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

// h[n] = sum_l g_l exp(-j 2 pi delta_f n tau_l), g_l ~ CN(0, sigma_l^2).
std::vector<cdouble> sample_cfr(const ChannelProfile& profile, std::size_t n, double delta_f,
                                Rng& rng);

// r[n] = sqrt(N) q[n] h[n] + z[n], z ~ CN(0, 1/snr).
std::vector<cdouble> received_vector(std::span<const cdouble> q, std::span<const cdouble> h,
                                     double snr_linear, Rng& rng);
// No-request observation: noise only.
std::vector<cdouble> noise_vector(std::size_t n, double snr_linear, Rng& rng);

// |q_i^h r|^2
double correlation_power(std::span<const cdouble> q, std::span<const cdouble> r);

// {i : |q_i^h r|^2 > beta}
std::vector<std::size_t> detect(std::span<const cdouble> r, std::span<const CaSequence> seqs,
                                double beta);

double snr_linear_from_db(double snr_db);
// beta = -ln(p_fa) / snr, so that exp(-beta snr) = p_fa.
double threshold_for_pfa(double p_fa, double snr_linear);

struct ClosedForm {
    double p_fa = 0;
    std::vector<double> p_fid_k;  // per requested index
    double p_fid_avg = 0;
    double p_c = 0;
    double sigma_c2 = 0;
    double sigma_fie2_max = 0;
    double sigma_fie2_mean = 0;
    std::vector<double> sigma_fie2;  // J x J row-major, diagonal unused (0)
};

ClosedForm closed_form_metrics(std::span<const CaSequence> seqs, const ChannelProfile& profile,
                               double delta_f, double snr_linear, double beta);

struct Interval {
    double lo = 0;
    double hi = 0;
};
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);

enum class ThresholdRule { pfa_target, fixed };

struct RaSimConfig {
    std::size_t identification_count = 64;  // J, at most the family size
    std::vector<double> snr_db_list;
    ThresholdRule rule = ThresholdRule::pfa_target;
    double pfa_target = 1e-5;
    double beta_fixed = 1.0;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    ChannelProfile profile = ChannelProfile::flat();
    double delta_f = 1250.0;  // Hz
    std::uint64_t block_size = 4096;
    unsigned threads = 1;
};

struct McEstimate {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double value = 0;
    double ci_halfwidth = 0;  // 95% Wilson
};

struct SnrPoint {
    double snr_db = 0;
    double beta = 0;
    McEstimate p_fa, p_fid, p_c;
    ClosedForm closed_form;
    std::vector<std::string> warnings;
};

struct RaResult {
    std::vector<std::size_t> selected;  // family indices used as identification set
    std::vector<SnrPoint> points;
};

// Draws the identification subset (all members when J >= family size).
std::vector<std::size_t> select_members(std::size_t family_size, std::size_t count,
                                        std::uint64_t seed);

RaResult run_simulation(const Family& family, const RaSimConfig& cfg);

}  // namespace caseq::rachsim
