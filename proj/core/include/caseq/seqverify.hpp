#pragma once

#include "caseq/seqforge.hpp"

#include <complex>
#include <span>
#include <vector>

namespace caseq::seqverify {

using seqforge::CaSequence;
using seqforge::cdouble;
using seqforge::Family;

constexpr int kMaxBetaCap = 8;
constexpr int kDefaultBetaCap = 6;
constexpr double kMomentRelTol = 1e-8;

// max_n | |chi[n]| - 1 |
double check_ca(const CaSequence& seq);

// Inverse DFT with N^-1/2 scaling: out[m] = N^-1/2 sum_n q[n] exp(j 2 pi m n / N).
std::vector<cdouble> inverse_dft(std::span<const cdouble> q);

// max over nonzero lags of the periodic autocorrelation of the inverse DFT.
double check_zac(const CaSequence& seq);

struct SdOrderResult {
    int order = 0;          // moments vanish for all beta < order
    bool capped = false;    // every tested moment vanished (order == beta_cap)
    int first_nonvanishing_beta = -1;
    double first_nonvanishing_magnitude = 0;  // |moment| at that beta
    double first_nonvanishing_tolerance = 0;  // tau_beta at that beta
};

// Vanishing-moment order: |sum n^beta chi[n]| <= 1e-8 sum n^beta for beta <
// order, plus the exp(-j 2 pi n alpha gamma) weighted moments under Condition B.
SdOrderResult measure_sd_order(const CaSequence& seq, const WaveformConfig& cfg,
                               int beta_cap = kDefaultBetaCap);

// Max |<q_i, q_k>| over i != k.
double gram_max_offdiag(std::span<const CaSequence> seqs, unsigned threads = 1);

struct VerifyReport {
    std::size_t members = 0;
    Condition condition = Condition::A;
    double ca_max_dev = 0;
    double zac_max_offpeak = 0;
    double gram_max_offdiag = 0;
    int measured_sd_order = 0;  // minimum over members
    bool sd_order_capped = false;
    int sd_order_bound = 0;
    int beta_cap = kDefaultBetaCap;
    double moment_rel_tol = kMomentRelTol;
    bool orthogonal = false;    // gram_max_offdiag <= orthogonality_tol
    double orthogonality_tol = 1e-9;
};

VerifyReport check_family(const Family& family, int beta_cap = kDefaultBetaCap,
                          unsigned threads = 1);

}  // namespace caseq::seqverify
