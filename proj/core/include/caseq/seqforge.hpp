#pragma once

#include "caseq/factorlab.hpp"
#include "caseq/waveform.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace caseq::seqforge {

using cdouble = std::complex<double>;
using factorlab::Decomposition;

enum class FamilyKind { pma, dpma, near_dpma, hat_pma, hat_dpma, apma, adpma, zc, pn };

std::string_view to_string(FamilyKind kind);
FamilyKind parse_family_kind(std::string_view name);  // throws DomainError
bool is_hat_kind(FamilyKind kind);        // hat_* and augmented kinds
bool is_augmented_kind(FamilyKind kind);  // apma, adpma
bool is_baseline_kind(FamilyKind kind);   // zc, pn

// Construction tag. Per-part lists hold a single entry for sequences that are
// not concatenations.
struct SequenceMeta {
    FamilyKind kind = FamilyKind::pma;
    std::vector<std::vector<std::uint64_t>> factors;  // mixed-radix order used
    std::vector<std::vector<std::uint64_t>> nu;
    std::vector<std::uint64_t> parts;  // part lengths of a concatenation
    std::vector<double> theta;         // per-part rotation in radians, empty if none
    bool reversed_weights = false;     // I-type weights (psi instead of phi)
    std::int64_t zc_root = 0;
    std::uint64_t cyclic_shift = 0;  // k of q[n] exp(j 2 pi n k / N)
    std::uint64_t pn_offset = 0;     // start chip within the m-sequence
};

struct CaSequence {
    std::vector<cdouble> chi;
    std::vector<cdouble> q;  // N^-1/2 (-1)^(n gamma) chi[n]
    SequenceMeta meta;

    std::size_t size() const { return chi.size(); }
};

// Fills q from chi.
CaSequence make_sequence(std::vector<cdouble> chi, std::uint32_t gamma, SequenceMeta meta);

struct Family {
    FamilyKind kind = FamilyKind::pma;
    WaveformConfig config;
    std::vector<CaSequence> sequences;
    int kappa = 0;
    int base_omega = 0;  // Omega(N), or the decomposition's min Omega for hat kinds
    int sd_order_bound = 0;
    std::optional<std::uint64_t> family_csd;
    std::vector<std::vector<std::uint64_t>> factor_sets;  // per part, descending
    std::optional<Decomposition> decomposition;
    std::vector<double> theta;  // rotation phases of augmented families (radians)
    bool no_sd_gain = false;    // hat kind on N whose MPO equals Omega(N)
    // baselines
    std::vector<std::int64_t> zc_roots;
    std::uint64_t baseline_count = 0;
    std::uint64_t min_csd = 0;

    std::size_t size() const { return sequences.size(); }
    std::uint64_t psi_max() const;  // N - I (Condition A), N - 2I (Condition B)
};

struct RotationSolution {
    std::vector<double> theta;       // radians, theta[0] = 0
    double radius_estimate = 0;      // circumscribed radius
    std::vector<double> arc_angles;  // central angles of the polygon sides
    double residual = 0;             // |sum parts_rho exp(j theta_rho)|
    double epsilon = 0;
    int iterations = 0;
};

// ---- single sequences -----------------------------------------------------

// Factors descending, nu_m in [1, A_m - 1]; mixed-radix weights phi.
CaSequence build_g_sequence(std::span<const std::uint64_t> factors_desc,
                            std::span<const std::uint64_t> nu, const WaveformConfig& cfg);

// Factors ascending; weights psi_m = N / phi_{m+1}.
CaSequence build_i_sequence(std::span<const std::uint64_t> factors_asc,
                            std::span<const std::uint64_t> nu, const WaveformConfig& cfg);

// Concatenation of per-part G sequences; rotation may be empty.
CaSequence build_hat_sequence(const Decomposition& decomp,
                              std::span<const std::vector<std::uint64_t>> per_part_factors,
                              std::span<const std::vector<std::uint64_t>> per_part_nu,
                              std::span<const double> rotation, const WaveformConfig& cfg);

// All admissible index vectors of a factor list, lexicographic.
std::vector<std::vector<std::uint64_t>> enumerate_index_vectors(
    std::span<const std::uint64_t> factors);

// ---- families -------------------------------------------------------------

struct FamilyRequest {
    FamilyKind kind = FamilyKind::pma;
    int kappa = 0;
    WaveformConfig config;
    std::optional<Decomposition> decomposition;  // hat kinds
    // Optional per-part factor sets for hat kinds (any order; sorted internally).
    std::vector<std::vector<std::uint64_t>> part_factor_sets;
    double rotation_epsilon = 1e-9;
    // baselines
    std::vector<std::int64_t> zc_roots;  // empty: 1 and the next root coprime to N
    std::uint64_t baseline_count = 64;
    std::uint64_t min_csd = 26;
    unsigned threads = 1;
};

Family build_family(const FamilyRequest& request);
Family build_family(FamilyKind kind, int kappa, const WaveformConfig& cfg,
                    std::optional<Decomposition> decomp = std::nullopt);

// Default decomposition for hat kinds: fewest-part Restriction-A
// decompositions at the MPO level, the one giving the largest family for kappa
// (ties: lexicographically largest parts). Falls back to the MPO witness
// without Restriction A when none exists.
Decomposition default_hat_decomposition(std::uint64_t n, int kappa);

// Per-part factor sets (descending): proper level-(Omega(part) - kappa).
std::vector<std::vector<std::uint64_t>> hat_part_factor_sets(const Decomposition& decomp,
                                                             int kappa);

RotationSolution solve_rotation(std::span<const std::uint64_t> parts, double epsilon = 1e-9);

// Base members followed by their rotated copies.
Family augment_family(const Family& base, double epsilon = 1e-9);

// Frequency-ramp shifts of a G-type leader by k in U(nu0).
std::vector<CaSequence> cs_subfamily(const CaSequence& leader, std::uint64_t p_max);

// q[n] exp(j 2 pi n k / N), i.e. a cyclic shift of the inverse DFT by k.
CaSequence apply_cyclic_shift(const CaSequence& seq, std::uint64_t k);

// ---- baselines ------------------------------------------------------------

CaSequence build_zc_sequence(std::int64_t root, std::uint64_t n, std::uint32_t gamma = 1);

// floor(N / min_csd) shifts of the first root, then the remainder from the
// following roots.
Family build_zc_family(const WaveformConfig& cfg, std::uint64_t count, std::uint64_t min_csd,
                       std::vector<std::int64_t> roots = {});

// Bits (0/1) of one period of the X^15 + X^14 + 1 m-sequence, all-ones seed.
std::vector<std::uint8_t> lfsr_msequence();
constexpr std::uint64_t kMsequencePeriod = 32767;

Family build_pn_family(const WaveformConfig& cfg, std::uint64_t count, std::uint64_t min_csd);

}  // namespace caseq::seqforge
