#pragma once

#include "caseq/rachsim.hpp"
#include "caseq/seqforge.hpp"
#include "caseq/seqverify.hpp"
#include "caseq/spectra.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace caseq::io {

// Shortest decimal that parses back to the same double.
std::string format_double(double x);

std::string read_text_file(const std::string& path);   // throws FormatError
void write_text_file(const std::string& path, const std::string& text);

// Family JSON:
// {
//   "format": "caseq-family", "version": 1,
//   "kind": "adpma", "n": 839, "gamma": 1, "alpha": "33/256", "kappa": 1,
//   "size": 224, "sd_order_bound": 2, "base_omega": 5, "family_csd": null,
//   "factor_sets": [[9, 9, 5], ...],         // per part, descending
//   "decomposition": [396, 243, 200] | null,
//   "theta_degrees": [0, 125.1, ...],        // augmented kinds, else []
//   "zc_roots": [...], "baseline_count": 64, "min_csd": 26,
//   "nu_vectors": [[[...], ...], ...],       // per member, per part
//   "members": [{"zc_root": r, "cyclic_shift": k, "pn_offset": o}, ...],  // baselines
//   "sequences": [[[re, im], ...], ...]      // optional
// }
// Loading rebuilds the family from the metadata and checks it against the
// stored factor sets and index vectors. Stored sequences, when present,
// replace the rebuilt values.
std::string family_to_json(const seqforge::Family& family, bool include_sequences = false);
seqforge::Family family_from_json(const std::string& text, unsigned threads = 1);
seqforge::Family load_family(const std::string& path, unsigned threads = 1);
void save_family(const std::string& path, const seqforge::Family& family,
                 bool include_sequences = false);

std::string verify_report_to_json(const seqverify::VerifyReport& report);

// CSV: normalized_freq,power_db
std::string spectrum_to_csv(const spectra::SpectrumResult& spec);
// CSV: normalized_bandwidth,eta_db,family_kind
std::string eta_to_csv(const std::vector<spectra::EtaPoint>& points, std::string_view family_kind);

// CSV: snr_db,metric,mc_value,ci_halfwidth,closed_form
std::string ra_result_to_csv(const rachsim::RaResult& result);
std::string ra_result_to_json(const rachsim::RaResult& result);

}  // namespace caseq::io
