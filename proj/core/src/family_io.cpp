#include "caseq/io.hpp"

#include "caseq/error.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace caseq::io {

using nlohmann::json;
using seqforge::Family;
using seqforge::FamilyKind;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << text;
    if (!out) throw FormatError("write to '" + path + "' failed");
}

namespace {

// nlohmann prints finite doubles as shortest round-trip text already.
json complex_pair(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

constexpr double kPi = 3.14159265358979323846;

template <class T>
T get_field(const json& j, const char* key) {
    if (!j.contains(key)) throw FormatError(std::string("family JSON lacks '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("family JSON field '") + key + "': " + e.what());
    }
}

}  // namespace

std::string family_to_json(const Family& fam, bool include_sequences) {
    json j;
    j["format"] = "caseq-family";
    j["version"] = 1;
    j["kind"] = std::string(seqforge::to_string(fam.kind));
    j["n"] = fam.config.n_seq;
    j["gamma"] = fam.config.gamma;
    j["alpha"] = format_rational(fam.config.alpha);
    j["kappa"] = fam.kappa;
    j["size"] = fam.size();
    j["sd_order_bound"] = fam.sd_order_bound;
    j["base_omega"] = fam.base_omega;
    j["family_csd"] = fam.family_csd ? json(*fam.family_csd) : json(nullptr);
    j["no_sd_gain"] = fam.no_sd_gain;
    j["factor_sets"] = fam.factor_sets;
    j["decomposition"] = fam.decomposition ? json(fam.decomposition->parts) : json(nullptr);
    json theta = json::array();
    for (double t : fam.theta) theta.push_back(t * 180.0 / kPi);
    j["theta_degrees"] = theta;
    j["zc_roots"] = fam.zc_roots;
    j["baseline_count"] = fam.baseline_count;
    j["min_csd"] = fam.min_csd;

    json nus = json::array();
    json members = json::array();
    for (const auto& s : fam.sequences) {
        nus.push_back(s.meta.nu);
        if (seqforge::is_baseline_kind(fam.kind))
            members.push_back({{"zc_root", s.meta.zc_root},
                               {"cyclic_shift", s.meta.cyclic_shift},
                               {"pn_offset", s.meta.pn_offset}});
    }
    j["nu_vectors"] = nus;
    j["members"] = members;
    if (include_sequences) {
        json seqs = json::array();
        for (const auto& s : fam.sequences) {
            json one = json::array();
            for (const auto& z : s.q) one.push_back(complex_pair(z));
            seqs.push_back(std::move(one));
        }
        j["sequences"] = std::move(seqs);
    }
    return j.dump(1) + "\n";
}

Family family_from_json(const std::string& text, unsigned threads) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("family JSON does not parse: ") + e.what());
    }
    if (!j.is_object()) throw FormatError("family JSON must be an object");
    if (j.contains("format") && j["format"] != "caseq-family")
        throw FormatError("not a caseq family file");

    seqforge::FamilyRequest req;
    try {
        req.kind = seqforge::parse_family_kind(get_field<std::string>(j, "kind"));
    } catch (const DomainError& e) {
        throw FormatError(e.what());
    }
    req.config.n_seq = get_field<std::uint64_t>(j, "n");
    req.config.gamma = j.contains("gamma") ? get_field<std::uint32_t>(j, "gamma") : 1;
    if (j.contains("alpha")) {
        try {
            req.config.alpha = parse_rational(get_field<std::string>(j, "alpha"));
        } catch (const DomainError& e) {
            throw FormatError(e.what());
        }
    }
    req.kappa = j.contains("kappa") ? get_field<int>(j, "kappa") : 0;
    req.threads = threads;
    if (j.contains("decomposition") && !j["decomposition"].is_null())
        req.decomposition =
            factorlab::Decomposition::from_parts(get_field<std::vector<std::uint64_t>>(j, "decomposition"));
    if (seqforge::is_hat_kind(req.kind) && j.contains("factor_sets"))
        req.part_factor_sets = get_field<std::vector<std::vector<std::uint64_t>>>(j, "factor_sets");
    if (j.contains("zc_roots")) req.zc_roots = get_field<std::vector<std::int64_t>>(j, "zc_roots");
    if (j.contains("baseline_count") && get_field<std::uint64_t>(j, "baseline_count") > 0)
        req.baseline_count = get_field<std::uint64_t>(j, "baseline_count");
    if (j.contains("min_csd") && get_field<std::uint64_t>(j, "min_csd") > 0)
        req.min_csd = get_field<std::uint64_t>(j, "min_csd");

    Family fam = seqforge::build_family(req);

    if (j.contains("factor_sets")) {
        auto sets = get_field<std::vector<std::vector<std::uint64_t>>>(j, "factor_sets");
        for (auto& s : sets) std::sort(s.begin(), s.end(), std::greater<>());
        if (sets != fam.factor_sets)
            throw FormatError("stored factor sets do not match the rebuilt family");
    }
    if (j.contains("nu_vectors")) {
        const auto& nus = j["nu_vectors"];
        if (!nus.is_array() || nus.size() != fam.size())
            throw FormatError("stored family has " + std::to_string(nus.size()) +
                              " index vectors, rebuilt family has " + std::to_string(fam.size()));
        for (std::size_t i = 0; i < fam.size(); ++i)
            if (nus[i].get<std::vector<std::vector<std::uint64_t>>>() != fam.sequences[i].meta.nu)
                throw FormatError("index vector of member " + std::to_string(i) +
                                  " does not match the rebuilt family");
    }
    if (j.contains("sequences")) {
        const auto& seqs = j["sequences"];
        if (!seqs.is_array() || seqs.size() != fam.size())
            throw FormatError("stored sequence count does not match the family size");
        const std::uint64_t n = fam.config.n_seq;
        const double root_n = std::sqrt(static_cast<double>(n));
        for (std::size_t i = 0; i < fam.size(); ++i) {
            const auto& s = seqs[i];
            if (!s.is_array() || s.size() != n)
                throw FormatError("stored sequence " + std::to_string(i) + " has wrong length");
            auto& dst = fam.sequences[i];
            for (std::uint64_t k = 0; k < n; ++k) {
                const auto& pair = s[k];
                if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
                    throw FormatError("sequence entries must be [re, im] pairs");
                std::complex<double> q{pair[0].get<double>(), pair[1].get<double>()};
                dst.q[k] = q;
                double sign = ((k * fam.config.gamma) % 2 == 0) ? 1.0 : -1.0;
                dst.chi[k] = q * root_n * sign;
            }
        }
    }
    return fam;
}

Family load_family(const std::string& path, unsigned threads) {
    return family_from_json(read_text_file(path), threads);
}

void save_family(const std::string& path, const Family& family, bool include_sequences) {
    write_text_file(path, family_to_json(family, include_sequences));
}

std::string verify_report_to_json(const seqverify::VerifyReport& r) {
    json j;
    j["members"] = r.members;
    j["condition"] = std::string(to_string(r.condition));
    j["ca_max_dev"] = r.ca_max_dev;
    j["zac_max_offpeak"] = r.zac_max_offpeak;
    j["gram_max_offdiag"] = r.gram_max_offdiag;
    j["orthogonal"] = r.orthogonal;
    j["orthogonality_tol"] = r.orthogonality_tol;
    j["measured_sd_order"] = r.measured_sd_order;
    j["sd_order_capped"] = r.sd_order_capped;
    j["sd_order_bound"] = r.sd_order_bound;
    j["beta_cap"] = r.beta_cap;
    j["moment_rel_tol"] = r.moment_rel_tol;
    return j.dump(1) + "\n";
}

std::string spectrum_to_csv(const spectra::SpectrumResult& spec) {
    std::string out = "normalized_freq,power_db\n";
    for (std::size_t i = 0; i < spec.freqs.size(); ++i) {
        double db = spec.power[i] > 0 ? 10.0 * std::log10(spec.power[i]) : -std::numeric_limits<double>::infinity();
        out += format_double(spec.freqs[i]) + "," + format_double(db) + "\n";
    }
    return out;
}

std::string eta_to_csv(const std::vector<spectra::EtaPoint>& points, std::string_view family_kind) {
    std::string out = "normalized_bandwidth,eta_db,family_kind\n";
    for (const auto& p : points)
        out += format_double(p.bandwidth) + "," + format_double(p.eta_db) + "," + std::string(family_kind) + "\n";
    return out;
}

std::string ra_result_to_csv(const rachsim::RaResult& result) {
    std::string out = "snr_db,metric,mc_value,ci_halfwidth,closed_form\n";
    for (const auto& p : result.points) {
        auto row = [&](const char* metric, const rachsim::McEstimate& e, double cf) {
            out += format_double(p.snr_db) + "," + metric + "," + format_double(e.value) + "," +
                   format_double(e.ci_halfwidth) + "," + format_double(cf) + "\n";
        };
        row("p_fa", p.p_fa, p.closed_form.p_fa);
        row("p_fid", p.p_fid, p.closed_form.p_fid_avg);
        row("p_c", p.p_c, p.closed_form.p_c);
    }
    return out;
}

std::string ra_result_to_json(const rachsim::RaResult& result) {
    json j;
    j["selected"] = result.selected;
    json pts = json::array();
    for (const auto& p : result.points) {
        auto est = [](const rachsim::McEstimate& e) {
            return json{{"successes", e.successes},
                        {"trials", e.trials},
                        {"value", e.value},
                        {"ci_halfwidth", e.ci_halfwidth}};
        };
        pts.push_back({{"snr_db", p.snr_db},
                       {"beta", p.beta},
                       {"p_fa", est(p.p_fa)},
                       {"p_fid", est(p.p_fid)},
                       {"p_c", est(p.p_c)},
                       {"closed_form",
                        {{"p_fa", p.closed_form.p_fa},
                         {"p_fid", p.closed_form.p_fid_avg},
                         {"p_c", p.closed_form.p_c},
                         {"sigma_c2", p.closed_form.sigma_c2},
                         {"sigma_fie2_max", p.closed_form.sigma_fie2_max},
                         {"sigma_fie2_mean", p.closed_form.sigma_fie2_mean}}},
                       {"warnings", p.warnings}});
    }
    j["points"] = pts;
    return j.dump(1) + "\n";
}

}  // namespace caseq::io
