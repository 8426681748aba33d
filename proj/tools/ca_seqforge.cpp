// ca-seqforge: factor sets, family construction, verification, spectra and
// random-access simulation from the command line.
//
// Exit codes: 0 success, 2 usage or input error, 3 mathematically infeasible
// request, 1 anything unexpected. Every run writes a JSON manifest (argv,
// resolved parameters, outputs, exit code) that `replay` re-executes.

#include "caseq/error.hpp"
#include "caseq/factorlab.hpp"
#include "caseq/io.hpp"
#include "caseq/rachsim.hpp"
#include "caseq/seqforge.hpp"
#include "caseq/seqverify.hpp"
#include "caseq/spectra.hpp"
#include "caseq/version.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace caseq;
namespace fl = caseq::factorlab;
namespace sf = caseq::seqforge;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string fmt(double x) { return io::format_double(x); }

std::string join(const std::vector<std::uint64_t>& v, const char* sep = ",") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
    return s;
}

unsigned default_threads() {
    if (const char* env = std::getenv("CA_SEQFORGE_THREADS")) {
        try {
            return static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            throw DomainError(std::string("CA_SEQFORGE_THREADS is not a number: ") + env);
        }
    }
    return 0;
}

struct Run {
    json params = json::object();
    std::vector<std::string> outputs;
    std::ostream& out = std::cout;

    void write(const std::string& path, const std::string& text) {
        io::write_text_file(path, text);
        outputs.push_back(path);
    }
};

// ---- factorize ------------------------------------------------------------

struct FactorizeOpts {
    std::uint64_t n = 0;
    int kappa = 0;
    std::string mode = "proper";
    std::uint64_t min_csd = 0;
    bool as_json = false;
};

void cmd_factorize(const FactorizeOpts& o, Run& run) {
    run.params = {{"n", o.n}, {"kappa", o.kappa}, {"mode", o.mode}, {"min_csd", o.min_csd}, {"json", o.as_json}};
    if (o.n < 2) throw DomainError("--n must be >= 2");
    auto pf = fl::prime_factorize(o.n);
    if (o.kappa < 0 || o.kappa > pf.omega() - 1)
        throw DomainError("--kappa must be in [0, Omega(N)-1] = [0, " + std::to_string(pf.omega() - 1) +
                          "] for N=" + std::to_string(o.n) + " (Omega(N)=" + std::to_string(pf.omega()) + ")");
    fl::FactorSet fs;
    if (o.mode == "proper")
        fs = fl::proper_factor_set(pf, o.kappa);
    else if (o.mode == "near")
        fs = fl::near_proper_factorization(pf, o.kappa);
    else if (o.mode == "exhaustive")
        fs = o.kappa == 0 ? fl::prime_factor_set(pf) : fl::exclusive_search_proper(pf, o.kappa);
    else
        throw DomainError("--mode must be proper, near or exhaustive");

    json j{{"n", o.n},
           {"omega", pf.omega()},
           {"kappa", o.kappa},
           {"mode", o.mode},
           {"factor_set", fs.factors},
           {"family_size", fs.family_size},
           {"family_csd", fs.family_csd}};
    if (o.min_csd > 0) j["available"] = fl::available_with_min_csd(fs, o.min_csd);
    if (o.as_json) {
        run.out << j.dump(1) << "\n";
        return;
    }
    run.out << "N=" << o.n << " Omega=" << pf.omega() << " kappa=" << o.kappa << " mode=" << o.mode << "\n"
            << "factor set: {" << join(fs.factors) << "}\n"
            << "family size: " << fs.family_size << "\n"
            << "family CSD: " << fs.family_csd << "\n";
    if (o.min_csd > 0)
        run.out << "available with min CSD " << o.min_csd << ": " << j["available"].get<std::uint64_t>() << "\n";
}

// ---- build ----------------------------------------------------------------

struct BuildOpts {
    std::uint64_t n = 0;
    std::string kind = "pma";
    int kappa = 0;
    std::string alpha = "33/256";
    std::uint32_t gamma = 1;
    std::string decomp_file;
    std::string out_file;
    bool with_sequences = false;
    bool verify = true;
    int beta_cap = seqverify::kDefaultBetaCap;
    std::uint64_t count = 64;
    std::uint64_t min_csd = 26;
    std::vector<std::int64_t> zc_roots;
};

// Decomposition file: [parts...] or {"parts": [...], "factor_sets": [[...], ...]}.
void read_decomposition(const std::string& path, sf::FamilyRequest& req) {
    json j;
    try {
        j = json::parse(io::read_text_file(path));
    } catch (const json::exception& e) {
        throw FormatError("decomposition file '" + path + "': " + e.what());
    }
    try {
        if (j.is_array()) {
            req.decomposition = fl::Decomposition::from_parts(j.get<std::vector<std::uint64_t>>());
        } else if (j.is_object() && j.contains("parts")) {
            req.decomposition = fl::Decomposition::from_parts(j["parts"].get<std::vector<std::uint64_t>>());
            if (j.contains("factor_sets"))
                req.part_factor_sets = j["factor_sets"].get<std::vector<std::vector<std::uint64_t>>>();
        } else {
            throw FormatError("decomposition file '" + path + "' needs a parts array");
        }
    } catch (const json::exception& e) {
        throw FormatError("decomposition file '" + path + "': " + e.what());
    }
}

void print_verify(std::ostream& os, const seqverify::VerifyReport& r) {
    os << "verify: members=" << r.members << " ca_max_dev=" << fmt(r.ca_max_dev)
       << " zac_max_offpeak=" << fmt(r.zac_max_offpeak) << " gram_max_offdiag=" << fmt(r.gram_max_offdiag)
       << " orthogonal=" << (r.orthogonal ? "yes" : "no") << "\n"
       << "sd order: measured>=" << r.measured_sd_order << (r.sd_order_capped ? " (capped)" : "")
       << " bound=" << r.sd_order_bound << " condition=" << to_string(r.condition) << "\n";
}

void cmd_build(const BuildOpts& o, unsigned threads, Run& run) {
    run.params = {{"n", o.n},          {"kind", o.kind},         {"kappa", o.kappa},
                  {"alpha", o.alpha},  {"gamma", o.gamma},       {"decomp", o.decomp_file},
                  {"out", o.out_file}, {"with_sequences", o.with_sequences},
                  {"verify", o.verify}, {"beta_cap", o.beta_cap}, {"count", o.count},
                  {"min_csd", o.min_csd}, {"zc_roots", o.zc_roots}};
    sf::FamilyRequest req;
    req.kind = sf::parse_family_kind(o.kind);
    req.kappa = o.kappa;
    req.config.n_seq = o.n;
    req.config.gamma = o.gamma;
    req.config.alpha = parse_rational(o.alpha);
    req.baseline_count = o.count;
    req.min_csd = o.min_csd;
    req.zc_roots = o.zc_roots;
    req.threads = threads;
    if (!o.decomp_file.empty()) read_decomposition(o.decomp_file, req);

    auto fam = sf::build_family(req);
    run.out << "kind=" << sf::to_string(fam.kind) << " N=" << o.n << " kappa=" << fam.kappa
            << " alpha=" << format_rational(fam.config.alpha) << " gamma=" << fam.config.gamma
            << " condition=" << to_string(fam.config.condition()) << "\n"
            << "members: " << fam.size() << "\n"
            << "sd order bound: " << fam.sd_order_bound << "\n";
    if (fam.family_csd) run.out << "family CSD: " << *fam.family_csd << "\n";
    if (fam.decomposition)
        run.out << "decomposition: (" << join(fam.decomposition->parts) << ") min Omega "
                << fam.decomposition->min_omega << "\n";
    for (std::size_t r = 0; r < fam.factor_sets.size(); ++r)
        run.out << "factor set " << r << ": {" << join(fam.factor_sets[r]) << "}\n";
    if (!fam.theta.empty()) {
        run.out << "rotation degrees:";
        for (double t : fam.theta) run.out << " " << fmt(t * 180.0 / 3.14159265358979323846);
        run.out << "\n";
    }
    if (fam.no_sd_gain)
        run.out << "note: the decomposition's min Omega does not exceed Omega(N); no SD-order gain over "
                   "the non-concatenated families\n";
    if (o.verify) print_verify(run.out, seqverify::check_family(fam, o.beta_cap, threads));
    if (!o.out_file.empty()) run.write(o.out_file, io::family_to_json(fam, o.with_sequences));
}

// ---- verify ---------------------------------------------------------------

void cmd_verify(const std::string& family_file, int beta_cap, const std::string& out_file, unsigned threads,
                Run& run) {
    run.params = {{"family", family_file}, {"beta_cap", beta_cap}, {"out", out_file}};
    auto fam = io::load_family(family_file, threads);
    auto rep = seqverify::check_family(fam, beta_cap, threads);
    print_verify(run.out, rep);
    if (!out_file.empty()) run.write(out_file, io::verify_report_to_json(rep));
}

// ---- spectrum -------------------------------------------------------------

struct SpectrumOpts {
    std::string family_file;
    bool eta = false;
    bool slope = false;
    double span = 0;
    std::size_t points = 0;
    std::vector<double> bandwidths;
    double fit_lo = 4;
    double fit_hi = 30;
    long member = -1;
    std::string out_file;
    std::string csv_file;
};

void cmd_spectrum(const SpectrumOpts& o, unsigned threads, Run& run) {
    run.params = {{"family", o.family_file}, {"eta", o.eta}, {"slope", o.slope}, {"span", o.span},
                  {"points", o.points}, {"bandwidths", o.bandwidths}, {"fit_lo", o.fit_lo},
                  {"fit_hi", o.fit_hi}, {"member", o.member}, {"out", o.out_file}, {"csv", o.csv_file}};
    if (o.eta == o.slope) throw DomainError("choose exactly one of --eta and --slope");
    auto fam = io::load_family(o.family_file, threads);
    if (o.member >= 0) {
        if (static_cast<std::size_t>(o.member) >= fam.size())
            throw DomainError("--member " + std::to_string(o.member) + " is outside the family (size " +
                              std::to_string(fam.size()) + ")");
        auto one = fam.sequences[static_cast<std::size_t>(o.member)];
        fam.sequences = {std::move(one)};
    }

    if (o.eta) {
        std::vector<double> bws = o.bandwidths;
        if (bws.empty()) bws = {1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0};
        double span = o.span > 0 ? o.span : spectra::kEtaSpan;
        std::size_t points = o.points > 0 ? o.points : spectra::kEtaGridPoints;
        auto eta = spectra::out_of_band_fraction(fam, bws, span, points, threads);
        auto csv = io::eta_to_csv(eta, sf::to_string(fam.kind));
        if (o.out_file.empty())
            run.out << csv;
        else
            run.write(o.out_file, csv);
        return;
    }

    double span = o.span > 0 ? o.span : spectra::kDefaultSpan;
    std::size_t points = o.points > 0 ? o.points : spectra::kSlopeGridPoints;
    auto spec = spectra::compute_family_spectrum(fam, span, points, threads);
    auto fit = spectra::fit_decay(spec, o.fit_lo, o.fit_hi);
    run.out << "members averaged: " << spec.members << "\n"
            << "fit window: [" << fmt(o.fit_lo) << ", " << fmt(o.fit_hi) << "] lobes=" << fit.lobes << "\n"
            << "slope: " << fmt(fit.slope) << "\n"
            << "sd order bound: " << fam.sd_order_bound << " (ideal slope " << -2 * fam.sd_order_bound - 2
            << ")\n";
    if (!o.out_file.empty()) {
        json j{{"slope", fit.slope}, {"intercept", fit.intercept}, {"lobes", fit.lobes},
               {"fit_lo", o.fit_lo}, {"fit_hi", o.fit_hi}, {"grid_span", span}, {"grid_points", points},
               {"members", spec.members}, {"sd_order_bound", fam.sd_order_bound}};
        run.write(o.out_file, j.dump(1) + "\n");
    }
    if (!o.csv_file.empty()) run.write(o.csv_file, io::spectrum_to_csv(spec));
}

// ---- simulate -------------------------------------------------------------

struct SimulateOpts {
    std::string family_file;
    std::string profile_file;
    std::vector<double> snr_db;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::size_t j = 64;
    double pfa_target = 1e-5;
    double beta = 0;
    double delta_f = 1250.0;
    std::string out_file;
    std::string json_file;
};

void cmd_simulate(const SimulateOpts& o, unsigned threads, Run& run) {
    run.params = {{"family", o.family_file}, {"profile", o.profile_file}, {"snr", o.snr_db},
                  {"trials", o.trials},      {"seed", o.seed},           {"J", o.j},
                  {"pfa_target", o.pfa_target}, {"beta", o.beta},       {"delta_f", o.delta_f},
                  {"out", o.out_file},       {"json", o.json_file}};
    auto fam = io::load_family(o.family_file, threads);
    rachsim::RaSimConfig cfg;
    cfg.identification_count = o.j;
    cfg.snr_db_list = o.snr_db;
    if (cfg.snr_db_list.empty()) throw DomainError("--snr needs at least one value");
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.delta_f = o.delta_f;
    cfg.threads = threads;
    if (o.beta > 0) {
        cfg.rule = rachsim::ThresholdRule::fixed;
        cfg.beta_fixed = o.beta;
    } else {
        cfg.rule = rachsim::ThresholdRule::pfa_target;
        cfg.pfa_target = o.pfa_target;
    }
    if (!o.profile_file.empty()) cfg.profile = rachsim::load_profile(o.profile_file);

    auto res = rachsim::run_simulation(fam, cfg);
    auto csv = io::ra_result_to_csv(res);
    run.out << "profile: " << cfg.profile.name << " sigma_rms_ns=" << fmt(cfg.profile.sigma_rms() * 1e9)
            << " J=" << res.selected.size() << " trials=" << cfg.trials << " seed=" << cfg.seed << "\n";
    for (const auto& p : res.points)
        for (const auto& w : p.warnings) run.out << "warning (snr " << fmt(p.snr_db) << " dB): " << w << "\n";
    if (o.out_file.empty())
        run.out << csv;
    else
        run.write(o.out_file, csv);
    if (!o.json_file.empty()) run.write(o.json_file, io::ra_result_to_json(res));
}

// ---- driver ---------------------------------------------------------------

int execute(std::vector<std::string> args, bool allow_replay);

int replay(const std::string& manifest_file) {
    json m;
    try {
        m = json::parse(io::read_text_file(manifest_file));
    } catch (const json::exception& e) {
        throw FormatError("manifest '" + manifest_file + "': " + e.what());
    }
    if (!m.contains("argv") || !m["argv"].is_array()) throw FormatError("manifest lacks an argv array");
    return execute(m["argv"].get<std::vector<std::string>>(), false);
}

int execute(std::vector<std::string> args, bool allow_replay) {
    CLI::App app{"Constant-amplitude sequence families: construction, checks, spectra, RA simulation"};
    app.set_version_flag("--version", std::string(caseq::kVersion));
    app.require_subcommand(1);

    unsigned threads = default_threads();
    std::string manifest_file = "ca-seqforge-manifest.json";
    app.add_option("--threads", threads, "worker threads (0 = all cores; env CA_SEQFORGE_THREADS)");
    app.add_option("--manifest", manifest_file, "where to write the run manifest");

    FactorizeOpts fo;
    auto* fac = app.add_subcommand("factorize", "factor set of N at level Omega(N)-kappa");
    fac->add_option("--n", fo.n, "sequence length")->required();
    fac->add_option("--kappa", fo.kappa, "degeneration level");
    fac->add_option("--mode", fo.mode, "proper | near | exhaustive")
        ->check(CLI::IsMember({"proper", "near", "exhaustive"}));
    fac->add_option("--min-csd", fo.min_csd, "report members available with this minimum CSD");
    fac->add_flag("--json", fo.as_json, "print JSON");

    BuildOpts bo;
    auto* bld = app.add_subcommand("build", "construct a sequence family");
    bld->add_option("--n", bo.n, "sequence length")->required();
    bld->add_option("--kind", bo.kind, "pma | dpma | near_dpma | hat_pma | hat_dpma | apma | adpma | zc | pn");
    bld->add_option("--kappa", bo.kappa, "degeneration level");
    bld->add_option("--alpha", bo.alpha, "guard ratio as p/q");
    bld->add_option("--gamma", bo.gamma, "subcarrier interleaving factor");
    bld->add_option("--decomp", bo.decomp_file, "decomposition JSON file for hat kinds");
    bld->add_option("--out", bo.out_file, "family JSON output");
    bld->add_flag("--with-sequences", bo.with_sequences, "store sequence values in the family JSON");
    bld->add_flag("!--no-verify", bo.verify, "skip the verification summary");
    bld->add_option("--beta-cap", bo.beta_cap, "highest moment order tested");
    bld->add_option("--count", bo.count, "baseline family size");
    bld->add_option("--min-csd", bo.min_csd, "baseline cyclic-shift step");
    bld->add_option("--zc-roots", bo.zc_roots, "ZC roots in order of use")->delimiter(',');

    std::string verify_family, verify_out;
    int verify_cap = seqverify::kDefaultBetaCap;
    auto* ver = app.add_subcommand("verify", "CA, ZAC, orthogonality and SD-order checks");
    ver->add_option("--family", verify_family, "family JSON")->required();
    ver->add_option("--beta-cap", verify_cap, "highest moment order tested")
        ->check(CLI::Range(1, seqverify::kMaxBetaCap));
    ver->add_option("--out", verify_out, "report JSON output");

    SpectrumOpts so;
    auto* spc = app.add_subcommand("spectrum", "power spectrum slope or out-of-band fraction");
    spc->add_option("--family", so.family_file, "family JSON")->required();
    spc->add_flag("--eta", so.eta, "out-of-band power fraction versus bandwidth (CSV)");
    spc->add_flag("--slope", so.slope, "sidelobe decay slope fit");
    spc->add_option("--span", so.span, "grid span in occupied bandwidths");
    spc->add_option("--points", so.points, "grid points");
    spc->add_option("--bandwidths", so.bandwidths, "normalized bandwidths for --eta")->delimiter(',');
    spc->add_option("--fit-lo", so.fit_lo, "fit window start (normalized frequency)");
    spc->add_option("--fit-hi", so.fit_hi, "fit window end (normalized frequency)");
    spc->add_option("--member", so.member, "use a single member instead of the family average");
    spc->add_option("--out", so.out_file, "output file (CSV for --eta, JSON for --slope)");
    spc->add_option("--csv", so.csv_file, "full spectrum CSV for --slope");

    SimulateOpts mo;
    auto* sim = app.add_subcommand("simulate", "threshold-based RA identification, Monte Carlo and closed form");
    sim->add_option("--family", mo.family_file, "family JSON")->required();
    sim->add_option("--profile", mo.profile_file, "channel profile JSON (default flat fading)");
    sim->add_option("--snr", mo.snr_db, "SNR list in dB")->required()->delimiter(',');
    sim->add_option("--trials", mo.trials, "trials per SNR");
    sim->add_option("--seed", mo.seed, "random seed");
    sim->add_option("--J", mo.j, "identification set size");
    sim->add_option("--pfa-target", mo.pfa_target, "threshold beta = -ln(p_fa)/snr");
    sim->add_option("--beta", mo.beta, "fixed threshold (overrides --pfa-target)");
    sim->add_option("--delta-f", mo.delta_f, "subcarrier spacing in Hz");
    sim->add_option("--out", mo.out_file, "results CSV");
    sim->add_option("--json", mo.json_file, "results JSON with counts");

    std::string replay_file;
    CLI::App* rep = nullptr;
    if (allow_replay) {
        rep = app.add_subcommand("replay", "re-run the command recorded in a manifest");
        rep->add_option("manifest", replay_file, "manifest JSON")->required();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (rep && rep->parsed()) return replay(replay_file);

    Run run;
    json manifest;
    manifest["tool"] = "ca-seqforge";
    manifest["version"] = caseq::kVersion;
    manifest["argv"] = args;
    manifest["threads"] = threads;
    manifest["started"] = utc_now();
    const std::string command = app.get_subcommands().front()->get_name();
    manifest["command"] = command;

    int code = kExitOk;
    try {
        if (fac->parsed()) cmd_factorize(fo, run);
        if (bld->parsed()) cmd_build(bo, threads, run);
        if (ver->parsed()) cmd_verify(verify_family, verify_cap, verify_out, threads, run);
        if (spc->parsed()) cmd_spectrum(so, threads, run);
        if (sim->parsed()) {
            manifest["seed"] = mo.seed;
            cmd_simulate(mo, threads, run);
        }
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        manifest["error"] = e.what();
        code = kExitInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        manifest["error"] = e.what();
        code = kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        manifest["error"] = e.what();
        code = kExitInternal;
    }
    manifest["parameters"] = run.params;
    manifest["outputs"] = run.outputs;
    manifest["exit_code"] = code;
    manifest["finished"] = utc_now();
    try {
        io::write_text_file(manifest_file, manifest.dump(1) + "\n");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (code == kExitOk) code = kExitUsage;
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return execute(std::move(args), true);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
