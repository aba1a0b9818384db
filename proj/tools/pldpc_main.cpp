// Command line front end: decoding-threshold analysis, theoretical BER
// curves, Monte-Carlo simulation, code export and the validation suite.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pldpc/ber_theory.hpp"
#include "pldpc/lifted_code.hpp"
#include "pldpc/pexit.hpp"
#include "pldpc/sim.hpp"
#include "pldpc/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitBadArguments = 2;
constexpr int kExitIoError = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "a:b:step" or a comma list
std::vector<double> parse_sweep(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double a, b, step;
        char c1, c2;
        std::istringstream in(text);
        if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
            throw CLI::ValidationError("--ebn0", "expected a:b:step with step > 0");
        for (double v = a; v <= b + 1e-9; v += step) out.push_back(v);
    } else {
        std::istringstream in(text);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            if (tok.empty()) continue;
            out.push_back(std::stod(tok));
        }
    }
    if (out.empty()) throw CLI::ValidationError("--ebn0", "empty sweep");
    return out;
}

class OutStream {
  public:
    explicit OutStream(const std::string& path) {
        if (path.empty() || path == "-") {
            stream_ = &std::cout;
            return;
        }
        file_.open(path);
        if (!file_) throw IoError("cannot open output file: " + path);
        stream_ = &file_;
    }
    std::ostream& get() { return *stream_; }
    void finish(const std::string& path) {
        if (&file_ == stream_) {
            file_.flush();
            if (!file_) throw IoError("write failed: " + path);
        }
    }

  private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

int default_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Protograph LDPC relay analysis: PEXIT thresholds, theoretical BER, simulation"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Flat key=value file; keys mirror the long flags, prefixed by the subcommand "
                   "(e.g. simulate.ebn0=1.0:2.0:0.25)");
    auto with_config = [](CLI::App* sub) {
        sub->fallthrough(true); // lets --config appear after the subcommand
        return sub;
    };

    // ---- thresholds ----
    auto* th = with_config(app.add_subcommand("thresholds", "PEXIT decoding thresholds over Nakagami-m relay fading"));
    std::string th_family = "ar3a";
    std::vector<int> th_n{0};
    std::vector<double> th_m{1.0};
    double th_d = 0.4, th_tol = 0.01;
    int th_q = 100000, th_tmaxp = 500;
    std::uint64_t th_seed = 1;
    std::string th_out = "-";
    th->add_option("--family", th_family, "ar3a or ar4ja")->check(CLI::IsMember({"ar3a", "ar4ja"}));
    th->add_option("--n", th_n, "extension indices (rate (n+1)/(n+2))")->delimiter(',');
    th->add_option("--m", th_m, "fading depths")->delimiter(',');
    th->add_option("--d", th_d, "S-R distance in (0,1)");
    th->add_option("--q", th_q, "fading realizations");
    th->add_option("--tmaxp", th_tmaxp, "max density-evolution iterations");
    th->add_option("--tol-db", th_tol, "bisection tolerance in dB");
    th->add_option("--seed", th_seed, "master seed");
    th->add_option("--out", th_out, "output CSV path ('-' for stdout)");

    // ---- ber-theory ----
    auto* bt = with_config(app.add_subcommand("ber-theory", "Theoretical BER from the fading-averaged recursion"));
    std::string bt_protocol = "ef", bt_family = "ar3a", bt_ebn0 = "0:3:0.25", bt_out = "-";
    std::vector<int> bt_n{3};
    std::vector<double> bt_m{2.0};
    double bt_d = 0.4;
    int bt_q = 100000, bt_tmax = 100;
    std::uint64_t bt_seed = 1;
    bt->add_option("--protocol", bt_protocol, "ef or df")->check(CLI::IsMember({"ef", "df"}));
    bt->add_option("--family", bt_family, "ar3a or ar4ja")->check(CLI::IsMember({"ar3a", "ar4ja"}));
    bt->add_option("--n", bt_n, "extension indices")->delimiter(',');
    bt->add_option("--m", bt_m, "fading depths")->delimiter(',');
    bt->add_option("--d", bt_d, "S-R distance in (0,1)");
    bt->add_option("--ebn0", bt_ebn0, "sweep, a:b:step or comma list (dB)");
    bt->add_option("--tmax", bt_tmax, "fixed iteration count");
    bt->add_option("--q", bt_q, "fading realizations");
    bt->add_option("--seed", bt_seed, "master seed");
    bt->add_option("--out", bt_out, "output CSV path ('-' for stdout)");

    // ---- simulate ----
    auto* si = with_config(app.add_subcommand("simulate", "Monte-Carlo simulation of the coded relay system"));
    std::string si_protocol = "ef", si_family = "ar3a", si_ebn0 = "1.0:2.0:0.25", si_out = "-";
    pldpc::SimConfig sim_cfg;
    si->add_option("--protocol", si_protocol, "ef or df")->check(CLI::IsMember({"ef", "df"}));
    si->add_option("--family", si_family, "ar3a or ar4ja")->check(CLI::IsMember({"ar3a", "ar4ja"}));
    si->add_option("--n", sim_cfg.extension, "extension index");
    si->add_option("--z", sim_cfg.z, "lifting factor");
    si->add_option("--m", sim_cfg.m, "fading depth");
    si->add_option("--d", sim_cfg.d, "S-R distance in (0,1)");
    si->add_option("--ebn0", si_ebn0, "sweep, a:b:step or comma list (dB)");
    si->add_option("--max-iter", sim_cfg.max_iter, "decoder iterations per block");
    si->add_option("--min-error-blocks", sim_cfg.min_error_blocks, "stop rule: error blocks per point");
    si->add_option("--max-blocks", sim_cfg.max_blocks, "stop rule: block cap per point");
    si->add_option("--seed", sim_cfg.seed, "master seed");
    int si_workers = default_workers();
    si->add_option("--workers", si_workers, "worker threads");
    si->add_option("--sr-noise-scale", sim_cfg.sr_noise_scale,
                   "diagnostic scaling of the S-R noise (0 = genie relay)");
    si->add_option("--out", si_out, "output CSV path ('-' for stdout)");

    // ---- export ----
    auto* ex = with_config(app.add_subcommand("export", "Write a base matrix / lifted parity-check matrix"));
    std::string ex_family = "ar3a", ex_base_out, ex_h_out;
    int ex_n = 3, ex_z = 512;
    std::uint64_t ex_seed = 1;
    ex->add_option("--family", ex_family, "ar3a or ar4ja")->check(CLI::IsMember({"ar3a", "ar4ja"}));
    ex->add_option("--n", ex_n, "extension index");
    ex->add_option("--z", ex_z, "lifting factor (for --h-out)");
    ex->add_option("--seed", ex_seed, "lifting seed");
    ex->add_option("--base-out", ex_base_out, "base matrix text output path");
    ex->add_option("--h-out", ex_h_out, "sparse H output path (1-based 'row col' triplets)");

    // ---- validate ----
    auto* va = with_config(app.add_subcommand("validate", "Run the property/invariant suite and threshold spot checks"));
    pldpc::ValidationOptions vopt;
    vopt.workers = std::min(default_workers(), 4);
    bool va_skip_table1 = false;
    va->add_option("--seed", vopt.seed, "master seed");
    va->add_option("--q", vopt.table1_q, "realizations for the threshold spot checks");
    va->add_flag("--skip-thresholds", va_skip_table1, "skip the slow threshold spot checks");
    va->add_option("--workers", vopt.workers, "worker threads for the spot checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help or the parse diagnostics
        return code == 0 ? kExitOk : kExitBadArguments;
    }

    try {
        if (th->parsed()) {
            OutStream out(th_out);
            pldpc::write_threshold_csv_header(out.get());
            for (int n : th_n) {
                for (double m : th_m) {
                    pldpc::ThresholdOptions opt;
                    opt.tol_db = th_tol;
                    opt.q = th_q;
                    opt.t_max = th_tmaxp;
                    opt.seed = th_seed;
                    opt.geometry = pldpc::RelayGeometry{th_d};
                    const auto base = pldpc::build_family(pldpc::family_from_name(th_family), n);
                    const auto res = pldpc::threshold_search(base, m, opt);
                    pldpc::write_threshold_csv_row(out.get(), res);
                    out.get().flush();
                }
            }
            out.finish(th_out);
        } else if (bt->parsed()) {
            OutStream out(bt_out);
            pldpc::write_ber_theory_csv_header(out.get());
            const auto sweep = parse_sweep(bt_ebn0);
            for (int n : bt_n) {
                for (double m : bt_m) {
                    pldpc::BerTheoryOptions opt;
                    opt.t_max = bt_tmax;
                    opt.q = bt_q;
                    opt.seed = bt_seed;
                    opt.geometry = pldpc::RelayGeometry{bt_d};
                    const auto base = pldpc::build_family(pldpc::family_from_name(bt_family), n);
                    const auto curve = (bt_protocol == "ef")
                                           ? pldpc::ef_ber_curve(base, m, sweep, opt)
                                           : pldpc::df_ber_curve(base, m, sweep, opt);
                    for (const auto& pt : curve) pldpc::write_ber_theory_csv_row(out.get(), base, pt, bt_q);
                    out.get().flush();
                }
            }
            out.finish(bt_out);
        } else if (si->parsed()) {
            sim_cfg.family = pldpc::family_from_name(si_family);
            sim_cfg.protocol = pldpc::protocol_from_name(si_protocol);
            sim_cfg.ebn0_db = parse_sweep(si_ebn0);
            sim_cfg.workers = si_workers;
            sim_cfg.validate();
            const pldpc::RelaySimulator sim(sim_cfg);
            std::vector<pldpc::SimBerPoint> points;
            for (double db : sim_cfg.ebn0_db) {
                const auto pt = sim.simulate_point(db);
                std::fprintf(stderr, "ebn0 %.3f dB: ber %.3e bler %.3e blocks %lld (%.1f s)\n",
                             pt.ebn0_db, pt.ber(), pt.bler(), pt.blocks, pt.seconds);
                points.push_back(pt);
            }
            OutStream out(si_out);
            pldpc::write_sim_csv(out.get(), sim_cfg, sim.code(), points);
            out.finish(si_out);
        } else if (ex->parsed()) {
            const auto base = pldpc::build_family(pldpc::family_from_name(ex_family), ex_n);
            if (!ex_base_out.empty()) {
                std::ofstream f(ex_base_out);
                if (!f) throw IoError("cannot open: " + ex_base_out);
                f << base.to_text();
                if (!f.flush()) throw IoError("write failed: " + ex_base_out);
            }
            if (!ex_h_out.empty()) {
                const pldpc::LiftedCode code(base, ex_z, ex_seed);
                std::ofstream f(ex_h_out);
                if (!f) throw IoError("cannot open: " + ex_h_out);
                code.write_sparse(f);
                if (!f.flush()) throw IoError("write failed: " + ex_h_out);
            }
            if (ex_base_out.empty() && ex_h_out.empty()) std::cout << base.to_text();
        } else if (va->parsed()) {
            vopt.include_table1 = !va_skip_table1;
            const auto results = pldpc::run_validation_suite(vopt);
            bool all_pass = true;
            for (const auto& r : results) {
                std::printf("[%s] %-28s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                            r.detail.c_str());
                all_pass = all_pass && r.pass;
            }
            if (!all_pass) return kExitValidationFailure;
        }
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIoError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid arguments: %s\n", e.what());
        return kExitBadArguments;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidationFailure;
    }
    return kExitOk;
}
