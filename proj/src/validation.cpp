#include "pldpc/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "pldpc/ber_theory.hpp"
#include "pldpc/bp_decoder.hpp"
#include "pldpc/channel.hpp"
#include "pldpc/j_function.hpp"
#include "pldpc/lifted_code.hpp"
#include "pldpc/pexit.hpp"
#include "pldpc/rng.hpp"
#include "pldpc/sim.hpp"

namespace pldpc {

namespace {

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

CheckResult check_j_round_trip() {
    double worst = 0.0;
    for (double mi = 0.01; mi <= 0.99; mi += 0.001)
        worst = std::max(worst, std::abs(j_fun(j_inv(mi)) - mi));
    return {"j_round_trip", worst <= 0.01, fmt("max |J(Jinv(I)) - I| = %.4g (limit 0.01)", worst)};
}

CheckResult check_j_monotone() {
    double prev = -1.0;
    bool ok = true;
    for (double s = 0.0; s <= 12.0; s += 0.01) {
        const double v = j_fun(s);
        if (v < prev) ok = false;
        prev = v;
    }
    return {"j_monotone", ok, "J strictly non-decreasing on [0, 12]"};
}

CheckResult check_nakagami_moments(std::uint64_t seed) {
    bool ok = true;
    std::ostringstream detail;
    for (double m : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        auto rng = make_engine(seed, 0xa11, static_cast<std::uint64_t>(m * 4));
        NakagamiParams params{m, 1.0};
        double sum = 0.0;
        const int draws = 1000000;
        for (int k = 0; k < draws; ++k) {
            const double a = sample_nakagami(params, rng);
            sum += a * a;
        }
        const double mean = sum / draws;
        if (std::abs(mean - 1.0) > 0.01) ok = false;
        detail << " m=" << m << ":" << mean;
    }
    return {"nakagami_moments", ok, "E[alpha^2] within 1%:" + detail.str()};
}

CheckResult check_rayleigh_equivalence(std::uint64_t seed) {
    const int n = 100000;
    std::vector<double> a(n), b(n);
    auto rng1 = make_engine(seed, 0x4a1);
    auto rng2 = make_engine(seed, 0x4a2);
    NakagamiParams params{1.0, 1.0};
    for (int k = 0; k < n; ++k) a[k] = sample_nakagami(params, rng1);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int k = 0; k < n; ++k) {
        double u;
        do { u = uni(rng2); } while (u <= 0.0);
        b[k] = std::sqrt(-std::log(u)); // Rayleigh with E[b^2] = 1
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    // two-sample Kolmogorov-Smirnov statistic
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i; else ++j;
        d = std::max(d, std::abs(double(i) / n - double(j) / n));
    }
    const double crit = 1.628 * std::sqrt(2.0 / n); // 1% significance
    return {"rayleigh_equivalence", d < crit, fmt("KS D = %.5f, critical %.5f", d, crit)};
}

CheckResult check_llr_consistency(std::uint64_t seed) {
    // fixed fading, many noise draws: empirical mean must match var/2
    auto rng = make_engine(seed, 0x11c);
    const double sigma2 = 0.8, h_sd = 0.9, h_rd = 1.4;
    const int n = 100000;
    std::vector<double> r1(n), r2(n), hs(n, h_sd), hr(n, h_rd), llr(n);
    std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
    for (int k = 0; k < n; ++k) {
        r1[k] = h_sd + noise(rng);
        r2[k] = h_rd + noise(rng);
    }
    mrc_llr(r1, r2, hs, hr, sigma2, llr);
    double mean = 0.0, var = 0.0;
    for (double v : llr) mean += v;
    mean /= n;
    for (double v : llr) var += (v - mean) * (v - mean);
    var /= n - 1;
    const double ratio = mean / (var / 2.0);
    return {"llr_consistency", std::abs(ratio - 1.0) < 0.02,
            fmt("mean/(var/2) = %.4f (MRC, fixed fading)", ratio)};
}

CheckResult check_geometry_scaling(std::uint64_t seed) {
    auto rng = make_engine(seed, 0x9e0);
    const RelayGeometry g{0.4};
    NakagamiParams params{2.0, 1.0};
    double sum_sr = 0.0, sum_rd = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double a1 = g.sr_amp() * sample_nakagami(params, rng);
        const double a2 = g.rd_amp() * sample_nakagami(params, rng);
        sum_sr += a1 * a1;
        sum_rd += a2 * a2;
    }
    const double e_sr = sum_sr / n, e_rd = sum_rd / n;
    const bool ok = std::abs(e_sr - g.sr_gain()) / g.sr_gain() < 0.02 &&
                    std::abs(e_rd - g.rd_gain()) / g.rd_gain() < 0.02;
    return {"geometry_scaling", ok, fmt("E[gamma_sr] = %.3f (6.25), E[gamma_rd] = %.3f (2.778)", e_sr, e_rd)};
}

CheckResult check_encoder_soundness(std::uint64_t seed) {
    const LiftedCode code(build_ar3a(1), 32, seed);
    auto rng = make_engine(seed, 0xe6c);
    bool ok = true;
    for (int t = 0; t < 1000 && ok; ++t) {
        std::vector<std::uint8_t> info(code.info_length());
        for (auto& b : info) b = static_cast<std::uint8_t>(rng() & 1);
        ok = code.syndrome_ok(code.encode(info));
    }
    return {"encoder_soundness", ok, "H * encode(info) = 0 for 1000 random words"};
}

CheckResult check_decoder_soundness(std::uint64_t seed) {
    const LiftedCode code(build_ar4ja(1), 32, seed);
    const BpDecoder decoder(code);
    auto rng = make_engine(seed, 0xdec);
    // single-link operating point well above the code's waterfall
    const NoiseModel noise = NoiseModel::from_db(code_rate(code.base()).value(), 8.0);
    const NakagamiParams fading{2.0, 1.0};
    std::vector<std::uint8_t> mask(code.block_length());
    for (int v = 0; v < code.block_length(); ++v) mask[v] = code.transmitted(v);
    bool ok = true;
    int decoded = 0;
    const int trials = 300;
    for (int t = 0; t < trials && ok; ++t) {
        std::vector<std::uint8_t> info(code.info_length());
        for (auto& b : info) b = static_cast<std::uint8_t>(rng() & 1);
        const auto word = code.encode(info);
        std::vector<double> x(code.block_length()), h(x.size()), r(x.size()), llr(x.size());
        for (std::size_t v = 0; v < x.size(); ++v) x[v] = word[v] ? -1.0 : 1.0;
        transmit_link(x, mask, 1.0, fading, std::sqrt(noise.sigma2), rng, rng, h, r);
        single_link_llr(r, h, noise.sigma2, llr);
        const DecodeResult res = decoder.decode(llr, 50);
        if (res.syndrome_ok) {
            ++decoded;
            ok = code.syndrome_ok(res.hard); // independent recheck
        }
    }
    return {"decoder_soundness", ok && decoded > 0,
            fmt("syndrome_ok consistent with H*c=0 (%g of %g decoded)", double(decoded), double(trials))};
}

CheckResult check_pexit_monotonicity(std::uint64_t seed) {
    const BaseMatrix base = build_ar3a(0);
    const auto ens = VarianceEnsemble::mrc_destination(base, 2.0, RelayGeometry{0.4}, 2000, seed);
    PexitOptions opt;
    opt.t_max = 200;
    opt.early_stop = false;
    opt.stall_detect = false;
    const PexitResult run = run_modified_pexit(base, ens, -1.0, opt);
    bool ok = true;
    for (std::size_t t = 1; t < run.min_app_trace.size(); ++t)
        if (run.min_app_trace[t] < run.min_app_trace[t - 1] - 1e-9) ok = false;
    return {"pexit_monotonicity", ok, "min app MI non-decreasing over iterations"};
}

CheckResult check_sim_determinism(std::uint64_t seed) {
    SimConfig cfg;
    cfg.family = CodeFamily::ar3a;
    cfg.extension = 0;
    cfg.z = 16;
    cfg.m = 2.0;
    cfg.protocol = Protocol::df;
    cfg.ebn0_db = {2.0};
    cfg.max_iter = 30;
    cfg.min_error_blocks = 20;
    cfg.max_blocks = 512;
    cfg.seed = seed;
    cfg.workers = 1;
    const SimBerPoint a = RelaySimulator(cfg).simulate_point(2.0);
    cfg.workers = 3;
    const SimBerPoint b = RelaySimulator(cfg).simulate_point(2.0);
    const bool ok = a.bit_errors == b.bit_errors && a.block_errors == b.block_errors &&
                    a.blocks == b.blocks && a.relay_silent == b.relay_silent;
    return {"sim_determinism", ok, "1-worker and 3-worker tallies identical"};
}

struct SpotCase {
    CodeFamily family;
    int n;
    double m;
    double expected_db;
};

} // namespace

std::vector<CheckResult> run_validation_suite(const ValidationOptions& options) {
    std::vector<CheckResult> out;
    out.push_back(check_j_round_trip());
    out.push_back(check_j_monotone());
    out.push_back(check_nakagami_moments(options.seed));
    out.push_back(check_rayleigh_equivalence(options.seed));
    out.push_back(check_llr_consistency(options.seed));
    out.push_back(check_geometry_scaling(options.seed));
    out.push_back(check_encoder_soundness(options.seed));
    out.push_back(check_decoder_soundness(options.seed));
    out.push_back(check_pexit_monotonicity(options.seed));
    out.push_back(check_sim_determinism(options.seed));

    if (options.include_table1) {
        const SpotCase cases[] = {
            {CodeFamily::ar3a, 0, 1.0, -1.345},
            {CodeFamily::ar3a, 3, 2.0, 0.575},
            {CodeFamily::ar4ja, 3, 2.0, 0.722},
            {CodeFamily::ar4ja, 0, 4.0, -1.895},
        };
        std::vector<CheckResult> spot(std::size(cases));
        auto run_case = [&](std::size_t idx) {
            const SpotCase& c = cases[idx];
            ThresholdOptions topt;
            topt.q = options.table1_q;
            topt.seed = derive_seed(options.seed, 0x7ab1e, idx);
            const ThresholdResult r = threshold_search(build_family(c.family, c.n), c.m, topt);
            const double err = r.threshold_db - c.expected_db;
            char name[64];
            std::snprintf(name, sizeof(name), "threshold_%s_n%d_m%g", family_name(c.family).c_str(),
                          c.n, c.m);
            spot[idx] = {name, std::abs(err) <= options.table1_tol_db,
                         fmt("%.3f dB (reference %.3f, tol %.2f)", r.threshold_db, c.expected_db,
                             options.table1_tol_db)};
        };
        if (options.workers > 1) {
            std::vector<std::thread> pool;
            for (std::size_t i = 0; i < std::size(cases); ++i) pool.emplace_back(run_case, i);
            for (auto& th : pool) th.join();
        } else {
            for (std::size_t i = 0; i < std::size(cases); ++i) run_case(i);
        }
        for (auto& s : spot) out.push_back(std::move(s));
    }
    return out;
}

} // namespace pldpc
