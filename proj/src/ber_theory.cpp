#include "pldpc/ber_theory.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "pldpc/j_function.hpp"
#include "pldpc/rng.hpp"

namespace pldpc {

double node_ber_from_app_mi(double mi) {
    if (!(mi >= 0.0) || mi > 1.0) throw std::invalid_argument("node_ber_from_app_mi: MI outside [0,1]");
    if (mi >= 1.0) return 0.0; // perfect-information limit
    return 0.5 * std::erfc(j_inv(mi) / (2.0 * std::sqrt(2.0)));
}

double df_combine(double p_sr, double p_sd, double p_d) {
    return p_sr * p_sd + (1.0 - p_sr) * p_d;
}

namespace {

// which protograph nodes count as "information" for the optional info-only
// average: the transmitted columns minus the trailing parity-sized tail
std::vector<int> info_like_columns(const BaseMatrix& base) {
    std::vector<int> tx;
    for (int j = 0; j < base.cols; ++j)
        if (!base.punctured[j]) tx.push_back(j);
    const int parity = base.rows - base.punctured_count();
    const int keep = static_cast<int>(tx.size()) - std::max(parity, 0);
    tx.resize(std::max(keep, 0));
    return tx;
}

std::vector<double> node_bers(const std::vector<double>& app_mi) {
    std::vector<double> out(app_mi.size());
    for (std::size_t j = 0; j < app_mi.size(); ++j) out[j] = node_ber_from_app_mi(app_mi[j]);
    return out;
}

double mean_all(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double mean_at(const std::vector<double>& v, const std::vector<int>& idx) {
    if (idx.empty()) return 0.0;
    double s = 0.0;
    for (int j : idx) s += v[j];
    return s / static_cast<double>(idx.size());
}

PexitOptions theory_pexit_options(const BerTheoryOptions& options) {
    PexitOptions popt;
    popt.t_max = options.t_max;
    popt.early_stop = false;   // fixed iteration count, matching the simulations
    popt.stall_detect = false;
    popt.record_app_trace = options.record_trace;
    return popt;
}

} // namespace

std::vector<TheoreticalBerPoint> ef_ber_curve(const BaseMatrix& base, double m,
                                              const std::vector<double>& ebn0_db,
                                              const BerTheoryOptions& options) {
    if (ebn0_db.empty()) throw std::invalid_argument("ef_ber_curve: empty Eb/N0 sweep");
    const VarianceEnsemble dest = VarianceEnsemble::mrc_destination(
        base, m, options.geometry, options.q, derive_seed(options.seed, 0xd2e57a));
    const PexitOptions popt = theory_pexit_options(options);
    const std::vector<int> info_cols = info_like_columns(base);

    std::vector<TheoreticalBerPoint> curve;
    curve.reserve(ebn0_db.size());
    for (double db : ebn0_db) {
        const PexitResult run = run_modified_pexit(base, dest, db, popt);
        TheoreticalBerPoint pt;
        pt.ebn0_db = db;
        pt.node_ber = node_bers(run.app_mi);
        pt.avg_ber = mean_all(pt.node_ber);
        pt.info_avg_ber = mean_at(pt.node_ber, info_cols);
        pt.t_used = run.iterations;
        pt.protocol = Protocol::ef;
        pt.m = m;
        pt.d = options.geometry.d;
        if (options.record_trace)
            for (const auto& app : run.app_trace) pt.avg_ber_trace.push_back(mean_all(node_bers(app)));
        curve.push_back(std::move(pt));
    }
    return curve;
}

std::vector<TheoreticalBerPoint> df_ber_curve(const BaseMatrix& base, double m,
                                              const std::vector<double>& ebn0_db,
                                              const BerTheoryOptions& options) {
    if (ebn0_db.empty()) throw std::invalid_argument("df_ber_curve: empty Eb/N0 sweep");
    options.geometry.validate();
    const VarianceEnsemble dest = VarianceEnsemble::mrc_destination(
        base, m, options.geometry, options.q, derive_seed(options.seed, 0xd2e57a));
    const VarianceEnsemble sr = VarianceEnsemble::single_link(
        base, m, options.geometry.sr_gain() * options.sr_gain_boost, options.q,
        derive_seed(options.seed, 0x57e1a9));
    const VarianceEnsemble sd = VarianceEnsemble::single_link(base, m, 1.0, options.q,
                                                              derive_seed(options.seed, 0x5d0a1b));
    const PexitOptions popt = theory_pexit_options(options);
    const std::vector<int> info_cols = info_like_columns(base);

    std::vector<TheoreticalBerPoint> curve;
    curve.reserve(ebn0_db.size());
    for (double db : ebn0_db) {
        const PexitResult run_d = run_modified_pexit(base, dest, db, popt);
        const PexitResult run_sr = run_modified_pexit(base, sr, db, popt);
        const PexitResult run_sd = run_modified_pexit(base, sd, db, popt);
        const std::vector<double> p_d = node_bers(run_d.app_mi);
        const std::vector<double> p_sr = node_bers(run_sr.app_mi);
        const std::vector<double> p_sd = node_bers(run_sd.app_mi);
        TheoreticalBerPoint pt;
        pt.ebn0_db = db;
        pt.node_ber.resize(p_d.size());
        for (std::size_t j = 0; j < p_d.size(); ++j)
            pt.node_ber[j] = df_combine(p_sr[j], p_sd[j], p_d[j]);
        pt.avg_ber = mean_all(pt.node_ber);
        pt.info_avg_ber = mean_at(pt.node_ber, info_cols);
        pt.t_used = options.t_max;
        pt.protocol = Protocol::df;
        pt.m = m;
        pt.d = options.geometry.d;
        if (options.record_trace) {
            for (std::size_t t = 0; t < run_d.app_trace.size(); ++t) {
                const auto d_t = node_bers(run_d.app_trace[t]);
                const auto sr_t = node_bers(run_sr.app_trace[t]);
                const auto sd_t = node_bers(run_sd.app_trace[t]);
                std::vector<double> comb(d_t.size());
                for (std::size_t j = 0; j < d_t.size(); ++j)
                    comb[j] = df_combine(sr_t[j], sd_t[j], d_t[j]);
                pt.avg_ber_trace.push_back(mean_all(comb));
            }
        }
        curve.push_back(std::move(pt));
    }
    return curve;
}

double theory_ber_crossing(const BaseMatrix& base, double m, Protocol protocol, double target_ber,
                           double lo_db, double hi_db, double tol_db,
                           const BerTheoryOptions& options) {
    if (!(target_ber > 0.0) || !(tol_db > 0.0))
        throw std::invalid_argument("theory_ber_crossing: bad target or tolerance");
    auto eval = [&](double db) {
        const std::vector<double> sweep{db};
        const auto curve = (protocol == Protocol::ef) ? ef_ber_curve(base, m, sweep, options)
                                                      : df_ber_curve(base, m, sweep, options);
        return curve.front().avg_ber;
    };
    if (eval(lo_db) < target_ber)
        throw std::runtime_error("theory_ber_crossing: already below target at the lower end");
    if (eval(hi_db) >= target_ber)
        throw std::runtime_error("theory_ber_crossing: target not reached at the upper end");
    double lo = lo_db, hi = hi_db;
    while (hi - lo > tol_db) {
        const double mid = 0.5 * (lo + hi);
        (eval(mid) < target_ber ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

void write_ber_theory_csv_header(std::ostream& out) {
    out << "protocol,family,n,m,d,ebn0_db,ber_theory,tmax,Q,ber_theory_info\n";
}

void write_ber_theory_csv_row(std::ostream& out, const BaseMatrix& base,
                              const TheoreticalBerPoint& point, int q) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%g,%g,%.4f,%.8e,%d,%d,%.8e\n",
                  protocol_name(point.protocol).c_str(), family_name(base.family).c_str(),
                  base.extension, point.m, point.d, point.ebn0_db, point.avg_ber, point.t_used, q,
                  point.info_avg_ber);
    out << buf;
}

} // namespace pldpc
