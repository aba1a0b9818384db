#include "pldpc/pexit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "pldpc/j_function.hpp"
#include "pldpc/rng.hpp"

namespace pldpc {

VarianceEnsemble::VarianceEnsemble(const BaseMatrix& base, int q) : q_(q), cols_(base.cols) {
    if (q < 1) throw std::invalid_argument("variance ensemble: Q must be >= 1");
    base.validate();
    rate_ = code_rate(base).value();
    punctured_ = base.punctured;
    unit_.assign(static_cast<std::size_t>(cols_) * q_, 0.0);
}

VarianceEnsemble VarianceEnsemble::mrc_destination(const BaseMatrix& base, double m,
                                                   const RelayGeometry& geometry, int q,
                                                   std::uint64_t seed) {
    geometry.validate();
    VarianceEnsemble ve(base, q);
    NakagamiParams params{m, 1.0};
    params.validate();
    const double rd_gain = geometry.rd_gain();
    auto rng = make_engine(seed, 0xd357);
    for (int j = 0; j < ve.cols_; ++j) {
        if (ve.punctured_[j]) continue;
        double* col = ve.unit_.data() + static_cast<std::size_t>(j) * q;
        for (int k = 0; k < q; ++k) {
            const double g_sd = sample_nakagami_gain(params, rng);
            const double g_rd = rd_gain * sample_nakagami_gain(params, rng);
            col[k] = g_sd + g_rd;
        }
    }
    return ve;
}

VarianceEnsemble VarianceEnsemble::single_link(const BaseMatrix& base, double m, double gain_scale,
                                               int q, std::uint64_t seed) {
    VarianceEnsemble ve(base, q);
    NakagamiParams params{m, 1.0};
    params.validate();
    auto rng = make_engine(seed, 0x51e9);
    for (int j = 0; j < ve.cols_; ++j) {
        if (ve.punctured_[j]) continue;
        double* col = ve.unit_.data() + static_cast<std::size_t>(j) * q;
        for (int k = 0; k < q; ++k) col[k] = gain_scale * sample_nakagami_gain(params, rng);
    }
    return ve;
}

namespace {

// mean over q of J(sqrt(offset + scale * unit[q])), chunked for a fixed
// summation order
double fading_average(const JTable& jt, std::span<const double> unit, double scale, double offset) {
    constexpr std::size_t kChunk = 1024;
    double total = 0.0;
    std::size_t pos = 0;
    while (pos < unit.size()) {
        const std::size_t end = std::min(pos + kChunk, unit.size());
        double part = 0.0;
        for (std::size_t k = pos; k < end; ++k) part += jt.from_variance(offset + scale * unit[k]);
        total += part;
        pos = end;
    }
    return total / static_cast<double>(unit.size());
}

struct EdgeRef {
    int row;
    int col;
    int mult;
};

} // namespace

PexitResult run_modified_pexit(const BaseMatrix& base, const VarianceEnsemble& ensemble,
                               double ebn0_db, const PexitOptions& options) {
    base.validate();
    if (base.cols != ensemble.cols())
        throw std::invalid_argument("run_modified_pexit: ensemble column mismatch");
    if (options.t_max < 1) throw std::invalid_argument("run_modified_pexit: t_max must be >= 1");
    const JTable& jt = JTable::instance();

    const int m_rows = base.rows, n_cols = base.cols;
    std::vector<EdgeRef> edges;
    std::vector<std::vector<int>> col_edges(n_cols), row_edges(m_rows);
    for (int i = 0; i < m_rows; ++i) {
        for (int j = 0; j < n_cols; ++j) {
            if (base.at(i, j) > 0) {
                col_edges[j].push_back(static_cast<int>(edges.size()));
                row_edges[i].push_back(static_cast<int>(edges.size()));
                edges.push_back({i, j, base.at(i, j)});
            }
        }
    }
    const int n_edges = static_cast<int>(edges.size());
    const double scale = ensemble.variance_scale(ebn0_db);

    std::vector<double> i_av(n_edges, 0.0), i_ev(n_edges, 0.0);
    std::vector<double> sig2(n_edges, 0.0); // squared j_inv of the incoming MI per edge

    PexitResult res;
    res.app_mi.assign(n_cols, 0.0);
    res.min_app_trace.reserve(options.t_max);

    for (int t = 1; t <= options.t_max; ++t) {
        // variable-node half-iteration, averaged over the fading ensemble
        for (int e = 0; e < n_edges; ++e) {
            const double s = j_inv_clamped(i_av[e]);
            sig2[e] = s * s;
        }
        for (int j = 0; j < n_cols; ++j) {
            double col_sum = 0.0;
            for (int e : col_edges[j]) col_sum += edges[e].mult * sig2[e];
            const auto unit = ensemble.column(j);
            for (int e : col_edges[j]) {
                const double excl = col_sum - sig2[e];
                if (ensemble.column_punctured(j)) {
                    i_ev[e] = jt.from_variance(excl);
                } else {
                    i_ev[e] = fading_average(jt, unit, scale, excl);
                }
            }
        }
        // check-node half-iteration (no channel term, realization independent)
        for (int e = 0; e < n_edges; ++e) {
            const double s = j_inv_clamped(1.0 - i_ev[e]);
            sig2[e] = s * s;
        }
        for (int i = 0; i < m_rows; ++i) {
            double row_sum = 0.0;
            for (int e : row_edges[i]) row_sum += edges[e].mult * sig2[e];
            for (int e : row_edges[i]) {
                double v = 1.0 - jt.from_variance(row_sum - sig2[e]);
                i_av[e] = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); // next a-priori input
            }
        }
        // a-posteriori MI with the fresh check outputs
        double min_app = 1.0;
        for (int e = 0; e < n_edges; ++e) {
            const double s = j_inv_clamped(i_av[e]);
            sig2[e] = s * s;
        }
        for (int j = 0; j < n_cols; ++j) {
            double col_sum = 0.0;
            for (int e : col_edges[j]) col_sum += edges[e].mult * sig2[e];
            double app;
            if (ensemble.column_punctured(j)) {
                app = jt.from_variance(col_sum);
            } else {
                app = fading_average(jt, ensemble.column(j), scale, col_sum);
            }
            res.app_mi[j] = app;
            min_app = std::min(min_app, app);
        }
        res.min_app_trace.push_back(min_app);
        if (options.record_app_trace) res.app_trace.push_back(res.app_mi);
        res.iterations = t;
        if (min_app >= options.convergence_mi) {
            res.converged = true;
            if (options.early_stop) break;
        }
        if (!res.converged && options.stall_detect && t > options.stall_window) {
            const double before = res.min_app_trace[t - 1 - options.stall_window];
            if (min_app - before < options.stall_eps) break; // closed tunnel
        }
    }
    return res;
}

namespace {

double checked_mi(double v, const char* what) {
    if (!(v >= 0.0) || !(v <= 1.0)) throw std::invalid_argument(std::string(what) + ": MI outside [0,1]");
    return v;
}

} // namespace

void pexit_vn_update(const BaseMatrix& base, std::span<const double> i_av,
                     std::span<const double> var_ch, std::span<double> i_ev) {
    const std::size_t mn = static_cast<std::size_t>(base.rows) * base.cols;
    if (i_av.size() != mn || i_ev.size() != mn || var_ch.size() != static_cast<std::size_t>(base.cols))
        throw std::invalid_argument("pexit_vn_update: shape mismatch");
    const JTable& jt = JTable::instance();
    for (int j = 0; j < base.cols; ++j) {
        double sum = 0.0;
        for (int s = 0; s < base.rows; ++s) {
            if (base.at(s, j) == 0) continue;
            const double a = j_inv_clamped(checked_mi(i_av[static_cast<std::size_t>(s) * base.cols + j],
                                                      "pexit_vn_update"));
            sum += base.at(s, j) * a * a;
        }
        for (int i = 0; i < base.rows; ++i) {
            if (base.at(i, j) == 0) continue;
            const double a = j_inv_clamped(i_av[static_cast<std::size_t>(i) * base.cols + j]);
            i_ev[static_cast<std::size_t>(i) * base.cols + j] =
                jt.from_variance(sum - a * a + var_ch[j]);
        }
    }
}

void pexit_cn_update(const BaseMatrix& base, std::span<const double> i_ac, std::span<double> i_ec) {
    const std::size_t mn = static_cast<std::size_t>(base.rows) * base.cols;
    if (i_ac.size() != mn || i_ec.size() != mn)
        throw std::invalid_argument("pexit_cn_update: shape mismatch");
    const JTable& jt = JTable::instance();
    for (int i = 0; i < base.rows; ++i) {
        double sum = 0.0;
        for (int s = 0; s < base.cols; ++s) {
            if (base.at(i, s) == 0) continue;
            const double a = j_inv_clamped(1.0 - checked_mi(i_ac[static_cast<std::size_t>(i) * base.cols + s],
                                                            "pexit_cn_update"));
            sum += base.at(i, s) * a * a;
        }
        for (int j = 0; j < base.cols; ++j) {
            if (base.at(i, j) == 0) continue;
            const double a = j_inv_clamped(1.0 - i_ac[static_cast<std::size_t>(i) * base.cols + j]);
            double v = 1.0 - jt.from_variance(sum - a * a);
            i_ec[static_cast<std::size_t>(i) * base.cols + j] = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
        }
    }
}

void pexit_app_mi(const BaseMatrix& base, std::span<const double> i_av,
                  std::span<const double> var_ch, std::span<double> i_app) {
    const std::size_t mn = static_cast<std::size_t>(base.rows) * base.cols;
    if (i_av.size() != mn || var_ch.size() != static_cast<std::size_t>(base.cols) ||
        i_app.size() != static_cast<std::size_t>(base.cols))
        throw std::invalid_argument("pexit_app_mi: shape mismatch");
    const JTable& jt = JTable::instance();
    for (int j = 0; j < base.cols; ++j) {
        double sum = 0.0;
        for (int s = 0; s < base.rows; ++s) {
            if (base.at(s, j) == 0) continue;
            const double a = j_inv_clamped(checked_mi(i_av[static_cast<std::size_t>(s) * base.cols + j],
                                                      "pexit_app_mi"));
            sum += base.at(s, j) * a * a;
        }
        i_app[j] = jt.from_variance(sum + var_ch[j]);
    }
}

ThresholdResult threshold_search(const BaseMatrix& base, double m, const ThresholdOptions& options) {
    if (!(options.tol_db > 0.0)) throw std::invalid_argument("threshold_search: tol_db must be > 0");
    const VarianceEnsemble ensemble =
        VarianceEnsemble::mrc_destination(base, m, options.geometry, options.q, options.seed);
    PexitOptions popt;
    popt.t_max = options.t_max;

    auto converges = [&](double db) { return run_modified_pexit(base, ensemble, db, popt).converged; };

    double lo = options.lo_db, hi = options.hi_db;
    if (converges(lo))
        throw std::runtime_error("threshold_search: already converges at the lower bracket");
    if (!converges(hi))
        throw std::runtime_error("threshold_search: does not converge at the upper bracket");
    while (hi - lo > options.tol_db) {
        const double mid = 0.5 * (lo + hi);
        (converges(mid) ? hi : lo) = mid;
    }

    ThresholdResult res;
    res.family = base.family;
    res.extension = base.extension;
    res.rate = code_rate(base);
    res.m = m;
    res.d = options.geometry.d;
    res.threshold_db = 0.5 * (lo + hi);
    res.tol_db = options.tol_db;
    res.q = options.q;
    res.t_max = options.t_max;
    return res;
}

void write_threshold_csv_header(std::ostream& out) {
    out << "family,n,rate,m,d,threshold_db,tol_db,Q,Tmax\n";
}

void write_threshold_csv_row(std::ostream& out, const ThresholdResult& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%d,%.4f,%g,%g,%.4f,%g,%d,%d\n",
                  family_name(r.family).c_str(), r.extension, r.rate.value(), r.m, r.d,
                  r.threshold_db, r.tol_db, r.q, r.t_max);
    out << buf;
}

} // namespace pldpc
