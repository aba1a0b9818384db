#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "pldpc/base_matrix.hpp"
#include "pldpc/channel.hpp"

namespace pldpc {

// Per-node channel-LLR variance factors over Q fading realizations. The
// stored value is P_j * lambda_{q,j}; the variance at a given operating point
// is 4 * R * Eb/N0 times that, so one draw serves a whole bisection.
class VarianceEnsemble {
  public:
    // MRC destination input: lambda = gamma_sd + gamma_rd.
    static VarianceEnsemble mrc_destination(const BaseMatrix& base, double m,
                                            const RelayGeometry& geometry, int q,
                                            std::uint64_t seed);
    // Single fading link with squared amplitude scaling gain_scale
    // (1 for S-D, 1/d^2 for S-R, ...).
    static VarianceEnsemble single_link(const BaseMatrix& base, double m, double gain_scale,
                                        int q, std::uint64_t seed);

    int realizations() const { return q_; }
    int cols() const { return cols_; }
    double rate() const { return rate_; }
    bool column_punctured(int j) const { return punctured_[j]; }
    // contiguous per-column factors, length Q
    std::span<const double> column(int j) const {
        return {unit_.data() + static_cast<std::size_t>(j) * q_, static_cast<std::size_t>(q_)};
    }
    double variance_scale(double ebn0_db) const { return 4.0 * rate_ * ebn0_db_to_linear(ebn0_db); }

  private:
    VarianceEnsemble(const BaseMatrix& base, int q);
    int q_ = 0;
    int cols_ = 0;
    double rate_ = 0.0;
    std::vector<std::uint8_t> punctured_;
    std::vector<double> unit_; // column-major [j][q]
};

struct PexitOptions {
    int t_max = 500;
    bool early_stop = true;              // stop once converged (threshold mode)
    double convergence_mi = 1.0 - 1e-6;  // required min a-posteriori MI, all nodes
    bool stall_detect = true;            // abandon closed tunnels early
    int stall_window = 50;
    double stall_eps = 1e-9;
    bool record_app_trace = false;       // keep per-iteration per-column app MI
};

struct PexitResult {
    bool converged = false;
    int iterations = 0;
    std::vector<double> app_mi;        // final averaged per-column a-posteriori MI
    std::vector<double> min_app_trace; // min_j app MI after each iteration
    std::vector<std::vector<double>> app_trace; // filled when record_app_trace is set
};

// Fading-averaged protograph density evolution: per iteration the
// variable-node and a-posteriori MIs are evaluated for each realization's
// channel variance and averaged over the ensemble before the next
// half-iteration.
PexitResult run_modified_pexit(const BaseMatrix& base, const VarianceEnsemble& ensemble,
                               double ebn0_db, const PexitOptions& options = {});

// Reference single-realization update equations (M x N row-major edge arrays;
// entries for absent edges are ignored). These spell out the recursion the
// optimized loop implements and back the unit tests.
void pexit_vn_update(const BaseMatrix& base, std::span<const double> i_av,
                     std::span<const double> var_ch, std::span<double> i_ev);
void pexit_cn_update(const BaseMatrix& base, std::span<const double> i_ac,
                     std::span<double> i_ec);
void pexit_app_mi(const BaseMatrix& base, std::span<const double> i_av,
                  std::span<const double> var_ch, std::span<double> i_app);

struct ThresholdOptions {
    double tol_db = 0.01;
    int q = 100000;
    int t_max = 500;
    std::uint64_t seed = 1;
    double lo_db = -10.0;
    double hi_db = 10.0;
    RelayGeometry geometry{0.4};
};

struct ThresholdResult {
    CodeFamily family = CodeFamily::custom;
    int extension = 0;
    Rate rate;
    double m = 1.0;
    double d = 0.4;
    double threshold_db = 0.0;
    double tol_db = 0.01;
    int q = 0;
    int t_max = 0;
};

// Bisection between a non-converging and a converging Eb/N0 (EF protocol,
// MRC destination ensemble). Throws when [lo_db, hi_db] does not bracket the
// threshold. Deterministic for a fixed seed.
ThresholdResult threshold_search(const BaseMatrix& base, double m, const ThresholdOptions& options);

void write_threshold_csv_header(std::ostream& out);
void write_threshold_csv_row(std::ostream& out, const ThresholdResult& r);

} // namespace pldpc
