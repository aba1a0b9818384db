#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pldpc/base_matrix.hpp"
#include "pldpc/channel.hpp"
#include "pldpc/pexit.hpp"

namespace pldpc {

struct TheoreticalBerPoint {
    double ebn0_db = 0.0;
    std::vector<double> node_ber;     // per protograph variable node
    double avg_ber = 0.0;             // mean over all N nodes (punctured included)
    double info_avg_ber = 0.0;        // mean over the systematic-looking nodes only
    int t_used = 0;
    Protocol protocol = Protocol::ef;
    double m = 1.0;
    double d = 0.4;
    std::vector<double> avg_ber_trace; // per-iteration averaged BER
};

struct BerTheoryOptions {
    int t_max = 100;
    int q = 100000;
    std::uint64_t seed = 1;
    RelayGeometry geometry{0.4};
    // multiplies the S-R channel gain; >> 1 makes the relay link error free
    double sr_gain_boost = 1.0;
    bool record_trace = false;
};

// Hard-decision error probability of a node whose averaged a-posteriori MI is
// mi (Gaussian LLR with mean var/2): 0.5 * erfc(Jinv(mi) / (2*sqrt(2))).
double node_ber_from_app_mi(double mi);

// Per-node combination for decode-and-forward: relay wrong and destination
// left with the direct link, or relay right and MRC in effect.
double df_combine(double p_sr, double p_sd, double p_d);

// Fading-averaged recursion run for exactly t_max iterations (no early stop)
// with the MRC destination ensemble, then per-node BER via the Gaussian
// approximation. One ensemble draw is shared across all sweep points.
std::vector<TheoreticalBerPoint> ef_ber_curve(const BaseMatrix& base, double m,
                                              const std::vector<double>& ebn0_db,
                                              const BerTheoryOptions& options = {});

// Same machinery with three ensembles (S-R, S-D, MRC) combined per node.
std::vector<TheoreticalBerPoint> df_ber_curve(const BaseMatrix& base, double m,
                                              const std::vector<double>& ebn0_db,
                                              const BerTheoryOptions& options = {});

// Smallest Eb/N0 (within tol_db) where the averaged theoretical BER drops
// below target; scans upward from lo_db then bisects. Throws if the target
// is not crossed inside [lo_db, hi_db].
double theory_ber_crossing(const BaseMatrix& base, double m, Protocol protocol, double target_ber,
                           double lo_db, double hi_db, double tol_db,
                           const BerTheoryOptions& options = {});

void write_ber_theory_csv_header(std::ostream& out);
void write_ber_theory_csv_row(std::ostream& out, const BaseMatrix& base,
                              const TheoreticalBerPoint& point, int q);

} // namespace pldpc
