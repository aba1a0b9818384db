#pragma once

#include <vector>

namespace pldpc {

// Mutual information between a BPSK bit and its LLR when the LLR is symmetric
// Gaussian with variance sigma^2 (mean sigma^2/2). Evaluated by composite
// Simpson quadrature; absolute error is far below 1e-6 over the whole range.
// Throws on sigma < 0.
double j_fun(double sigma);

// Piecewise curve-fit inverse (branch split at I = 0.3646). Valid for
// 0 <= mi < 1; throws otherwise. Approximate: the j_fun round trip is
// accurate to about 1e-2 in mutual information.
double j_inv(double mi);

// j_inv with the input clamped into [0, 1 - 1e-12]; used inside density
// evolution where averaged MI values can saturate.
double j_inv_clamped(double mi);

// Dense cubic-interpolation table over j_fun for the density-evolution inner
// loops. Matches j_fun to better than 1e-7 absolute; returns exactly 1 past
// the tabulated range (where 1 - J < 1e-16).
class JTable {
  public:
    static const JTable& instance();
    double from_sigma(double sigma) const;
    double from_variance(double var) const { return from_sigma(var <= 0.0 ? 0.0 : sqrt_(var)); }

  private:
    JTable();
    static double sqrt_(double v);
    double inv_step_;
    double sigma_max_;
    std::vector<double> values_;
};

} // namespace pldpc
