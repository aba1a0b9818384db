#include "pldpc/j_function.hpp"

#include <cmath>
#include <stdexcept>

namespace pldpc {

namespace {

// log2(1 + exp(-x)), stable for large |x|
double log2_1p_exp_neg(double x) {
    constexpr double inv_ln2 = 1.4426950408889634;
    if (x >= 36.0) return std::exp(-x) * inv_ln2;
    if (x <= -36.0) return -x * inv_ln2;
    if (x >= 0.0) return std::log1p(std::exp(-x)) * inv_ln2;
    return (-x + std::log1p(std::exp(x))) * inv_ln2;
}

} // namespace

double j_fun(double sigma) {
    if (!(sigma >= 0.0)) throw std::domain_error("j_fun: sigma must be >= 0");
    if (sigma == 0.0) return 0.0;
    // leading term of the expansion around 0; below this the quadrature range
    // degenerates numerically
    if (sigma < 1e-6) return sigma * sigma / (8.0 * M_LN2);
    const double mu = sigma * sigma / 2.0;
    const double lo = mu - 13.0 * sigma;
    const double hi = mu + 13.0 * sigma;
    const int n = 8192; // even
    const double h = (hi - lo) / n;
    const double inv_norm = 1.0 / (std::sqrt(2.0 * M_PI) * sigma);
    auto f = [&](double xi) {
        const double t = (xi - mu) / sigma;
        return std::exp(-0.5 * t * t) * inv_norm * log2_1p_exp_neg(xi);
    };
    double sum = f(lo) + f(hi);
    for (int k = 1; k < n; ++k) sum += f(lo + k * h) * (k % 2 ? 4.0 : 2.0);
    const double integral = sum * h / 3.0;
    const double j = 1.0 - integral;
    return j < 0.0 ? 0.0 : (j > 1.0 ? 1.0 : j);
}

double j_inv(double mi) {
    if (!(mi >= 0.0)) throw std::domain_error("j_inv: mi must be >= 0");
    if (mi >= 1.0) throw std::domain_error("j_inv: mi must be < 1 (sigma unbounded)");
    if (mi <= 0.3646)
        return 1.09542 * mi * mi + 0.214217 * mi + 2.33737 * std::sqrt(mi);
    return -0.706692 * std::log(0.386013 * (1.0 - mi)) + 1.75017 * mi;
}

double j_inv_clamped(double mi) {
    if (mi < 0.0) mi = 0.0;
    const double hi = 1.0 - 1e-12;
    if (mi > hi) mi = hi;
    return j_inv(mi);
}

JTable::JTable() {
    sigma_max_ = 18.0;
    const int points = 9001; // step 0.002
    inv_step_ = (points - 1) / sigma_max_;
    values_.resize(points);
    for (int k = 0; k < points; ++k) values_[k] = j_fun(k / inv_step_);
}

const JTable& JTable::instance() {
    static const JTable table;
    return table;
}

double JTable::sqrt_(double v) { return std::sqrt(v); }

double JTable::from_sigma(double sigma) const {
    if (sigma >= sigma_max_) return 1.0;
    if (sigma <= 0.0) return 0.0;
    const double x = sigma * inv_step_;
    int i = static_cast<int>(x);
    // centered 4-point cubic Lagrange
    int i0 = i - 1;
    if (i0 < 0) i0 = 0;
    if (i0 > static_cast<int>(values_.size()) - 4) i0 = static_cast<int>(values_.size()) - 4;
    const double t = x - i0;
    const double f0 = values_[i0], f1 = values_[i0 + 1], f2 = values_[i0 + 2], f3 = values_[i0 + 3];
    const double c0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double c1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double c2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double c3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    double j = c0 * f0 + c1 * f1 + c2 * f2 + c3 * f3;
    if (j < 0.0) j = 0.0;
    if (j > 1.0) j = 1.0;
    return j;
}

} // namespace pldpc
