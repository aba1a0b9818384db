#include "pldpc/bp_decoder.hpp"

#include <cmath>
#include <stdexcept>

namespace pldpc {

namespace {
constexpr double kTanhCap = 1.0 - 1e-15; // keeps atanh finite
}

BpDecoder::BpDecoder(const LiftedCode& code) : code_(&code) {
    for (int r = 0; r < code.check_count(); ++r)
        max_check_degree_ = std::max(max_check_degree_, code.check_degree(r));
}

DecodeResult BpDecoder::decode(std::span<const double> channel_llr, int max_iter) const {
    const LiftedCode& code = *code_;
    const int n = code.block_length();
    const int checks = code.check_count();
    const int edges = code.edge_count();
    if (static_cast<int>(channel_llr.size()) != n)
        throw std::invalid_argument("bp_decode: LLR length mismatch");
    if (max_iter < 1) throw std::invalid_argument("bp_decode: max_iter must be >= 1");
    for (double l : channel_llr)
        if (!std::isfinite(l)) throw std::invalid_argument("bp_decode: non-finite channel LLR");

    auto clamp = [](double v) { return v > kLlrClamp ? kLlrClamp : (v < -kLlrClamp ? -kLlrClamp : v); };

    std::vector<double> v2c(edges), c2v(edges);
    std::vector<double> th(max_check_degree_), fwd(max_check_degree_ + 1);
    DecodeResult res;
    res.hard.assign(n, 0);
    res.posterior.assign(n, 0.0);

    for (int v = 0; v < n; ++v) {
        const double l = clamp(channel_llr[v]);
        for (int e : code.var_edges(v)) v2c[e] = l;
    }

    for (int it = 1; it <= max_iter; ++it) {
        // check-node pass: tanh product with per-edge exclusion via
        // forward/backward partial products
        for (int r = 0; r < checks; ++r) {
            const int deg = code.check_degree(r);
            const int base = code.check_edge_offset(r);
            fwd[0] = 1.0;
            for (int k = 0; k < deg; ++k) {
                th[k] = std::tanh(0.5 * v2c[base + k]);
                fwd[k + 1] = fwd[k] * th[k];
            }
            double back = 1.0;
            for (int k = deg - 1; k >= 0; --k) {
                double ex = fwd[k] * back;
                if (ex > kTanhCap) ex = kTanhCap;
                if (ex < -kTanhCap) ex = -kTanhCap;
                c2v[base + k] = 2.0 * std::atanh(ex);
                back *= th[k];
            }
        }
        // variable-node pass
        for (int v = 0; v < n; ++v) {
            double total = channel_llr[v];
            const auto ve = code.var_edges(v);
            for (int e : ve) total += c2v[e];
            res.posterior[v] = total;
            res.hard[v] = total < 0.0 ? 1 : 0;
            for (int e : ve) v2c[e] = clamp(total - c2v[e]);
        }
        res.iterations = it;
        // syndrome / early stop
        bool ok = true;
        for (int r = 0; r < checks && ok; ++r) {
            int parity = 0;
            for (int c : code.check_cols(r)) parity ^= res.hard[c];
            ok = (parity == 0);
        }
        if (ok) {
            res.syndrome_ok = true;
            break;
        }
    }
    return res;
}

} // namespace pldpc
