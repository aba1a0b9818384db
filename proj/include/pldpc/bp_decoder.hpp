#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pldpc/lifted_code.hpp"

namespace pldpc {

struct DecodeResult {
    std::vector<std::uint8_t> hard; // length N*Z, 1 = bit decided as one
    std::vector<double> posterior;  // per-bit a-posteriori LLRs
    int iterations = 0;
    bool syndrome_ok = false;
};

// Flooding-schedule sum-product decoder with the exact tanh check rule.
// Punctured positions are fed as channel LLR 0 by the caller. The decoder is
// immutable after construction; concurrent decode() calls on the same object
// are safe (per-call workspaces).
class BpDecoder {
  public:
    // Messages entering the tanh rule are clamped to this magnitude, which
    // bounds every internal quantity and keeps atanh finite.
    static constexpr double kLlrClamp = 30.0;

    explicit BpDecoder(const LiftedCode& code);

    // Throws on non-finite inputs, length mismatch, or max_iter < 1.
    DecodeResult decode(std::span<const double> channel_llr, int max_iter) const;

  private:
    const LiftedCode* code_;
    int max_check_degree_ = 0;
};

} // namespace pldpc
