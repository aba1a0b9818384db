#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "pldpc/base_matrix.hpp"
#include "pldpc/bp_decoder.hpp"
#include "pldpc/channel.hpp"
#include "pldpc/lifted_code.hpp"

namespace pldpc {

struct SimConfig {
    CodeFamily family = CodeFamily::ar3a;
    int extension = 3;
    int z = 512;
    double m = 2.0;
    double d = 0.4;
    Protocol protocol = Protocol::ef;
    std::vector<double> ebn0_db;
    int max_iter = 100;
    long min_error_blocks = 100;
    long max_blocks = 1000000;
    std::uint64_t seed = 1;
    int workers = 1;
    double sr_noise_scale = 1.0; // diagnostic: 0 gives the relay a perfect S-R link

    void validate() const; // throws std::invalid_argument
};

struct SimBerPoint {
    double ebn0_db = 0.0;
    long long info_bits = 0;
    long long bit_errors = 0;
    long long blocks = 0;
    long long block_errors = 0;
    long long relay_silent = 0;     // DF: blocks where the relay failed and kept quiet
    long long relay_undetected = 0; // DF: relay syndrome passed but the word was wrong
    double seconds = 0.0;           // wall clock, diagnostics only (never in CSV)

    double ber() const { return info_bits ? double(bit_errors) / double(info_bits) : 0.0; }
    double bler() const { return blocks ? double(block_errors) / double(blocks) : 0.0; }
    double relay_fail_rate() const { return blocks ? double(relay_silent) / double(blocks) : 0.0; }
};

// End-to-end coded relay simulation. Blocks are simulated on worker threads
// in fixed batches; each block derives every random stream from
// (seed, block index, purpose), so results are independent of the worker
// count and identical across reruns.
class RelaySimulator {
  public:
    explicit RelaySimulator(const SimConfig& config);

    const SimConfig& config() const { return config_; }
    const LiftedCode& code() const { return *code_; }

    SimBerPoint simulate_point(double ebn0_db) const;
    std::vector<SimBerPoint> run() const; // whole sweep

  private:
    struct BlockTally {
        long long bit_errors = 0;
        int block_error = 0;
        int relay_silent = 0;
        int relay_undetected = 0;
    };
    BlockTally simulate_block(long block_index, const NoiseModel& noise) const;

    SimConfig config_;
    std::unique_ptr<LiftedCode> code_;
    std::unique_ptr<BpDecoder> decoder_;
    std::vector<std::uint8_t> transmit_mask_;
};

// CSV with a deterministic reproducibility header (seed, code hash, config).
void write_sim_csv(std::ostream& out, const SimConfig& config, const LiftedCode& code,
                   const std::vector<SimBerPoint>& points);

} // namespace pldpc
