#include "pldpc/sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "pldpc/rng.hpp"

namespace pldpc {

namespace {

constexpr long kBatchBlocks = 128; // stop rule is evaluated on whole batches

// substream purpose tags
enum : std::uint64_t {
    kStreamInfo = 1,
    kStreamFadingSr,
    kStreamNoiseSr,
    kStreamFadingSd,
    kStreamNoiseSd,
    kStreamFadingRd,
    kStreamNoiseRd,
};

std::uint64_t block_key(std::uint64_t seed, double ebn0_db, long block) {
    // fold the operating point in so sweep points use disjoint streams
    std::uint64_t db_bits;
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&db_bits, &ebn0_db, sizeof(db_bits));
    return derive_seed(seed, db_bits, static_cast<std::uint64_t>(block));
}

} // namespace

void SimConfig::validate() const {
    if (ebn0_db.empty()) throw std::invalid_argument("sim config: empty Eb/N0 sweep");
    if (z < 1) throw std::invalid_argument("sim config: Z must be >= 1");
    if (max_iter < 1) throw std::invalid_argument("sim config: max_iter must be >= 1");
    if (min_error_blocks < 1) throw std::invalid_argument("sim config: min_error_blocks must be >= 1");
    if (max_blocks < 1) throw std::invalid_argument("sim config: max_blocks must be >= 1");
    if (workers < 1) throw std::invalid_argument("sim config: workers must be >= 1");
    if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("sim config: d must lie in (0, 1)");
    if (!(m >= 0.5)) throw std::invalid_argument("sim config: m must be >= 0.5");
    if (sr_noise_scale < 0.0) throw std::invalid_argument("sim config: sr_noise_scale must be >= 0");
}

RelaySimulator::RelaySimulator(const SimConfig& config) : config_(config) {
    config_.validate();
    const BaseMatrix base = build_family(config.family, config.extension);
    code_ = std::make_unique<LiftedCode>(base, config.z, derive_seed(config.seed, 0xc0de));
    decoder_ = std::make_unique<BpDecoder>(*code_);
    transmit_mask_.resize(code_->block_length());
    for (int v = 0; v < code_->block_length(); ++v)
        transmit_mask_[v] = code_->transmitted(v) ? 1 : 0;
}

RelaySimulator::BlockTally RelaySimulator::simulate_block(long block_index,
                                                          const NoiseModel& noise) const {
    const LiftedCode& code = *code_;
    const int n = code.block_length();
    const int k = code.info_length();
    const double sigma_n = std::sqrt(noise.sigma2);
    const std::uint64_t base_key =
        block_key(config_.seed, noise.ebn0_linear, block_index);
    auto stream = [&](std::uint64_t purpose) { return make_engine(base_key, purpose); };

    // source word
    auto info_rng = stream(kStreamInfo);
    std::vector<std::uint8_t> info(k);
    for (auto& b : info) b = static_cast<std::uint8_t>(info_rng() & 1);
    const std::vector<std::uint8_t> word = code.encode(info);
    std::vector<double> x(n);
    for (int v = 0; v < n; ++v) x[v] = word[v] ? -1.0 : 1.0;

    const NakagamiParams fading{config_.m, 1.0};
    const RelayGeometry geometry{config_.d};

    std::vector<double> h(n), r(n), llr(n);

    BlockTally tally;
    bool relay_transmits = true;
    std::vector<double> x_hat;

    if (config_.protocol == Protocol::df) {
        auto f_sr = stream(kStreamFadingSr);
        auto n_sr = stream(kStreamNoiseSr);
        transmit_link(x, transmit_mask_, geometry.sr_amp(), fading,
                      sigma_n * config_.sr_noise_scale, f_sr, n_sr, h, r);
        single_link_llr(r, h, noise.sigma2, llr);
        const DecodeResult relay = decoder_->decode(llr, config_.max_iter);
        relay_transmits = relay.syndrome_ok;
        if (relay.syndrome_ok) {
            if (relay.hard != word) tally.relay_undetected = 1;
            x_hat.resize(n);
            for (int v = 0; v < n; ++v) x_hat[v] = relay.hard[v] ? -1.0 : 1.0;
        } else {
            tally.relay_silent = 1;
        }
    } else {
        x_hat = x; // error-free relaying
    }

    // slot 1: S -> D
    std::vector<double> h_sd(n), r_d1(n);
    auto f_sd = stream(kStreamFadingSd);
    auto n_sd = stream(kStreamNoiseSd);
    transmit_link(x, transmit_mask_, geometry.sd_amp(), fading, sigma_n, f_sd, n_sd, h_sd, r_d1);

    if (relay_transmits) {
        // slot 2: R -> D, then MRC
        auto f_rd = stream(kStreamFadingRd);
        auto n_rd = stream(kStreamNoiseRd);
        transmit_link(x_hat, transmit_mask_, geometry.rd_amp(), fading, sigma_n, f_rd, n_rd, h, r);
        mrc_llr(r_d1, r, h_sd, h, noise.sigma2, llr);
    } else {
        single_link_llr(r_d1, h_sd, noise.sigma2, llr);
    }

    const DecodeResult dest = decoder_->decode(llr, config_.max_iter);
    for (int i = 0; i < k; ++i) {
        const int pos = code.info_positions()[i];
        if (dest.hard[pos] != word[pos]) ++tally.bit_errors;
    }
    tally.block_error = tally.bit_errors > 0 ? 1 : 0;
    return tally;
}

SimBerPoint RelaySimulator::simulate_point(double ebn0_db) const {
    const auto t0 = std::chrono::steady_clock::now();
    const NoiseModel noise = NoiseModel::from_db(code_rate(code_->base()).value(), ebn0_db);

    SimBerPoint point;
    point.ebn0_db = ebn0_db;

    long next_block = 0;
    while (point.block_errors < config_.min_error_blocks && next_block < config_.max_blocks) {
        const long begin = next_block;
        const long end = std::min(begin + kBatchBlocks, config_.max_blocks);
        const int workers = std::max(1, config_.workers);
        std::vector<BlockTally> merged(static_cast<std::size_t>(end - begin));
        auto run_stride = [&](int w) {
            for (long b = begin + w; b < end; b += workers)
                merged[static_cast<std::size_t>(b - begin)] = simulate_block(b, noise);
        };
        if (workers == 1) {
            run_stride(0);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (int w = 0; w < workers; ++w) pool.emplace_back(run_stride, w);
            for (auto& th : pool) th.join();
        }
        for (const BlockTally& t : merged) {
            point.bit_errors += t.bit_errors;
            point.block_errors += t.block_error;
            point.relay_silent += t.relay_silent;
            point.relay_undetected += t.relay_undetected;
        }
        next_block = end;
    }
    point.blocks = next_block;
    point.info_bits = static_cast<long long>(next_block) * code_->info_length();
    point.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return point;
}

std::vector<SimBerPoint> RelaySimulator::run() const {
    std::vector<SimBerPoint> points;
    points.reserve(config_.ebn0_db.size());
    for (double db : config_.ebn0_db) points.push_back(simulate_point(db));
    return points;
}

void write_sim_csv(std::ostream& out, const SimConfig& config, const LiftedCode& code,
                   const std::vector<SimBerPoint>& points) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "# seed=%llu code_hash=%016llx four_cycles=%llu\n"
                  "# config: protocol=%s family=%s n=%d z=%d m=%g d=%g max_iter=%d "
                  "min_error_blocks=%ld max_blocks=%ld workers=%d\n",
                  static_cast<unsigned long long>(config.seed),
                  static_cast<unsigned long long>(code.structure_hash()),
                  static_cast<unsigned long long>(code.count_4cycles()),
                  protocol_name(config.protocol).c_str(), family_name(config.family).c_str(),
                  config.extension, config.z, config.m, config.d, config.max_iter,
                  config.min_error_blocks, config.max_blocks, config.workers);
    out << buf;
    out << "protocol,family,n,z,m,d,ebn0_db,info_bits,bit_errors,blocks,block_errors,ber,bler,"
           "relay_silent,relay_fail_rate,relay_undetected\n";
    for (const SimBerPoint& p : points) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%d,%d,%g,%g,%.4f,%lld,%lld,%lld,%lld,%.8e,%.8e,%lld,%.8e,%lld\n",
                      protocol_name(config.protocol).c_str(), family_name(config.family).c_str(),
                      config.extension, config.z, config.m, config.d, p.ebn0_db, p.info_bits,
                      p.bit_errors, p.blocks, p.block_errors, p.ber(), p.bler(), p.relay_silent,
                      p.relay_fail_rate(), p.relay_undetected);
        out << buf;
    }
}

} // namespace pldpc
