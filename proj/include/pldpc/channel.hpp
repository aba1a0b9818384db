#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace pldpc {

enum class Protocol { ef, df };

std::string protocol_name(Protocol p);
Protocol protocol_from_name(const std::string& name);

// Nakagami amplitude distribution with E[alpha^2] = omega (fixed to 1 here).
struct NakagamiParams {
    double m = 1.0;
    double omega = 1.0;
    void validate() const; // m >= 0.5, omega = 1
};

// Collinear source-relay-destination layout. S-D distance is normalized to 1,
// the relay sits at distance d from the source.
struct RelayGeometry {
    double d = 0.4;
    void validate() const; // 0 < d < 1
    double sd_amp() const { return 1.0; }
    double sr_amp() const { return 1.0 / d; }
    double rd_amp() const { return 1.0 / (1.0 - d); }
    double sr_gain() const { return 1.0 / (d * d); }
    double rd_gain() const { return 1.0 / ((1.0 - d) * (1.0 - d)); }
};

// Per-dimension AWGN variance tied to Eb/N0 through the code rate. Each coded
// bit is sent twice (broadcast + cooperative slot), so the per-slot symbol
// energy stays fixed and sigma_n^2 = 1 / (R * Eb/N0).
struct NoiseModel {
    double rate = 0.5;
    double ebn0_linear = 1.0;
    double sigma2 = 2.0;
    static NoiseModel from_db(double rate, double ebn0_db);
    static NoiseModel from_linear(double rate, double ebn0_linear);
};

double ebn0_db_to_linear(double db);
double ebn0_linear_to_db(double linear);

// Exact Nakagami sampling: alpha = sqrt(G), G ~ Gamma(m, omega/m).
double sample_nakagami(const NakagamiParams& params, std::mt19937_64& rng);
// Squared amplitude (channel gain) drawn directly.
double sample_nakagami_gain(const NakagamiParams& params, std::mt19937_64& rng);

// One fading + AWGN link over a block of BPSK symbols. Positions with
// mask = 0 are not transmitted: their h and r outputs are set to 0 so a
// downstream LLR is exactly 0. Fading and noise use separate streams so a
// genie test can zero the noise without disturbing the fading sequence.
void transmit_link(std::span<const double> x, std::span<const std::uint8_t> mask, double amp_scale,
                   const NakagamiParams& params, double sigma_n, std::mt19937_64& fading_rng,
                   std::mt19937_64& noise_rng, std::span<double> h_out, std::span<double> r_out);

// Received triples of the two-slot relay protocol (r_R1, r_D1, r_D2), with
// the fading coefficients used. x is the source word, x_hat what the relay
// sends.
struct ReceivedSignals {
    std::vector<double> r_r1, r_d1, r_d2;
    std::vector<double> h_sr, h_sd, h_rd;
};

struct LinkRngs {
    std::mt19937_64 fading_sr, noise_sr;
    std::mt19937_64 fading_sd, noise_sd;
    std::mt19937_64 fading_rd, noise_rd;
};

ReceivedSignals transmit_links(std::span<const double> x_hat, std::span<const double> x,
                               std::span<const std::uint8_t> mask, const RelayGeometry& geometry,
                               const NakagamiParams& params, const NoiseModel& noise,
                               LinkRngs& rngs);

// Destination LLR after maximum ratio combining of the two slots. Passing
// h_rd = 0 (relay silent or no second copy) reduces to the single-link form.
void mrc_llr(std::span<const double> r_d1, std::span<const double> r_d2,
             std::span<const double> h_sd, std::span<const double> h_rd, double sigma2,
             std::span<double> llr_out);

void single_link_llr(std::span<const double> r, std::span<const double> h, double sigma2,
                     std::span<double> llr_out);

// Conditional channel-LLR variance 4 * R * P * lambda * Eb/N0 for a fixed
// fading realization; lambda is gamma_sd + gamma_rd for the combined
// destination input or the single link gain otherwise.
double channel_llr_variance(double lambda, double rate, double ebn0_linear, bool transmitted);

} // namespace pldpc
