#include "pldpc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace pldpc {

std::string protocol_name(Protocol p) { return p == Protocol::ef ? "ef" : "df"; }

Protocol protocol_from_name(const std::string& name) {
    if (name == "ef") return Protocol::ef;
    if (name == "df") return Protocol::df;
    throw std::invalid_argument("unknown protocol: " + name);
}

void NakagamiParams::validate() const {
    if (!(m >= 0.5)) throw std::invalid_argument("nakagami: fading depth m must be >= 0.5");
    if (omega != 1.0) throw std::invalid_argument("nakagami: omega is fixed to 1");
}

void RelayGeometry::validate() const {
    if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("geometry: d must lie in (0, 1)");
}

double ebn0_db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double ebn0_linear_to_db(double linear) { return 10.0 * std::log10(linear); }

NoiseModel NoiseModel::from_linear(double rate, double ebn0_linear) {
    if (!(rate > 0.0) || !(ebn0_linear > 0.0))
        throw std::invalid_argument("noise model: rate and Eb/N0 must be positive");
    return NoiseModel{rate, ebn0_linear, 1.0 / (rate * ebn0_linear)};
}

NoiseModel NoiseModel::from_db(double rate, double ebn0_db) {
    return from_linear(rate, ebn0_db_to_linear(ebn0_db));
}

double sample_nakagami_gain(const NakagamiParams& params, std::mt19937_64& rng) {
    params.validate();
    std::gamma_distribution<double> gamma(params.m, params.omega / params.m);
    return gamma(rng);
}

double sample_nakagami(const NakagamiParams& params, std::mt19937_64& rng) {
    return std::sqrt(sample_nakagami_gain(params, rng));
}

void transmit_link(std::span<const double> x, std::span<const std::uint8_t> mask, double amp_scale,
                   const NakagamiParams& params, double sigma_n, std::mt19937_64& fading_rng,
                   std::mt19937_64& noise_rng, std::span<double> h_out, std::span<double> r_out) {
    if (x.size() != mask.size() || x.size() != h_out.size() || x.size() != r_out.size())
        throw std::invalid_argument("transmit_link: length mismatch");
    params.validate();
    std::gamma_distribution<double> gamma(params.m, params.omega / params.m);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!mask[j]) {
            h_out[j] = 0.0;
            r_out[j] = 0.0;
            continue;
        }
        const double h = amp_scale * std::sqrt(gamma(fading_rng));
        h_out[j] = h;
        r_out[j] = h * x[j] + sigma_n * noise(noise_rng);
    }
}

ReceivedSignals transmit_links(std::span<const double> x_hat, std::span<const double> x,
                               std::span<const std::uint8_t> mask, const RelayGeometry& geometry,
                               const NakagamiParams& params, const NoiseModel& noise,
                               LinkRngs& rngs) {
    if (x_hat.size() != x.size()) throw std::invalid_argument("transmit_links: x/x_hat length mismatch");
    geometry.validate();
    const double sigma_n = std::sqrt(noise.sigma2);
    ReceivedSignals out;
    const std::size_t n = x.size();
    out.r_r1.resize(n);
    out.r_d1.resize(n);
    out.r_d2.resize(n);
    out.h_sr.resize(n);
    out.h_sd.resize(n);
    out.h_rd.resize(n);
    transmit_link(x, mask, geometry.sr_amp(), params, sigma_n, rngs.fading_sr, rngs.noise_sr,
                  out.h_sr, out.r_r1);
    transmit_link(x, mask, geometry.sd_amp(), params, sigma_n, rngs.fading_sd, rngs.noise_sd,
                  out.h_sd, out.r_d1);
    transmit_link(x_hat, mask, geometry.rd_amp(), params, sigma_n, rngs.fading_rd, rngs.noise_rd,
                  out.h_rd, out.r_d2);
    return out;
}

void mrc_llr(std::span<const double> r_d1, std::span<const double> r_d2,
             std::span<const double> h_sd, std::span<const double> h_rd, double sigma2,
             std::span<double> llr_out) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("mrc_llr: sigma2 must be positive");
    if (r_d1.size() != r_d2.size() || r_d1.size() != h_sd.size() || r_d1.size() != h_rd.size() ||
        r_d1.size() != llr_out.size())
        throw std::invalid_argument("mrc_llr: length mismatch");
    const double scale = 2.0 / sigma2;
    for (std::size_t j = 0; j < r_d1.size(); ++j)
        llr_out[j] = scale * (h_sd[j] * r_d1[j] + h_rd[j] * r_d2[j]);
}

void single_link_llr(std::span<const double> r, std::span<const double> h, double sigma2,
                     std::span<double> llr_out) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("single_link_llr: sigma2 must be positive");
    if (r.size() != h.size() || r.size() != llr_out.size())
        throw std::invalid_argument("single_link_llr: length mismatch");
    const double scale = 2.0 / sigma2;
    for (std::size_t j = 0; j < r.size(); ++j) llr_out[j] = scale * h[j] * r[j];
}

double channel_llr_variance(double lambda, double rate, double ebn0_linear, bool transmitted) {
    if (!(ebn0_linear > 0.0)) throw std::invalid_argument("channel_llr_variance: Eb/N0 must be positive");
    if (!transmitted) return 0.0;
    return 4.0 * rate * lambda * ebn0_linear;
}

} // namespace pldpc
