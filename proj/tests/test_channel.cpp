#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pldpc/channel.hpp"
#include "pldpc/rng.hpp"

using namespace pldpc;

TEST_CASE("nakagami: E[alpha^2] = 1 across fading depths") {
    for (double m : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        auto rng = make_engine(1, static_cast<std::uint64_t>(m * 2));
        NakagamiParams params{m, 1.0};
        double sum = 0.0;
        const int n = 1000000;
        for (int k = 0; k < n; ++k) {
            const double a = sample_nakagami(params, rng);
            sum += a * a;
        }
        CHECK(std::abs(sum / n - 1.0) < 0.01);
    }
}

TEST_CASE("nakagami m=2 mean amplitude matches the closed form") {
    // Gamma(m + 1/2) / (Gamma(m) sqrt(m)) at m=2
    const double expected = std::tgamma(2.5) / (std::tgamma(2.0) * std::sqrt(2.0));
    CHECK(expected == doctest::Approx(0.93998).epsilon(1e-4));
    auto rng = make_engine(2, 0);
    NakagamiParams params{2.0, 1.0};
    double sum = 0.0;
    const int n = 1000000;
    for (int k = 0; k < n; ++k) sum += sample_nakagami(params, rng);
    CHECK(sum / n == doctest::Approx(expected).epsilon(2e-3));
}

TEST_CASE("nakagami m=1 amplitude is Rayleigh (two-sample KS, 1% level)") {
    const int n = 100000;
    std::vector<double> a(n), b(n);
    auto rng1 = make_engine(5, 1);
    auto rng2 = make_engine(5, 2);
    NakagamiParams params{1.0, 1.0};
    for (int k = 0; k < n; ++k) a[k] = sample_nakagami(params, rng1);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int k = 0; k < n; ++k) {
        double u;
        do { u = uni(rng2); } while (u <= 0.0);
        b[k] = std::sqrt(-std::log(u)); // Rayleigh, E[b^2] = 1
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i; else ++j;
        d = std::max(d, std::abs(double(i) / n - double(j) / n));
    }
    CHECK(d < 1.628 * std::sqrt(2.0 / n));
}

TEST_CASE("nakagami rejects m below 0.5") {
    auto rng = make_engine(1, 0);
    NakagamiParams bad{0.4, 1.0};
    CHECK_THROWS_AS(sample_nakagami(bad, rng), std::invalid_argument);
}

TEST_CASE("noise model ties sigma^2 to the rate and Eb/N0") {
    const NoiseModel nm = NoiseModel::from_db(0.5, 0.0);
    CHECK(nm.sigma2 == doctest::Approx(2.0));
    const NoiseModel nm2 = NoiseModel::from_linear(0.8, 2.0);
    CHECK(nm2.sigma2 == doctest::Approx(1.0 / 1.6));
    CHECK_THROWS_AS(NoiseModel::from_linear(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("geometry scaling: E[gamma_sr] = 1/d^2 at d = 0.4") {
    const RelayGeometry g{0.4};
    CHECK(g.sr_gain() == doctest::Approx(6.25));
    auto rng = make_engine(7, 0);
    NakagamiParams params{2.0, 1.0};
    double sum = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double h = g.sr_amp() * sample_nakagami(params, rng);
        sum += h * h;
    }
    CHECK(std::abs(sum / n - 6.25) / 6.25 < 0.02);
    CHECK_THROWS_AS(RelayGeometry{0.0}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(RelayGeometry{1.0}.validate(), std::invalid_argument);
}

TEST_CASE("transmit_link: noiseless limit and AWGN variance") {
    const std::vector<double> x(2000, 1.0);
    const std::vector<std::uint8_t> mask(2000, 1);
    std::vector<double> h(2000), r(2000);
    NakagamiParams params{2.0, 1.0};
    auto f = make_engine(9, 1);
    auto nz = make_engine(9, 2);
    transmit_link(x, mask, 1.0, params, 0.0, f, nz, h, r);
    for (int k = 0; k < 2000; ++k) CHECK(r[k] == doctest::Approx(h[k])); // r = h exactly

    // fixed h = 1 via zero-variance fading is not available; instead check the
    // noise variance around h*x
    auto f2 = make_engine(9, 3);
    auto nz2 = make_engine(9, 4);
    transmit_link(x, mask, 1.0, params, 1.0, f2, nz2, h, r);
    double var = 0.0;
    for (int k = 0; k < 2000; ++k) var += (r[k] - h[k]) * (r[k] - h[k]);
    CHECK(var / 2000 == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("transmit_links produces no output at punctured positions") {
    const std::vector<double> x{1.0, -1.0, 1.0, -1.0};
    std::vector<std::uint8_t> mask{1, 0, 1, 1};
    RelayGeometry g{0.4};
    NakagamiParams params{1.0, 1.0};
    NoiseModel noise = NoiseModel::from_db(0.5, 2.0);
    LinkRngs rngs{make_engine(1, 1), make_engine(1, 2), make_engine(1, 3),
                  make_engine(1, 4), make_engine(1, 5), make_engine(1, 6)};
    const ReceivedSignals rx = transmit_links(x, x, mask, g, params, noise, rngs);
    CHECK(rx.r_r1[1] == 0.0);
    CHECK(rx.r_d1[1] == 0.0);
    CHECK(rx.r_d2[1] == 0.0);
    CHECK(rx.h_sd[1] == 0.0);
    CHECK(rx.r_d1[0] != 0.0);

    const std::vector<double> short_x{1.0};
    CHECK_THROWS_AS(transmit_links(short_x, x, mask, g, params, noise, rngs),
                    std::invalid_argument);
}

TEST_CASE("mrc llr statistics match the conditional mean and variance") {
    // fixed fading, all-zero word (x = +1): E[L] = (2/s2)(g_sd + g_rd),
    // var[L] = (4/s2)(g_sd + g_rd)
    const double h_sd = 0.8, h_rd = 1.3, sigma2 = 0.7;
    const double lambda = h_sd * h_sd + h_rd * h_rd;
    const int n = 100000;
    std::vector<double> r1(n), r2(n), hs(n, h_sd), hr(n, h_rd), llr(n);
    auto rng = make_engine(11, 0);
    std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
    for (int k = 0; k < n; ++k) {
        r1[k] = h_sd + noise(rng);
        r2[k] = h_rd + noise(rng);
    }
    mrc_llr(r1, r2, hs, hr, sigma2, llr);
    double mean = std::accumulate(llr.begin(), llr.end(), 0.0) / n;
    double var = 0.0;
    for (double v : llr) var += (v - mean) * (v - mean);
    var /= n - 1;
    CHECK(mean == doctest::Approx(2.0 / sigma2 * lambda).epsilon(0.02));
    CHECK(var == doctest::Approx(4.0 / sigma2 * lambda).epsilon(0.02));
    CHECK(mean == doctest::Approx(var / 2.0).epsilon(0.02)); // consistency

    CHECK_THROWS_AS(mrc_llr(r1, r2, hs, hr, 0.0, llr), std::invalid_argument);
}

TEST_CASE("mrc with a silent relay reduces to the single-link llr") {
    const std::vector<double> r1{0.4, -0.2}, r2{9.0, 9.0};
    const std::vector<double> hs{1.1, 0.9}, hr{0.0, 0.0};
    std::vector<double> a(2), b(2);
    mrc_llr(r1, r2, hs, hr, 0.5, a);
    single_link_llr(r1, hs, 0.5, b);
    CHECK(a[0] == doctest::Approx(b[0]));
    CHECK(a[1] == doctest::Approx(b[1]));
}

TEST_CASE("single link llr algebra") {
    const std::vector<double> r{0.25}, h{1.0};
    std::vector<double> l(1);
    single_link_llr(r, h, 0.5, l);
    CHECK(l[0] == doctest::Approx(1.0)); // L = 2 h r / sigma2 with r = sigma2/2
    CHECK_THROWS_AS(single_link_llr(r, h, -1.0, l), std::invalid_argument);
}

TEST_CASE("channel llr variance formula") {
    CHECK(channel_llr_variance(1.0, 0.8, 1.0, true) == doctest::Approx(3.2));
    CHECK(channel_llr_variance(123.0, 0.8, 1.0, false) == 0.0); // punctured
    // var = 4 R gamma Eb/N0: gamma=1, R=1/2, 0 dB -> 2
    CHECK(channel_llr_variance(1.0, 0.5, 1.0, true) == doctest::Approx(2.0));
    CHECK_THROWS_AS(channel_llr_variance(1.0, 0.5, 0.0, true), std::invalid_argument);

    // matches the empirical variance of mrc_llr at fixed fading
    const double h_sd = 1.2, h_rd = 0.6, rate = 0.75, ebn0 = 1.4;
    const double sigma2 = 1.0 / (rate * ebn0);
    const int n = 100000;
    std::vector<double> r1(n), r2(n), hs(n, h_sd), hr(n, h_rd), llr(n);
    auto rng = make_engine(13, 0);
    std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
    for (int k = 0; k < n; ++k) {
        r1[k] = h_sd + noise(rng);
        r2[k] = h_rd + noise(rng);
    }
    mrc_llr(r1, r2, hs, hr, sigma2, llr);
    const double mean = std::accumulate(llr.begin(), llr.end(), 0.0) / n;
    double var = 0.0;
    for (double v : llr) var += (v - mean) * (v - mean);
    var /= n - 1;
    const double predicted = channel_llr_variance(h_sd * h_sd + h_rd * h_rd, rate, ebn0, true);
    CHECK(var == doctest::Approx(predicted).epsilon(0.02));
}
