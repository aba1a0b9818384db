#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "pldpc/j_function.hpp"
#include "pldpc/pexit.hpp"
#include "pldpc/rng.hpp"

using namespace pldpc;

namespace {

std::size_t idx(const BaseMatrix& b, int i, int j) {
    return static_cast<std::size_t>(i) * b.cols + j;
}

} // namespace

TEST_CASE("vn update limiting cases") {
    const BaseMatrix b = build_ar3a(0);
    const std::size_t mn = static_cast<std::size_t>(b.rows) * b.cols;
    std::vector<double> i_av(mn, 0.0), i_ev(mn, 0.0);
    std::vector<double> var_ch(b.cols, 0.0);

    SUBCASE("no information anywhere stays at zero") {
        pexit_vn_update(b, i_av, var_ch, i_ev);
        for (int i = 0; i < b.rows; ++i)
            for (int j = 0; j < b.cols; ++j)
                if (b.at(i, j) > 0) CHECK(i_ev[idx(b, i, j)] == doctest::Approx(0.0));
    }

    SUBCASE("channel-only information gives J(sqrt(var))") {
        var_ch.assign(b.cols, 1.7);
        pexit_vn_update(b, i_av, var_ch, i_ev);
        const double expected = j_fun(std::sqrt(1.7));
        for (int i = 0; i < b.rows; ++i)
            for (int j = 0; j < b.cols; ++j)
                if (b.at(i, j) > 0) CHECK(i_ev[idx(b, i, j)] == doctest::Approx(expected).epsilon(1e-6));
    }

    SUBCASE("single-edge column ignores its own a-priori input") {
        // column 0 of AR3A has a single edge (row 0)
        var_ch.assign(b.cols, 0.9);
        i_av[idx(b, 0, 0)] = 0.8; // must not influence its own extrinsic output
        pexit_vn_update(b, i_av, var_ch, i_ev);
        CHECK(i_ev[idx(b, 0, 0)] == doctest::Approx(j_fun(std::sqrt(0.9))).epsilon(1e-6));
    }
}

TEST_CASE("cn update limiting cases") {
    const BaseMatrix b = build_ar3a(0);
    const std::size_t mn = static_cast<std::size_t>(b.rows) * b.cols;
    std::vector<double> i_ac(mn, 0.0), i_ec(mn, 0.0);

    SUBCASE("perfect inputs give perfect outputs") {
        i_ac.assign(mn, 1.0);
        pexit_cn_update(b, i_ac, i_ec);
        for (int i = 0; i < b.rows; ++i)
            for (int j = 0; j < b.cols; ++j)
                if (b.at(i, j) > 0) CHECK(i_ec[idx(b, i, j)] == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("a zero input collapses the other outputs of its row") {
        i_ac.assign(mn, 1.0);
        i_ac[idx(b, 0, 0)] = 0.0; // row 0 touches columns 0,1,2
        pexit_cn_update(b, i_ac, i_ec);
        CHECK(i_ec[idx(b, 0, 1)] == doctest::Approx(0.0).epsilon(1e-6));
        CHECK(i_ec[idx(b, 0, 2)] == doctest::Approx(0.0).epsilon(1e-6));
    }

    SUBCASE("degree-2 row passes the other edge through (within the fit error)") {
        BaseMatrix two;
        two.rows = 1;
        two.cols = 2;
        two.entries = {1, 1};
        two.punctured.assign(2, 0);
        std::vector<double> ac{0.62, 0.35}, ec(2, 0.0);
        pexit_cn_update(two, ac, ec);
        CHECK(std::abs(ec[0] - ac[1]) < 0.01);
        CHECK(std::abs(ec[1] - ac[0]) < 0.01);
    }
}

TEST_CASE("app mi limiting cases and dominance over extrinsic") {
    const BaseMatrix b = build_ar4ja(0);
    const std::size_t mn = static_cast<std::size_t>(b.rows) * b.cols;
    std::vector<double> i_av(mn, 0.0), var_ch(b.cols, 0.0), i_app(b.cols, 0.0);

    pexit_app_mi(b, i_av, var_ch, i_app);
    for (double v : i_app) CHECK(v == doctest::Approx(0.0));

    var_ch.assign(b.cols, 2.3);
    pexit_app_mi(b, i_av, var_ch, i_app);
    for (double v : i_app) CHECK(v == doctest::Approx(j_fun(std::sqrt(2.3))).epsilon(1e-6));

    // with nonzero a-priori inputs the app MI dominates every extrinsic output
    auto rng = make_engine(3, 1);
    std::uniform_real_distribution<double> uni(0.0, 0.95);
    for (auto& v : i_av) v = uni(rng);
    std::vector<double> i_ev(mn, 0.0);
    pexit_vn_update(b, i_av, var_ch, i_ev);
    pexit_app_mi(b, i_av, var_ch, i_app);
    for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j)
            if (b.at(i, j) > 0) CHECK(i_app[j] >= i_ev[idx(b, i, j)] - 1e-9);
}

TEST_CASE("ensemble respects puncturing and the variance scaling") {
    const BaseMatrix b = build_ar3a(1);
    const auto ens = VarianceEnsemble::mrc_destination(b, 2.0, RelayGeometry{0.4}, 500, 9);
    CHECK(ens.realizations() == 500);
    CHECK(ens.cols() == b.cols);
    for (double v : ens.column(1)) CHECK(v == 0.0); // punctured
    double mean = 0.0;
    for (double v : ens.column(0)) {
        CHECK(v >= 0.0);
        mean += v;
    }
    mean /= 500;
    // E[lambda] = 1 + 1/(1-d)^2 = 3.778 at d = 0.4
    CHECK(mean == doctest::Approx(1.0 + 1.0 / 0.36).epsilon(0.2));
    // variance scale: 4 * R * Eb/N0
    CHECK(ens.variance_scale(0.0) == doctest::Approx(4.0 * (2.0 / 3.0)));
}

TEST_CASE("density evolution converges well above threshold and stalls below") {
    const BaseMatrix b = build_ar3a(0);
    const auto ens = VarianceEnsemble::mrc_destination(b, 1.0, RelayGeometry{0.4}, 3000, 5);
    PexitOptions opt;
    opt.t_max = 500;
    // far above the -1.345 dB threshold
    CHECK(run_modified_pexit(b, ens, 1.7, opt).converged);
    // far below
    CHECK_FALSE(run_modified_pexit(b, ens, -4.3, opt).converged);
}

TEST_CASE("min app MI is monotone over iterations") {
    const BaseMatrix b = build_ar4ja(0);
    const auto ens = VarianceEnsemble::mrc_destination(b, 2.0, RelayGeometry{0.4}, 2000, 5);
    PexitOptions opt;
    opt.t_max = 150;
    opt.early_stop = false;
    opt.stall_detect = false;
    const auto run = run_modified_pexit(b, ens, -1.2, opt);
    for (std::size_t t = 1; t < run.min_app_trace.size(); ++t)
        CHECK(run.min_app_trace[t] >= run.min_app_trace[t - 1] - 1e-9);
}

TEST_CASE("threshold bracket around the published rate-1/2 Rayleigh value") {
    const BaseMatrix b = build_ar3a(0);
    const auto ens = VarianceEnsemble::mrc_destination(b, 1.0, RelayGeometry{0.4}, 20000, 1);
    PexitOptions opt;
    opt.t_max = 500;
    CHECK(run_modified_pexit(b, ens, -1.3, opt).converged);
    CHECK_FALSE(run_modified_pexit(b, ens, -1.4, opt).converged);
}

TEST_CASE("threshold search is deterministic and reports its bracketing") {
    const BaseMatrix b = build_ar3a(0);
    ThresholdOptions opt;
    opt.q = 4000;
    opt.seed = 12;
    opt.tol_db = 0.02;
    const ThresholdResult a = threshold_search(b, 2.0, opt);
    const ThresholdResult c = threshold_search(b, 2.0, opt);
    CHECK(a.threshold_db == c.threshold_db);
    CHECK(a.rate == Rate{1, 2});
    CHECK(a.q == 4000);
    // converges at threshold + tol, fails at threshold - tol
    const auto ens = VarianceEnsemble::mrc_destination(b, 2.0, opt.geometry, opt.q, opt.seed);
    PexitOptions popt;
    popt.t_max = opt.t_max;
    CHECK(run_modified_pexit(b, ens, a.threshold_db + opt.tol_db, popt).converged);
    CHECK_FALSE(run_modified_pexit(b, ens, a.threshold_db - opt.tol_db, popt).converged);
}

TEST_CASE("threshold search reports an unbracketable range") {
    const BaseMatrix b = build_ar3a(6); // threshold ~ 3.16 dB at m = 1
    ThresholdOptions opt;
    opt.q = 1000;
    opt.hi_db = 2.0; // too low
    CHECK_THROWS_AS(threshold_search(b, 1.0, opt), std::runtime_error);
    opt.hi_db = 10.0;
    opt.lo_db = 8.0; // already converged at lo
    CHECK_THROWS_AS(threshold_search(b, 1.0, opt), std::runtime_error);
}

TEST_CASE("threshold csv schema") {
    ThresholdResult r;
    r.family = CodeFamily::ar3a;
    r.extension = 3;
    r.rate = Rate{4, 5};
    r.m = 2.0;
    r.d = 0.4;
    r.threshold_db = 0.575;
    r.tol_db = 0.01;
    r.q = 100000;
    r.t_max = 500;
    std::ostringstream out;
    write_threshold_csv_header(out);
    write_threshold_csv_row(out, r);
    CHECK(out.str() ==
          "family,n,rate,m,d,threshold_db,tol_db,Q,Tmax\n"
          "ar3a,3,0.8000,2,0.4,0.5750,0.01,100000,500\n");
}

TEST_CASE("optimized inner loop agrees with the reference updates at Q = 1") {
    // with a single realization the fading-averaged recursion must follow the
    // reference update equations step by step
    const BaseMatrix b = build_ar4ja(1);
    const auto ens = VarianceEnsemble::single_link(b, 3.0, 1.0, 1, 77);
    const double ebn0_db = 1.5;
    const double scale = ens.variance_scale(ebn0_db);

    std::vector<double> var_ch(b.cols, 0.0);
    for (int j = 0; j < b.cols; ++j) var_ch[j] = ens.column_punctured(j) ? 0.0 : scale * ens.column(j)[0];

    const std::size_t mn = static_cast<std::size_t>(b.rows) * b.cols;
    std::vector<double> i_av(mn, 0.0), i_ev(mn, 0.0), i_ec(mn, 0.0), i_app(b.cols, 0.0);
    const int iters = 7;
    for (int t = 0; t < iters; ++t) {
        pexit_vn_update(b, i_av, var_ch, i_ev);
        pexit_cn_update(b, i_ev, i_ec);
        i_av = i_ec;
        pexit_app_mi(b, i_av, var_ch, i_app);
    }

    PexitOptions opt;
    opt.t_max = iters;
    opt.early_stop = false;
    opt.stall_detect = false;
    const auto run = run_modified_pexit(b, ens, ebn0_db, opt);
    REQUIRE(run.iterations == iters);
    for (int j = 0; j < b.cols; ++j)
        CHECK(run.app_mi[j] == doctest::Approx(i_app[j]).epsilon(1e-12));
}
