#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "svcva/black.hpp"
#include "svcva/errors.hpp"
#include "svcva/heston.hpp"
#include "svcva/hullwhite.hpp"
#include "svcva/sabr.hpp"

using namespace svcva;

namespace {

MarketState sabr_fit_state(double T, double strike) {
    MarketState st;
    st.T = T;
    st.x = 0.0;
    st.y = 0.5887;
    st.kappa = std::log(strike);
    return st;
}

SabrParams sabr_fit() {
    SabrParams s;
    s.gamma = 0.7367;
    s.c = 0.7356;
    return s;
}

HestonParams heston_fit() {
    HestonParams h;
    h.k = 1.0;
    h.theta = 0.04;
    h.c = 0.39;
    return h;
}

// Composite Simpson over an odd number of equally spaced samples.
double simpson(const std::vector<double>& f, double h) {
    double s = f.front() + f.back();
    for (std::size_t i = 1; i + 1 < f.size(); ++i)
        s += f[i] * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

TEST_CASE("sabr implied vol: atm closed form") {
    const SabrParams sabr = sabr_fit();
    const double eta = -0.3;
    MarketState st = sabr_fit_state(0.5, 1.0);
    st.x = 0.1;
    st.kappa = 0.1; // at the money, nonzero level
    const double omg = 1.0 - sabr.gamma;
    const double e1 = std::exp(omg * st.x);
    const double bracket = omg * omg / 24.0 * st.y * st.y / (e1 * e1) +
                           0.25 * eta * sabr.gamma * sabr.c * st.y / e1 +
                           (2.0 - 3.0 * eta * eta) / 24.0 * sabr.c * sabr.c;
    const double expected = st.y / e1 * (1.0 + bracket * st.tau());
    CHECK(sabr_implied_vol(st, sabr, eta) ==
          doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("sabr implied vol: continuous across the small-m branch") {
    const SabrParams sabr = sabr_fit();
    const double eta = -0.3;
    MarketState st = sabr_fit_state(0.5, 1.0);
    st.kappa = 0.0;
    const double omg = 1.0 - sabr.gamma;
    const double dx_at = st.y / sabr.c; // m = 1 per unit dx at x = kappa = 0

    SUBCASE("values match across the 1e-12 series switch") {
        for (double sgn : {1.0, -1.0}) {
            st.x = sgn * 0.999e-12 * dx_at;
            const double below = sabr_implied_vol(st, sabr, eta);
            st.x = sgn * 1.001e-12 * dx_at;
            const double above = sabr_implied_vol(st, sabr, eta);
            CHECK(std::fabs(below - above) < 1e-12 * below);
        }
    }

    SUBCASE("log branch is cancellation-free at tiny m") {
        // The log form is used for all |m| >= 1e-12; near zero it must agree
        // with the series 1 - eta m / 2 + (2 - 3 eta^2) m^2 / 12 to rounding,
        // or nested difference quotients of the vol pick up noise.
        for (double m_target : {1e-7, -1e-7, 1e-9, -1e-9}) {
            st.x = m_target * dx_at;
            const double dx = st.x;
            const double half_pow = std::exp(0.5 * omg * dx);
            const double m = (sabr.c / st.y) * half_pow * dx;
            const double series = 1.0 - 0.5 * eta * m +
                                  (2.0 - 3.0 * eta * eta) / 12.0 * m * m;
            const double denom =
                half_pow * (1.0 + omg * omg / 24.0 * dx * dx +
                            omg * omg * omg * omg / 1920.0 * dx * dx * dx * dx);
            const double bracket =
                omg * omg / 24.0 * st.y * st.y / (half_pow * half_pow) +
                0.25 * eta * sabr.gamma * sabr.c * st.y / half_pow +
                (2.0 - 3.0 * eta * eta) / 24.0 * sabr.c * sabr.c;
            const double expected =
                st.y / denom * series * (1.0 + bracket * st.tau());
            CHECK(sabr_implied_vol(st, sabr, eta) ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("sabr implied vol: continuous in the vol-of-vol at zero") {
    MarketState st = sabr_fit_state(0.5, 1.15);
    SabrParams lo = sabr_fit();
    lo.c = 1e-8;
    SabrParams hi = sabr_fit();
    hi.c = 1e-6;
    const double a = sabr_implied_vol(st, lo, 0.0);
    const double b = sabr_implied_vol(st, hi, 0.0);
    CHECK(std::fabs(a - b) < 1e-4);
}

TEST_CASE("sabr expansion price sits within 1% of the simulated model") {
    // Frozen Monte Carlo oracle: log-Euler scheme with the CEV factor frozen
    // per step, 4e6 paths x 500 steps, seed 555006: mean 0.1063333,
    // stderr 0.0001194.  The truncated implied-vol expansion carries its own
    // O(c^2 (T-t)) bias, measured at +0.39% on this cell.
    const double mc_mean = 0.1063333;
    const MarketState st = sabr_fit_state(0.5, 1.15);
    const double u = sabr_call_and_greeks(st, sabr_fit(), -0.3).u;
    CHECK(std::fabs(u - mc_mean) < 0.01 * mc_mean);
}

TEST_CASE("sabr greeks: self-consistent and well shaped") {
    const SabrParams sabr = sabr_fit();
    const double eta = -0.3;
    const MarketState st = sabr_fit_state(0.5, 1.15);
    const PriceAndGreeks g = sabr_call_and_greeks(st, sabr, eta);

    auto u_at = [&](double x, double y) {
        MarketState s2 = st;
        s2.x = x;
        s2.y = y;
        return sabr_call_and_greeks(s2, sabr, eta).u;
    };

    SUBCASE("ux matches a central difference of u") {
        const double h = 1e-4;
        const double fd = (u_at(st.x + h, st.y) - u_at(st.x - h, st.y)) / (2 * h);
        CHECK(std::fabs(g.ux - fd) < 1e-3 * std::fabs(fd));
    }
    SUBCASE("uy matches a central difference of u") {
        const double h = 1e-5 * st.y;
        const double fd = (u_at(st.x, st.y + h) - u_at(st.x, st.y - h)) / (2 * h);
        CHECK(std::fabs(g.uy - fd) < 1e-3 * std::fabs(fd));
    }
    SUBCASE("uxx matches a second difference of u") {
        const double h = 1e-4;
        const double fd = (u_at(st.x + h, st.y) - 2.0 * g.u +
                           u_at(st.x - h, st.y)) /
                          (h * h);
        CHECK(std::fabs(g.uxx - fd) < 2e-3 * std::fabs(fd));
    }
    SUBCASE("uxy matches the cross difference of u") {
        const double hx = 1e-4, hy = 1e-4 * st.y;
        const double fd = (u_at(st.x + hx, st.y + hy) -
                           u_at(st.x + hx, st.y - hy) -
                           u_at(st.x - hx, st.y + hy) +
                           u_at(st.x - hx, st.y - hy)) /
                          (4.0 * hx * hy);
        CHECK(std::fabs(g.uxy - fd) < 2e-3 * std::fabs(fd));
    }
}

TEST_CASE("sabr price bounds, vega sign and tail decay") {
    const SabrParams sabr = sabr_fit();
    const double eta = -0.3;
    for (double dx : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        for (double T : {0.25, 0.5, 1.0}) {
            MarketState st = sabr_fit_state(T, 1.0);
            st.x = dx;
            st.kappa = 0.0;
            const PriceAndGreeks g = sabr_call_and_greeks(st, sabr, eta);
            CHECK(g.u >= std::max(std::exp(st.x) - 1.0, 0.0) - 1e-8);
            CHECK(g.u <= std::exp(st.x) + 1e-8);
            CHECK(g.ux >= 0.0);
            CHECK(g.uy >= 0.0);
            // price increases with the vol factor
            MarketState bumped = st;
            bumped.y = st.y * 1.05;
            CHECK(sabr_call_and_greeks(bumped, sabr, eta).u > g.u);
        }
    }
    MarketState otm = sabr_fit_state(0.5, 1.0);
    otm.x = -5.0;
    otm.kappa = 0.0;
    const PriceAndGreeks g = sabr_call_and_greeks(otm, sabr, eta);
    CHECK(g.u < 1e-6);
    CHECK(g.ux < 1e-4);
}

TEST_CASE("sabr domain guards") {
    const MarketState st = sabr_fit_state(0.5, 1.15);
    CHECK_THROWS_AS(sabr_implied_vol(st, sabr_fit(), 1.0), DomainError);
    CHECK_THROWS_AS(sabr_call_and_greeks(st, sabr_fit(), -1.0), DomainError);
}

TEST_CASE("heston collapses to black when the vol of vol vanishes") {
    QuadratureConfig quad;
    HestonParams h = heston_fit();
    h.c = 1e-8;
    MarketState st;
    st.T = 0.5;
    st.x = 0.0;
    st.y = h.theta; // start at the stationary level: variance stays theta
    for (double strike : {0.9, 1.0, 1.15}) {
        st.kappa = std::log(strike);
        const double u = heston_call_and_greeks(st, h, -0.34, quad).u;
        const double black =
            black_call(st.x, st.kappa, std::sqrt(h.theta), st.tau()).u;
        CHECK(u == doctest::Approx(black).epsilon(1e-6));
    }
}

TEST_CASE("heston fourier price matches the simulated model") {
    // Frozen Monte Carlo oracle: full-truncation Euler, 4e6 paths x 500
    // steps, seed 555006: mean 0.0076980, stderr 0.0000167.  Tolerance is
    // three standard errors at the 1e6-path scale (2x the frozen stderr).
    const double mc_mean = 0.0076980;
    const double mc_se_1e6 = 2.0 * 0.0000167;
    QuadratureConfig quad;
    MarketState st;
    st.T = 0.5;
    st.x = 0.0;
    st.y = 0.034;
    st.kappa = std::log(1.15);
    const double u = heston_call_and_greeks(st, heston_fit(), -0.34, quad).u;
    CHECK(std::fabs(u - mc_mean) < 3.0 * mc_se_1e6);
}

TEST_CASE("heston greeks match finite differences of the price") {
    QuadratureConfig quad;
    const HestonParams h = heston_fit();
    const double eta = -0.34;
    for (double strike : {0.9, 1.15}) {
        for (double T : {0.5, 1.0}) {
            CAPTURE(strike);
            CAPTURE(T);
            MarketState st;
            st.T = T;
            st.x = 0.0;
            st.y = 0.034;
            st.kappa = std::log(strike);
            const PriceAndGreeks g = heston_call_and_greeks(st, h, eta, quad);

            auto u_at = [&](double x, double y) {
                MarketState s2 = st;
                s2.x = x;
                s2.y = y;
                return heston_call_and_greeks(s2, h, eta, quad);
            };
            const double hx = 1e-4, hy = 1e-6;
            const double fdx =
                (u_at(st.x + hx, st.y).u - u_at(st.x - hx, st.y).u) / (2 * hx);
            const double fdy =
                (u_at(st.x, st.y + hy).u - u_at(st.x, st.y - hy).u) / (2 * hy);
            const double fdxx = (u_at(st.x + hx, st.y).u - 2.0 * g.u +
                                 u_at(st.x - hx, st.y).u) /
                                (hx * hx);
            const double fdxy = (u_at(st.x + hx, st.y).uy -
                                 u_at(st.x - hx, st.y).uy) /
                                (2 * hx);
            CHECK(std::fabs(g.ux - fdx) < 1e-4 * std::fabs(fdx));
            CHECK(std::fabs(g.uy - fdy) < 1e-4 * std::fabs(fdy));
            CHECK(std::fabs(g.uxx - fdxx) < 1e-4 * std::fabs(fdxx));
            CHECK(std::fabs(g.uxy - fdxy) < 1e-4 * std::fabs(fdxy));
        }
    }
}

TEST_CASE("heston price shape across moneyness and maturity") {
    QuadratureConfig quad;
    quad.upper_limit = 600.0; // short maturities decay slowly in frequency
    const HestonParams h = heston_fit();
    for (double dx : {-0.3, -0.1, 0.0, 0.1, 0.3}) {
        for (double T : {0.25, 0.5, 1.0, 2.0}) {
            CAPTURE(dx);
            CAPTURE(T);
            MarketState st;
            st.T = T;
            st.x = dx;
            st.y = 0.034;
            st.kappa = 0.0;
            const PriceAndGreeks g = heston_call_and_greeks(st, h, -0.34, quad);
            CHECK(g.u >= std::max(std::exp(dx) - 1.0, 0.0) - 1e-8);
            CHECK(g.u <= std::exp(dx) + 1e-8);
            CHECK(g.ux >= -1e-10);
            MarketState bumped = st;
            bumped.y = 0.05;
            CHECK(heston_call_and_greeks(bumped, h, -0.34, quad).u > g.u);
        }
    }
}

TEST_CASE("heston truncation guard fires when the tail is fat") {
    QuadratureConfig quad;
    quad.upper_limit = 10.0;
    MarketState st;
    st.T = 0.5;
    st.x = 0.0;
    st.y = 0.034;
    st.kappa = std::log(1.15);
    CHECK_THROWS_AS(heston_call_and_greeks(st, heston_fit(), -0.34, quad),
                    QuadratureError);
}

TEST_CASE("hull-white at eta=0 is black at the integrated-moment vol") {
    QuadratureConfig quad;
    HullWhiteParams hw;
    hw.b = 0.05;
    hw.c = 0.3;
    MarketState st;
    st.T = 1.0;
    st.x = 0.0;
    st.y = 0.2;
    st.kappa = 0.0;
    const double a2 = 2.0 * hw.b + hw.c * hw.c;
    const double i_gamma = std::expm1(a2 * st.tau()) / a2;
    const double veff = st.y * std::sqrt(i_gamma / st.tau());
    const double expected = black_call(st.x, st.kappa, veff, st.tau()).u;
    CHECK(hw_call(st, hw, 0.0, quad).u ==
          doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("hull-white constant-vol limit is plain black") {
    QuadratureConfig quad;
    HullWhiteParams hw;
    hw.b = 0.0;
    hw.c = 1e-8;
    MarketState st;
    st.T = 1.0;
    st.x = 0.0;
    st.y = 0.2;
    st.kappa = 0.0;
    const double expected = black_call(st.x, st.kappa, st.y, st.tau()).u;
    CHECK(hw_call(st, hw, -0.3, quad).u ==
          doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("hull-white expansion against a mixing-formula oracle") {
    // Frozen oracle: conditional (mixing-formula) Monte Carlo over the vol
    // path only, 2e5 paths x 1000 steps, seed 99101:
    //   eta =  0.0 : 0.0802355 (se 0.0000314)
    //   eta = -0.3 : 0.0797860 (se 0.0000476)
    // The zeroth term prices Black at the integrated second moment, which
    // overstates the eta=0 price by ~1.55% here (Jensen gap of the averaged
    // Black price); the printed eta correction itself is accurate to ~2%.
    // Total measured error 1.57%, so the bound is 2%, not the 1% the eta^2
    // truncation alone would suggest.
    QuadratureConfig quad;
    HullWhiteParams hw;
    hw.b = 0.0;
    hw.c = 0.3;
    MarketState st;
    st.T = 1.0;
    st.x = 0.0;
    st.y = 0.2;
    st.kappa = 0.0;
    const double oracle_eta0 = 0.0802355;
    const double oracle_eta = 0.0797860;

    const double u0 = hw_call(st, hw, 0.0, quad).u;
    const double u = hw_call(st, hw, -0.3, quad).u;
    CHECK(std::fabs(u - oracle_eta) < 0.02 * oracle_eta);
    CHECK(u0 > oracle_eta0); // averaged Black lies below Black at the mean
    // the first-order eta correction tracks the oracle's within 15%
    const double corr_model = u - u0;
    const double corr_true = oracle_eta - oracle_eta0;
    CHECK(std::fabs(corr_model - corr_true) < 0.15 * std::fabs(corr_true));
}

TEST_CASE("hull-white guards and shape") {
    QuadratureConfig quad;
    HullWhiteParams hw;
    hw.b = 0.0;
    hw.c = 0.3;
    MarketState st;
    st.T = 1.0;
    st.x = 0.0;
    st.y = 0.2;
    st.kappa = 0.0;
    CHECK_THROWS_AS(hw_call(st, hw, 0.1, quad), DomainError);
    const PriceAndGreeks g = hw_call(st, hw, -0.3, quad);
    CHECK(g.ux > 0.0);
    CHECK(g.uy > 0.0);
    CHECK(g.u <= std::exp(st.x));
    CHECK(g.u >= std::max(std::exp(st.x) - 1.0, 0.0));
}

TEST_CASE("cir lognormal match: fixed points and stationarity") {
    SUBCASE("s=t returns the spot values") {
        const CirMatch m = cir_lognormal_match(1.0, 0.04, 0.39, 0.034, 0.3, 0.3);
        CHECK(m.e_y == 0.034);
        CHECK(m.e_sqrt_y == doctest::Approx(std::sqrt(0.034)).epsilon(1e-15));
    }
    SUBCASE("starting at the long-run level") {
        const CirMatch m = cir_lognormal_match(1.0, 0.04, 0.39, 0.04, 0.0, 0.5);
        CHECK(m.gamma1 == 0.0);
        CHECK(m.e_y == doctest::Approx(0.04).epsilon(1e-14));
        // Jensen: E[sqrt(Y)] <= sqrt(E[Y])
        CHECK(m.e_sqrt_y <= std::sqrt(0.04));
        CHECK(m.e_sqrt_y > 0.85 * std::sqrt(0.04));
    }
    SUBCASE("domain guards") {
        CHECK_THROWS_AS(cir_lognormal_match(0.0, 0.04, 0.39, 0.034, 0.0, 0.5),
                        DomainError);
        CHECK_THROWS_AS(cir_lognormal_match(1.0, 0.04, 0.39, 0.034, 0.5, 0.4),
                        DomainError);
    }
}

TEST_CASE("cir lognormal match reproduces both matched moments") {
    // gamma1 and gamma2 are log-derivatives of m1 and m2; integrating them
    // back must reproduce the closed-form moments of the square-root process.
    const double k = 1.0, theta = 0.04, c = 0.39, y = 0.034;
    const double v_end = 0.5;
    const int n = 500; // Simpson over 501 samples
    std::vector<double> g1(n + 1), gsum(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double s = v_end * i / n;
        const CirMatch m = cir_lognormal_match(k, theta, c, y, 0.0, s);
        g1[i] = m.gamma1;
        gsum[i] = 2.0 * m.gamma1 + m.gamma2sq;
    }
    const double h = v_end / n;
    const double m1 = y * std::exp(simpson(g1, h));
    const double m2 = y * y * std::exp(simpson(gsum, h));

    const double m1_exact = theta + (y - theta) * std::exp(-k * v_end);
    const double a2 = (y - theta) * (y - theta) - c * c / k * (y - 0.5 * theta);
    const double b2 = (y - theta) * (2.0 * theta + c * c / k);
    const double c2 = theta * (theta + 0.5 * c * c / k);
    const double e = std::exp(-k * v_end);
    const double m2_exact = a2 * e * e + b2 * e + c2;
    CHECK(m1 == doctest::Approx(m1_exact).epsilon(1e-8));
    CHECK(m2 == doctest::Approx(m2_exact).epsilon(1e-8));
}

namespace {

// Full-truncation Euler estimate of E[sqrt(Y_T)] for the square-root process.
double mc_mean_root(double k, double theta, double c, double y0, double T,
                    int n_paths, int n_steps, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    const double dt = T / n_steps, sq = std::sqrt(dt);
    double acc = 0.0;
    for (int p = 0; p < n_paths; ++p) {
        double y = y0;
        for (int i = 0; i < n_steps; ++i) {
            const double yp = y > 0.0 ? y : 0.0;
            y += k * (theta - yp) * dt + c * std::sqrt(yp) * sq * nd(gen);
        }
        acc += std::sqrt(y > 0.0 ? y : 0.0);
    }
    return acc / n_paths;
}

} // namespace

TEST_CASE("cir lognormal match: closed form and accuracy against simulation") {
    const double k = 1.0, theta = 0.04, y0 = 0.034, T = 0.5;

    SUBCASE("e_sqrt_y equals the matched-moment closed form") {
        // sqrt(m1) * (m2/m1^2)^(-1/8), the mean of the matched lognormal
        for (double c : {0.2, 0.39}) {
            const CirMatch m = cir_lognormal_match(k, theta, c, y0, 0.0, T, 1e-3);
            const double e = std::exp(-k * T);
            const double m1 = theta + (y0 - theta) * e;
            const double a2 =
                (y0 - theta) * (y0 - theta) - c * c / k * (y0 - 0.5 * theta);
            const double b2 = (y0 - theta) * (2.0 * theta + c * c / k);
            const double c2 = theta * (theta + 0.5 * c * c / k);
            const double m2 = a2 * e * e + b2 * e + c2;
            const double closed =
                std::sqrt(m1) * std::pow(m2 / (m1 * m1), -0.125);
            CHECK(m.e_sqrt_y == doctest::Approx(closed).epsilon(1e-6));
        }
    }
    SUBCASE("accurate when the root process stays away from zero") {
        // c=0.2 keeps 2*k*theta > c^2; the surrogate tracks E[sqrt(Y)] to ~1%
        const double c = 0.2;
        const double mc = mc_mean_root(k, theta, c, y0, T, 100000, 250, 777111);
        const CirMatch m = cir_lognormal_match(k, theta, c, y0, 0.0, T);
        CHECK(std::fabs(m.e_sqrt_y - mc) < 0.02 * mc);
    }
    SUBCASE("overestimates when the origin is attainable") {
        // c=0.39 violates 2*k*theta > c^2 (0.08 vs 0.152): the true density
        // piles mass near zero, the lognormal surrogate has none there, so
        // e_sqrt_y lands high.  Measured: surrogate 0.17193 vs exact
        // noncentral-chi-square value 0.16067 (+7.0%); the MC estimate at
        // this resolution is 0.1600.  Pin direction and size of the gap.
        const double c = 0.39;
        const double mc = mc_mean_root(k, theta, c, y0, T, 100000, 250, 777111);
        const CirMatch m = cir_lognormal_match(k, theta, c, y0, 0.0, T);
        CHECK(m.e_sqrt_y > mc);
        CHECK(std::fabs(m.e_sqrt_y - mc) < 0.09 * mc);
    }
}
