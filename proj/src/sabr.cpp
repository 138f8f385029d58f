#include "svcva/sabr.hpp"

#include <cmath>

#include "svcva/errors.hpp"

namespace svcva {

namespace {

double implied_vol_impl(double x, double y, double kappa, double tau,
                        double gamma, double c, double eta) {
    const double omg = 1.0 - gamma;
    const double dx = x - kappa;
    const double half_pow = std::exp(0.5 * omg * (x + kappa));

    const double m = (c / y) * half_pow * dx;
    double ratio; // m / delta(m)
    if (std::fabs(m) < 1e-12) {
        ratio = 1.0 - 0.5 * eta * m +
                (2.0 - 3.0 * eta * eta) / 12.0 * m * m;
    } else {
        const double root = std::sqrt((m - eta) * (m - eta) + 1.0 - eta * eta);
        // delta = log((m - eta + root) / (1 - eta)); the argument is
        // 1 + m (1 + (m - 2 eta) / (root + 1)) / (1 - eta), which log1p
        // keeps fully accurate down to the series switch.
        const double z =
            m * (1.0 + (m - 2.0 * eta) / (root + 1.0)) / (1.0 - eta);
        const double delta = std::log1p(z);
        if (delta == 0.0 || !std::isfinite(delta))
            throw NumericalError("sabr_implied_vol: degenerate delta(m)");
        ratio = m / delta;
    }

    const double denom =
        half_pow * (1.0 + omg * omg / 24.0 * dx * dx +
                    omg * omg * omg * omg / 1920.0 * dx * dx * dx * dx);
    const double bracket =
        omg * omg / 24.0 * y * y / (half_pow * half_pow) +
        0.25 * eta * gamma * c * y / half_pow +
        (2.0 - 3.0 * eta * eta) / 24.0 * c * c;
    return y / denom * ratio * (1.0 + bracket * tau);
}

// Central difference with one Richardson pass.
template <typename F>
double deriv(const F& f, double x0, double h) {
    const double d1 = (f(x0 + h) - f(x0 - h)) / (2.0 * h);
    const double d2 = (f(x0 + 0.5 * h) - f(x0 - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

} // namespace

double sabr_implied_vol(const MarketState& state, const SabrParams& sabr,
                        double eta) {
    state.validate();
    sabr.validate();
    if (!(eta > -1.0 && eta < 1.0))
        throw DomainError("sabr_implied_vol: eta must lie in (-1,1)");
    return implied_vol_impl(state.x, state.y, state.kappa, state.tau(),
                            sabr.gamma, sabr.c, eta);
}

PriceAndGreeks sabr_call_and_greeks(const MarketState& state,
                                    const SabrParams& sabr, double eta) {
    state.validate();
    sabr.validate();
    if (!(eta > -1.0 && eta < 1.0))
        throw DomainError("sabr_call_and_greeks: eta must lie in (-1,1)");
    const double tau = state.tau();
    const double kappa = state.kappa;
    const double sqrt_tau = std::sqrt(tau);

    auto vol_at = [&](double x, double y) {
        return implied_vol_impl(x, y, kappa, tau, sabr.gamma, sabr.c, eta);
    };
    // ux evaluated at an arbitrary (x, y) point, vol partial by central
    // difference (relative step 1e-6, one Richardson pass).
    auto ux_at = [&](double x, double y) {
        const double vol = vol_at(x, y);
        const double hx = 1e-6 * std::max(1.0, std::fabs(x));
        const double dvol_dx =
            deriv([&](double xx) { return vol_at(xx, y); }, x, hx);
        const double stddev = vol * sqrt_tau;
        const double d1 = (x - kappa) / stddev + 0.5 * stddev;
        return std::exp(x) * (norm_cdf(d1) + sqrt_tau * norm_pdf(d1) * dvol_dx);
    };

    const double x = state.x, y = state.y;
    const double vol = vol_at(x, y);
    PriceAndGreeks out = black_call(x, kappa, vol, tau);
    const double hy = 1e-6 * y;
    const double dvol_dy = deriv([&](double yy) { return vol_at(x, yy); }, y, hy);
    const double vega = out.uy; // black vega in vol
    out.ux = ux_at(x, y);
    out.uy = vega * dvol_dy;

    const double hx2 = 1e-4 * std::max(1.0, std::fabs(x));
    const double hy2 = 1e-4 * y;
    out.uxx = (ux_at(x + hx2, y) - ux_at(x - hx2, y)) / (2.0 * hx2);
    out.uxy = (ux_at(x, y + hy2) - ux_at(x, y - hy2)) / (2.0 * hy2);
    return out;
}

} // namespace svcva
