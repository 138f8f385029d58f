#include "svcva/hullwhite.hpp"

#include <cmath>

#include "svcva/errors.hpp"

namespace svcva {

namespace {

double expm1_over(double a, double v) {
    // (e^{a v} - 1)/a, continuous at a = 0.
    if (std::fabs(a) < 1e-14) return v;
    return std::expm1(a * v) / a;
}

double price_at(double x, double y, double kappa, double t, double T,
                const HullWhiteParams& hw, double eta, double dt) {
    const double tau = T - t;
    const double b = hw.b, c = hw.c;
    const double a2 = 2.0 * b + c * c;
    const double i_gamma = expm1_over(a2, tau); // int_t^T Gamma(t,s) ds
    const double total_var = y * y * i_gamma;
    const double veff = std::sqrt(total_var / tau);
    const double g0 = black_call(x, kappa, veff, tau).u;
    if (eta == 0.0 || c == 0.0) return g0;

    const double sd = y * std::sqrt(i_gamma);
    const double d2 = ((x - kappa) - 0.5 * total_var) / sd;
    // J = c * int_t^T e^{(4b+6c^2)(s-t)} int_s^T e^{a2(u-s)} du ds
    const double a4 = 4.0 * b + 6.0 * c * c;
    const auto grid = uniform_grid(t, T, dt);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid[i];
        vals[i] = std::exp(a4 * (s - t)) * expm1_over(a2, T - s);
    }
    const double j_int = c * trapezoid(vals, grid[1] - grid[0]);
    const double g1 =
        -std::exp(kappa) * y * d2 * norm_pdf(d2) * j_int / i_gamma;
    return g0 + eta * g1;
}

} // namespace

PriceAndGreeks hw_call(const MarketState& state, const HullWhiteParams& hw,
                       double eta, const QuadratureConfig& quad) {
    state.validate();
    hw.validate();
    quad.validate();
    if (eta > 0.0)
        throw DomainError("hw_call: eta must be <= 0 (martingale condition)");

    const double x = state.x, y = state.y;
    auto u_at = [&](double xx, double yy) {
        return price_at(xx, yy, state.kappa, state.t, state.T, hw, eta, quad.dt);
    };

    PriceAndGreeks out;
    out.u = u_at(x, y);
    const double hx = 1e-4 * std::max(1.0, std::fabs(x));
    const double hy = 1e-4 * y;
    out.ux = (u_at(x + hx, y) - u_at(x - hx, y)) / (2.0 * hx);
    out.uy = (u_at(x, y + hy) - u_at(x, y - hy)) / (2.0 * hy);
    out.uxx = (u_at(x + hx, y) - 2.0 * out.u + u_at(x - hx, y)) / (hx * hx);
    out.uxy = (u_at(x + hx, y + hy) - u_at(x + hx, y - hy) -
               u_at(x - hx, y + hy) + u_at(x - hx, y - hy)) /
              (4.0 * hx * hy);
    return out;
}

} // namespace svcva
