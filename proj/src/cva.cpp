#include "svcva/cva.hpp"

#include <cmath>
#include <vector>

#include "svcva/black.hpp"
#include "svcva/errors.hpp"
#include "svcva/heston.hpp"
#include "svcva/hullwhite.hpp"
#include "svcva/intensity.hpp"
#include "svcva/sabr.hpp"

namespace svcva {

namespace {

PriceAndGreeks price_for(const ModelPairing& pairing, const MarketState& state,
                         const QuadratureConfig& quad) {
    switch (pairing.vol_model()) {
        case VolModel::Sabr:
            return sabr_call_and_greeks(state, std::get<SabrParams>(pairing.vol),
                                        pairing.eta);
        case VolModel::HullWhite:
            return hw_call(state, std::get<HullWhiteParams>(pairing.vol),
                           pairing.eta, quad);
        case VolModel::Heston:
            return heston_call_and_greeks(
                state, std::get<HestonParams>(pairing.vol), pairing.eta, quad);
    }
    throw PairingError("cva: unreachable vol model");
}

struct Grid {
    std::vector<double> s;   // nodes over [t, T]
    std::vector<double> phi; // phi(T - s_i)
    double h = 0.0;
};

Grid make_grid(const IntensityParams& intensity, double t, double T, double dt) {
    Grid g;
    g.s = uniform_grid(t, T, dt);
    g.h = g.s[1] - g.s[0];
    g.phi.resize(g.s.size());
    for (std::size_t i = 0; i < g.s.size(); ++i)
        g.phi[i] = affine_factors(intensity, T - g.s[i]).phi;
    return g;
}

// int_t^T phi(T-s) * inner(s) ds over the shared grid.
double outer_integral(const Grid& g, const std::vector<double>& inner) {
    std::vector<double> vals(g.s.size());
    for (std::size_t i = 0; i < g.s.size(); ++i) vals[i] = g.phi[i] * inner[i];
    return trapezoid(vals, g.h);
}

} // namespace

CvaResult cva_first_order(const ModelPairing& pairing, const MarketState& state,
                          const CorrelationTriple& corr,
                          const QuadratureConfig& quad, const CvaOptions& opts) {
    pairing.validate();
    state.validate();
    quad.validate();
    validate_correlations(corr);
    if (corr.eta != pairing.eta)
        throw PairingError("cva_first_order: corr.eta must match pairing.eta");

    const IntensityParams& intensity = pairing.intensity;
    const double t = state.t, T = state.T;
    const double rho = corr.rho, nu = corr.nu, sig = intensity.sigma;
    const double n_t = survival_factor(intensity, intensity.lambda0, T - t);
    const PriceAndGreeks u = price_for(pairing, state, quad);

    CvaResult out;
    out.pairing = pairing.name();
    out.order = CvaOrder::First;
    out.cva0 = (1.0 - n_t) * u.u;

    const Grid g = make_grid(intensity, t, T, quad.dt);
    const std::size_t n = g.s.size();
    double corr_x = 0.0, corr_y = 0.0;

    if (intensity.kind == IntensityKind::Vasicek) {
        switch (pairing.vol_model()) {
            case VolModel::Sabr: {
                const auto& sabr = std::get<SabrParams>(pairing.vol);
                const double z = std::exp(-(1.0 - sabr.gamma) * state.x);
                std::vector<double> e_ny(n);
                for (std::size_t i = 0; i < n; ++i)
                    e_ny[i] = expect_NY_sabr_vasicek(intensity, state.y, sabr.c,
                                                     nu, t, g.s[i], T);
                const double integral = outer_integral(g, e_ny);
                corr_x = -rho * sig * u.ux * z * integral;
                corr_y = -sabr.c * nu * sig * u.uy * integral;
                break;
            }
            case VolModel::HullWhite: {
                const auto& hw = std::get<HullWhiteParams>(pairing.vol);
                std::vector<double> e_ny(n);
                for (std::size_t i = 0; i < n; ++i)
                    e_ny[i] = expect_NY_hw_vasicek(intensity, hw, state.y, nu, t,
                                                   g.s[i], T);
                const double integral = outer_integral(g, e_ny);
                corr_x = -rho * sig * u.ux * integral;
                corr_y = -nu * sig * hw.c * u.uy * integral;
                break;
            }
            case VolModel::Heston: {
                const auto& hs = std::get<HestonParams>(pairing.vol);
                auto b_fn = [&](double uu) {
                    const CirMatch m = cir_lognormal_match(hs.k, hs.theta, hs.c,
                                                           state.y, t, uu, quad.dt);
                    return 0.5 * m.gamma1 - 0.125 * m.gamma2sq;
                };
                auto c_fn = [&](double uu) {
                    const CirMatch m = cir_lognormal_match(hs.k, hs.theta, hs.c,
                                                           state.y, t, uu, quad.dt);
                    return 0.5 * std::sqrt(m.gamma2sq);
                };
                std::vector<double> e_nsy(n);
                for (std::size_t i = 0; i < n; ++i)
                    e_nsy[i] = expect_N_gbm_vasicek(intensity, std::sqrt(state.y),
                                                    b_fn, c_fn, nu, t, g.s[i], T,
                                                    quad.dt);
                const double integral = outer_integral(g, e_nsy);
                corr_x = -sig * rho * u.ux * integral;
                corr_y = -sig * hs.c * nu * u.uy * integral;
                break;
            }
        }
    } else {
        std::vector<double> e_nsql(n);
        for (std::size_t i = 0; i < n; ++i)
            e_nsql[i] =
                expect_N_sqrtlam(intensity, t, g.s[i], T, quad.dt, opts.alt_decay);
        switch (pairing.vol_model()) {
            case VolModel::Sabr: {
                const auto& sabr = std::get<SabrParams>(pairing.vol);
                const double z = std::exp(-(1.0 - sabr.gamma) * state.x);
                // E[N sqrt(lam) Y] frozen as y E[N sqrt(lam)]
                const double integral = state.y * outer_integral(g, e_nsql);
                corr_x = -rho * sig * u.ux * z * integral;
                corr_y = -nu * sabr.c * sig * u.uy * integral;
                break;
            }
            case VolModel::HullWhite: {
                const auto& hw = std::get<HullWhiteParams>(pairing.vol);
                std::vector<double> inner(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const double drift =
                        opts.hw_mean_vol ? hw.b : hw.b - 0.5 * hw.c * hw.c;
                    const double e_y =
                        state.y * std::exp(drift * (g.s[i] - t));
                    inner[i] = e_nsql[i] * e_y;
                }
                const double integral = outer_integral(g, inner);
                corr_x = -rho * sig * u.ux * integral;
                corr_y = -nu * sig * hw.c * u.uy * integral;
                break;
            }
            case VolModel::Heston: {
                const auto& hs = std::get<HestonParams>(pairing.vol);
                std::vector<double> inner(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const CirMatch m = cir_lognormal_match(
                        hs.k, hs.theta, hs.c, state.y, t, g.s[i], quad.dt);
                    inner[i] = e_nsql[i] * m.e_sqrt_y;
                }
                const double integral = outer_integral(g, inner);
                corr_x = -sig * rho * u.ux * integral;
                corr_y = -sig * hs.c * nu * u.uy * integral;
                break;
            }
        }
    }

    out.cva1 = corr_x + corr_y;
    out.total = out.cva0 + out.cva1;
    return out;
}

CvaResult cva_second_order(const ModelPairing& pairing, const MarketState& state,
                           double rho, const QuadratureConfig& quad,
                           const CvaOptions& opts) {
    pairing.validate();
    state.validate();
    quad.validate();
    if (pairing.intensity.kind != IntensityKind::Cir ||
        pairing.vol_model() == VolModel::HullWhite)
        throw UnsupportedPairingError(
            "cva_second_order: available for sabr-cir and heston-cir only");
    validate_correlations({pairing.eta, rho, 0.0});

    const IntensityParams& intensity = pairing.intensity;
    const double t = state.t, T = state.T;
    const double q = intensity.q, mu = intensity.mu, sig = intensity.sigma;
    const double s2 = sig * sig;
    const double l0 = intensity.lambda0, sql = std::sqrt(l0);
    const double n_t = survival_factor(intensity, l0, T - t);
    const PriceAndGreeks u = price_for(pairing, state, quad);

    CvaResult out;
    out.pairing = pairing.name();
    out.order = CvaOrder::Second;
    out.cva0 = (1.0 - n_t) * u.u;

    const Grid g = make_grid(intensity, t, T, quad.dt);
    const std::size_t n = g.s.size();

    std::vector<double> e_nsql(n), e_nlam(n);
    for (std::size_t i = 0; i < n; ++i) {
        e_nsql[i] =
            expect_N_sqrtlam(intensity, t, g.s[i], T, quad.dt, opts.alt_decay);
        e_nlam[i] =
            expect_N_lam(intensity, t, g.s[i], T, quad.dt, opts.alt_decay);
    }
    // phi1(T-u): drift coefficient of E[N sqrt(lambda)] under the freeze.
    std::vector<double> phi1(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double decay = opts.alt_decay ? 0.5 * (q + s2 * g.phi[i])
                                            : 0.5 * (q - s2 * g.phi[i]);
        phi1[i] = (4.0 * q * mu - s2) / (8.0 * sql) - decay;
    }

    double cva1_coeff = 0.0, cva2_coeff = 0.0;

    if (pairing.vol_model() == VolModel::Sabr) {
        const auto& sabr = std::get<SabrParams>(pairing.vol);
        const double gamma = sabr.gamma, c = sabr.c;
        const double omg = 1.0 - gamma;
        const double z = std::exp(-omg * state.x);
        const double y = state.y;
        // lognormal power moments z^i E[Y_u^i]
        auto f_pow = [&](int i, double uu) {
            const double expo = opts.alt_power_moment
                                    ? 0.5 * (i - 1) * c * c
                                    : 0.5 * i * (i - 1) * c * c;
            return std::pow(z * y, i) * std::exp(expo * (uu - t));
        };
        std::vector<double> f2(n), f3(n);
        for (std::size_t i = 0; i < n; ++i) {
            f2[i] = f_pow(2, g.s[i]);
            f3[i] = f_pow(3, g.s[i]);
        }

        std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n);
        for (std::size_t i = 0; i < n; ++i) {
            k1[i] = phi1[i] * e_nsql[i];
            k2[i] = e_nsql[i] * (c * pairing.eta * f2[i] + 0.5 * gamma * f3[i]);
            k3[i] = e_nsql[i] * f2[i];
            k4[i] = e_nsql[i] * f2[i] / z; // F^2 e^{(1-gamma)x}
            k5[i] = f2[i] * (0.5 * n_t + g.phi[i] * e_nlam[i]);
        }
        const auto c1 = cumulative_trapezoid(k1, g.h);
        const auto c2 = cumulative_trapezoid(k2, g.h);
        const auto c3 = cumulative_trapezoid(k3, g.h);
        const auto c4 = cumulative_trapezoid(k4, g.h);
        const auto c5 = cumulative_trapezoid(k5, g.h);

        std::vector<double> line1(n);
        for (std::size_t i = 0; i < n; ++i) line1[i] = n_t * sql + c1[i];
        const double f1 = z * y;
        const double term_a = u.ux * f1 * outer_integral(g, line1);
        const double term_b = -omg * u.ux * outer_integral(g, c2);
        const double term_c = pairing.eta * c * u.uxx * outer_integral(g, c3);
        const double term_d = c * c * u.uxy * outer_integral(g, c4);
        cva1_coeff = -(term_a + term_b + term_c + term_d);
        cva2_coeff = -(u.uxx - omg * u.ux) * outer_integral(g, c5);
    } else {
        const auto& hs = std::get<HestonParams>(pairing.vol);
        const double k = hs.k, theta = hs.theta, c = hs.c;
        const double y = state.y, sqy = std::sqrt(y);

        std::vector<double> e_sqy(n), e_y(n);
        for (std::size_t i = 0; i < n; ++i) {
            const CirMatch m =
                cir_lognormal_match(k, theta, c, y, t, g.s[i], quad.dt);
            e_sqy[i] = m.e_sqrt_y;
            e_y[i] = m.e_y;
        }

        std::vector<double> k1(n), k2(n), k3(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double decay_q = opts.alt_decay
                                       ? 0.5 * (q + k + s2 * g.phi[i])
                                       : 0.5 * (q + k - s2 * g.phi[i]);
            k1[i] = ((4.0 * k * theta - c * c) / (8.0 * sqy) -
                     decay_q * e_sqy[i]) *
                    e_nsql[i];
            k2[i] = e_sqy[i] * e_nsql[i];
            k3[i] = (0.5 * n_t + g.phi[i] * e_nlam[i]) * e_y[i];
        }
        const auto c1 = cumulative_trapezoid(k1, g.h);
        const auto csq = cumulative_trapezoid(e_sqy, g.h);
        const auto c2 = cumulative_trapezoid(k2, g.h);
        const auto c3 = cumulative_trapezoid(k3, g.h);

        std::vector<double> line1(n);
        for (std::size_t i = 0; i < n; ++i)
            line1[i] = sqy * sql + (4.0 * q * mu - s2) / (8.0 * sql) * csq[i];
        const double term_a =
            u.ux * (n_t * outer_integral(g, line1) + outer_integral(g, c1));
        const double term_b =
            0.5 * pairing.eta * c * u.uxx * outer_integral(g, c2);
        const double term_c = 0.5 * c * c * u.uxy * outer_integral(g, c2);
        cva1_coeff = -(term_a + term_b + term_c);
        cva2_coeff = -u.uxx * outer_integral(g, c3);
    }

    const double rs = rho * sig;
    out.cva1 = rs * cva1_coeff;
    out.cva2 = rs * rs * cva2_coeff;
    out.total = out.cva0 + out.cva1 + *out.cva2;
    return out;
}

} // namespace svcva
