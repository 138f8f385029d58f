#include "svcva/heston.hpp"

#include <array>
#include <cmath>
#include <complex>

#include "svcva/errors.hpp"

namespace svcva {

namespace {

using cplx = std::complex<double>;

// log(1+z) without cancellation for small |z|.
cplx clog1p(const cplx& z) {
    if (std::abs(z) < 1e-4)
        return z * (1.0 - z * (0.5 - z * (1.0 / 3.0 - 0.25 * z)));
    return std::log(1.0 + z);
}

// Branch-stable log characteristic exponent pieces for one probability index.
// u_j = +1/2 (j = 1) or -1/2 (j = 2); delta_j = 1 or 0.
struct CfTerms {
    cplx c_term;
    cplx d_term;
};

CfTerms cf_terms(double k, double theta, double c, double eta, double tau,
                 int j, double zeta) {
    const cplx i(0.0, 1.0);
    const double u_j = (j == 1) ? 0.5 : -0.5;
    const double delta_j = (j == 1) ? 1.0 : 0.0;
    const cplx a = k - eta * c * (delta_j + i * zeta);
    const cplx w = 2.0 * u_j * i * zeta - zeta * zeta;
    const cplx d = std::sqrt(a * a - c * c * w);
    // a - d written as c^2 w / (a + d) to avoid cancellation when c is tiny.
    const cplx apd = a + d;
    const cplx g = c * c * w / (apd * apd);
    const cplx e = std::exp(-d * tau);
    CfTerms out;
    out.d_term = (w / apd) * (1.0 - e) / (1.0 - g * e);
    out.c_term = k * theta *
                 (w * tau / apd -
                  (2.0 / (c * c)) * (clog1p(-g * e) - clog1p(-g)));
    return out;
}

struct Integrals {
    // per probability index j: {P-kernel, dx, dxx, dy, dxy}
    std::array<std::array<double, 5>, 2> v{};
};

} // namespace

PriceAndGreeks heston_call_and_greeks(const MarketState& state,
                                      const HestonParams& heston, double eta,
                                      const QuadratureConfig& quad) {
    state.validate();
    heston.validate();
    quad.validate();
    if (!(eta > -1.0 && eta < 1.0))
        throw DomainError("heston_call_and_greeks: eta must lie in (-1,1)");
    const double tau = state.tau();
    const double x = state.x, y = state.y, kappa = state.kappa;
    const double k = heston.k, theta = heston.theta, c = heston.c;

    const cplx i(0.0, 1.0);
    auto eval = [&](double zeta, Integrals& acc, double weight) {
        for (int j = 1; j <= 2; ++j) {
            const CfTerms terms = cf_terms(k, theta, c, eta, tau, j, zeta);
            const cplx f = std::exp(terms.c_term + terms.d_term * y +
                                    i * zeta * x - i * zeta * kappa);
            const cplx base = f / (i * zeta);
            auto& row = acc.v[j - 1];
            row[0] += weight * base.real();
            row[1] += weight * f.real();
            row[2] += weight * (i * zeta * f).real();
            row[3] += weight * (terms.d_term * base).real();
            row[4] += weight * (terms.d_term * f).real();
        }
    };

    // 16-point Gauss-Legendre positive half nodes.
    static const double gx[8] = {
        0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
        0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
        0.9445750230732326, 0.9894009349916499};
    static const double gw[8] = {
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
        0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
        0.0622535239386479, 0.0271524594117541};

    auto integrate = [&](int panels) {
        Integrals acc;
        const double w = quad.upper_limit / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = (p + 0.5) * w;
            const double half = 0.5 * w;
            for (int n = 0; n < 8; ++n) {
                const double dz = half * gx[n];
                eval(mid - dz, acc, gw[n] * half);
                eval(mid + dz, acc, gw[n] * half);
            }
        }
        return acc;
    };

    int panels = std::max(4, quad.n_nodes / 16);
    Integrals prev = integrate(panels);
    Integrals cur;
    bool converged = false;
    while (panels <= 4096) {
        panels *= 2;
        cur = integrate(panels);
        double diff = 0.0;
        for (int j = 0; j < 2; ++j)
            for (int m = 0; m < 5; ++m)
                diff = std::max(diff, std::fabs(cur.v[j][m] - prev.v[j][m]));
        if (diff < 1e-9) {
            converged = true;
            break;
        }
        prev = cur;
    }
    if (!converged)
        throw QuadratureError(
            "heston_call_and_greeks: fourier integral failed to converge");

    // Truncation check on the probability integrand at the endpoint.
    for (int j = 1; j <= 2; ++j) {
        const CfTerms terms = cf_terms(k, theta, c, eta, tau, j, quad.upper_limit);
        const double tail =
            std::abs(std::exp(terms.c_term + terms.d_term * y)) / quad.upper_limit;
        if (!(tail < 1e-12))
            throw QuadratureError(
                "heston_call_and_greeks: integrand above 1e-12 at upper_limit; "
                "increase quadrature upper_limit");
    }

    const double inv_pi = 1.0 / 3.14159265358979323846;
    const double p1 = 0.5 + inv_pi * cur.v[0][0];
    const double p2 = 0.5 + inv_pi * cur.v[1][0];
    const double dx1 = inv_pi * cur.v[0][1], dx2 = inv_pi * cur.v[1][1];
    const double dxx1 = inv_pi * cur.v[0][2], dxx2 = inv_pi * cur.v[1][2];
    const double dy1 = inv_pi * cur.v[0][3], dy2 = inv_pi * cur.v[1][3];
    const double dxy1 = inv_pi * cur.v[0][4], dxy2 = inv_pi * cur.v[1][4];

    const double es = std::exp(x), ek = std::exp(kappa);
    PriceAndGreeks out;
    out.u = es * p1 - ek * p2;
    out.ux = es * (p1 + dx1) - ek * dx2;
    out.uy = es * dy1 - ek * dy2;
    out.uxx = es * (p1 + 2.0 * dx1 + dxx1) - ek * dxx2;
    out.uxy = es * (dy1 + dxy1) - ek * dxy2;
    if (!std::isfinite(out.u) || !std::isfinite(out.ux) || !std::isfinite(out.uy))
        throw NumericalError("heston_call_and_greeks: non-finite result");
    return out;
}

CirMatch cir_lognormal_match(double k, double theta, double c, double y,
                             double t, double s, double dt) {
    if (!(k > 0.0 && theta > 0.0 && c > 0.0 && y > 0.0))
        throw DomainError("cir_lognormal_match: k, theta, c, y must be positive");
    if (!(s >= t)) throw DomainError("cir_lognormal_match: need s >= t");

    const double a2 = (y - theta) * (y - theta) - c * c / k * (y - 0.5 * theta);
    const double b2 = (y - theta) * (2.0 * theta + c * c / k);
    const double c2 = theta * (theta + 0.5 * c * c / k);

    auto gammas = [&](double v) {
        const double ekv = std::exp(-k * v);
        const double m1 = theta + (y - theta) * ekv;
        const double m2 = a2 * ekv * ekv + b2 * ekv + c2;
        if (!(m1 > 0.0) || !(m2 > 0.0))
            throw NumericalError("cir_lognormal_match: non-positive moment");
        const double g1 = -k * (y - theta) * ekv / m1;
        const double m2p = -2.0 * k * a2 * ekv * ekv - k * b2 * ekv;
        double g2sq = m2p / m2 - 2.0 * g1;
        if (g2sq < 0.0) {
            if (g2sq < -1e-12)
                throw NumericalError(
                    "cir_lognormal_match: negative matched variance");
            g2sq = 0.0;
        }
        return std::pair<double, double>(g1, g2sq);
    };

    CirMatch out;
    const double v_end = s - t;
    auto [g1, g2sq] = gammas(v_end);
    out.gamma1 = g1;
    out.gamma2sq = g2sq;
    out.e_y = theta + (y - theta) * std::exp(-k * v_end);
    if (v_end == 0.0) {
        out.e_sqrt_y = std::sqrt(y);
        return out;
    }
    const auto grid = uniform_grid(0.0, v_end, dt);
    std::vector<double> integrand(grid.size());
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        auto [gg1, gg2sq] = gammas(grid[idx]);
        integrand[idx] = 0.5 * gg1 - 0.125 * gg2sq;
    }
    out.e_sqrt_y =
        std::sqrt(y) * std::exp(trapezoid(integrand, grid[1] - grid[0]));
    return out;
}

} // namespace svcva
