#include "svcva/intensity.hpp"

#include <cmath>

#include "svcva/errors.hpp"
#include "svcva/quadrature.hpp"

namespace svcva {

namespace {

void check_window(double t, double s, double T) {
    if (!(s >= t)) throw DomainError("intensity: need s >= t");
    if (!(T >= s)) throw DomainError("intensity: need s <= T");
}

void check_cir(const IntensityParams& p) {
    p.validate();
    if (p.kind != IntensityKind::Cir)
        throw DomainError("intensity: expectation defined for the Cir model only");
}

} // namespace

AffineFactors affine_factors(const IntensityParams& params, double tau) {
    params.validate();
    if (tau < 0.0) throw DomainError("affine_factors: tau must be non-negative");
    AffineFactors out;
    if (tau == 0.0) return out;
    const double q = params.q, mu = params.mu, s2 = params.sigma * params.sigma;
    if (params.kind == IntensityKind::Vasicek) {
        const double phi = std::expm1(-q * tau) / q; // -(1-e^{-q tau})/q
        out.phi = phi;
        out.psi = -(mu - s2 / (2.0 * q * q)) * (phi + tau) - s2 * phi * phi / (4.0 * q);
    } else {
        const double p = std::sqrt(q * q + 2.0 * s2);
        const double em = std::expm1(p * tau);
        // p - q = 2 s2 / (p + q), so every term below is explicitly O(s2)
        // and psi = -(2 q mu / s2) * [...] stays finite as sigma -> 0
        const double pq = p + q;
        out.phi = -2.0 * em / (2.0 * s2 / pq + pq * (1.0 + em));
        auto log1p_over = [](double z) {
            return z == 0.0 ? 1.0 : std::log1p(z) / z;
        };
        const double u1 = -s2 / (p * pq);
        const double u3 = 2.0 * s2 / (pq * pq) * std::exp(-p * tau);
        const double t1 = log1p_over(u1) * (-1.0 / (p * pq));
        const double t3 = log1p_over(u3) * (2.0 * std::exp(-p * tau) / (pq * pq));
        out.psi = -2.0 * q * mu * (t1 + tau / pq + t3);
    }
    return out;
}

double survival_factor(const IntensityParams& params, double lambda, double tau) {
    const AffineFactors f = affine_factors(params, tau);
    return std::exp(f.phi * lambda + f.psi);
}

double expect_N_sqrtlam(const IntensityParams& params, double t, double s,
                        double T, double dt, bool alt_decay) {
    check_cir(params);
    check_window(t, s, T);
    const double l0 = params.lambda0;
    const double q = params.q, mu = params.mu, s2 = params.sigma * params.sigma;
    const double n_t = survival_factor(params, l0, T - t);
    const double sql = std::sqrt(l0);
    if (s == t) return n_t * sql;

    const auto grid = uniform_grid(t, s, dt);
    const double h = grid[1] - grid[0];
    std::vector<double> rate(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double phi = affine_factors(params, T - grid[i]).phi;
        rate[i] = alt_decay ? 0.25 * (q + s2 * phi) : 0.5 * (q - s2 * phi);
    }
    const auto acc = cumulative_trapezoid(rate, h);
    std::vector<double> kernel(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        kernel[i] = std::exp(acc[i] - acc.back());
    const double tail = trapezoid(kernel, h);
    return n_t * (sql * std::exp(-acc.back()) +
                  (4.0 * q * mu - s2) / (8.0 * sql) * tail);
}

double expect_N_lam(const IntensityParams& params, double t, double s,
                    double T, double dt, bool alt_decay) {
    check_cir(params);
    check_window(t, s, T);
    const double l0 = params.lambda0;
    const double q = params.q, mu = params.mu, s2 = params.sigma * params.sigma;
    const double n_t = survival_factor(params, l0, T - t);
    if (s == t) return n_t * l0;

    const auto grid = uniform_grid(t, s, dt);
    const double h = grid[1] - grid[0];
    std::vector<double> rate(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double phi = affine_factors(params, T - grid[i]).phi;
        rate[i] = alt_decay ? q + s2 * phi : q - s2 * phi;
    }
    const auto acc = cumulative_trapezoid(rate, h);
    std::vector<double> kernel(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        kernel[i] = std::exp(acc[i] - acc.back());
    const double tail = trapezoid(kernel, h);
    return n_t * (l0 * std::exp(-acc.back()) + q * mu * tail);
}

namespace {

void check_vasicek(const IntensityParams& p) {
    p.validate();
    if (p.kind != IntensityKind::Vasicek)
        throw DomainError("intensity: expectation defined for the Vasicek model only");
}

// Deterministic part shared by every E[N * lognormal] closed form:
//   (sigma^2/(2q^2) - mu)(T-t) + [l0 - mu + sigma^2/(4q^2)(3 - e^{-q(T-t)})] phi(T-t)
// At s = t this exponent reproduces phi*l0 + psi exactly.
double vasicek_base_exponent(const IntensityParams& p, double t, double T) {
    const double q = p.q, mu = p.mu, s2 = p.sigma * p.sigma, l0 = p.lambda0;
    const double tau = T - t;
    const double phi = -(1.0 - std::exp(-q * tau)) / q;
    const double bracket =
        l0 - mu + s2 / (4.0 * q * q) * (3.0 - std::exp(-q * tau));
    return (s2 / (2.0 * q * q) - mu) * tau + bracket * phi;
}

// int_t^s phi(T-u) du for the Vasicek phi.
double int_phi_vasicek(double q, double t, double s, double T) {
    const double es = std::exp(-q * (T - s));
    const double et = std::exp(-q * (T - t));
    return -((s - t) - (es - et) / q) / q;
}

} // namespace

double expect_NY_sabr_vasicek(const IntensityParams& params, double y,
                              double c, double nu, double t, double s, double T) {
    check_vasicek(params);
    check_window(t, s, T);
    if (!(y > 0.0)) throw DomainError("expect_NY: y must be positive");
    const double q = params.q, mu = params.mu, l0 = params.lambda0;
    const double s2 = params.sigma * params.sigma, sig = params.sigma;
    const double es = std::exp(-q * (T - s));
    const double et = std::exp(-q * (T - t));
    const double phi_t = -(1.0 - et) / q;

    const double f1 = -mu * (T - t) - 0.5 * c * c * (s - t) +
                      s2 / (2.0 * q * q) * (T - s) + (l0 - mu) * phi_t -
                      s2 / (4.0 * q * q * q) * (3.0 - 4.0 * es + es * es);
    const double f2sq =
        (s2 / (q * q) - 2.0 * c * nu * sig / q) * (s - t) -
        2.0 / q * (s2 / (q * q) - sig * c * nu / q) * (es - et) +
        s2 / (2.0 * q * q * q) * (es * es - et * et) + c * c * (s - t);
    return y * std::exp(f1 + 0.5 * f2sq);
}

double expect_NY_hw_vasicek(const IntensityParams& params,
                            const HullWhiteParams& hw, double y, double nu,
                            double t, double s, double T) {
    check_vasicek(params);
    hw.validate();
    check_window(t, s, T);
    if (!(y > 0.0)) throw DomainError("expect_NY: y must be positive");
    const double base = vasicek_base_exponent(params, t, T);
    const double cross =
        params.sigma * nu * hw.c * int_phi_vasicek(params.q, t, s, T);
    return y * std::exp(base + hw.b * (s - t) + cross);
}

double expect_N_gbm_vasicek(const IntensityParams& params, double w0,
                            const std::function<double(double)>& b,
                            const std::function<double(double)>& c, double nu,
                            double t, double s, double T, double dt) {
    check_vasicek(params);
    check_window(t, s, T);
    const double base = vasicek_base_exponent(params, t, T);
    if (s == t) return w0 * std::exp(base);

    const auto grid = uniform_grid(t, s, dt);
    const double h = grid[1] - grid[0];
    std::vector<double> bv(grid.size()), cphi(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = grid[i];
        const double phi = -(1.0 - std::exp(-params.q * (T - u))) / params.q;
        bv[i] = b(u);
        cphi[i] = c(u) * phi;
    }
    const double drift = trapezoid(bv, h);
    const double cross = params.sigma * nu * trapezoid(cphi, h);
    return w0 * std::exp(base + drift + cross);
}

} // namespace svcva
