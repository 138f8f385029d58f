#include "svcva/black.hpp"

#include <cmath>

#include "svcva/errors.hpp"

namespace svcva {

double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
    static const double inv_sqrt2 = 0.7071067811865475244;
    return 0.5 * std::erfc(-x * inv_sqrt2);
}

PriceAndGreeks black_call(double x, double kappa, double vol, double tau) {
    if (tau < 0.0) throw DomainError("black_call: tau must be non-negative");
    if (vol < 0.0) throw DomainError("black_call: vol must be non-negative");
    PriceAndGreeks out;
    const double s = std::exp(x), k = std::exp(kappa);
    const double stddev = vol * std::sqrt(tau);
    if (stddev == 0.0) {
        out.u = std::max(s - k, 0.0);
        out.ux = x > kappa ? s : 0.0;
        return out;
    }
    const double d1 = (x - kappa) / stddev + 0.5 * stddev;
    const double d2 = d1 - stddev;
    const double n1 = norm_cdf(d1), n2 = norm_cdf(d2);
    const double pdf1 = norm_pdf(d1);
    out.u = s * n1 - k * n2;
    out.ux = s * n1;
    out.uy = s * pdf1 * std::sqrt(tau);          // vega in vol
    out.uxx = s * n1 + s * pdf1 / stddev;
    out.uxy = -s * pdf1 * d2 / vol;              // d(ux)/d(vol)
    return out;
}

} // namespace svcva
