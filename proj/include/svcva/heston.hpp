#pragma once

#include "svcva/black.hpp"
#include "svcva/params.hpp"
#include "svcva/quadrature.hpp"

namespace svcva {

// Fourier call price for dS = sqrt(Y) S dB1, dY = k(theta-Y)dt + c sqrt(Y) dB2,
// corr(B1,B2) = eta, with greeks obtained by differentiating under the
// integral sign.  The two probability integrals use adaptive composite
// Gauss-Legendre panels on [0, quad.upper_limit].
PriceAndGreeks heston_call_and_greeks(const MarketState& state,
                                      const HestonParams& heston, double eta,
                                      const QuadratureConfig& quad);

// Lognormal moment match of the square-root variance process at horizon s:
// first two moments m1, m2 pin a lognormal surrogate with log-derivative
// drift gamma1 and squared vol gamma2sq, from which E[sqrt(Y_s)] follows.
struct CirMatch {
    double gamma1 = 0.0;
    double gamma2sq = 0.0;
    double e_sqrt_y = 0.0;
    double e_y = 0.0;
};

// Tiny negative gamma2sq from rounding is clipped to zero; a value below
// -1e-12 raises NumericalError.  The e_sqrt_y integral uses trapezoid step dt.
CirMatch cir_lognormal_match(double k, double theta, double c, double y,
                             double t, double s, double dt = 1e-2);

} // namespace svcva
