#pragma once

#include "svcva/black.hpp"
#include "svcva/params.hpp"
#include "svcva/quadrature.hpp"

namespace svcva {

// Power-series call price for dS = Y S dB1, dY = b Y dt + c Y dB2,
// corr(B1,B2) = eta <= 0: Black price at the integrated-moment volatility
// plus the first correction in eta.  Greeks by central finite differences.
PriceAndGreeks hw_call(const MarketState& state, const HullWhiteParams& hw,
                       double eta, const QuadratureConfig& quad);

} // namespace svcva
