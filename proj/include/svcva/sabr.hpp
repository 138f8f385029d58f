#pragma once

#include "svcva/black.hpp"
#include "svcva/params.hpp"

namespace svcva {

// Truncated lognormal implied-vol expansion for the CEV-exponent model
//   dS = Y S^gamma dB1, dY = c Y dB2, corr(B1,B2) = eta,
// evaluated at log-spot state.x, vol factor state.y, log-strike state.kappa.
double sabr_implied_vol(const MarketState& state, const SabrParams& sabr,
                        double eta);

// Black call at the expansion vol, with greeks.  ux and uy carry the implied
// vol's own x / y dependence; uxx and uxy are central differences of ux.
PriceAndGreeks sabr_call_and_greeks(const MarketState& state,
                                    const SabrParams& sabr, double eta);

} // namespace svcva
