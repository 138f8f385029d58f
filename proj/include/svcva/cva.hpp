#pragma once

#include <optional>
#include <string>

#include "svcva/params.hpp"
#include "svcva/quadrature.hpp"

namespace svcva {

enum class CvaOrder { First, Second };

// Convention switches for the expansion internals.  Defaults are the
// variants validated against the Monte Carlo benchmark; the alternates are
// retained for comparison runs.
struct CvaOptions {
    // alternate drift freezing in E[N sqrt(lambda)] / E[N lambda]
    bool alt_decay = false;
    // lognormal power moment E[Y^i] with exponent (i-1)c^2/2 instead of
    // i(i-1)c^2/2
    bool alt_power_moment = false;
    // hw-cir vol factor E[Y] = y e^{b dt} instead of y e^{(b-c^2/2) dt}
    bool hw_mean_vol = false;
};

struct CvaResult {
    std::string pairing;
    CvaOrder order = CvaOrder::First;
    double cva0 = 0.0;            // (1 - N^t_t) * U
    double cva1 = 0.0;            // evaluated first-order correction
    std::optional<double> cva2;   // evaluated second-order term
    double total = 0.0;
};

// First-order correlation expansion of the vulnerable-call CVA for any of
// the six volatility/intensity pairings.  corr.eta must equal pairing.eta.
CvaResult cva_first_order(const ModelPairing& pairing, const MarketState& state,
                          const CorrelationTriple& corr,
                          const QuadratureConfig& quad,
                          const CvaOptions& opts = {});

// Second-order expansion in (rho sigma); defined for the sabr-cir and
// heston-cir pairings with nu = 0 structurally.
CvaResult cva_second_order(const ModelPairing& pairing, const MarketState& state,
                           double rho, const QuadratureConfig& quad,
                           const CvaOptions& opts = {});

} // namespace svcva
