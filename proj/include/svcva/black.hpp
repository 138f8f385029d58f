#pragma once

namespace svcva {

// Price of the call in log coordinates together with the sensitivities the
// expansion needs.  uy is the derivative in the pricer's own second argument
// (vol factor for the model pricers, the volatility itself for black_call).
struct PriceAndGreeks {
    double u = 0.0;
    double ux = 0.0;
    double uy = 0.0;
    double uxx = 0.0;
    double uxy = 0.0;
};

double norm_pdf(double x);
double norm_cdf(double x);

// Zero-rate Black call on S = e^x, strike e^kappa, total volatility
// vol*sqrt(tau).  tau = 0 or vol = 0 degrade to the payoff.
PriceAndGreeks black_call(double x, double kappa, double vol, double tau);

} // namespace svcva
