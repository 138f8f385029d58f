#pragma once

#include <functional>

#include "svcva/params.hpp"

namespace svcva {

// Factors of the affine zero-coupon representation
//   E_s[ exp(-int_s^T lambda_u du) ] = exp( phi(T-s)*lambda_s + psi(T-s) ).
// phi is non-positive for both intensity models.
struct AffineFactors {
    double phi = 0.0;
    double psi = 0.0;
};

AffineFactors affine_factors(const IntensityParams& params, double tau);

// exp(phi(tau)*lambda + psi(tau)); the time-s conditional survival factor.
double survival_factor(const IntensityParams& params, double lambda, double tau);

// The expectations below are taken at time t with lambda_t frozen at
// params.lambda0, for the forward-survival martingale
//   N^t_s = exp(-int_t^s lambda) * exp(phi(T-s) lambda_s + psi(T-s)).
// Inner time integrals use the trapezoid rule with step dt.

// E_t[ N^t_s * sqrt(lambda_s) ], Cir intensity.  First-order drift freeze:
//   E = N^t_t [ sqrt(l0) e^{-int_t^s beta} + (4 q mu - sigma^2)/(8 sqrt(l0))
//               int_t^s e^{-int_u^s beta} du ],
// beta(u) = (q - sigma^2 phi(T-u))/2.  alt_decay selects the alternate
// freezing beta(u) = (q + sigma^2 phi(T-u))/4 kept for comparison.
double expect_N_sqrtlam(const IntensityParams& params, double t, double s,
                        double T, double dt, bool alt_decay = false);

// E_t[ N^t_s * lambda_s ], Cir intensity:
//   E = N^t_t e^{-int_t^s w} [ l0 + q mu int_t^s e^{int_t^r w} dr ],
// w(r) = q - sigma^2 phi(T-r); alt_decay selects w = q + sigma^2 phi(T-r).
double expect_N_lam(const IntensityParams& params, double t, double s,
                    double T, double dt, bool alt_decay = false);

// E_t[ N^t_s Y_s ] for a driftless lognormal vol Y (dY = c Y dB2) against a
// Vasicek intensity, corr(B2, B3) = nu.  Closed form.
double expect_NY_sabr_vasicek(const IntensityParams& params, double y,
                              double c, double nu, double t, double s, double T);

// Same expectation for the constant-coefficient lognormal vol
// dY = b Y dt + c Y dB2.  Closed form.
double expect_NY_hw_vasicek(const IntensityParams& params,
                            const HullWhiteParams& hw, double y, double nu,
                            double t, double s, double T);

// General case: E_t[ N^t_s W_s ] where W is the lognormal surrogate
//   dW = b(u) W du + c(u) W dB2,  W_t = w0,
// against a Vasicek intensity.  The two u-integrals use trapezoid step dt.
double expect_N_gbm_vasicek(const IntensityParams& params, double w0,
                            const std::function<double(double)>& b,
                            const std::function<double(double)>& c, double nu,
                            double t, double s, double T, double dt);

} // namespace svcva
