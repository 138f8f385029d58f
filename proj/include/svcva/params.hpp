#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "svcva/errors.hpp"

namespace svcva {

// Correlation structure between the three Brownian drivers:
//   asset        dB1 = eta*dB + sqrt(1-eta^2)*dZ
//   volatility   dB2 = dB
//   intensity    dB3 = nu*dB + alpha*dZ + beta*dU
// with (B, Z, U) independent.  eta = corr(asset, vol), rho = corr(asset,
// intensity), nu = corr(vol, intensity).
struct CorrelationTriple {
    double eta = 0.0;
    double rho = 0.0;
    double nu = 0.0;
};

// Loadings of the intensity driver on the independent factors.
struct CorrelationLoadings {
    double alpha = 0.0;
    double beta = 0.0;
};

// Checks that the implied 3x3 correlation matrix is positive definite and
// returns the intensity-driver loadings.  Throws CorrelationDomainError with
// the violated inequality spelled out.
CorrelationLoadings validate_correlations(const CorrelationTriple& corr);

struct SabrParams {
    double gamma = 0.5; // CEV exponent, in (0,1)
    double c = 0.3;     // vol-of-vol

    void validate() const;
};

struct HullWhiteParams {
    double b = 0.0; // lognormal vol drift
    double c = 0.3; // vol-of-vol

    void validate() const;
};

struct HestonParams {
    double k = 1.0;     // variance mean-reversion speed
    double theta = 0.04; // long-run variance
    double c = 0.3;     // vol-of-vol

    void validate() const;
    bool feller_ok() const { return c * c <= 2.0 * k * theta; }
};

enum class IntensityKind { Vasicek, Cir };

// Default intensity dlambda = q*(mu - lambda)*dt + sigma*(sqrt(lambda))*dB3,
// the square root present for Cir only.
struct IntensityParams {
    IntensityKind kind = IntensityKind::Vasicek;
    double lambda0 = 0.01;
    double q = 0.1;
    double mu = 0.01;
    double sigma = 0.01;

    void validate() const;
    // Meaningful for Cir only; Vasicek reports true.
    bool feller_ok() const;
};

// Pricing state: log-spot x, vol factor y, log-strike kappa, window [t, T].
struct MarketState {
    double t = 0.0;
    double T = 0.5;
    double x = 0.0;
    double y = 0.2;
    double kappa = 0.0;

    void validate() const;
    double tau() const { return T - t; }
};

using VolParams = std::variant<SabrParams, HullWhiteParams, HestonParams>;

enum class VolModel { Sabr, HullWhite, Heston };

VolModel vol_model_of(const VolParams& vol);
std::string_view vol_model_name(VolModel m);
std::string_view intensity_kind_name(IntensityKind k);

// One of the six volatility/intensity combinations.  eta (asset-vol
// correlation) is part of the fitted volatility block, so it lives here and
// not in the per-run CorrelationTriple; the two must agree.
struct ModelPairing {
    VolParams vol;
    double eta = 0.0;
    IntensityParams intensity;

    void validate() const;
    VolModel vol_model() const { return vol_model_of(vol); }
    std::string name() const;
};

// Resolved builtin parameter bundle.  Intensity sets fill `intensity`;
// model-fit sets fill the vol block, eta, y0 and the strike level.
struct ParameterSet {
    std::string name;
    std::optional<IntensityParams> intensity;
    std::optional<VolParams> vol;
    std::optional<double> eta;
    std::optional<double> y0;
    std::optional<double> strike; // plain strike level K, not log
    std::vector<std::string> warnings;
};

// Known names: vasicek-1, vasicek-2, cir-1 .. cir-4, heston-fit, sabr-fit.
// Feller violations produce a warning entry, never a rejection.
ParameterSet builtin_parameter_set(std::string_view name);

std::vector<std::string> builtin_parameter_set_names();

} // namespace svcva
