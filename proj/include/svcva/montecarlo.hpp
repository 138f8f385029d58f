#pragma once

#include <cstdint>
#include <vector>

#include "svcva/params.hpp"
#include "svcva/quadrature.hpp"

namespace svcva {

struct McConfig {
    std::int64_t n_paths = 100000;
    int n_steps = 500;
    std::uint64_t seed = 12345;

    void validate() const;
};

struct PathBatch {
    std::vector<double> x_T;        // terminal log-spot per path
    std::vector<double> int_lambda; // trapezoid of the intensity per path
    // fraction of paths whose survival weight 1-e^{-int lambda} left [0,1]
    // (possible under Vasicek via negative intensity)
    double frac_weight_outside = 0.0;
};

struct McEstimate {
    double cva = 0.0;
    double std_error = 0.0;
    double cv_correlation = 0.0;
    double cv_beta = 0.0;
    double raw_cva = 0.0;           // plain estimator, no control variate
    double raw_std_error = 0.0;
    double default_free_mean = 0.0; // sample mean of the uncapped call payoff
};

// Correlated Euler simulation of (X, Y, lambda) to T.  Schemes: exact
// lognormal vol for sabr/hw, full-truncation Euler for the heston variance
// and the cir intensity, exact Gaussian transition for the vasicek
// intensity, log-Euler for the asset with the CEV factor frozen per step.
PathBatch simulate_paths(const ModelPairing& pairing, const MarketState& state,
                         const CorrelationTriple& corr, const McConfig& mc);

// Asset-only simulation (no default leg); returns terminal log-spots.
std::vector<double> simulate_default_free(const VolParams& vol, double eta,
                                          const MarketState& state,
                                          const McConfig& mc);

// CVA estimator with the default-free call payoff as control variate;
// cv_mean is the known expectation of that payoff.
McEstimate mc_cva(const PathBatch& paths, const MarketState& state,
                  double cv_mean);

// Convenience wrapper: simulates, picks the control-variate mean (model
// pricer for sabr/heston, independent pilot sample for hw) and estimates.
McEstimate run_mc_cva(const ModelPairing& pairing, const MarketState& state,
                      const CorrelationTriple& corr, const McConfig& mc,
                      const QuadratureConfig& quad);

} // namespace svcva
