#include "svcva/montecarlo.hpp"

#include <cmath>

#include "svcva/errors.hpp"
#include "svcva/heston.hpp"
#include "svcva/rng.hpp"
#include "svcva/sabr.hpp"

namespace svcva {

namespace {

// The CEV diffusion (gamma < 1) attains zero and is absorbed there.  The
// log-Euler step cannot represent absorption: below this level the frozen
// factor e^{-(1-gamma)x} makes the step size double-exponentially explosive,
// while the payoff contribution is already zero to machine precision.  Freeze
// the asset once it crosses; each unfrozen step keeps E[e^{dx}] = 1 exactly.
constexpr double kAbsorbedLogSpot = -30.0;

} // namespace

double PathRng::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586477 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

void McConfig::validate() const {
    if (n_paths < 1) throw DomainError("mc: n_paths must be positive");
    if (n_steps < 1) throw DomainError("mc: n_steps must be positive");
}

PathBatch simulate_paths(const ModelPairing& pairing, const MarketState& state,
                         const CorrelationTriple& corr, const McConfig& mc) {
    pairing.validate();
    state.validate();
    mc.validate();
    const CorrelationLoadings load = validate_correlations(corr);
    if (corr.eta != pairing.eta)
        throw PairingError("simulate_paths: corr.eta must match pairing.eta");

    const double eta = corr.eta, nu = corr.nu;
    const double alpha = load.alpha, beta = load.beta;
    const double seta = std::sqrt(1.0 - eta * eta);
    const double dt = state.tau() / mc.n_steps;
    const double sqdt = std::sqrt(dt);

    const VolModel vm = pairing.vol_model();
    double sabr_omg = 0.0, vol_b = 0.0, vol_c = 0.0, hk = 0.0, htheta = 0.0;
    switch (vm) {
        case VolModel::Sabr: {
            const auto& p = std::get<SabrParams>(pairing.vol);
            sabr_omg = 1.0 - p.gamma;
            vol_c = p.c;
            break;
        }
        case VolModel::HullWhite: {
            const auto& p = std::get<HullWhiteParams>(pairing.vol);
            vol_b = p.b;
            vol_c = p.c;
            break;
        }
        case VolModel::Heston: {
            const auto& p = std::get<HestonParams>(pairing.vol);
            hk = p.k;
            htheta = p.theta;
            vol_c = p.c;
            break;
        }
    }
    const IntensityParams& ip = pairing.intensity;
    const bool vasicek = ip.kind == IntensityKind::Vasicek;
    // exact Gaussian transition factors for the vasicek intensity
    const double lam_e = std::exp(-ip.q * dt);
    const double lam_sd =
        ip.sigma * std::sqrt(-std::expm1(-2.0 * ip.q * dt) / (2.0 * ip.q));
    const double vol_drift = (vol_b - 0.5 * vol_c * vol_c) * dt;

    PathBatch out;
    out.x_T.resize(static_cast<std::size_t>(mc.n_paths));
    out.int_lambda.resize(static_cast<std::size_t>(mc.n_paths));
    std::int64_t n_outside = 0;

    for (std::int64_t p = 0; p < mc.n_paths; ++p) {
        PathRng rng(mc.seed, static_cast<std::uint64_t>(p));
        double x = state.x, y = state.y, lam = ip.lambda0;
        double acc = 0.0;
        for (int step = 0; step < mc.n_steps; ++step) {
            const double zb = rng.next_normal();
            const double zz = rng.next_normal();
            const double zu = rng.next_normal();
            const double db1 = (eta * zb + seta * zz) * sqdt;
            const double db2 = zb * sqdt;
            const double z3 = nu * zb + alpha * zz + beta * zu;
            const double db3 = z3 * sqdt;

            // asset first, using start-of-step vol
            switch (vm) {
                case VolModel::Sabr: {
                    if (x > kAbsorbedLogSpot) {
                        const double e = std::exp(-sabr_omg * x);
                        const double v = y * e;
                        x += -0.5 * v * v * dt + v * db1;
                    }
                    y *= std::exp(vol_c * db2 - 0.5 * vol_c * vol_c * dt);
                    break;
                }
                case VolModel::HullWhite: {
                    x += -0.5 * y * y * dt + y * db1;
                    y *= std::exp(vol_drift + vol_c * db2);
                    break;
                }
                case VolModel::Heston: {
                    const double yp = y > 0.0 ? y : 0.0;
                    x += -0.5 * yp * dt + std::sqrt(yp) * db1;
                    y += hk * (htheta - yp) * dt + vol_c * std::sqrt(yp) * db2;
                    break;
                }
            }

            if (vasicek) {
                const double lam_next =
                    ip.mu + (lam - ip.mu) * lam_e + lam_sd * z3;
                acc += 0.5 * (lam + lam_next) * dt;
                lam = lam_next;
            } else {
                const double lp = lam > 0.0 ? lam : 0.0;
                const double lam_next =
                    lam + ip.q * (ip.mu - lp) * dt + ip.sigma * std::sqrt(lp) * db3;
                const double lp_next = lam_next > 0.0 ? lam_next : 0.0;
                acc += 0.5 * (lp + lp_next) * dt;
                lam = lam_next;
            }
        }
        out.x_T[static_cast<std::size_t>(p)] = x;
        out.int_lambda[static_cast<std::size_t>(p)] = acc;
        if (acc < 0.0) ++n_outside;
    }
    out.frac_weight_outside =
        static_cast<double>(n_outside) / static_cast<double>(mc.n_paths);
    return out;
}

std::vector<double> simulate_default_free(const VolParams& vol, double eta,
                                          const MarketState& state,
                                          const McConfig& mc) {
    std::visit([](const auto& v) { v.validate(); }, vol);
    state.validate();
    mc.validate();
    if (!(eta > -1.0 && eta < 1.0))
        throw DomainError("simulate_default_free: eta must lie in (-1,1)");

    const double seta = std::sqrt(1.0 - eta * eta);
    const double dt = state.tau() / mc.n_steps;
    const double sqdt = std::sqrt(dt);
    const VolModel vm = vol_model_of(vol);
    double sabr_omg = 0.0, vol_b = 0.0, vol_c = 0.0, hk = 0.0, htheta = 0.0;
    switch (vm) {
        case VolModel::Sabr:
            sabr_omg = 1.0 - std::get<SabrParams>(vol).gamma;
            vol_c = std::get<SabrParams>(vol).c;
            break;
        case VolModel::HullWhite:
            vol_b = std::get<HullWhiteParams>(vol).b;
            vol_c = std::get<HullWhiteParams>(vol).c;
            break;
        case VolModel::Heston:
            hk = std::get<HestonParams>(vol).k;
            htheta = std::get<HestonParams>(vol).theta;
            vol_c = std::get<HestonParams>(vol).c;
            break;
    }
    const double vol_drift = (vol_b - 0.5 * vol_c * vol_c) * dt;

    std::vector<double> x_T(static_cast<std::size_t>(mc.n_paths));
    for (std::int64_t p = 0; p < mc.n_paths; ++p) {
        PathRng rng(mc.seed, static_cast<std::uint64_t>(p));
        double x = state.x, y = state.y;
        for (int step = 0; step < mc.n_steps; ++step) {
            const double zb = rng.next_normal();
            const double zz = rng.next_normal();
            const double db1 = (eta * zb + seta * zz) * sqdt;
            const double db2 = zb * sqdt;
            switch (vm) {
                case VolModel::Sabr: {
                    if (x > kAbsorbedLogSpot) {
                        const double e = std::exp(-sabr_omg * x);
                        const double v = y * e;
                        x += -0.5 * v * v * dt + v * db1;
                    }
                    y *= std::exp(vol_c * db2 - 0.5 * vol_c * vol_c * dt);
                    break;
                }
                case VolModel::HullWhite: {
                    x += -0.5 * y * y * dt + y * db1;
                    y *= std::exp(vol_drift + vol_c * db2);
                    break;
                }
                case VolModel::Heston: {
                    const double yp = y > 0.0 ? y : 0.0;
                    x += -0.5 * yp * dt + std::sqrt(yp) * db1;
                    y += hk * (htheta - yp) * dt + vol_c * std::sqrt(yp) * db2;
                    break;
                }
            }
        }
        x_T[static_cast<std::size_t>(p)] = x;
    }
    return x_T;
}

McEstimate mc_cva(const PathBatch& paths, const MarketState& state,
                  double cv_mean) {
    state.validate();
    const std::size_t n = paths.x_T.size();
    if (n < 2 || paths.int_lambda.size() != n)
        throw DomainError("mc_cva: path batch must hold at least two paths");
    const double strike = std::exp(state.kappa);

    double sum_p = 0.0, sum_c = 0.0;
    std::vector<double> pv(n), cv(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double payoff = std::max(std::exp(paths.x_T[i]) - strike, 0.0);
        const double weight = -std::expm1(-paths.int_lambda[i]);
        pv[i] = weight * payoff;
        cv[i] = payoff;
        sum_p += pv[i];
        sum_c += cv[i];
    }
    const double dn = static_cast<double>(n);
    const double mean_p = sum_p / dn, mean_c = sum_c / dn;
    double var_p = 0.0, var_c = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dp = pv[i] - mean_p, dc = cv[i] - mean_c;
        var_p += dp * dp;
        var_c += dc * dc;
        cov += dp * dc;
    }
    var_p /= dn - 1.0;
    var_c /= dn - 1.0;
    cov /= dn - 1.0;
    if (!(var_c > 0.0))
        throw DegenerateError("mc_cva: control variate has zero variance");

    McEstimate out;
    out.cv_beta = cov / var_c;
    out.cv_correlation = var_p > 0.0 ? cov / std::sqrt(var_p * var_c) : 0.0;
    out.raw_cva = mean_p;
    out.raw_std_error = std::sqrt(var_p / dn);
    out.cva = mean_p - out.cv_beta * (mean_c - cv_mean);
    const double var_adj = std::max(var_p - cov * cov / var_c, 0.0);
    out.std_error = std::sqrt(var_adj / dn);
    out.default_free_mean = mean_c;
    return out;
}

McEstimate run_mc_cva(const ModelPairing& pairing, const MarketState& state,
                      const CorrelationTriple& corr, const McConfig& mc,
                      const QuadratureConfig& quad) {
    const PathBatch batch = simulate_paths(pairing, state, corr, mc);
    double cv_mean = 0.0;
    switch (pairing.vol_model()) {
        case VolModel::Sabr:
            cv_mean = sabr_call_and_greeks(
                          state, std::get<SabrParams>(pairing.vol), pairing.eta)
                          .u;
            break;
        case VolModel::Heston:
            cv_mean = heston_call_and_greeks(state,
                                             std::get<HestonParams>(pairing.vol),
                                             pairing.eta, quad)
                          .u;
            break;
        case VolModel::HullWhite: {
            // no closed reference price: independent pilot sample
            McConfig pilot = mc;
            std::uint64_t x = mc.seed ^ 0xD1B54A32D192ED03ULL;
            pilot.seed = splitmix64(x);
            const auto x_T =
                simulate_default_free(pairing.vol, pairing.eta, state, pilot);
            const double strike = std::exp(state.kappa);
            double s = 0.0;
            for (const double xt : x_T)
                s += std::max(std::exp(xt) - strike, 0.0);
            cv_mean = s / static_cast<double>(x_T.size());
            break;
        }
    }
    return mc_cva(batch, state, cv_mean);
}

} // namespace svcva
