#include "svcva/params.hpp"

#include <cmath>
#include <sstream>

namespace svcva {

namespace {

[[noreturn]] void throw_corr(const std::string& ineq, double lhs, double rhs) {
    std::ostringstream os;
    os << "correlation triple inadmissible: " << ineq
       << " violated (lhs=" << lhs << ", rhs=" << rhs << ")";
    throw CorrelationDomainError(os.str());
}

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

} // namespace

CorrelationLoadings validate_correlations(const CorrelationTriple& corr) {
    const double eta = corr.eta, rho = corr.rho, nu = corr.nu;
    if (!(eta * eta < 1.0)) throw_corr("eta^2 < 1", eta * eta, 1.0);
    if (!(rho * rho < 1.0)) throw_corr("rho^2 < 1", rho * rho, 1.0);
    if (!(nu * nu < 1.0)) throw_corr("nu^2 < 1", nu * nu, 1.0);
    const double lhs = nu * nu + rho * rho + eta * eta;
    const double rhs = 1.0 + 2.0 * nu * eta * rho;
    if (!(lhs < rhs)) throw_corr("nu^2+rho^2+eta^2 < 1+2*nu*eta*rho", lhs, rhs);

    CorrelationLoadings out;
    const double s = std::sqrt(1.0 - eta * eta);
    out.alpha = (rho - eta * nu) / s;
    out.beta = std::sqrt((rhs - lhs) / (1.0 - eta * eta));
    return out;
}

void SabrParams::validate() const {
    require(gamma > 0.0 && gamma < 1.0, "sabr: gamma must lie in (0,1)");
    require(c > 0.0, "sabr: vol-of-vol c must be positive");
}

void HullWhiteParams::validate() const {
    require(std::isfinite(b), "hull-white: b must be finite");
    require(c >= 0.0, "hull-white: vol-of-vol c must be non-negative");
}

void HestonParams::validate() const {
    require(k > 0.0, "heston: mean-reversion k must be positive");
    require(theta > 0.0, "heston: long-run variance theta must be positive");
    require(c > 0.0, "heston: vol-of-vol c must be positive");
}

void IntensityParams::validate() const {
    require(q > 0.0, "intensity: mean-reversion q must be positive");
    require(sigma > 0.0, "intensity: vol sigma must be positive");
    require(mu > 0.0, "intensity: long-run level mu must be positive");
    if (kind == IntensityKind::Cir)
        require(lambda0 > 0.0, "intensity: cir lambda0 must be positive");
    else
        require(std::isfinite(lambda0), "intensity: lambda0 must be finite");
}

bool IntensityParams::feller_ok() const {
    if (kind == IntensityKind::Vasicek) return true;
    return sigma * sigma <= 2.0 * q * mu;
}

void MarketState::validate() const {
    require(T > t, "state: need T > t");
    require(y > 0.0, "state: vol factor y must be positive");
    require(std::isfinite(x) && std::isfinite(kappa), "state: x, kappa must be finite");
}

VolModel vol_model_of(const VolParams& vol) {
    if (std::holds_alternative<SabrParams>(vol)) return VolModel::Sabr;
    if (std::holds_alternative<HullWhiteParams>(vol)) return VolModel::HullWhite;
    return VolModel::Heston;
}

std::string_view vol_model_name(VolModel m) {
    switch (m) {
        case VolModel::Sabr: return "sabr";
        case VolModel::HullWhite: return "hw";
        case VolModel::Heston: return "heston";
    }
    return "?";
}

std::string_view intensity_kind_name(IntensityKind k) {
    return k == IntensityKind::Vasicek ? "vasicek" : "cir";
}

void ModelPairing::validate() const {
    std::visit([](const auto& v) { v.validate(); }, vol);
    intensity.validate();
    require(eta > -1.0 && eta < 1.0, "pairing: eta must lie in (-1,1)");
    if (vol_model() == VolModel::HullWhite && eta > 0.0)
        throw DomainError("pairing: hull-white requires eta <= 0 (martingale condition)");
}

std::string ModelPairing::name() const {
    std::string out{vol_model_name(vol_model())};
    out += '-';
    out += intensity_kind_name(intensity.kind);
    return out;
}

ParameterSet builtin_parameter_set(std::string_view name) {
    ParameterSet out;
    out.name = std::string(name);

    auto intensity_set = [&](IntensityKind kind, double l0, double q, double mu,
                             double sigma) {
        IntensityParams p;
        p.kind = kind;
        p.lambda0 = l0;
        p.q = q;
        p.mu = mu;
        p.sigma = sigma;
        out.intensity = p;
        if (!p.feller_ok()) {
            std::ostringstream os;
            os << "set " << out.name << ": Feller condition violated (sigma^2="
               << sigma * sigma << " > 2*q*mu=" << 2.0 * q * mu
               << "); zero is attainable for the intensity";
            out.warnings.push_back(os.str());
        }
    };

    if (name == "vasicek-1") {
        intensity_set(IntensityKind::Vasicek, 0.09, 0.3, 0.4, 0.1);
    } else if (name == "vasicek-2") {
        intensity_set(IntensityKind::Vasicek, 0.1, 0.18, 0.1, 0.015);
    } else if (name == "cir-1") {
        intensity_set(IntensityKind::Cir, 0.03, 0.02, 0.161, 0.08);
    } else if (name == "cir-2") {
        intensity_set(IntensityKind::Cir, 0.05, 0.09, 0.2, 0.1);
    } else if (name == "cir-3") {
        intensity_set(IntensityKind::Cir, 0.01, 0.8, 0.02, 0.2);
    } else if (name == "cir-4") {
        intensity_set(IntensityKind::Cir, 0.03, 0.5, 0.05, 0.5);
    } else if (name == "heston-fit") {
        HestonParams h;
        h.k = 1.0; // not pinned by the calibration; override via model.k
        h.theta = 0.04;
        h.c = 0.39;
        out.vol = h;
        out.eta = -0.34;
        out.y0 = 0.034;
        out.strike = 1.15;
        if (!h.feller_ok())
            out.warnings.push_back(
                "set heston-fit: Feller condition violated for the variance process");
    } else if (name == "sabr-fit") {
        SabrParams s;
        s.gamma = 0.7367;
        s.c = 0.7356;
        out.vol = s;
        out.eta = -0.3;
        out.y0 = 0.5887;
        out.strike = 1.15;
    } else {
        std::ostringstream os;
        os << "unknown parameter set '" << name << "'; known sets:";
        for (const auto& n : builtin_parameter_set_names()) os << ' ' << n;
        throw UnknownSetError(os.str());
    }
    return out;
}

std::vector<std::string> builtin_parameter_set_names() {
    return {"vasicek-1", "vasicek-2", "cir-1", "cir-2",
            "cir-3",     "cir-4",     "heston-fit", "sabr-fit"};
}

} // namespace svcva
