#include "svcva/runconfig.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "svcva/errors.hpp"

namespace svcva {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trail");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trail");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: key '" + key + "' expects a boolean, got '" + v + "'");
}

const char* const kKnownKeys[] = {
    "model.kind",     "model.set",    "model.gamma",  "model.c",
    "model.b",        "model.k",      "model.theta",  "model.eta",
    "model.y0",       "intensity.kind", "intensity.set", "intensity.lambda0",
    "intensity.q",    "intensity.mu", "intensity.sigma", "run.t",
    "run.T",          "run.s0",       "run.strike",   "run.log_strike",
    "run.x0",         "run.rho_grid", "run.nu",       "run.rho",
    "run.methods",
    "run.sweep",      "run.sweep_grid", "mc.paths",   "mc.steps",
    "mc.seed",        "quad.dt",      "quad.upper",   "quad.nodes",
    "out.path",       "expansion.alt_decay", "expansion.alt_power_moment",
    "expansion.hw_mean_vol",
};

bool known_key(const std::string& k) {
    for (const char* kk : kKnownKeys)
        if (k == kk) return true;
    return false;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::map<std::string, std::string> out;
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << "config: " << path << ":" << lineno << ": expected key=value";
            throw ConfigError(os.str());
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!known_key(key))
            throw ConfigError("config: unknown key '" + key + "' in " + path);
        out[key] = val;
    }
    return out;
}

} // namespace

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double a = 0, b = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream is(text);
        if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' ||
            !(step > 0.0))
            throw ConfigError("config: bad grid '" + text + "' (want a:b:step)");
        for (double v = a; v <= b + 1e-12; v += step)
            out.push_back(std::fabs(v) < 1e-15 ? 0.0 : v);
        return out;
    }
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        out.push_back(to_double("grid", tok));
    }
    if (out.empty()) throw ConfigError("config: empty grid '" + text + "'");
    return out;
}

RunConfig parse_config(const std::map<std::string, std::string>& overrides,
                       const std::string& config_path) {
    std::map<std::string, std::string> kv;
    if (!config_path.empty()) kv = read_config_file(config_path);
    for (const auto& [k, v] : overrides) {
        if (!known_key(k)) throw ConfigError("config: unknown key '" + k + "'");
        kv[k] = v;
    }

    auto get = [&](const std::string& k) -> std::optional<std::string> {
        auto it = kv.find(k);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };

    RunConfig out;

    const std::string model_kind = get("model.kind").value_or("heston");
    const std::string intensity_kind = get("intensity.kind").value_or("cir");
    if (model_kind != "sabr" && model_kind != "hw" && model_kind != "heston")
        throw ConfigError("config: model.kind must be sabr, hw or heston");
    if (intensity_kind != "vasicek" && intensity_kind != "cir")
        throw ConfigError("config: intensity.kind must be vasicek or cir");

    // volatility block, with the fitted builtin as base where one exists
    double y0 = 0.2, strike = 1.15, eta = -0.3;
    if (model_kind == "sabr") {
        const ParameterSet ps = builtin_parameter_set(get("model.set").value_or("sabr-fit"));
        if (!ps.vol || !std::holds_alternative<SabrParams>(*ps.vol))
            throw ConfigError("config: model.set must name a sabr fit set");
        SabrParams p = std::get<SabrParams>(*ps.vol);
        if (auto v = get("model.gamma")) p.gamma = to_double("model.gamma", *v);
        if (auto v = get("model.c")) p.c = to_double("model.c", *v);
        out.pairing.vol = p;
        eta = ps.eta.value_or(eta);
        y0 = ps.y0.value_or(y0);
        strike = ps.strike.value_or(strike);
        for (const auto& w : ps.warnings) out.warnings.push_back(w);
    } else if (model_kind == "heston") {
        const ParameterSet ps = builtin_parameter_set(get("model.set").value_or("heston-fit"));
        if (!ps.vol || !std::holds_alternative<HestonParams>(*ps.vol))
            throw ConfigError("config: model.set must name a heston fit set");
        HestonParams p = std::get<HestonParams>(*ps.vol);
        if (auto v = get("model.k")) p.k = to_double("model.k", *v);
        if (auto v = get("model.theta")) p.theta = to_double("model.theta", *v);
        if (auto v = get("model.c")) p.c = to_double("model.c", *v);
        out.pairing.vol = p;
        eta = ps.eta.value_or(eta);
        y0 = ps.y0.value_or(y0);
        strike = ps.strike.value_or(strike);
        for (const auto& w : ps.warnings) out.warnings.push_back(w);
    } else {
        HullWhiteParams p; // no calibrated builtin; documented defaults
        p.b = 0.0;
        p.c = 0.3;
        if (auto v = get("model.b")) p.b = to_double("model.b", *v);
        if (auto v = get("model.c")) p.c = to_double("model.c", *v);
        out.pairing.vol = p;
    }
    if (auto v = get("model.eta")) eta = to_double("model.eta", *v);
    if (auto v = get("model.y0")) y0 = to_double("model.y0", *v);
    out.pairing.eta = eta;

    // intensity block
    std::string iset = get("intensity.set").value_or("1");
    if (iset.size() == 1 && std::isdigit(static_cast<unsigned char>(iset[0])))
        iset = intensity_kind + "-" + iset;
    const ParameterSet ips = builtin_parameter_set(iset);
    if (!ips.intensity)
        throw ConfigError("config: intensity.set must name an intensity set");
    IntensityParams ip = *ips.intensity;
    if (intensity_kind_name(ip.kind) != intensity_kind)
        throw ConfigError("config: intensity.set '" + iset +
                          "' does not match intensity.kind=" + intensity_kind);
    for (const auto& w : ips.warnings) out.warnings.push_back(w);
    if (auto v = get("intensity.lambda0")) ip.lambda0 = to_double("intensity.lambda0", *v);
    if (auto v = get("intensity.q")) ip.q = to_double("intensity.q", *v);
    if (auto v = get("intensity.mu")) ip.mu = to_double("intensity.mu", *v);
    if (auto v = get("intensity.sigma")) ip.sigma = to_double("intensity.sigma", *v);
    out.pairing.intensity = ip;

    // market state
    out.state.t = get("run.t") ? to_double("run.t", *get("run.t")) : 0.0;
    out.state.T = get("run.T") ? to_double("run.T", *get("run.T")) : 0.5;
    if (auto v = get("run.x0")) {
        out.state.x = to_double("run.x0", *v);
    } else {
        const double s0 = get("run.s0") ? to_double("run.s0", *get("run.s0")) : 1.0;
        if (!(s0 > 0.0)) throw ConfigError("config: run.s0 must be positive");
        out.state.x = std::log(s0);
    }
    out.state.y = y0;
    if (auto v = get("run.strike")) strike = to_double("run.strike", *v);
    const bool log_strike =
        get("run.log_strike") ? to_bool("run.log_strike", *get("run.log_strike")) : false;
    if (log_strike)
        out.state.kappa = strike;
    else if (strike > 0.0)
        out.state.kappa = std::log(strike);
    else
        throw ConfigError("config: run.strike must be positive");

    out.rho_grid = parse_grid(get("run.rho_grid").value_or("-0.75:0.75:0.25"));
    out.nu = get("run.nu") ? to_double("run.nu", *get("run.nu")) : 0.0;
    out.rho_fixed = get("run.rho") ? to_double("run.rho", *get("run.rho")) : 0.5;

    const std::string sweep = get("run.sweep").value_or("rho");
    if (sweep == "rho")
        out.sweep = SweepParam::Rho;
    else if (sweep == "mu")
        out.sweep = SweepParam::Mu;
    else if (sweep == "sigma")
        out.sweep = SweepParam::Sigma;
    else
        throw ConfigError("config: run.sweep must be rho, mu or sigma");
    if (out.sweep != SweepParam::Rho)
        out.sweep_grid =
            parse_grid(get("run.sweep_grid").value_or("0.02:0.2:0.02"));

    const bool second_supported =
        out.pairing.intensity.kind == IntensityKind::Cir &&
        out.pairing.vol_model() != VolModel::HullWhite;
    const std::string methods = get("run.methods").value_or("auto");
    if (methods == "auto") {
        out.with_mc = out.sweep == SweepParam::Rho;
        out.with_first = true;
        out.with_second = second_supported;
    } else {
        out.with_mc = out.with_first = out.with_second = false;
        std::istringstream is(methods);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            tok = trim(tok);
            if (tok == "mc")
                out.with_mc = true;
            else if (tok == "first")
                out.with_first = true;
            else if (tok == "second")
                out.with_second = true;
            else if (!tok.empty())
                throw ConfigError("config: unknown method '" + tok + "'");
        }
        if (!out.with_mc && !out.with_first && !out.with_second)
            throw ConfigError("config: run.methods must name at least one of "
                              "mc, first, second");
        if (out.with_second && !second_supported)
            throw ConfigError(
                "config: method 'second' needs a cir intensity with a sabr or "
                "heston vol model");
    }
    if (out.with_second && out.nu != 0.0)
        throw ConfigError("config: method 'second' requires run.nu = 0");

    if (auto v = get("mc.paths")) out.mc.n_paths = to_int("mc.paths", *v);
    if (auto v = get("mc.steps")) out.mc.n_steps = static_cast<int>(to_int("mc.steps", *v));
    if (auto v = get("mc.seed"))
        out.mc.seed = static_cast<std::uint64_t>(to_int("mc.seed", *v));
    if (auto v = get("quad.dt")) out.quad.dt = to_double("quad.dt", *v);
    if (auto v = get("quad.upper")) out.quad.upper_limit = to_double("quad.upper", *v);
    if (auto v = get("quad.nodes")) out.quad.n_nodes = static_cast<int>(to_int("quad.nodes", *v));
    if (auto v = get("expansion.alt_decay"))
        out.cva_opts.alt_decay = to_bool("expansion.alt_decay", *v);
    if (auto v = get("expansion.alt_power_moment"))
        out.cva_opts.alt_power_moment = to_bool("expansion.alt_power_moment", *v);
    if (auto v = get("expansion.hw_mean_vol"))
        out.cva_opts.hw_mean_vol = to_bool("expansion.hw_mean_vol", *v);
    out.out_path = get("out.path").value_or("");

    // validate everything up front
    out.pairing.validate();
    out.state.validate();
    out.mc.validate();
    out.quad.validate();
    if (out.sweep == SweepParam::Rho) {
        for (const double rho : out.rho_grid)
            validate_correlations({out.pairing.eta, rho, out.nu});
    } else {
        validate_correlations({out.pairing.eta, out.rho_fixed, out.nu});
        for (const double v : out.sweep_grid)
            if (!(v > 0.0))
                throw ConfigError("config: sweep grid values must be positive");
    }

    // canonical resolved config: every echoed line is a valid config key, so
    // feeding the header back through parse_config reproduces this run
    auto echo = [&](const std::string& k, const std::string& v) {
        out.echo.emplace_back(k, v);
    };
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    auto join = [&](const std::vector<double>& g) {
        std::string s;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (i) s += ',';
            s += fmt(g[i]);
        }
        return s;
    };
    echo("model.kind", model_kind);
    if (model_kind == "sabr") {
        const auto& p = std::get<SabrParams>(out.pairing.vol);
        echo("model.gamma", fmt(p.gamma));
        echo("model.c", fmt(p.c));
    } else if (model_kind == "heston") {
        const auto& p = std::get<HestonParams>(out.pairing.vol);
        echo("model.k", fmt(p.k));
        echo("model.theta", fmt(p.theta));
        echo("model.c", fmt(p.c));
    } else {
        const auto& p = std::get<HullWhiteParams>(out.pairing.vol);
        echo("model.b", fmt(p.b));
        echo("model.c", fmt(p.c));
    }
    echo("model.eta", fmt(out.pairing.eta));
    echo("model.y0", fmt(out.state.y));
    echo("intensity.kind", intensity_kind);
    echo("intensity.lambda0", fmt(ip.lambda0));
    echo("intensity.q", fmt(ip.q));
    echo("intensity.mu", fmt(ip.mu));
    echo("intensity.sigma", fmt(ip.sigma));
    echo("run.t", fmt(out.state.t));
    echo("run.T", fmt(out.state.T));
    echo("run.x0", fmt(out.state.x));
    echo("run.log_strike", "true");
    echo("run.strike", fmt(out.state.kappa));
    echo("run.nu", fmt(out.nu));
    if (out.sweep == SweepParam::Rho) {
        echo("run.rho_grid", join(out.rho_grid));
    } else {
        echo("run.sweep", sweep);
        echo("run.sweep_grid", join(out.sweep_grid));
        echo("run.rho", fmt(out.rho_fixed));
    }
    {
        std::string m;
        if (out.with_mc) m += "mc";
        if (out.with_first) m += m.empty() ? "first" : ",first";
        if (out.with_second) m += m.empty() ? "second" : ",second";
        echo("run.methods", m);
    }
    echo("mc.paths", std::to_string(out.mc.n_paths));
    echo("mc.steps", std::to_string(out.mc.n_steps));
    echo("mc.seed", std::to_string(out.mc.seed));
    echo("quad.dt", fmt(out.quad.dt));
    echo("quad.upper", fmt(out.quad.upper_limit));
    echo("quad.nodes", std::to_string(out.quad.n_nodes));
    return out;
}

SweepResult run_rho_sweep(const RunConfig& config) {
    SweepResult out;
    out.echo = config.echo;
    out.sensitivity = config.sweep != SweepParam::Rho;

    if (!out.sensitivity) {
        for (const double rho : config.rho_grid) {
            SweepRow row;
            row.param = rho;
            const CorrelationTriple corr{config.pairing.eta, rho, config.nu};
            if (config.with_first) {
                const CvaResult r = cva_first_order(config.pairing, config.state,
                                                    corr, config.quad,
                                                    config.cva_opts);
                row.cva_first = r.total;
                row.cva_first_corr = r.cva1;
            }
            if (config.with_second) {
                const CvaResult r =
                    cva_second_order(config.pairing, config.state, rho,
                                     config.quad, config.cva_opts);
                row.cva_second = r.total;
            }
            if (config.with_mc) {
                const McEstimate e = run_mc_cva(config.pairing, config.state,
                                                corr, config.mc, config.quad);
                row.cva_mc = e.cva;
                row.cva_mc_stderr = e.std_error;
                row.cv_corr = e.cv_correlation;
            }
            out.rows.push_back(row);
        }
        return out;
    }

    for (const double value : config.sweep_grid) {
        SweepRow row;
        row.param = value;
        ModelPairing pairing = config.pairing;
        if (config.sweep == SweepParam::Mu)
            pairing.intensity.mu = value;
        else
            pairing.intensity.sigma = value;
        const CorrelationTriple corr{pairing.eta, config.rho_fixed, config.nu};
        if (config.with_first) {
            const CvaResult r = cva_first_order(pairing, config.state, corr,
                                                config.quad, config.cva_opts);
            row.cva_first = r.total;
            row.cva_first_corr = r.cva1;
        }
        if (config.with_second) {
            const CvaResult r =
                cva_second_order(pairing, config.state, config.rho_fixed,
                                 config.quad, config.cva_opts);
            row.cva_second = r.total;
        }
        if (config.with_mc) {
            const McEstimate e = run_mc_cva(pairing, config.state, corr,
                                            config.mc, config.quad);
            row.cva_mc = e.cva;
            row.cva_mc_stderr = e.std_error;
            row.cv_corr = e.cv_correlation;
        }
        out.rows.push_back(row);
    }
    return out;
}

namespace {

void put(std::ostream& os, const std::optional<double>& v) {
    os << ',';
    if (v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", *v);
        os << buf;
    }
}

} // namespace

void write_csv(const SweepResult& result, std::ostream& os) {
    for (const auto& [k, v] : result.echo) os << "# " << k << "=" << v << "\n";
    if (!result.sensitivity) {
        os << "rho,cva_mc,cva_mc_stderr,cv_corr,cva_first,cva_second\n";
        for (const auto& row : result.rows) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", row.param);
            os << buf;
            put(os, row.cva_mc);
            put(os, row.cva_mc_stderr);
            put(os, row.cv_corr);
            put(os, row.cva_first);
            put(os, row.cva_second);
            os << "\n";
        }
        return;
    }
    os << "value,cva_mc,cva_mc_stderr,cv_corr,cva_first,cva_first_corr,cva_second\n";
    for (const auto& row : result.rows) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", row.param);
        os << buf;
        put(os, row.cva_mc);
        put(os, row.cva_mc_stderr);
        put(os, row.cv_corr);
        put(os, row.cva_first);
        put(os, row.cva_first_corr);
        put(os, row.cva_second);
        os << "\n";
    }
}

} // namespace svcva
