#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svcva/cva.hpp"
#include "svcva/montecarlo.hpp"
#include "svcva/params.hpp"
#include "svcva/quadrature.hpp"

namespace svcva {

enum class SweepParam { Rho, Mu, Sigma };

// Fully resolved run description: builtin sets applied, overrides folded in,
// grids expanded, correlations pre-validated.
struct RunConfig {
    ModelPairing pairing;
    MarketState state;
    std::vector<double> rho_grid;
    double nu = 0.0;
    double rho_fixed = 0.5; // used by the sensitivity sweeps
    bool with_mc = true;
    bool with_first = true;
    bool with_second = false;
    SweepParam sweep = SweepParam::Rho;
    std::vector<double> sweep_grid; // mu / sigma values in sensitivity mode
    McConfig mc;
    QuadratureConfig quad;
    CvaOptions cva_opts;
    std::string out_path; // empty = stdout
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, std::string>> echo; // header key=values
};

// Merges a flat key=value config file (optional) with command-line style
// overrides and resolves everything to a RunConfig.  Unknown keys are
// rejected.  Overrides use the same key=value syntax as the file.
RunConfig parse_config(const std::map<std::string, std::string>& overrides,
                       const std::string& config_path = "");

struct SweepRow {
    double param = 0.0; // rho, or the swept parameter value
    std::optional<double> cva_mc;
    std::optional<double> cva_mc_stderr;
    std::optional<double> cv_corr;
    std::optional<double> cva_first;
    std::optional<double> cva_first_corr; // evaluated first-order correction
    std::optional<double> cva_second;
};

struct SweepResult {
    bool sensitivity = false;
    std::vector<SweepRow> rows;
    std::vector<std::pair<std::string, std::string>> echo;
};

// Runs the configured rho sweep (or parameter sensitivity sweep).
SweepResult run_rho_sweep(const RunConfig& config);

// CSV with a commented key=value header; field order for sweeps is
// rho, cva_mc, cva_mc_stderr, cv_corr, cva_first, cva_second.
void write_csv(const SweepResult& result, std::ostream& os);

// Helper shared with tests: parse "a:b:step" or comma-separated lists.
std::vector<double> parse_grid(const std::string& text);

} // namespace svcva
