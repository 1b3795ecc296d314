#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlrothe/core.hpp"
#include "nlrothe/stepper.hpp"

namespace nlrothe {

/// Parse / validation failure; the message names the offending key (and
/// line, for files).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a batch experiment needs, read from a flat key = value file
/// ('#' comments) and/or --key value command line overrides.
struct ExperimentConfig {
    double domain_a = 0.0;
    double domain_b = 1.0;
    std::size_t m = 64;
    double t_end = 0.25;
    std::size_t n_steps = 32;

    SolverConfig solver;  // s, p, strict_exponent_check, newton_*, ...

    std::vector<double> levels = {1, 2, 4, 8, 16};
    std::vector<double> heights = {1, 2, 4, 8, 16};     // renormalized tail
    std::vector<double> k_list = {0.5, 1.0, 2.0};       // truncation energy / entropy

    std::string u0_spec = "bump:1.0";   // registry id, see make_registry_field
    std::string f_spec = "constant:0.5";
    std::string u0_csv;                 // overrides u0_spec when set
    std::string f_csv;                  // overrides f_spec when set
    std::string trajectory_csv;         // verify an ingested trajectory instead of solving
    std::string kappa_spec = "none";    // none | constant:c | cosine:amp
    double lambda = 2.0;
    bool nonneg = true;

    double entropy_base_tol = 1e-8;
    double entropy_slack = -1.0;  // < 0: measure it from a reference run at this resolution
    double renorm_tol = 1e-6;
    double weak_tol_scale = 1e-8;
    double comparison_tol = 1e-10;

    std::string out_dir = ".";

    std::size_t bench_m = 512;
    std::size_t bench_reps = 20;

    void validate() const;
};

/// Registry of analytic data. Field ids: constant:c, power:beta[:amp]
/// ((x-a)^{-beta} with beta < 1), bump:amp (Gaussian at the domain center).
/// Source ids add ramp:c (f = c*t). Unknown ids raise ConfigError.
GridFunction make_registry_field(const std::string& spec, const GridPtr& grid, bool nonneg);
SourceSpec make_registry_source(const std::string& spec, const Domain& domain, bool nonneg);
KappaFn make_registry_kappa(const std::string& spec, const Domain& domain);

ExperimentConfig parse_config_file(const std::string& path);
/// args are alternating "--key value" pairs applied on top of base.
ExperimentConfig apply_overrides(ExperimentConfig base, const std::vector<std::string>& args);

/// Subcommand driver. compare takes a second config; exit codes:
/// 0 all diagnostics pass, 1 a diagnostic failed, 2 execution error.
int run_experiment(const std::string& subcommand, const ExperimentConfig& cfg,
                   const std::optional<ExperimentConfig>& other = std::nullopt);

std::string cli_usage();

}  // namespace nlrothe
