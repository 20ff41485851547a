#pragma once

// Scenario configuration, solver orchestration and CSV export.
//
// A config is a flat JSON object; every key is optional:
//
//   eta                   1e-2       coupling strength
//   omega0                1          atomic frequency (sets the units)
//   omega_c               2          cutoff frequency
//   omega0_tau_over_2pi   20         delay in atomic periods
//   beta_omega0           "inf"      inverse temperature times omega0, or "inf"
//   solvers               ["heom", "exact"]   any of heom, exact, redfield
//   init                  "excited"  excited | plus | mixed
//   eps_r                 1e-3       relative L2 threshold of the BCF fit
//   depth                 2          HEOM truncation depth
//   t_max                 400        end of the output grid
//   n_points              801        output grid points (uniform from 0)
//   integrator            "adaptive" adaptive | fixed
//   rtol, atol            1e-8, 1e-10
//   fixed_step            0.01
//   fit_t_max, fit_points null       BCF sampling grid (null: default grid)
//   fit_file              null       load the BCF fit from this JSON instead of fitting
//   scaled_ados           false      amplitude-normalized ADOs
//   exact_dt              null       Volterra step (null: the largest accepted step)
//   redfield_dt           0.02       Redfield coefficient table step
//   redfield_mode         "auto"     auto | rwa-minus | rwa-full (auto: rwa-full at finite T)
//   output_prefix         "out/scenario"

#include <optional>
#include <string>
#include <vector>

#include "giant_heom/bath.hpp"
#include "giant_heom/expfit.hpp"
#include "giant_heom/heom.hpp"
#include "giant_heom/ode.hpp"
#include "giant_heom/qubit.hpp"
#include "giant_heom/redfield.hpp"
#include "giant_heom/rwa_exact.hpp"

namespace giant_heom::scenarios {

enum class Solver { heom, exact, redfield };

std::string to_string(Solver s);
Solver parse_solver(const std::string& name);  // throws ConfigError

enum class RedfieldModeSetting { automatic, rwa_minus, rwa_full };

struct ScenarioConfig {
    double eta{1e-2};
    double omega0{1.0};
    double omega_c{2.0};
    double omega0_tau_over_2pi{20.0};
    std::optional<double> beta_omega0;  // empty: zero temperature
    std::vector<Solver> solvers{Solver::heom, Solver::exact};
    qubit::InitialState init{qubit::InitialState::excited};
    double eps_r{1e-3};
    std::size_t depth{2};
    double t_max{400.0};
    std::size_t n_points{801};
    ode::Method integrator{ode::Method::adaptive};
    double rtol{1e-8};
    double atol{1e-10};
    double fixed_step{1e-2};
    std::optional<double> fit_t_max;
    std::optional<std::size_t> fit_points;
    std::optional<std::string> fit_file;
    bool scaled_ados{false};
    std::optional<double> exact_dt;
    double redfield_dt{0.02};
    RedfieldModeSetting redfield_mode{RedfieldModeSetting::automatic};
    std::string output_prefix{"out/scenario"};

    bath::BathParams bath() const;
    std::vector<double> time_grid() const;
    expfit::SamplingGrid fit_grid() const;
    ode::IntegratorConfig integrator_config() const;
    redfield::Mode resolved_redfield_mode() const;

    // Throws ConfigError naming the offending key.
    void validate() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Parses a flat JSON object; unknown keys, wrong types and out-of-range values
// raise ConfigError naming the first offending key in document order.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

// Every field written explicitly; parse_config(to_json(c)) == c.
std::string to_json(const ScenarioConfig& cfg);

// BCF fit for the HEOM run: loaded from fit_file when set, otherwise fitted.
expfit::BcfFit obtain_fit(const ScenarioConfig& cfg);

struct HeomRun {
    expfit::BcfFit fit;
    heom::PropagateResult result;
    std::size_t n_ados{0};
};
HeomRun run_heom(const ScenarioConfig& cfg);
HeomRun run_heom(const ScenarioConfig& cfg, const expfit::BcfFit& fit);

struct ExactRun {
    rwa_exact::GreenFunction green;
    rwa_exact::RateFunctions rates;
    qubit::Trajectory trajectory;  // on cfg.time_grid(), Schroedinger picture
};
ExactRun run_exact(const ScenarioConfig& cfg);

struct RedfieldRun {
    redfield::RedfieldCoefficients coefficients;
    redfield::RedfieldResult result;
};
RedfieldRun run_redfield(const ScenarioConfig& cfg);

// max P_ee on [tau, t_end] minus P_ee at the last grid time not after tau.
double revival_metric(const qubit::Trajectory& traj, double tau);

// Least-squares slope of -log P_ee over [0, t_end] (points with P_ee > 0).
double fitted_decay_rate(const qubit::Trajectory& traj, double t_end);

// Mean P_ee over the last `fraction` of the output times.
double long_time_population(const qubit::Trajectory& traj, double fraction = 0.1);

double max_abs_deviation(const qubit::Trajectory& a, const qubit::Trajectory& b);

struct SolverOutcome {
    Solver solver;
    qubit::Trajectory trajectory;
    double revival{0.0};
    bool flagged{false};  // converged = false somewhere (fit, defects)
    std::string note;
};

struct PairDeviation {
    Solver a;
    Solver b;
    double max_abs_p_ee{0.0};
};

struct ComparisonRecord {
    std::vector<double> t;
    std::vector<SolverOutcome> outcomes;
    std::vector<PairDeviation> deviations;
    double tau{0.0};
    bool flagged{false};

    const SolverOutcome* find(Solver s) const;
};

struct ComparisonOptions {
    bool write_files{true};
};

// Runs every requested solver on the shared grid. Writes
// <prefix>_<solver>.csv, <prefix>_comparison.csv and <prefix>_summary.json.
ComparisonRecord run_comparison(const ScenarioConfig& cfg, const ComparisonOptions& options = {});

// CSV bodies shared by the CLI and run_comparison.
std::string trajectory_csv(const qubit::Trajectory& traj, bool positivity_column);
std::string rates_csv(const rwa_exact::RateFunctions& rates);
std::string comparison_csv(const ComparisonRecord& record);
std::string summary_json(const ScenarioConfig& cfg, const ComparisonRecord& record);

}  // namespace giant_heom::scenarios
