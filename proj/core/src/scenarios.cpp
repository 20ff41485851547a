#include "giant_heom/scenarios.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "giant_heom/csv.hpp"
#include "giant_heom/errors.hpp"

namespace giant_heom::scenarios {

using json = nlohmann::ordered_json;

std::string to_string(Solver s) {
    switch (s) {
        case Solver::heom: return "heom";
        case Solver::exact: return "exact";
        case Solver::redfield: return "redfield";
    }
    return "heom";
}

Solver parse_solver(const std::string& name) {
    if (name == "heom") return Solver::heom;
    if (name == "exact") return Solver::exact;
    if (name == "redfield") return Solver::redfield;
    throw ConfigError("solvers: unknown solver '" + name + "' (expected heom, exact or redfield)");
}

namespace {

std::string mode_name(RedfieldModeSetting m) {
    switch (m) {
        case RedfieldModeSetting::automatic: return "auto";
        case RedfieldModeSetting::rwa_minus: return "rwa-minus";
        case RedfieldModeSetting::rwa_full: return "rwa-full";
    }
    return "auto";
}

RedfieldModeSetting parse_mode(const std::string& name) {
    if (name == "auto") return RedfieldModeSetting::automatic;
    if (name == "rwa-minus") return RedfieldModeSetting::rwa_minus;
    if (name == "rwa-full") return RedfieldModeSetting::rwa_full;
    throw ConfigError("redfield_mode: expected auto, rwa-minus or rwa-full, got '" + name + "'");
}

double number(const std::string& key, const json& v) {
    if (!v.is_number()) throw ConfigError(key + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key + ": must be finite");
    return x;
}

double positive(const std::string& key, const json& v) {
    const double x = number(key, v);
    if (!(x > 0.0)) throw ConfigError(key + ": must be > 0");
    return x;
}

std::size_t count(const std::string& key, const json& v, std::size_t minimum) {
    if (!v.is_number_integer()) throw ConfigError(key + ": expected an integer");
    const auto x = v.get<long long>();
    if (x < static_cast<long long>(minimum)) {
        throw ConfigError(key + ": must be >= " + std::to_string(minimum));
    }
    return static_cast<std::size_t>(x);
}

std::string text(const std::string& key, const json& v) {
    if (!v.is_string()) throw ConfigError(key + ": expected a string");
    return v.get<std::string>();
}

bool boolean(const std::string& key, const json& v) {
    if (!v.is_boolean()) throw ConfigError(key + ": expected true or false");
    return v.get<bool>();
}

}  // namespace

bath::BathParams ScenarioConfig::bath() const {
    bath::BathParams p;
    p.eta = eta;
    p.omega0 = omega0;
    p.omega_c = omega_c;
    p.tau = 2.0 * std::numbers::pi * omega0_tau_over_2pi / omega0;
    p.beta = beta_omega0 ? bath::InverseTemperature::finite(*beta_omega0 / omega0)
                         : bath::InverseTemperature::zero_temperature();
    return p;
}

std::vector<double> ScenarioConfig::time_grid() const {
    std::vector<double> t(n_points);
    for (std::size_t k = 0; k < n_points; ++k) {
        t[k] = k + 1 == n_points ? t_max : t_max * static_cast<double>(k) / static_cast<double>(n_points - 1);
    }
    return t;
}

expfit::SamplingGrid ScenarioConfig::fit_grid() const {
    expfit::SamplingGrid grid = expfit::default_grid(bath());
    if (fit_t_max) {
        // Keep the default spacing unless the point count is also given.
        const double spacing = grid.spacing();
        grid.t_max = *fit_t_max;
        grid.n_samples = static_cast<std::size_t>(std::ceil(grid.t_max / spacing)) + 1;
    }
    if (fit_points) grid.n_samples = *fit_points;
    return grid;
}

ode::IntegratorConfig ScenarioConfig::integrator_config() const {
    ode::IntegratorConfig c;
    c.method = integrator;
    c.rtol = rtol;
    c.atol = atol;
    c.fixed_step = fixed_step;
    return c;
}

redfield::Mode ScenarioConfig::resolved_redfield_mode() const {
    switch (redfield_mode) {
        case RedfieldModeSetting::rwa_minus: return redfield::Mode::rwa_minus;
        case RedfieldModeSetting::rwa_full: return redfield::Mode::rwa_full;
        case RedfieldModeSetting::automatic: break;
    }
    return beta_omega0 ? redfield::Mode::rwa_full : redfield::Mode::rwa_minus;
}

void ScenarioConfig::validate() const {
    const auto check = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    check(eta > 0.0 && std::isfinite(eta), "eta: must be > 0");
    check(omega0 > 0.0 && std::isfinite(omega0), "omega0: must be > 0");
    check(omega_c > 0.0 && std::isfinite(omega_c), "omega_c: must be > 0");
    check(omega0_tau_over_2pi >= 0.0 && std::isfinite(omega0_tau_over_2pi), "omega0_tau_over_2pi: must be >= 0");
    check(!beta_omega0 || (*beta_omega0 > 0.0 && std::isfinite(*beta_omega0)), "beta_omega0: must be > 0 or \"inf\"");
    check(!solvers.empty(), "solvers: must list at least one solver");
    check(eps_r > 0.0 && eps_r < 1.0, "eps_r: must lie in (0, 1)");
    check(depth >= 1, "depth: must be >= 1");
    check(t_max > 0.0 && std::isfinite(t_max), "t_max: must be > 0");
    check(n_points >= 2, "n_points: must be >= 2");
    check(rtol > 0.0 && atol > 0.0, "rtol: tolerances must be > 0");
    check(fixed_step > 0.0, "fixed_step: must be > 0");
    check(!fit_t_max || *fit_t_max > 0.0, "fit_t_max: must be > 0");
    check(!fit_points || *fit_points >= 4, "fit_points: must be >= 4");
    check(!exact_dt || *exact_dt > 0.0, "exact_dt: must be > 0");
    check(redfield_dt > 0.0, "redfield_dt: must be > 0");
    check(!output_prefix.empty(), "output_prefix: must not be empty");
}

ScenarioConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a flat JSON object");

    ScenarioConfig c;
    for (const auto& [key, v] : doc.items()) {
        if (key == "eta") {
            c.eta = positive(key, v);
        } else if (key == "omega0") {
            c.omega0 = positive(key, v);
        } else if (key == "omega_c") {
            c.omega_c = positive(key, v);
        } else if (key == "omega0_tau_over_2pi") {
            c.omega0_tau_over_2pi = number(key, v);
            if (c.omega0_tau_over_2pi < 0.0) throw ConfigError(key + ": must be >= 0");
        } else if (key == "beta_omega0") {
            if (v.is_string()) {
                if (v.get<std::string>() != "inf") throw ConfigError(key + ": expected a number or \"inf\"");
                c.beta_omega0.reset();
            } else {
                c.beta_omega0 = positive(key, v);
            }
        } else if (key == "solvers") {
            if (!v.is_array()) throw ConfigError(key + ": expected an array of solver names");
            c.solvers.clear();
            for (const json& s : v) {
                const Solver solver = parse_solver(text(key, s));
                if (std::find(c.solvers.begin(), c.solvers.end(), solver) != c.solvers.end()) {
                    throw ConfigError(key + ": duplicate solver '" + to_string(solver) + "'");
                }
                c.solvers.push_back(solver);
            }
            if (c.solvers.empty()) throw ConfigError(key + ": must list at least one solver");
        } else if (key == "init") {
            c.init = qubit::parse_initial_state(text(key, v));
        } else if (key == "eps_r") {
            c.eps_r = number(key, v);
            if (!(c.eps_r > 0.0 && c.eps_r < 1.0)) throw ConfigError(key + ": must lie in (0, 1)");
        } else if (key == "depth") {
            c.depth = count(key, v, 1);
        } else if (key == "t_max") {
            c.t_max = positive(key, v);
        } else if (key == "n_points") {
            c.n_points = count(key, v, 2);
        } else if (key == "integrator") {
            const std::string m = text(key, v);
            if (m == "adaptive") {
                c.integrator = ode::Method::adaptive;
            } else if (m == "fixed") {
                c.integrator = ode::Method::fixed;
            } else {
                throw ConfigError(key + ": expected adaptive or fixed, got '" + m + "'");
            }
        } else if (key == "rtol") {
            c.rtol = positive(key, v);
        } else if (key == "atol") {
            c.atol = positive(key, v);
        } else if (key == "fixed_step") {
            c.fixed_step = positive(key, v);
        } else if (key == "fit_t_max") {
            if (v.is_null()) c.fit_t_max.reset(); else c.fit_t_max = positive(key, v);
        } else if (key == "fit_points") {
            if (v.is_null()) c.fit_points.reset(); else c.fit_points = count(key, v, 4);
        } else if (key == "fit_file") {
            if (v.is_null()) c.fit_file.reset(); else c.fit_file = text(key, v);
        } else if (key == "scaled_ados") {
            c.scaled_ados = boolean(key, v);
        } else if (key == "exact_dt") {
            if (v.is_null()) c.exact_dt.reset(); else c.exact_dt = positive(key, v);
        } else if (key == "redfield_dt") {
            c.redfield_dt = positive(key, v);
        } else if (key == "redfield_mode") {
            c.redfield_mode = parse_mode(text(key, v));
        } else if (key == "output_prefix") {
            c.output_prefix = text(key, v);
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string to_json(const ScenarioConfig& c) {
    json doc;
    doc["eta"] = c.eta;
    doc["omega0"] = c.omega0;
    doc["omega_c"] = c.omega_c;
    doc["omega0_tau_over_2pi"] = c.omega0_tau_over_2pi;
    if (c.beta_omega0) doc["beta_omega0"] = *c.beta_omega0; else doc["beta_omega0"] = "inf";
    json solvers = json::array();
    for (Solver s : c.solvers) solvers.push_back(to_string(s));
    doc["solvers"] = solvers;
    doc["init"] = qubit::to_string(c.init);
    doc["eps_r"] = c.eps_r;
    doc["depth"] = c.depth;
    doc["t_max"] = c.t_max;
    doc["n_points"] = c.n_points;
    doc["integrator"] = c.integrator == ode::Method::adaptive ? "adaptive" : "fixed";
    doc["rtol"] = c.rtol;
    doc["atol"] = c.atol;
    doc["fixed_step"] = c.fixed_step;
    doc["fit_t_max"] = c.fit_t_max ? json(*c.fit_t_max) : json(nullptr);
    doc["fit_points"] = c.fit_points ? json(*c.fit_points) : json(nullptr);
    doc["fit_file"] = c.fit_file ? json(*c.fit_file) : json(nullptr);
    doc["scaled_ados"] = c.scaled_ados;
    doc["exact_dt"] = c.exact_dt ? json(*c.exact_dt) : json(nullptr);
    doc["redfield_dt"] = c.redfield_dt;
    doc["redfield_mode"] = mode_name(c.redfield_mode);
    doc["output_prefix"] = c.output_prefix;
    return doc.dump(2) + "\n";
}

expfit::BcfFit obtain_fit(const ScenarioConfig& cfg) {
    if (cfg.fit_file) {
        std::ifstream in(*cfg.fit_file, std::ios::binary);
        if (!in) throw ConfigError("fit_file: cannot open '" + *cfg.fit_file + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        expfit::BcfFit fit = expfit::from_json(buf.str());
        const double slowest = std::min(fit.real_part.sum.min_decay_rate(), fit.imag_part.sum.min_decay_rate());
        if (slowest < -expfit::kStabilityBound) {
            throw ConfigError("fit_file: contains a growing rate (Re g = " + csv::format_double(slowest) + ")");
        }
        return fit;
    }
    return expfit::fit_bcf(cfg.bath(), cfg.eps_r, cfg.fit_grid());
}

HeomRun run_heom(const ScenarioConfig& cfg) { return run_heom(cfg, obtain_fit(cfg)); }

HeomRun run_heom(const ScenarioConfig& cfg, const expfit::BcfFit& fit) {
    const auto space = heom::HierarchySpace::enumerate(fit.real_part.sum.size(), fit.imag_part.sum.size(), cfg.depth);
    heom::PropagateOptions opts;
    opts.integrator = cfg.integrator_config();
    opts.generator.scaled = cfg.scaled_ados;
    HeomRun run;
    run.fit = fit;
    run.n_ados = space.size();
    run.result = heom::propagate(space, fit.real_part.sum, fit.imag_part.sum, cfg.omega0,
                                 qubit::initial_state(cfg.init), cfg.time_grid(), opts);
    return run;
}

ExactRun run_exact(const ScenarioConfig& cfg) {
    const bath::BathParams p = cfg.bath();
    const double dt = cfg.exact_dt.value_or(rwa_exact::max_step(p));
    ExactRun run;
    run.green = rwa_exact::solve_green(p, cfg.t_max, dt);
    run.rates = rwa_exact::extract_rates(run.green);
    const qubit::QubitState rho0 = qubit::initial_state(cfg.init);
    const qubit::Matrix2& r0 = rho0.matrix();
    const std::complex<double> i{0.0, 1.0};
    for (double t : cfg.time_grid()) {
        const std::complex<double> g = run.green.at(std::min(t, run.green.t.back()));
        const double p_ee = std::norm(g) * r0(1, 1).real();
        const std::complex<double> eg = g * r0(1, 0) * std::exp(-i * cfg.omega0 * t);
        qubit::Matrix2 rho;
        rho << 1.0 - p_ee, std::conj(eg), eg, p_ee;
        run.trajectory.push_back(t, rho);
    }
    return run;
}

RedfieldRun run_redfield(const ScenarioConfig& cfg) {
    const bath::BathParams p = cfg.bath();
    RedfieldRun run;
    run.coefficients = redfield::compute_coefficients(p, cfg.t_max, cfg.redfield_dt);
    run.result = redfield::propagate_redfield(run.coefficients, cfg.omega0, qubit::initial_state(cfg.init),
                                              cfg.time_grid(), cfg.resolved_redfield_mode());
    return run;
}

double revival_metric(const qubit::Trajectory& traj, double tau) {
    if (traj.size() == 0) return 0.0;
    std::size_t before = 0;
    for (std::size_t k = 0; k < traj.size() && traj.t[k] <= tau; ++k) before = k;
    const double reference = traj.rho[before](1, 1).real();
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.t[k] >= tau) peak = std::max(peak, traj.rho[k](1, 1).real());
    }
    return std::isfinite(peak) ? peak - reference : 0.0;
}

double fitted_decay_rate(const qubit::Trajectory& traj, double t_end) {
    double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < traj.size() && traj.t[k] <= t_end; ++k) {
        const double p = traj.rho[k](1, 1).real();
        if (!(p > 0.0)) continue;
        const double x = traj.t[k];
        const double y = std::log(p);
        n += 1.0;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    if (n < 2.0 || den == 0.0) throw DomainError("fitted_decay_rate: not enough positive samples");
    return -(n * sxy - sx * sy) / den;
}

double long_time_population(const qubit::Trajectory& traj, double fraction) {
    if (traj.size() == 0) throw DomainError("long_time_population: empty trajectory");
    const auto tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(traj.size()))));
    double acc = 0.0;
    for (std::size_t k = traj.size() - tail; k < traj.size(); ++k) acc += traj.rho[k](1, 1).real();
    return acc / static_cast<double>(tail);
}

double max_abs_deviation(const qubit::Trajectory& a, const qubit::Trajectory& b) {
    if (a.size() != b.size()) throw DomainError("max_abs_deviation: trajectories on different grids");
    double out = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        out = std::max(out, std::abs(a.rho[k](1, 1).real() - b.rho[k](1, 1).real()));
    }
    return out;
}

const SolverOutcome* ComparisonRecord::find(Solver s) const {
    for (const SolverOutcome& o : outcomes) {
        if (o.solver == s) return &o;
    }
    return nullptr;
}

std::string trajectory_csv(const qubit::Trajectory& traj, bool positivity_column) {
    std::ostringstream out;
    std::vector<std::string> header{"t", "P_ee", "Re_P_eg", "Im_P_eg", "trace_defect"};
    if (positivity_column) header.emplace_back("positivity_defect");
    csv::Writer w(out, header);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const qubit::Matrix2& r = traj.rho[k];
        std::vector<double> row{traj.t[k], r(1, 1).real(), r(1, 0).real(), r(1, 0).imag(), qubit::trace_defect(r)};
        if (positivity_column) row.push_back(traj.positivity[k]);
        w.row(row);
    }
    return out.str();
}

std::string rates_csv(const rwa_exact::RateFunctions& rates) {
    std::ostringstream out;
    csv::Writer w(out, {"t", "gamma_minus", "h", "undefined_flag"});
    for (std::size_t k = 0; k < rates.t.size(); ++k) {
        w.row({rates.t[k], rates.gamma_minus[k], rates.lamb_shift[k], rates.undefined[k] ? 1.0 : 0.0});
    }
    return out.str();
}

std::string comparison_csv(const ComparisonRecord& record) {
    std::ostringstream out;
    std::vector<std::string> header{"t"};
    for (const SolverOutcome& o : record.outcomes) {
        const std::string s = to_string(o.solver);
        header.push_back("P_ee_" + s);
        header.push_back("Re_P_eg_" + s);
        header.push_back("Im_P_eg_" + s);
    }
    csv::Writer w(out, header);
    for (std::size_t k = 0; k < record.t.size(); ++k) {
        std::vector<double> row{record.t[k]};
        for (const SolverOutcome& o : record.outcomes) {
            const qubit::Matrix2& r = o.trajectory.rho[k];
            row.push_back(r(1, 1).real());
            row.push_back(r(1, 0).real());
            row.push_back(r(1, 0).imag());
        }
        w.row(row);
    }
    return out.str();
}

std::string summary_json(const ScenarioConfig& cfg, const ComparisonRecord& record) {
    json doc;
    doc["config"] = json::parse(to_json(cfg));
    doc["tau"] = record.tau;
    json solvers = json::object();
    for (const SolverOutcome& o : record.outcomes) {
        solvers[to_string(o.solver)] = {{"revival_metric", o.revival},
                                        {"max_trace_defect", o.trajectory.max_trace_defect},
                                        {"max_hermiticity_defect", o.trajectory.max_hermiticity_defect},
                                        {"max_positivity_defect", o.trajectory.max_positivity_defect},
                                        {"flagged", o.flagged},
                                        {"note", o.note}};
    }
    doc["solvers"] = solvers;
    json devs = json::array();
    for (const PairDeviation& d : record.deviations) {
        devs.push_back({{"a", to_string(d.a)}, {"b", to_string(d.b)}, {"max_abs_P_ee", d.max_abs_p_ee}});
    }
    doc["deviations"] = devs;
    doc["flagged"] = record.flagged;
    return doc.dump(2) + "\n";
}

ComparisonRecord run_comparison(const ScenarioConfig& cfg, const ComparisonOptions& options) {
    cfg.validate();
    const bath::BathParams p = cfg.bath();
    if (!p.beta.is_zero_temperature() &&
        std::find(cfg.solvers.begin(), cfg.solvers.end(), Solver::exact) != cfg.solvers.end()) {
        throw ConfigError("solvers: the exact solver requires beta_omega0 = \"inf\"");
    }
    ComparisonRecord record;
    record.t = cfg.time_grid();
    record.tau = p.tau;

    for (Solver s : cfg.solvers) {
        SolverOutcome o;
        o.solver = s;
        switch (s) {
            case Solver::heom: {
                HeomRun run = run_heom(cfg);
                o.trajectory = std::move(run.result.trajectory);
                const bool fit_ok = run.fit.real_part.report.converged && run.fit.imag_part.report.converged;
                const bool defects_ok = o.trajectory.max_trace_defect <= qubit::kStateTolerance &&
                                        o.trajectory.max_hermiticity_defect <= qubit::kStateTolerance;
                o.flagged = !fit_ok || !defects_ok;
                o.note = "fit terms (" + std::to_string(run.fit.real_part.sum.size()) + ", " +
                         std::to_string(run.fit.imag_part.sum.size()) + "), " + std::to_string(run.n_ados) + " ADOs";
                break;
            }
            case Solver::exact: {
                ExactRun run = run_exact(cfg);
                o.trajectory = std::move(run.trajectory);
                o.note = "dt " + csv::format_double(run.green.dt);
                if (options.write_files) {
                    csv::write_file(cfg.output_prefix + "_exact_rates.csv", rates_csv(run.rates));
                }
                break;
            }
            case Solver::redfield: {
                RedfieldRun run = run_redfield(cfg);
                o.trajectory = std::move(run.result.trajectory);
                o.note = cfg.resolved_redfield_mode() == redfield::Mode::rwa_full ? "rwa-full" : "rwa-minus";
                if (cfg.beta_omega0) o.note += " (finite-temperature extension)";
                break;
            }
        }
        o.revival = revival_metric(o.trajectory, p.tau);
        record.flagged = record.flagged || o.flagged;
        record.outcomes.push_back(std::move(o));
    }
    for (std::size_t a = 0; a < record.outcomes.size(); ++a) {
        for (std::size_t b = a + 1; b < record.outcomes.size(); ++b) {
            record.deviations.push_back({record.outcomes[a].solver, record.outcomes[b].solver,
                                         max_abs_deviation(record.outcomes[a].trajectory, record.outcomes[b].trajectory)});
        }
    }
    if (options.write_files) {
        for (const SolverOutcome& o : record.outcomes) {
            csv::write_file(cfg.output_prefix + "_" + to_string(o.solver) + ".csv",
                            trajectory_csv(o.trajectory, o.solver == Solver::redfield));
        }
        csv::write_file(cfg.output_prefix + "_comparison.csv", comparison_csv(record));
        csv::write_file(cfg.output_prefix + "_summary.json", summary_json(cfg, record));
    }
    return record;
}

}  // namespace giant_heom::scenarios
