// giant-heom {bcf|fit|simulate|meanforce|compare} --config <path> [flags]
//
// Exit status: 0 success, 2 config error, 3 solver failure, 4 output produced
// but flagged as not converged.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "giant_heom/bath.hpp"
#include "giant_heom/csv.hpp"
#include "giant_heom/errors.hpp"
#include "giant_heom/expfit.hpp"
#include "giant_heom/meanforce.hpp"
#include "giant_heom/parallel.hpp"
#include "giant_heom/scenarios.hpp"

namespace gh = giant_heom;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitFlagged = 4;

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
    } else {
        gh::csv::write_file(path, content);
    }
}

std::vector<std::optional<double>> parse_beta_list(const std::string& text) {
    std::vector<std::optional<double>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "inf") {
            out.emplace_back(std::nullopt);
            continue;
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || !(v > 0.0) || !std::isfinite(v)) {
            throw gh::ConfigError("--beta-list: invalid entry '" + item + "'");
        }
        out.emplace_back(v);
    }
    if (out.empty()) throw gh::ConfigError("--beta-list: empty list");
    return out;
}

struct Flags {
    std::string config;
    std::string out;
    std::optional<double> t_max;
    std::optional<std::size_t> points;
    std::optional<double> eps_r;
    std::optional<std::size_t> depth;
    std::optional<std::string> init;
    std::optional<std::string> fit;
    std::string method{"heom"};
    std::optional<std::string> mode;
    std::string emit_rates;
    std::string beta_list{"1,0.5,0.1"};
    std::optional<double> eta;
    std::optional<std::string> prefix;
};

int run_bcf(const Flags& f) {
    const auto cfg = gh::scenarios::load_config(f.config);
    const auto p = cfg.bath();
    const double t_max = f.t_max.value_or(p.tau > 0.0 ? 1.5 * p.tau : 10.0 / p.omega_c);
    const std::size_t n = f.points.value_or(512);
    if (!(t_max > 0.0) || n < 2) throw gh::ConfigError("--t-max/--points: need t_max > 0 and at least 2 points");
    std::ostringstream out;
    gh::csv::Writer w(out, {"t", "Re_C", "Im_C", "Re_C_quad", "Im_C_quad"});
    bool flagged = false;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = k + 1 == n ? t_max : t_max * static_cast<double>(k) / static_cast<double>(n - 1);
        const auto c = gh::bath::bcf_analytic(p, t);
        const auto q = gh::bath::bcf_quadrature(p, t);
        flagged = flagged || !q.converged;
        w.row({t, c.real(), c.imag(), q.value.real(), q.value.imag()});
    }
    emit(f.out, out.str());
    if (flagged) std::cerr << "warning: quadrature oracle missed its tolerance at some times\n";
    return flagged ? kExitFlagged : kExitOk;
}

int run_fit(const Flags& f) {
    auto cfg = gh::scenarios::load_config(f.config);
    if (f.eps_r) cfg.eps_r = *f.eps_r;
    if (f.t_max) cfg.fit_t_max = *f.t_max;
    if (f.points) cfg.fit_points = *f.points;
    cfg.validate();
    const auto fit = gh::expfit::fit_bcf(cfg.bath(), cfg.eps_r, cfg.fit_grid());
    emit(f.out, gh::expfit::to_json(fit));
    const bool ok = fit.real_part.report.converged && fit.imag_part.report.converged;
    std::cerr << "fit terms (N_R, N_I) = (" << fit.real_part.sum.size() << ", " << fit.imag_part.sum.size()
              << "), rel. L2 errors " << fit.real_part.report.rel_l2_error << ", "
              << fit.imag_part.report.rel_l2_error << "\n";
    return ok ? kExitOk : kExitFlagged;
}

int run_simulate(const Flags& f) {
    auto cfg = gh::scenarios::load_config(f.config);
    if (f.t_max) cfg.t_max = *f.t_max;
    if (f.points) cfg.n_points = *f.points;
    if (f.eps_r) cfg.eps_r = *f.eps_r;
    if (f.depth) cfg.depth = *f.depth;
    if (f.init) cfg.init = gh::qubit::parse_initial_state(*f.init);
    if (f.fit) cfg.fit_file = *f.fit;
    if (f.mode) {
        if (*f.mode == "rwa-minus") {
            cfg.redfield_mode = gh::scenarios::RedfieldModeSetting::rwa_minus;
        } else if (*f.mode == "rwa-full") {
            cfg.redfield_mode = gh::scenarios::RedfieldModeSetting::rwa_full;
        } else {
            throw gh::ConfigError("--mode: expected rwa-minus or rwa-full");
        }
    }
    cfg.validate();
    const auto solver = gh::scenarios::parse_solver(f.method);
    bool flagged = false;
    switch (solver) {
        case gh::scenarios::Solver::heom: {
            const auto run = gh::scenarios::run_heom(cfg);
            const auto& traj = run.result.trajectory;
            emit(f.out, gh::scenarios::trajectory_csv(traj, false));
            flagged = !run.fit.real_part.report.converged || !run.fit.imag_part.report.converged ||
                      traj.max_trace_defect > gh::qubit::kStateTolerance ||
                      traj.max_hermiticity_defect > gh::qubit::kStateTolerance;
            std::cerr << "heom: " << run.n_ados << " ADOs, " << run.result.stats.accepted << " steps, max trace defect "
                      << traj.max_trace_defect << "\n";
            break;
        }
        case gh::scenarios::Solver::exact: {
            if (!cfg.bath().beta.is_zero_temperature()) {
                throw gh::ConfigError("beta_omega0: the exact solver requires \"inf\"");
            }
            const auto run = gh::scenarios::run_exact(cfg);
            emit(f.out, gh::scenarios::trajectory_csv(run.trajectory, false));
            if (!f.emit_rates.empty()) emit(f.emit_rates, gh::scenarios::rates_csv(run.rates));
            flagged = run.green.max_abs() > 1.0 + gh::qubit::kStateTolerance;
            break;
        }
        case gh::scenarios::Solver::redfield: {
            const auto run = gh::scenarios::run_redfield(cfg);
            emit(f.out, gh::scenarios::trajectory_csv(run.result.trajectory, true));
            if (run.result.positivity_flagged) {
                std::cerr << "redfield: positivity defect " << run.result.trajectory.max_positivity_defect
                          << " exceeds " << gh::redfield::kPositivityFlag << "\n";
            }
            break;
        }
    }
    return flagged ? kExitFlagged : kExitOk;
}

int run_meanforce(const Flags& f) {
    auto cfg = gh::scenarios::load_config(f.config);
    if (f.eta) cfg.eta = *f.eta;
    cfg.validate();
    std::ostringstream out;
    gh::csv::Writer w(out, {"beta_omega0", "I1", "I2", "delta_omega", "P_ee_star", "P_ee_bare"});
    for (const auto& b : parse_beta_list(f.beta_list)) {
        cfg.beta_omega0 = b;
        const auto r = gh::meanforce::mean_force(cfg.bath());
        const double bw = b ? *b : std::numeric_limits<double>::infinity();
        w.row({bw, r.i1, r.i2, r.delta_omega, r.p_ee_star, r.p_ee_bare});
    }
    emit(f.out, out.str());
    return kExitOk;
}

int run_compare(const Flags& f) {
    auto cfg = gh::scenarios::load_config(f.config);
    if (f.prefix) cfg.output_prefix = *f.prefix;
    if (f.t_max) cfg.t_max = *f.t_max;
    if (f.points) cfg.n_points = *f.points;
    cfg.validate();
    const auto record = gh::scenarios::run_comparison(cfg);
    for (const auto& d : record.deviations) {
        std::cout << "max |dP_ee| " << gh::scenarios::to_string(d.a) << " vs " << gh::scenarios::to_string(d.b)
                  << ": " << gh::csv::format_double(d.max_abs_p_ee) << "\n";
    }
    for (const auto& o : record.outcomes) {
        std::cout << "revival metric " << gh::scenarios::to_string(o.solver) << ": "
                  << gh::csv::format_double(o.revival) << (o.flagged ? " (flagged)" : "") << "\n";
    }
    return record.flagged ? kExitFlagged : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-Markovian dynamics of a two-contact giant atom"};
    app.require_subcommand(1);
    Flags f;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "Scenario config (flat JSON)")->required();
    };

    auto* bcf = app.add_subcommand("bcf", "Analytic and quadrature BCF on a grid (CSV)");
    add_config(bcf);
    bcf->add_option("--t-max", f.t_max, "End of the time grid (default 1.5 tau)");
    bcf->add_option("--points", f.points, "Number of grid points (default 512)");
    bcf->add_option("--out", f.out, "Output path ('-' for stdout)");

    auto* fit = app.add_subcommand("fit", "Exponential decomposition of C_R and C_I (JSON)");
    add_config(fit);
    fit->add_option("--eps-r", f.eps_r, "Relative L2 threshold");
    fit->add_option("--t-max", f.t_max, "Sampling window");
    fit->add_option("--points", f.points, "Number of samples");
    fit->add_option("--out", f.out, "Output path ('-' for stdout)");

    auto* sim = app.add_subcommand("simulate", "Propagate one solver (CSV)");
    add_config(sim);
    sim->add_option("--method", f.method, "heom | exact | redfield")->check(CLI::IsMember({"heom", "exact", "redfield"}));
    sim->add_option("--mode", f.mode, "Redfield mode: rwa-minus | rwa-full");
    sim->add_option("--depth", f.depth, "HEOM truncation depth");
    sim->add_option("--eps-r", f.eps_r, "BCF fit threshold");
    sim->add_option("--t-max", f.t_max, "End of the output grid");
    sim->add_option("--points", f.points, "Output grid points");
    sim->add_option("--init", f.init, "excited | plus | mixed");
    sim->add_option("--fit", f.fit, "Fit JSON produced by 'fit'");
    sim->add_option("--emit-rates", f.emit_rates, "Exact solver: write t,gamma_minus,h,undefined_flag here");
    sim->add_option("--out", f.out, "Output path ('-' for stdout)");

    auto* mf = app.add_subcommand("meanforce", "Mean-force Gibbs populations (CSV)");
    add_config(mf);
    mf->add_option("--beta-list", f.beta_list, "Comma-separated beta*omega0 values ('inf' allowed)");
    mf->add_option("--eta", f.eta, "Coupling strength");
    mf->add_option("--out", f.out, "Output path ('-' for stdout)");

    auto* cmp = app.add_subcommand("compare", "Run all configured solvers and compare");
    add_config(cmp);
    cmp->add_option("--out-prefix", f.prefix, "Prefix for CSV/JSON outputs");
    cmp->add_option("--t-max", f.t_max, "End of the output grid");
    cmp->add_option("--points", f.points, "Output grid points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        gh::parallel::configure_workers();
        if (*bcf) return run_bcf(f);
        if (*fit) return run_fit(f);
        if (*sim) return run_simulate(f);
        if (*mf) return run_meanforce(f);
        if (*cmp) return run_compare(f);
    } catch (const gh::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const gh::SolverError& e) {
        std::cerr << "solver failure at t = " << e.failure_time() << ": " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitConfig;
}
