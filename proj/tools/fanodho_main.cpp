// fanodho — exact diagonalization of damped-oscillator bath models:
// lineshapes, Heisenberg coefficients, mean-position dynamics, classical
// Langevin ensembles, and discrete-bath cross checks.

#include <CLI11.hpp>

#include <clocale>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "fanodho/classical_bath.hpp"
#include "fanodho/discrete_oracle.hpp"
#include "fanodho/dynamics.hpp"
#include "fanodho/full_diag.hpp"
#include "fanodho/run_config.hpp"
#include "fanodho/rwa_diag.hpp"

using namespace fanodho;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string default_out(const RunConfig& cfg, const std::string& name) {
    if (!cfg.out_path.empty()) return cfg.out_path;
    const char* dir = std::getenv("FANODHO_OUT_DIR");
    const std::string base = dir && *dir ? dir : ".";
    return base + "/" + name + (cfg.format == "json" ? ".json" : ".csv");
}

std::string hash_hex(const RunConfig& cfg) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(cfg.hash()));
    return buf;
}

struct CsvWriter {
    std::ofstream out;
    CsvWriter(const std::string& path, const RunConfig& cfg, const std::string& header) {
        out.open(path, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot open output file " + path);
        out << "# config " << hash_hex(cfg) << "\n" << header << "\n";
    }
    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i)
            out << (i ? "," : "") << format_double(vals[i]);
        out << "\n";
    }
};

void write_json(const std::string& path, ordered_json j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file " + path);
    out << j.dump(2) << "\n";
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = n > 1 ? a + (b - a) * double(i) / double(n - 1) : a;
    return v;
}

// ---------------------------------------------------------------------------

int run_lineshape(const RunConfig& cfg) {
    DiagKernel::Options opt;
    opt.counter_term = cfg.counter_term;
    DiagKernel k(cfg.spectrum(), cfg.params(), {}, opt);
    const double w_hi = cfg.omega_max > 0.0
                            ? cfg.omega_max
                            : std::min(k.grid_max(), 5.0 * std::max(cfg.omega0, cfg.gamma));
    const auto grid = linspace(cfg.omega_min, w_hi, cfg.omega_points);
    const std::string path = default_out(cfg, "lineshape");
    CsvWriter csv(path, cfg, "omega,L_sq,A_L_sq,B_L_sq,C_L_sq");
    for (double w : grid) {
        const double L = k.lineshape_sq_at(w);
        csv.row({w, L, DiagKernel::coeff_A(k.params(), w) * L,
                 DiagKernel::coeff_B(k.params(), w) * L, DiagKernel::coeff_C(k.params(), w) * L});
    }
    std::cout << "lineshape: wrote " << grid.size() << " rows to " << path << "\n";
    return 0;
}

int run_evolve(const RunConfig& cfg) {
    const auto t_grid = linspace(cfg.t_min, cfg.t_max, cfg.t_points);
    const std::string path = default_out(cfg, "evolve");
    if (cfg.rwa) {
        RwaDiag::Options opt;
        opt.shift = cfg.counter_term ? RwaShiftKind::CounterTerm : RwaShiftKind::F;
        RwaDiag d(cfg.spectrum(), cfg.params(), {}, opt);
        CsvWriter csv(path, cfg, "t,re_c_a,im_c_a,abs_c_a,sum_rule_residual");
        for (double t : t_grid) {
            const auto ca = d.evolve_c_a(t);
            const double res = d.limit_mode() ? std::nan("") : d.sum_rule(t) - 1.0;
            csv.row({t, ca.real(), ca.imag(), std::abs(ca), res});
        }
    } else {
        DiagKernel::Options opt;
        opt.counter_term = cfg.counter_term;
        DiagKernel k(cfg.spectrum(), cfg.params(), {}, opt);
        CsvWriter csv(path, cfg,
                      "t,re_c_a,im_c_a,abs_c_a,re_c_adag,im_c_adag,abs_c_adag,sum_rule_residual");
        for (double t : t_grid) {
            const auto ev = evolve_a_full(k, t);
            const double res = k.limit_mode() ? commutator_sum_rule(k, t) - 1.0 : std::nan("");
            csv.row({t, ev.c_a.real(), ev.c_a.imag(), std::abs(ev.c_a), ev.c_adag.real(),
                     ev.c_adag.imag(), std::abs(ev.c_adag), res});
        }
    }
    std::cout << "evolve: wrote " << t_grid.size() << " rows to " << path << "\n";
    return 0;
}

int run_mean_q(const RunConfig& cfg) {
    const auto t_grid = linspace(cfg.t_min, cfg.t_max, cfg.t_points);
    const auto p = cfg.params();
    const std::string path = default_out(cfg, "mean_q");
    CsvWriter csv(path, cfg, "t,q_bare,q_shifted,q_classical");
    InitialState bare{cfg.q0, cfg.p0, ReservoirIC::Bare};
    InitialState shifted{cfg.q0, cfg.p0, ReservoirIC::Shifted};
    for (double t : t_grid)
        csv.row({t, mean_position(p, bare, t), mean_position(p, shifted, t),
                 classical_trajectory(p, cfg.q0, cfg.p0, t)});
    std::cout << "mean-q: wrote " << t_grid.size() << " rows to " << path << "\n";
    return 0;
}

int run_rwa_check(const RunConfig& cfg) {
    DiagKernel::Options opt;
    opt.counter_term = cfg.counter_term;
    auto rep = rwa_reduction(cfg.spectrum(), cfg.params(), {}, opt);
    ordered_json j;
    j["config"] = hash_hex(cfg);
    j["valid"] = rep.valid;
    j["threshold"] = rep.threshold;
    j["weak_coupling_ratio"] = rep.weak_coupling_ratio;
    j["shift_ratio"] = rep.shift_ratio;
    j["reduced_to_gamma_condition"] = rep.reduced_to_gamma_condition;
    if (std::isfinite(rep.H_over_F_at_w0)) j["H_over_F_at_omega0"] = rep.H_over_F_at_w0;
    j["max_rel_dev_near_peak"] = rep.max_rel_dev_near_peak;
    j["omega"] = rep.omega;
    j["alpha_tilde_sq"] = rep.alpha_tilde_sq;
    j["lineshape_route"] = rep.lineshape_route;
    RunConfig c = cfg;
    c.format = "json";
    const std::string path = default_out(c, "rwa_check");
    write_json(path, std::move(j));
    std::cout << "rwa-check: " << (rep.valid ? "valid" : "not valid") << "; wrote " << path << "\n";
    return 0;
}

int run_langevin(const RunConfig& cfg) {
    const auto p = cfg.params();
    const auto s = cfg.spectrum();
    auto bath = discretize_bath(s, p, cfg.bath_modes, DiscretizationScheme::UniformFreq,
                                cfg.bath_omega_max);
    EnsembleConfig ec;
    ec.n_samples = cfg.n_samples;
    ec.kT = cfg.kT;
    ec.seed = cfg.seed;
    ec.dt = cfg.dt;
    ec.t_max = cfg.t_max;
    ec.n_output = cfg.t_points;
    ec.ic_variant = cfg.ic_variant == "bare" ? ReservoirIC::Bare : ReservoirIC::Shifted;

    auto stats = run_ensemble(bath, p, ec, cfg.q0, cfg.p0);
    auto force = fluctuating_force_stats(bath, p, ec, cfg.q0);

    if (cfg.format == "csv") {
        const std::string path = default_out(cfg, "langevin");
        CsvWriter csv(path, cfg, "t,q_mean,q_se,q_classical");
        for (std::size_t k = 0; k < stats.times.size(); ++k)
            csv.row({stats.times[k], stats.q_mean[k], stats.q_se[k],
                     classical_trajectory(p, cfg.q0, cfg.p0, stats.times[k])});
        std::cout << "langevin: wrote " << stats.times.size() << " rows to " << path << "\n";
        return 0;
    }
    ordered_json j;
    j["config"] = hash_hex(cfg);
    j["n_samples"] = stats.n_samples;
    j["recurrence_time"] = bath.recurrence_time();
    j["kick_impulse"] = force.kick_impulse;
    j["kick_impulse_se"] = force.kick_impulse_se;
    j["autocorr_integral"] = force.autocorr_integral;
    j["autocorr_integral_expected"] = 4.0 * p.mass * p.gamma * ec.kT;
    j["insufficient_samples"] = force.insufficient_samples;
    j["times"] = stats.times;
    j["q_mean"] = stats.q_mean;
    j["q_se"] = stats.q_se;
    j["mean_force"] = force.mean_force;
    j["se_force"] = force.se_force;
    j["autocorr_tau"] = force.autocorr_tau;
    j["autocorr"] = force.autocorr;
    const std::string path = default_out(cfg, "langevin");
    write_json(path, std::move(j));
    std::cout << "langevin: wrote " << path << "\n";
    return 0;
}

int run_oracle_compare(const RunConfig& cfg) {
    const auto p = cfg.params();
    if (cfg.limit_mode) throw std::invalid_argument("oracle-compare needs a finite-cutoff bath");
    const auto s = cfg.spectrum();
    auto bath = discretize_bath(s, p, cfg.bath_modes, DiscretizationScheme::UniformFreq,
                                cfg.bath_omega_max);
    // the continuum side lives on the same truncated support as the bath
    std::vector<std::pair<double, double>> table;
    const int nt = 8000;
    for (int i = 0; i <= nt; ++i) {
        const double w = bath.omega_max * i / nt;
        table.emplace_back(w, spectral_density(s, p.mass, w));
    }
    auto trunc = BathSpectrum::tabulated(std::move(table), cfg.gamma);

    const double t_hor = std::min(cfg.t_max, std::min(5.0 / p.gamma, M_PI / bath.delta_omega));
    const auto t_grid = linspace(cfg.t_min, t_hor, cfg.t_points);
    const std::string path = default_out(cfg, "oracle_compare");
    CsvWriter csv(path, cfg, "t,abs_c_a_continuum,abs_c_a_discrete,deviation");

    if (cfg.rwa) {
        auto modes = symplectic_diagonalize(build_quadratic_form(bath, p, true, false));
        RwaDiag cont(trunc, p);
        for (double t : t_grid) {
            const double c = std::abs(cont.evolve_c_a(t));
            const double d = std::abs(discrete_evolve_a(modes, t).c_a);
            csv.row({t, c, d, std::abs(c - d)});
        }
    } else {
        auto modes = symplectic_diagonalize(build_quadratic_form(bath, p, false, cfg.counter_term));
        DiagKernel::Options opt;
        opt.counter_term = cfg.counter_term;
        DiagKernel k(trunc, p, {}, opt);
        for (double t : t_grid) {
            const double c = std::abs(evolve_a_full(k, t).c_a);
            const double d = std::abs(discrete_evolve_a(modes, t).c_a);
            csv.row({t, c, d, std::abs(c - d)});
        }
    }
    std::cout << "oracle-compare: wrote " << t_grid.size() << " rows to " << path
              << " (recurrence time " << format_double(bath.recurrence_time()) << ")\n";
    return 0;
}

int run_appendix_b(const RunConfig& cfg) {
    RunConfig c = cfg;
    c.limit_mode = true;
    auto rep = appendix_b_check(c.spectrum(), c.params(),
                                linspace(std::max(cfg.t_min, 1e-3), cfg.t_max, cfg.t_points));
    const std::string path = default_out(cfg, "appendix_b");
    if (cfg.format == "json") {
        ordered_json j;
        j["config"] = hash_hex(cfg);
        j["I1_max_abs"] = rep.I1_max_abs;
        j["H_vs_2gammaL_max_rel"] = rep.H_vs_2gammaL_max_rel;
        j["t"] = rep.t_grid;
        j["I1"] = rep.I1;
        j["H_quad"] = rep.H_quad;
        j["H_closed"] = rep.H_closed;
        write_json(path, std::move(j));
    } else {
        CsvWriter csv(path, cfg, "t,I1,H_quad,H_closed");
        for (std::size_t k = 0; k < rep.t_grid.size(); ++k)
            csv.row({rep.t_grid[k], rep.I1[k], rep.H_quad[k], rep.H_closed[k]});
    }
    std::cout << "appendix-b: I1 max " << format_double(rep.I1_max_abs) << ", H rel dev "
              << format_double(rep.H_vs_2gammaL_max_rel) << "; wrote " << path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_NUMERIC, "C");
    CLI::App app{"exact diagonalization of damped harmonic oscillator bath models"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;

    // shared options; command-line flags override the config file
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value configuration file");
        sub->add_option("--mass", cfg.mass, "oscillator mass M");
        sub->add_option("--omega0", cfg.omega0, "oscillator frequency");
        sub->add_option("--gamma", cfg.gamma, "damping rate");
        sub->add_option("--cutoff", cfg.cutoff, "bath cutoff frequency");
        sub->add_option("--kT", cfg.kT, "thermal energy (classical ensemble)");
        sub->add_option("--bath", cfg.bath_kind, "drude | ohmic-sharp | tabulated");
        sub->add_option("--bath-table", cfg.bath_table, "csv table for tabulated baths");
        sub->add_flag("--counter-term,!--no-counter-term", cfg.counter_term,
                      "include the potential counter-term");
        sub->add_flag("--rwa", cfg.rwa, "rotating-wave approximation");
        sub->add_flag("--limit", cfg.limit_mode, "analytic cutoff -> infinity forms");
        sub->add_option("--seed", cfg.seed, "ensemble seed");
        sub->add_option("--out", cfg.out_path, "output path (default FANODHO_OUT_DIR)");
        sub->add_option("--format", cfg.format, "csv | json");
        sub->add_option("--omega-max", cfg.omega_max, "frequency grid upper edge");
        sub->add_option("--omega-points", cfg.omega_points, "frequency grid points");
        sub->add_option("--t-max", cfg.t_max, "time grid upper edge");
        sub->add_option("--t-points", cfg.t_points, "time grid points");
        sub->add_option("--modes", cfg.bath_modes, "discrete bath modes N");
        sub->add_option("--samples", cfg.n_samples, "ensemble samples");
        sub->add_option("--dt", cfg.dt, "integrator step");
        sub->add_option("--bath-omega-max", cfg.bath_omega_max, "discretization band edge");
        sub->add_option("--ic", cfg.ic_variant, "bare | shifted");
        sub->add_option("--q0", cfg.q0, "initial mean position");
        sub->add_option("--p0", cfg.p0, "initial mean momentum");
    };

    auto* c_lineshape = app.add_subcommand("lineshape", "spectral weight tables |L|^2, A/B/C curves");
    auto* c_evolve = app.add_subcommand("evolve", "Heisenberg coefficients of a(t) vs time");
    auto* c_meanq = app.add_subcommand("mean-q", "bare / shifted / classical mean trajectories");
    auto* c_rwacheck = app.add_subcommand("rwa-check", "validity report of the RWA reduction");
    auto* c_langevin = app.add_subcommand("langevin", "classical ensemble statistics");
    auto* c_oracle = app.add_subcommand("oracle-compare", "continuum vs discrete-bath deviations");
    auto* c_appb = app.add_subcommand("appendix-b", "bath-average identity residuals");
    for (auto* sub : {c_lineshape, c_evolve, c_meanq, c_rwacheck, c_langevin, c_oracle, c_appb})
        add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        if (!config_path.empty()) {
            cfg = RunConfig::from_file(config_path);
            // re-parse so explicit flags win over file values
            app.clear();
            app.parse(argc, argv);
        }
        cfg.validate();
        if (c_lineshape->parsed()) return run_lineshape(cfg);
        if (c_evolve->parsed()) return run_evolve(cfg);
        if (c_meanq->parsed()) return run_mean_q(cfg);
        if (c_rwacheck->parsed()) return run_rwa_check(cfg);
        if (c_langevin->parsed()) return run_langevin(cfg);
        if (c_oracle->parsed()) return run_oracle_compare(cfg);
        if (c_appb->parsed()) return run_appendix_b(cfg);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const StabilityError& e) {
        std::cerr << "validity condition violated: " << e.what() << "\n";
        return 4;
    } catch (const QuadratureError& e) {
        std::cerr << "numerical failure: " << e.what() << " (best estimate "
                  << format_double(e.best_estimate) << " +- " << format_double(e.error_estimate)
                  << ")\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
