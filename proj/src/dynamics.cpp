#include "fanodho/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fanodho/full_diag.hpp"

namespace fanodho {

namespace {
constexpr double kCriticalWindow = 1e-8;
}

DampingRegime damping_regime(const ModelParams& p) {
    if (std::abs(p.gamma - p.omega0) < kCriticalWindow * p.omega0) return DampingRegime::Critical;
    return p.gamma < p.omega0 ? DampingRegime::Under : DampingRegime::Over;
}

double DampingBasis::c(double t) const {
    const double d = omega0 * omega0 - gamma * gamma;
    if (std::abs(omega0 - gamma) < kCriticalWindow * omega0) {
        // two-term series in (w' t)^2; avoids the overdamped cancellation
        return 1.0 + 0.5 * (-d) * t * t;
    }
    if (d > 0.0) return std::cos(std::sqrt(d) * t);
    return std::cosh(std::sqrt(-d) * t);
}

double DampingBasis::s_over(double t) const {
    const double d = omega0 * omega0 - gamma * gamma;
    if (std::abs(omega0 - gamma) < kCriticalWindow * omega0) {
        return t * (1.0 + (-d) * t * t / 6.0);
    }
    if (d > 0.0) {
        const double wp = std::sqrt(d);
        return std::sin(wp * t) / wp;
    }
    const double nu = std::sqrt(-d);
    return std::sinh(nu * t) / nu;
}

double damping_kernel_L(const ModelParams& p, double t) {
    if (t < 0.0) throw std::invalid_argument("damping_kernel_L: t must be >= 0");
    const DampingBasis b{p.omega0, p.gamma};
    return std::exp(-p.gamma * t) * b.s_over(t);
}

double damping_kernel_dL(const ModelParams& p, double t) {
    if (t < 0.0) throw std::invalid_argument("damping_kernel_dL: t must be >= 0");
    const DampingBasis b{p.omega0, p.gamma};
    return std::exp(-p.gamma * t) * (b.c(t) - p.gamma * b.s_over(t));
}

double mean_position(const ModelParams& p, const InitialState& ic, double t) {
    const double L = damping_kernel_L(p, t);
    const double dL = damping_kernel_dL(p, t);
    double q = ic.q0 * dL + ic.p0 / p.mass * L;
    if (ic.reservoir_ic == ReservoirIC::Shifted) q += ic.q0 * 2.0 * p.gamma * L;
    return q;
}

double classical_trajectory(const ModelParams& p, double q0, double p0, double t) {
    const DampingBasis b{p.omega0, p.gamma};
    return std::exp(-p.gamma * t) * (q0 * b.c(t) + (q0 * p.gamma + p0 / p.mass) * b.s_over(t));
}

Trajectory mean_trajectory(const ModelParams& p, const InitialState& ic,
                           const std::vector<double>& times) {
    Trajectory tr;
    tr.times = times;
    tr.q_mean.resize(times.size());
    tr.regime = damping_regime(p);
    for (std::size_t i = 0; i < times.size(); ++i) tr.q_mean[i] = mean_position(p, ic, times[i]);
    return tr;
}

// ---------------------------------------------------------------------------
// Appendix-B identities. Both I1 and I2 are Fourier-type integrals of
// rational functions of W; the slow 1/W^2 parts are matched by the standard
// kernels int_0^inf cos(Wt)/(W^2+a^2) dW = (pi/2a) e^{-at} and its square,
// so the numerical remainder decays fast enough to truncate.

namespace {

double aux_cos_lorentz(double a, double t) { return (M_PI / (2.0 * a)) * std::exp(-a * t); }
double aux_cos_lorentz_sq(double a, double t) {
    return (M_PI / (4.0 * a * a * a)) * (1.0 + a * t) * std::exp(-a * t);
}
double aux_sin_w_lorentz_sq(double a, double t) {
    return (M_PI * t / (4.0 * a)) * std::exp(-a * t);
}

} // namespace

AppendixBReport appendix_b_check(const BathSpectrum& s, const ModelParams& p,
                                 const std::vector<double>& t_grid, const QuadratureConfig& cfg,
                                 ExecPolicy policy) {
    if (!s.cutoff_infinite)
        throw std::invalid_argument("appendix_b_check: requires the ohmic cutoff->infinity spectrum");
    const double w0 = p.omega0, g = s.gamma;
    ModelParams pl = p;
    pl.gamma = g;

    QuadratureConfig tight = cfg;
    tight.abs_tol = std::min(cfg.abs_tol, 1e-12);
    tight.rel_tol = std::min(cfg.rel_tol, 1e-10);
    tight.max_subdivisions = std::max<std::size_t>(cfg.max_subdivisions, 20000);

    AppendixBReport rep;
    rep.t_grid = t_grid;
    rep.I1.resize(t_grid.size());
    rep.H_quad.resize(t_grid.size());
    rep.H_closed.resize(t_grid.size());

    const DampingBasis basis{w0, g};
    const double X_smooth = 100.0 * std::max(w0, g);

    parallel_for(t_grid.size(), policy, [&](std::size_t i) {
        const double t = t_grid[i];
        if (t < 0.0) throw std::invalid_argument("appendix_b_check: t must be >= 0");

        // I1(t) = -(4g/pi^2) int_0^inf X_R(W;t) dW, split into the rational
        // part of X_R and its W-oscillatory part
        const double ct = basis.c(t), st = basis.s_over(t);
        const double egt = std::exp(-g * t);
        auto smooth = [&](double W) {
            const double D = limit_closed::denom_D(pl, W);
            return -M_PI * egt * ((W * W - w0 * w0) * ct - g * (W * W + w0 * w0) * st) / D;
        };
        double xr_int = quad::integrate(smooth, 0.0, X_smooth, tight).value +
                        quad::integrate_to_inf(smooth, X_smooth, tight).value;
        if (t > 0.0) {
            // oscillatory part: -2 pi g int W sin(Wt)/D, matched by the
            // kernel int_0^inf W sin(Wt)/(W^2+a^2)^2 dW at large W
            auto osc_reg = [&](double W) {
                const double D = limit_closed::denom_D(pl, W);
                const double l2 = (W * W + w0 * w0);
                return W / D - W / (l2 * l2);
            };
            const double X_osc = 60.0 * std::max(w0, g);
            double osc = quad::osc_sin(osc_reg, 0.0, X_osc, t, tight).value;
            osc += aux_sin_w_lorentz_sq(w0, t);
            xr_int += -2.0 * M_PI * g * osc;
        }
        rep.I1[i] = -(4.0 * g / (M_PI * M_PI)) * xr_int;

        // H(t) = (4g/pi) int_0^inf (w0^2-W^2)/D cos(Wt) dW
        auto r_reg = [&](double W) {
            const double D = limit_closed::denom_D(pl, W);
            const double l2 = W * W + w0 * w0;
            return (w0 * w0 - W * W) / D + 1.0 / l2 - (4.0 * g * g - 2.0 * w0 * w0) / (l2 * l2);
        };
        const double X_cos = 100.0 * std::max(w0, g);
        double h = quad::osc_cos(r_reg, 0.0, X_cos, t, tight).value;
        h += -aux_cos_lorentz(w0, t) + (4.0 * g * g - 2.0 * w0 * w0) * aux_cos_lorentz_sq(w0, t);
        rep.H_quad[i] = (4.0 * g / M_PI) * h;
        rep.H_closed[i] = 2.0 * g * damping_kernel_L(pl, t);
    });

    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        rep.I1_max_abs = std::max(rep.I1_max_abs, std::abs(rep.I1[i]));
        if (rep.H_closed[i] != 0.0)
            rep.H_vs_2gammaL_max_rel =
                std::max(rep.H_vs_2gammaL_max_rel,
                         std::abs(rep.H_quad[i] - rep.H_closed[i]) / std::abs(rep.H_closed[i]));
    }
    return rep;
}

BathResponseTables bath_response_tables(const BathSpectrum& s, const ModelParams& p,
                                        const std::vector<double>& Omega_grid, double t,
                                        const QuadratureConfig& cfg, ExecPolicy policy) {
    if (t < 0.0) throw std::invalid_argument("bath_response_tables: t must be >= 0");
    DiagKernel::Options opt;
    opt.counter_term = true;
    DiagKernel k(s, p, cfg, opt);
    const double hi = k.grid_max();

    BathResponseTables out;
    out.t = t;
    out.Omega = Omega_grid;
    out.W_R.resize(Omega_grid.size());
    out.Z_R.resize(Omega_grid.size());

    parallel_for(Omega_grid.size(), policy, [&](std::size_t i) {
        const double W = Omega_grid[i];
        auto g2 = [&](double w) { return 2.0 * k.lineshape_sq_at(w); };
        // PV int g2 sin(wt)/(w^2 - W^2) dw
        //   = (1/2W)[ PV int g2 sin/(w-W) - int g2 sin/(w+W) ]
        auto pv = quad::cauchy_pv_osc(g2, W, t, 0.0, hi, cfg);
        const double pv_sin = -std::imag(-pv.value); // PV int g2 sin(wt)/(w-W)
        auto anti = [&](double w) { return g2(w) / (w + W); };
        const double reg_sin = quad::osc_sin(anti, 0.0, hi, t, cfg).value;
        out.W_R[i] = (pv_sin - reg_sin) / (2.0 * W);
        out.Z_R[i] = k.lineshape_sq_at(W) / k.coupling(W) *
                     ((W * W - p.omega0 * p.omega0) / (2.0 * p.omega0) - k.shift(W));
    });
    return out;
}

} // namespace fanodho
