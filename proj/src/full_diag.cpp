#include "fanodho/full_diag.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fanodho/dynamics.hpp"

namespace fanodho {

namespace {

bool has_closed_shift(const BathSpectrum& s) {
    return s.kind == SpectrumKind::Drude || s.kind == SpectrumKind::OhmicSharp;
}

double closed_shift_H(const BathSpectrum& s, const ModelParams& p, double w) {
    ModelParams q = p;
    q.gamma = s.gamma;
    q.cutoff = s.cutoff;
    if (s.kind == SpectrumKind::Drude) return closed_form::drude_H(q, w);
    return closed_form::ohmic_sharp_H(q, w);
}

double closed_freq_shift_sq(const BathSpectrum& s, const ModelParams& p) {
    ModelParams q = p;
    q.gamma = s.gamma;
    q.cutoff = s.cutoff;
    if (s.kind == SpectrumKind::Drude) return closed_form::drude_freq_shift_sq(q);
    return closed_form::ohmic_sharp_freq_shift_sq(q);
}

// pointwise active shift for the free operations (closed form where
// available, quadrature otherwise)
double shift_value(const BathSpectrum& s, const ModelParams& p, double w, bool counter_term,
                   const QuadratureConfig& cfg) {
    if (s.cutoff_infinite) {
        if (!counter_term)
            throw StabilityError(
                "shift: without the counter-term the cutoff->infinity model violates "
                "omega0^2 > |Delta w^2| (Delta w^2 diverges)");
        return 0.0;
    }
    double H = has_closed_shift(s) ? closed_shift_H(s, p, w) : level_shift_H(s, p, w, cfg);
    if (counter_term) {
        const double dw2 =
            has_closed_shift(s) ? closed_freq_shift_sq(s, p) : frequency_shift_sq(s, p, cfg);
        H += dw2 / (2.0 * p.omega0);
    }
    return H;
}

} // namespace

double z_of_omega(const BathSpectrum& s, const ModelParams& p, double w, bool counter_term,
                  const QuadratureConfig& cfg) {
    const double vsq = coupling_sq(s, p, w);
    if (!(vsq > 0.0))
        throw std::domain_error("z_of_omega: coupling |v(w)|^2 vanishes at this frequency");
    const double Hx = shift_value(s, p, w, counter_term, cfg);
    return (w * w - p.omega0 * p.omega0 - 2.0 * p.omega0 * Hx) / (2.0 * p.omega0 * vsq);
}

double ModeWeights::beta_pv_coeff(double W) const {
    const double v = std::sqrt(coupling_sq(spectrum, params, W));
    return 2.0 * params.omega0 / (omega + params.omega0) * v * alpha;
}

double ModeWeights::beta_onshell() const { return z * beta_pv_coeff(omega); }

double ModeWeights::sigma(double W) const {
    const double v = std::sqrt(coupling_sq(spectrum, params, W));
    return 2.0 * params.omega0 / ((omega + W) * (omega + params.omega0)) * v * alpha;
}

ModeWeights mode_weights(const BathSpectrum& s, const ModelParams& p, double w, bool counter_term,
                         const QuadratureConfig& cfg) {
    const double vsq = coupling_sq(s, p, w);
    if (!(vsq > 0.0))
        throw std::domain_error("mode_weights: coupling |v(w)|^2 vanishes at this frequency");
    ModeWeights m;
    m.omega = w;
    m.spectrum = s;
    m.params = p;
    m.z = z_of_omega(s, p, w, counter_term, cfg);
    const double r = (w + p.omega0) / (2.0 * p.omega0);
    m.alpha_sq = r * r / (vsq * (M_PI * M_PI + m.z * m.z));
    m.alpha = std::sqrt(m.alpha_sq);
    m.chi = (w - p.omega0) / (w + p.omega0) * m.alpha;
    return m;
}

// ---------------------------------------------------------------------------
// Closed forms in the ohmic limit (counter-term included, H_R = 0).

namespace limit_closed {

double denom_D(const ModelParams& p, double w) {
    const double a = w * w - p.omega0 * p.omega0;
    const double b = 2.0 * p.gamma * w;
    return a * a + b * b;
}

double lineshape_sq(const ModelParams& p, double w) {
    return 2.0 * p.gamma * w / denom_D(p, w);
}

double X_R(const ModelParams& p, double W, double t) {
    const DampingBasis basis{p.omega0, p.gamma};
    const double w0sq = p.omega0 * p.omega0;
    const double egt = std::exp(-p.gamma * t);
    const double rational =
        egt * ((W * W - w0sq) * basis.c(t) - p.gamma * (W * W + w0sq) * basis.s_over(t));
    return -M_PI * (rational + 2.0 * p.gamma * W * std::sin(W * t)) / denom_D(p, W);
}

double W_R(const ModelParams& p, double W, double t) {
    const DampingBasis basis{p.omega0, p.gamma};
    const double P = W * W - p.omega0 * p.omega0 + 2.0 * p.gamma * p.gamma;
    const double egt = std::exp(-p.gamma * t);
    return -M_PI *
           (egt * (P * basis.s_over(t) + 2.0 * p.gamma * basis.c(t)) -
            2.0 * p.gamma * std::cos(W * t)) /
           denom_D(p, W);
}

double Z_R(const ModelParams& p, double W) {
    return M_PI * (W * W - p.omega0 * p.omega0) / denom_D(p, W);
}

std::complex<double> c_a(const ModelParams& p, double t) {
    const DampingBasis b{p.omega0, p.gamma};
    const double egt = std::exp(-p.gamma * t);
    const double c = b.c(t), s = b.s_over(t);
    const double re = egt * (c - p.gamma * s);
    const double im = -(egt / p.omega0) *
                      (p.gamma * c + (p.omega0 * p.omega0 - p.gamma * p.gamma) * s);
    return {re, im};
}

std::complex<double> c_adag(const ModelParams& p, double t) {
    const DampingBasis b{p.omega0, p.gamma};
    const double egt = std::exp(-p.gamma * t);
    return {0.0, -(p.gamma / p.omega0) * egt * (b.c(t) - p.gamma * b.s_over(t))};
}

} // namespace limit_closed

// ---------------------------------------------------------------------------
// DiagKernel

DiagKernel::DiagKernel(BathSpectrum s, ModelParams p, QuadratureConfig cfg, Options opt)
    : spectrum_(std::move(s)), params_(p), cfg_(cfg), opt_(opt) {
    spectrum_.validate();
    params_.validate();
    cfg_.validate();
    // keep the oscillator parameters in sync with the bath definition
    params_.gamma = spectrum_.gamma > 0.0 ? spectrum_.gamma : params_.gamma;
    if (!spectrum_.cutoff_infinite && spectrum_.kind != SpectrumKind::Tabulated)
        params_.cutoff = spectrum_.cutoff;

    const double w0 = params_.omega0;
    bool stable_bare = false;
    if (spectrum_.cutoff_infinite) {
        if (!opt_.counter_term)
            throw StabilityError(
                "DiagKernel: omega0^2 > |Delta w^2| is violated in the cutoff->infinity "
                "limit (Delta w^2 diverges); the counter-term is required");
        freq_shift_sq_ = std::numeric_limits<double>::quiet_NaN();
    } else {
        freq_shift_sq_ = has_closed_shift(spectrum_) ? closed_freq_shift_sq(spectrum_, params_)
                                                     : frequency_shift_sq(spectrum_, params_, cfg_);
        stable_bare = w0 * w0 > std::abs(freq_shift_sq_);
        if (!opt_.counter_term && !stable_bare) {
            std::ostringstream msg;
            msg << "DiagKernel: stability condition omega0^2 > |Delta w^2| violated without "
                   "the counter-term: omega0^2 = "
                << w0 * w0 << ", |Delta w^2| = " << std::abs(freq_shift_sq_);
            throw StabilityError(msg.str());
        }
    }
    shift_closed_form_ = spectrum_.cutoff_infinite || has_closed_shift(spectrum_);

    // frequency grid
    if (opt_.grid_max > 0.0) {
        grid_max_ = opt_.grid_max;
    } else if (spectrum_.cutoff_infinite) {
        grid_max_ = std::max(10.0 * w0, 6.0 * params_.gamma);
    } else if (spectrum_.kind == SpectrumKind::Tabulated) {
        grid_max_ = spectrum_.table.back().first;
    } else if (spectrum_.kind == SpectrumKind::OhmicSharp) {
        grid_max_ = spectrum_.cutoff;
    } else {
        grid_max_ = 10.0 * spectrum_.cutoff;
    }
    omega_ = graded_grid(w0, params_.gamma, grid_max_, opt_.grid_points, opt_.peak_points);

    // H cache for spectra without a closed form (one PV quadrature per node)
    if (!shift_closed_form_) {
        std::vector<double> Hv(omega_.size());
        parallel_for(omega_.size(), ExecPolicy::Parallel, [&](std::size_t i) {
            const double w = omega_[i];
            Hv[i] = w == 0.0 ? -freq_shift_sq_ / (2.0 * w0)
                             : level_shift_H(spectrum_, params_, w, cfg_);
        });
        shift_cache_ = PchipInterpolant(omega_, std::move(Hv));
    }

    // locate the lineshape peak: fixed point of w^2 = w0^2 + 2 w0 Hx(w)
    double x = w0;
    for (int it = 0; it < 200; ++it) {
        const double arg = w0 * w0 + 2.0 * w0 * shift(std::max(x, 1e-12));
        const double nx = std::sqrt(std::max(arg, 1e-12 * w0 * w0));
        if (std::abs(nx - x) <= 1e-14 * w0) {
            x = nx;
            break;
        }
        x = 0.5 * (x + nx);
    }
    resonance_ = std::min(x, grid_max_ * 0.999);
    width_ = std::max(M_PI * w0 * coupling(resonance_) / std::max(resonance_, 1e-12),
                      1e-9 * w0);
    if (resonance_ != w0) {
        // regrid around the actual peak
        omega_ = graded_grid(resonance_, std::max(width_, params_.gamma), grid_max_,
                             opt_.grid_points, opt_.peak_points);
        if (!shift_closed_form_) {
            std::vector<double> Hv(omega_.size());
            parallel_for(omega_.size(), ExecPolicy::Parallel, [&](std::size_t i) {
                const double w = omega_[i];
                Hv[i] = w == 0.0 ? -freq_shift_sq_ / (2.0 * w0)
                                 : level_shift_H(spectrum_, params_, w, cfg_);
            });
            shift_cache_ = PchipInterpolant(omega_, std::move(Hv));
        }
    }

    z_.resize(omega_.size());
    L_sq_renorm_.resize(omega_.size());
    if (stable_bare) L_sq_.resize(omega_.size());
    parallel_for(omega_.size(), ExecPolicy::Parallel, [&](std::size_t i) {
        const double w = omega_[i];
        const double vsq = coupling(w);
        const double Hb = bare_shift(w);
        const double Hr = spectrum_.cutoff_infinite ? 0.0 : Hb + freq_shift_sq_ / (2.0 * w0);
        const double Hx = opt_.counter_term ? Hr : Hb;
        const double num = 2.0 * M_PI * w0 * vsq;
        auto lsq = [&](double H) {
            const double d = w * w - w0 * w0 - 2.0 * w0 * H;
            return vsq > 0.0 ? num / (d * d + num * num) : 0.0;
        };
        L_sq_renorm_[i] = lsq(Hr);
        if (stable_bare) L_sq_[i] = lsq(Hb);
        z_[i] = vsq > 0.0 ? (w * w - w0 * w0 - 2.0 * w0 * Hx) / (2.0 * w0 * vsq)
                          : std::numeric_limits<double>::quiet_NaN();
    });
}

double DiagKernel::bare_shift(double w) const {
    if (spectrum_.cutoff_infinite) return 0.0;
    if (shift_closed_form_) return closed_shift_H(spectrum_, params_, w);
    return shift_cache_(w);
}

double DiagKernel::shift(double w) const {
    if (spectrum_.cutoff_infinite) return 0.0;
    double H = bare_shift(w);
    if (opt_.counter_term) H += freq_shift_sq_ / (2.0 * params_.omega0);
    return H;
}

double DiagKernel::coupling(double w) const { return coupling_sq(spectrum_, params_, w); }

double DiagKernel::z_of(double w) const {
    const double vsq = coupling(w);
    if (!(vsq > 0.0))
        throw std::domain_error("DiagKernel::z_of: coupling vanishes at this frequency");
    const double w0 = params_.omega0;
    return (w * w - w0 * w0 - 2.0 * w0 * shift(w)) / (2.0 * w0 * vsq);
}

double DiagKernel::lineshape_sq_at(double w) const {
    const double vsq = coupling(w);
    if (!(vsq > 0.0)) return 0.0;
    const double w0 = params_.omega0;
    const double num = 2.0 * M_PI * w0 * vsq;
    const double d = w * w - w0 * w0 - 2.0 * w0 * shift(w);
    return num / (d * d + num * num);
}

std::vector<double> DiagKernel::peak_breaks() const {
    std::vector<double> b;
    for (double k : {40.0, 8.0, 1.0}) {
        const double lo = resonance_ - k * width_;
        const double hi = resonance_ + k * width_;
        if (lo > 0.0) b.push_back(lo);
        if (hi < grid_max_) b.push_back(hi);
    }
    b.push_back(resonance_);
    return b;
}

DiagKernel lineshape(const BathSpectrum& s, const ModelParams& p, const QuadratureConfig& cfg,
                     DiagKernel::Options opt) {
    return DiagKernel(s, p, cfg, opt);
}

// ---------------------------------------------------------------------------
// Heisenberg coefficients

namespace {

// standard Fourier kernels matching the slow large-w parts of the limit-mode
// integrands
double aux_cos_lorentz(double a, double t) { return (M_PI / (2.0 * a)) * std::exp(-a * t); }
double aux_cos_lorentz_sq(double a, double t) {
    return (M_PI / (4.0 * a * a * a)) * (1.0 + a * t) * std::exp(-a * t);
}
double aux_sin_w_lorentz(double a, double t) { return (M_PI / 2.0) * std::exp(-a * t); }
double aux_sin_w_lorentz_sq(double a, double t) {
    return (M_PI * t / (4.0 * a)) * std::exp(-a * t);
}

struct CaResult {
    std::complex<double> c_a, c_adag;
};

// limit mode: int (dw/pi) |L_R|^2 [A cos - iB sin] with the conditionally
// convergent 1/w parts of the B and C envelopes matched by Lorentzian
// kernels. The sine integrals jump at t = 0+ (size gamma/w0, the
// frequency-cutoff analog of the initial slip); at t = 0 exactly they vanish.
CaResult ca_limit_quadrature(const ModelParams& p, double t, const QuadratureConfig& cfg) {
    const double w0 = p.omega0, g = p.gamma;
    const double w0sq = w0 * w0;
    const double X = 60.0 * std::max(w0, g);
    auto D = [&](double w) { return limit_closed::denom_D(p, w); };

    QuadratureConfig c = cfg;
    c.abs_tol = std::min(cfg.abs_tol, 1e-10);

    const double cA = 3.0 * w0sq - 4.0 * g * g;
    auto phiA = [&](double w) {
        const double l2 = w * w + w0sq;
        return w * w / D(w) - 1.0 / l2 - cA / (l2 * l2);
    };
    const double IA = (4.0 * g / M_PI) *
                      (quad::osc_cos(phiA, 0.0, X, t, c).value + aux_cos_lorentz(w0, t) +
                       cA * aux_cos_lorentz_sq(w0, t));
    if (t == 0.0) return {{IA, 0.0}, {0.0, 0.0}};

    const double cB = 4.0 * (w0sq - g * g);
    auto phiB = [&](double w) {
        const double l2 = w * w + w0sq;
        return w * (w * w + w0sq) / D(w) - w / l2 - cB * w / (l2 * l2);
    };
    const double IB = (2.0 * g / (M_PI * w0)) *
                      (quad::osc_sin(phiB, 0.0, X, t, c).value + aux_sin_w_lorentz(w0, t) +
                       cB * aux_sin_w_lorentz_sq(w0, t));

    const double cC = 2.0 * (w0sq - 2.0 * g * g);
    auto phiC = [&](double w) {
        const double l2 = w * w + w0sq;
        return w * (w * w - w0sq) / D(w) - w / l2 - cC * w / (l2 * l2);
    };
    const double IC = (2.0 * g / (M_PI * w0)) *
                      (quad::osc_sin(phiC, 0.0, X, t, c).value + aux_sin_w_lorentz(w0, t) +
                       cC * aux_sin_w_lorentz_sq(w0, t));

    return {{IA, -IB}, {0.0, -IC}};
}

CaResult ca_finite_quadrature(const DiagKernel& k, double t) {
    const ModelParams& p = k.params();
    const double hi = k.grid_max();
    QuadratureConfig c = k.quad_config();
    c.abs_tol = std::min(c.abs_tol, 1e-9);

    const std::vector<double> brk = k.peak_breaks();
    auto fA = [&](double w) { return k.lineshape_sq_at(w) * DiagKernel::coeff_A(p, w) / M_PI; };
    auto fB = [&](double w) { return k.lineshape_sq_at(w) * DiagKernel::coeff_B(p, w) / M_PI; };
    auto fC = [&](double w) { return k.lineshape_sq_at(w) * DiagKernel::coeff_C(p, w) / M_PI; };
    double IA = quad::osc_cos(fA, 0.0, hi, t, c, brk).value;
    const double IB = quad::osc_sin(fB, 0.0, hi, t, c, brk).value;
    const double IC = quad::osc_sin(fC, 0.0, hi, t, c, brk).value;
    if (t == 0.0 && k.spectrum().kind == SpectrumKind::Drude)
        IA += quad::integrate_to_inf(fA, hi, c).value;
    return {{IA, -IB}, {0.0, -IC}};
}

} // namespace

EvolutionCoefficients evolve_a_full(const DiagKernel& k, double t,
                                    const std::vector<double>& Omega_grid, ExecPolicy policy) {
    if (t < 0.0) throw std::invalid_argument("evolve_a_full: t must be >= 0");
    const ModelParams& p = k.params();
    EvolutionCoefficients ev;
    ev.t = t;

    const CaResult ca =
        k.limit_mode() ? ca_limit_quadrature(p, t, k.quad_config()) : ca_finite_quadrature(k, t);
    ev.c_a = ca.c_a;
    ev.c_adag = ca.c_adag;

    if (Omega_grid.empty()) return ev;
    ev.Omega = Omega_grid;
    const std::size_t n = Omega_grid.size();
    ev.B1.resize(n);
    ev.B2.resize(n);
    ev.X.resize(n);
    ev.Y_plus.resize(n);
    ev.Y_minus.resize(n);
    ev.Z.resize(n);

    const double w0 = p.omega0;
    if (k.limit_mode()) {
        const double piL = M_PI * damping_kernel_L(p, t);
        parallel_for(n, policy, [&](std::size_t i) {
            const double W = Omega_grid[i];
            const double X = limit_closed::X_R(p, W, t);
            const double Wr = limit_closed::W_R(p, W, t);
            const double Z = limit_closed::Z_R(p, W);
            const double Yp = piL + W * (W + w0) * Wr;
            const double Ym = piL + W * (W - w0) * Wr;
            const double v = std::sqrt(k.coupling(W));
            const std::complex<double> em = std::exp(std::complex<double>(0.0, -W * t));
            ev.X[i] = X;
            ev.Y_plus[i] = Yp;
            ev.Y_minus[i] = Ym;
            ev.Z[i] = Z;
            ev.B1[i] = v * ((w0 + W) * (X + Z * em) - std::complex<double>(0.0, Yp));
            ev.B2[i] = v * ((w0 - W) * (X + Z * std::conj(em)) - std::complex<double>(0.0, Ym));
        });
        return ev;
    }

    // finite cutoff: principal-value quadrature over the kernel support
    const double hi = k.grid_max();
    QuadratureConfig cq = k.quad_config();
    cq.abs_tol = std::max(cq.abs_tol, 1e-9);
    cq.rel_tol = std::max(cq.rel_tol, 1e-7);
    const std::vector<double> brk = k.peak_breaks();
    auto g_cos = [&](double w) { return 2.0 * k.lineshape_sq_at(w) * w; }; // X integrand numerator
    auto g_sin = [&](double w) { return 2.0 * k.lineshape_sq_at(w); };     // W integrand numerator
    const double piL = quad::osc_sin(g_sin, 0.0, hi, t, cq, brk).value; // int 2|L|^2 sin(wt) dw
    parallel_for(n, policy, [&](std::size_t i) {
        const double W = Omega_grid[i];
        if (!(W > 0.0 && W < hi))
            throw std::invalid_argument("evolve_a_full: Omega grid must lie inside the bath support");
        // PV int f e^{-iwt}/(w - W) dw = -cauchy_pv_osc(f, W, ...)
        const auto pvX = quad::cauchy_pv_osc(g_cos, W, t, 0.0, hi, cq, brk);
        const auto pvW = quad::cauchy_pv_osc(g_sin, W, t, 0.0, hi, cq, brk);
        const double pv_cosX = std::real(-pvX.value); // PV int g_cos cos(wt)/(w-W)
        const double pv_sinW = std::imag(pvW.value);  // PV int g_sin sin(wt)/(w-W)
        auto antiX = [&](double w) { return g_cos(w) / (w + W); };
        auto antiW = [&](double w) { return g_sin(w) / (w + W); };
        const double X =
            (pv_cosX - quad::osc_cos(antiX, 0.0, hi, t, cq, brk).value) / (2.0 * W);
        const double Wr =
            (pv_sinW - quad::osc_sin(antiW, 0.0, hi, t, cq, brk).value) / (2.0 * W);
        const double Z = k.coupling(W) > 0.0
                             ? k.lineshape_sq_at(W) / k.coupling(W) *
                                   ((W * W - w0 * w0) / (2.0 * w0) - k.shift(W))
                             : 0.0;
        const double Yp = piL + W * (W + w0) * Wr;
        const double Ym = piL + W * (W - w0) * Wr;
        const double v = std::sqrt(k.coupling(W));
        const std::complex<double> em = std::exp(std::complex<double>(0.0, -W * t));
        ev.X[i] = X;
        ev.Y_plus[i] = Yp;
        ev.Y_minus[i] = Ym;
        ev.Z[i] = Z;
        ev.B1[i] = v * ((w0 + W) * (X + Z * em) - std::complex<double>(0.0, Yp));
        ev.B2[i] = v * ((w0 - W) * (X + Z * std::conj(em)) - std::complex<double>(0.0, Ym));
    });
    return ev;
}

double lineshape_sum_rule(const DiagKernel& k) {
    const ModelParams& p = k.params();
    QuadratureConfig c = k.quad_config();
    c.abs_tol = std::min(c.abs_tol, 1e-10);
    if (k.limit_mode()) {
        return ca_limit_quadrature(p, 0.0, c).c_a.real();
    }
    auto f = [&](double w) { return k.lineshape_sq_at(w) * 2.0 * w / M_PI; };
    double v = quad::integrate(f, 0.0, k.grid_max(), c, k.peak_breaks()).value;
    if (k.spectrum().kind == SpectrumKind::Drude)
        v += quad::integrate_to_inf(f, k.grid_max(), c).value;
    return v;
}

double commutator_sum_rule(const DiagKernel& k, double t) {
    if (!k.limit_mode())
        throw std::invalid_argument("commutator_sum_rule: implemented for the limit-mode kernel; "
                                    "use the discrete oracle for finite baths");
    const ModelParams& p = k.params();
    const std::complex<double> ca = limit_closed::c_a(p, t);
    const std::complex<double> cad = limit_closed::c_adag(p, t);
    double sum = std::norm(ca) - std::norm(cad);
    if (t == 0.0) return sum;

    const double w0 = p.omega0, g = p.gamma;
    const double piL = M_PI * damping_kernel_L(p, t);
    auto diff = [&](double W) {
        const double X = limit_closed::X_R(p, W, t);
        const double Wr = limit_closed::W_R(p, W, t);
        const double Z = limit_closed::Z_R(p, W);
        const double Yp = piL + W * (W + w0) * Wr;
        const double Ym = piL + W * (W - w0) * Wr;
        const double v = std::sqrt(g * W / (M_PI * w0));
        const std::complex<double> em = std::exp(std::complex<double>(0.0, -W * t));
        const std::complex<double> B1 = v * ((w0 + W) * (X + Z * em) - std::complex<double>(0.0, Yp));
        const std::complex<double> B2 =
            v * ((w0 - W) * (X + Z * std::conj(em)) - std::complex<double>(0.0, Ym));
        return std::norm(B1) - std::norm(B2);
    };

    const double X1 = std::max(400.0 * std::max(w0, g), 12.0 / t);
    QuadratureConfig c = k.quad_config();
    c.abs_tol = 1e-8;
    c.rel_tol = 1e-7;
    c.max_subdivisions = 200000;
    const double body = quad::integrate(diff, 0.0, X1, c).value;

    // large-W asymptotics of |B1|^2 - |B2|^2:
    //   -4 pi g L(t) sin(Wt)/W
    //   + 4 pi g [ (1 + e^{-2gt}) - 2 e^{-gt} cos(w't) cos(Wt) ] / W^2
    const DampingBasis basis{w0, g};
    const double Lt = damping_kernel_L(p, t);
    const double egc = std::exp(-g * t) * basis.c(t);
    double tail = -4.0 * M_PI * g * Lt * quad::si_tail(X1 * t);
    tail += 4.0 * M_PI * g * (1.0 + std::exp(-2.0 * g * t)) / X1;
    tail -= 8.0 * M_PI * g * egc * t * quad::cos_tail_over_sq(X1 * t);

    return sum + (body + tail) / (M_PI * M_PI);
}

// ---------------------------------------------------------------------------
// RWA reduction report

RwaReductionReport rwa_reduction(const BathSpectrum& s, const ModelParams& p,
                                 const QuadratureConfig& cfg, DiagKernel::Options opt,
                                 double threshold) {
    DiagKernel k(s, p, cfg, opt);
    const ModelParams& kp = k.params();
    const double w0 = kp.omega0;

    RwaReductionReport rep;
    rep.threshold = threshold;

    const double half = std::max(10.0 * kp.gamma, 0.1 * w0);
    const double lo = std::max(1e-6 * w0, w0 - half);
    const double hi = w0 + half;

    const std::size_t n_window = 201;
    rep.omega.resize(n_window);
    rep.alpha_tilde_sq.resize(n_window);
    rep.lineshape_route.resize(n_window);
    double r_coupling = 0.0, r_shift = 0.0, max_dev = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < n_window; ++i) {
        const double w = lo + (hi - lo) * double(i) / double(n_window - 1);
        const double vsq = k.coupling(w);
        const double Hx = k.shift(w);
        r_coupling = std::max(r_coupling, M_PI * vsq / w0);
        r_shift = std::max(r_shift, std::abs(Hx) / w0);
        const double d = w - w0 - Hx;
        const double at = vsq > 0.0 ? vsq / (d * d + M_PI * M_PI * vsq * vsq) : 0.0;
        rep.omega[i] = w;
        rep.alpha_tilde_sq[i] = at;
        rep.lineshape_route[i] = 2.0 * w0 / M_PI * k.lineshape_sq_at(w);
        peak = std::max(peak, at);
    }
    for (std::size_t i = 0; i < n_window; ++i) {
        if (std::abs(rep.omega[i] - w0) <= 10.0 * kp.gamma && rep.alpha_tilde_sq[i] > 1e-3 * peak) {
            max_dev = std::max(max_dev, std::abs(rep.alpha_tilde_sq[i] - rep.lineshape_route[i]) /
                                            peak);
        }
    }
    rep.weak_coupling_ratio = r_coupling;
    rep.shift_ratio = r_shift;
    rep.max_rel_dev_near_peak = max_dev;

    if (k.limit_mode() && opt.counter_term) {
        // ohmic + counter-term + cutoff->infinity: the condition set collapses
        // to gamma << omega0
        rep.reduced_to_gamma_condition = true;
        rep.valid = kp.gamma / w0 < threshold;
        rep.H_over_F_at_w0 = std::numeric_limits<double>::quiet_NaN();
    } else {
        rep.valid = r_coupling < threshold && r_shift < threshold;
        rep.H_over_F_at_w0 =
            level_shift_H(s, kp, w0, cfg) / level_shift_F(s, kp, w0, cfg);
    }
    return rep;
}

} // namespace fanodho
