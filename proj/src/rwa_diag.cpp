#include "fanodho/rwa_diag.hpp"

#include <cmath>
#include <stdexcept>

namespace fanodho {

namespace {

// closed-form F for the sharp ohmic cutoff, 0 < w != cutoff
double ohmic_sharp_F(const ModelParams& p, double w) {
    const double Wc = p.cutoff;
    return (p.gamma / (M_PI * p.omega0)) * (-Wc + w * std::log(w / std::abs(Wc - w)));
}

bool has_closed_F(const BathSpectrum& s) {
    return s.kind == SpectrumKind::Drude || s.kind == SpectrumKind::OhmicSharp;
}

double closed_F(const BathSpectrum& s, const ModelParams& p, double w) {
    ModelParams q = p;
    q.gamma = s.gamma;
    q.cutoff = s.cutoff;
    if (s.kind == SpectrumKind::Drude) return closed_form::drude_F(q, w);
    return ohmic_sharp_F(q, w);
}

double closed_H(const BathSpectrum& s, const ModelParams& p, double w) {
    ModelParams q = p;
    q.gamma = s.gamma;
    q.cutoff = s.cutoff;
    if (s.kind == SpectrumKind::Drude) return closed_form::drude_H(q, w);
    return closed_form::ohmic_sharp_H(q, w);
}

double closed_dw2(const BathSpectrum& s, const ModelParams& p) {
    ModelParams q = p;
    q.gamma = s.gamma;
    q.cutoff = s.cutoff;
    if (s.kind == SpectrumKind::Drude) return closed_form::drude_freq_shift_sq(q);
    return closed_form::ohmic_sharp_freq_shift_sq(q);
}

double alpha_sq_from(double vsq, double detuning) {
    if (!(vsq > 0.0)) return 0.0;
    const double damp = M_PI * vsq;
    return vsq / (detuning * detuning + damp * damp);
}

} // namespace

double shift_of_kind(const BathSpectrum& s, const ModelParams& p, double w, RwaShiftKind kind,
                     const QuadratureConfig& cfg) {
    switch (kind) {
        case RwaShiftKind::CounterTerm:
            if (s.cutoff_infinite) return 0.0;
            return has_closed_F(s) ? closed_H(s, p, w) + closed_dw2(s, p) / (2.0 * p.omega0)
                                   : renormalized_shift_H_R(s, p, w, cfg);
        case RwaShiftKind::H:
            if (s.cutoff_infinite)
                throw std::invalid_argument(
                    "rwa shift: H diverges in the cutoff->infinity limit; use CounterTerm");
            return has_closed_F(s) ? closed_H(s, p, w) : level_shift_H(s, p, w, cfg);
        case RwaShiftKind::F:
        default:
            if (s.cutoff_infinite)
                throw std::invalid_argument(
                    "rwa shift: F diverges in the cutoff->infinity limit; use CounterTerm");
            return has_closed_F(s) ? closed_F(s, p, w) : level_shift_F(s, p, w, cfg);
    }
}

double alpha_sq_rwa(const BathSpectrum& s, const ModelParams& p, double w,
                    const QuadratureConfig& cfg, bool counter_term) {
    if (!(w > 0.0)) throw std::invalid_argument("alpha_sq_rwa: w must be > 0");
    const double vsq = coupling_sq(s, p, w);
    const RwaShiftKind kind = counter_term ? RwaShiftKind::CounterTerm : RwaShiftKind::F;
    const double S = shift_of_kind(s, p, w, kind, cfg);
    return alpha_sq_from(vsq, w - p.omega0 - S);
}

// ---------------------------------------------------------------------------

RwaDiag::RwaDiag(BathSpectrum s, ModelParams p, QuadratureConfig cfg, Options opt)
    : spectrum_(std::move(s)), params_(p), cfg_(cfg), opt_(opt) {
    spectrum_.validate();
    params_.validate();
    cfg_.validate();
    params_.gamma = spectrum_.gamma > 0.0 ? spectrum_.gamma : params_.gamma;
    if (!spectrum_.cutoff_infinite && spectrum_.kind != SpectrumKind::Tabulated)
        params_.cutoff = spectrum_.cutoff;

    if (spectrum_.cutoff_infinite && opt_.shift != RwaShiftKind::CounterTerm)
        throw std::invalid_argument(
            "RwaDiag: the bare shifts F and H diverge in the cutoff->infinity limit; "
            "use the counter-term shift or a finite cutoff");

    if (!spectrum_.cutoff_infinite) {
        freq_shift_sq_ = has_closed_F(spectrum_) ? closed_dw2(spectrum_, params_)
                                                 : frequency_shift_sq(spectrum_, params_, cfg_);
    }
    shift_closed_form_ = spectrum_.cutoff_infinite || has_closed_F(spectrum_);

    if (opt_.grid_max > 0.0) {
        grid_max_ = opt_.grid_max;
    } else if (spectrum_.cutoff_infinite) {
        grid_max_ = std::max(50.0 * params_.omega0, params_.omega0 + 500.0 * params_.gamma);
    } else if (spectrum_.kind == SpectrumKind::Tabulated) {
        grid_max_ = spectrum_.table.back().first;
    } else if (spectrum_.kind == SpectrumKind::OhmicSharp) {
        grid_max_ = spectrum_.cutoff;
    } else {
        grid_max_ = 10.0 * spectrum_.cutoff;
    }

    // shift cache must exist before shift() can be called on tabulated
    // spectra; build it on a provisional grid centered at omega0, then locate
    // the resonance and rebuild centered there
    resonance_ = params_.omega0;
    kernel_.omega_grid =
        graded_grid(resonance_, params_.gamma, grid_max_, opt_.grid_points, opt_.peak_points);
    if (!shift_closed_form_) {
        std::vector<double> Sv(kernel_.omega_grid.size());
        parallel_for(kernel_.omega_grid.size(), ExecPolicy::Parallel, [&](std::size_t i) {
            const double w = kernel_.omega_grid[i];
            if (w == 0.0) {
                // F(0) is an ordinary integral -Dw^2/(4 w0); H(0) = -Dw^2/(2 w0)
                const double F0 = -freq_shift_sq_ / (4.0 * params_.omega0);
                const double H0 = -freq_shift_sq_ / (2.0 * params_.omega0);
                Sv[i] = opt_.shift == RwaShiftKind::F
                            ? F0
                            : (opt_.shift == RwaShiftKind::H
                                   ? H0
                                   : H0 + freq_shift_sq_ / (2.0 * params_.omega0));
                return;
            }
            Sv[i] = shift_of_kind(spectrum_, params_, w, opt_.shift, cfg_);
        });
        shift_cache_ = PchipInterpolant(kernel_.omega_grid, std::move(Sv));
    }

    // fixed-point iteration for the resonance root w = w0 + S(w)
    double x = params_.omega0;
    for (int it = 0; it < 200; ++it) {
        const double nx =
            std::min(std::max(params_.omega0 + shift(std::max(x, 1e-12)), 1e-6 * params_.omega0),
                     grid_max_ * 0.999);
        if (std::abs(nx - x) <= 1e-14 * params_.omega0) {
            x = nx;
            break;
        }
        x = 0.5 * (x + nx); // damped to be safe near strong shifts
    }
    resonance_ = x;
    width_ = std::max(M_PI * coupling_sq(spectrum_, params_, resonance_), 1e-9 * params_.omega0);

    kernel_.omega_grid = graded_grid(resonance_, std::max(width_, params_.gamma), grid_max_,
                                     opt_.grid_points, opt_.peak_points);
    if (!shift_closed_form_) {
        std::vector<double> Sv(kernel_.omega_grid.size());
        parallel_for(kernel_.omega_grid.size(), ExecPolicy::Parallel, [&](std::size_t i) {
            const double w = kernel_.omega_grid[i];
            if (w == 0.0) {
                const double F0 = -freq_shift_sq_ / (4.0 * params_.omega0);
                const double H0 = -freq_shift_sq_ / (2.0 * params_.omega0);
                Sv[i] = opt_.shift == RwaShiftKind::F
                            ? F0
                            : (opt_.shift == RwaShiftKind::H
                                   ? H0
                                   : H0 + freq_shift_sq_ / (2.0 * params_.omega0));
                return;
            }
            Sv[i] = shift_of_kind(spectrum_, params_, w, opt_.shift, cfg_);
        });
        shift_cache_ = PchipInterpolant(kernel_.omega_grid, std::move(Sv));
    }

    kernel_.alpha_sq.resize(kernel_.omega_grid.size());
    kernel_.F_values.resize(kernel_.omega_grid.size());
    parallel_for(kernel_.omega_grid.size(), ExecPolicy::Parallel, [&](std::size_t i) {
        const double w = kernel_.omega_grid[i];
        const double S = w > 0.0 ? shift(w) : 0.0;
        kernel_.F_values[i] = S;
        kernel_.alpha_sq[i] = alpha_sq_from(coupling_sq(spectrum_, params_, w), w - params_.omega0 - S);
    });
}

std::vector<double> RwaDiag::peak_breaks() const {
    std::vector<double> b;
    for (double k : {30.0, 5.0, 1.0}) {
        const double lo = resonance_ - k * width_;
        const double hi = resonance_ + k * width_;
        if (lo > 0.0) b.push_back(lo);
        if (hi < grid_max_) b.push_back(hi);
    }
    b.push_back(resonance_);
    return b;
}

double RwaDiag::shift(double w) const {
    if (shift_closed_form_) {
        if (spectrum_.cutoff_infinite) return 0.0;
        switch (opt_.shift) {
            case RwaShiftKind::CounterTerm:
                return closed_H(spectrum_, params_, w) + freq_shift_sq_ / (2.0 * params_.omega0);
            case RwaShiftKind::H: return closed_H(spectrum_, params_, w);
            case RwaShiftKind::F:
            default: return closed_F(spectrum_, params_, w);
        }
    }
    return shift_cache_(w);
}

double RwaDiag::alpha_sq_at(double w) const {
    if (!(w > 0.0)) throw std::invalid_argument("RwaDiag::alpha_sq_at: w must be > 0");
    return alpha_sq_from(coupling_sq(spectrum_, params_, w), w - params_.omega0 - shift(w));
}

bool RwaDiag::has_bound_mode() const {
    if (spectrum_.cutoff_infinite) return false;
    return freq_shift_sq_ > 4.0 * params_.omega0 * params_.omega0;
}

double RwaDiag::normalization() const {
    if (spectrum_.cutoff_infinite)
        throw std::invalid_argument(
            "RwaDiag::normalization: logarithmically divergent in the cutoff->infinity limit");
    QuadratureConfig c = cfg_;
    c.abs_tol = std::min(cfg_.abs_tol, 1e-10);
    auto f = [&](double w) { return alpha_sq_at(w); };
    double v = quad::integrate(f, 1e-12, grid_max_, c, peak_breaks()).value;
    if (spectrum_.kind == SpectrumKind::Drude)
        v += quad::integrate_to_inf(f, grid_max_, c).value;
    return v;
}

std::complex<double> RwaDiag::evolve_c_a(double t) const {
    if (t < 0.0) throw std::invalid_argument("RwaDiag::evolve_c_a: t must be >= 0");
    QuadratureConfig c = cfg_;
    c.abs_tol = std::min(cfg_.abs_tol, 1e-10);
    auto f = [&](double w) { return alpha_sq_at(std::max(w, 1e-300)); };
    std::complex<double> v = quad::osc_exp(f, 0.0, grid_max_, t, c, peak_breaks()).value;
    if (t == 0.0 && spectrum_.kind == SpectrumKind::Drude)
        v += quad::integrate_to_inf(f, grid_max_, c).value;
    return v;
}

std::complex<double> RwaDiag::c_b_at(double W, double t) const {
    if (!(W > 0.0 && W < grid_max_))
        throw std::invalid_argument("RwaDiag::c_b_at: W must lie inside the bath support");
    const double vsq = coupling_sq(spectrum_, params_, W);
    if (!(vsq > 0.0)) return {0.0, 0.0};
    QuadratureConfig c = cfg_;
    c.abs_tol = std::max(cfg_.abs_tol, 1e-10);
    c.rel_tol = std::max(cfg_.rel_tol, 1e-8);
    auto f = [&](double w) { return alpha_sq_at(std::max(w, 1e-300)); };
    // PV int f e^{-iwt}/(w - W) dw = -cauchy_pv_osc(f, W, ...)
    const std::complex<double> pv =
        -quad::cauchy_pv_osc(f, W, t, 0.0, grid_max_, c, peak_breaks()).value;
    const double onshell = (W - params_.omega0 - shift(W)) * alpha_sq_at(W) / vsq;
    const std::complex<double> os = onshell * std::exp(std::complex<double>(0.0, -W * t));
    return std::sqrt(vsq) * (pv + os);
}

RwaEvolution RwaDiag::evolve(double t, const std::vector<double>& Omega_grid,
                             ExecPolicy policy) const {
    RwaEvolution ev;
    ev.t = t;
    ev.c_a = evolve_c_a(t);
    ev.Omega = Omega_grid;
    ev.c_b.resize(Omega_grid.size());
    parallel_for(Omega_grid.size(), policy, [&](std::size_t i) {
        ev.c_b[i] = c_b_at(Omega_grid[i], t);
    });
    return ev;
}

double RwaDiag::sum_rule(double t) const {
    const std::complex<double> ca = evolve_c_a(t);
    QuadratureConfig c = cfg_;
    c.abs_tol = 1e-8;
    c.rel_tol = 1e-6;
    c.max_subdivisions = 50000;
    auto f = [&](double W) { return std::norm(c_b_at(W, t)); };
    double v = quad::integrate(f, 1e-9, grid_max_ * 0.98, c, peak_breaks()).value;
    // large-W tail: c_b ~ v(W) [e^{-iWt} - c_a]/W, and the cross term
    // averages out, so |c_b|^2 ~ |v|^2 (1 + |c_a|^2)/W^2
    if (spectrum_.kind == SpectrumKind::Drude) {
        auto tail = [&](double W) {
            return coupling_sq(spectrum_, params_, W) * (1.0 + std::norm(ca)) / (W * W);
        };
        v += quad::integrate_to_inf(tail, grid_max_ * 0.98, c).value;
    }
    return std::norm(ca) + v;
}

CoherentAmplitude RwaDiag::coherent_decay(std::complex<double> alpha0, double t,
                                          const std::vector<double>& Omega_grid) const {
    CoherentAmplitude amp;
    amp.t = t;
    if (t == 0.0) {
        // completeness of the continuum (no bound mode) makes alpha(0) exact
        amp.value = alpha0;
        amp.Omega = Omega_grid;
        amp.reservoir_amplitudes.assign(Omega_grid.size(), {0.0, 0.0});
        return amp;
    }
    amp.value = alpha0 * evolve_c_a(t);
    amp.Omega = Omega_grid;
    amp.reservoir_amplitudes.resize(Omega_grid.size());
    for (std::size_t i = 0; i < Omega_grid.size(); ++i)
        amp.reservoir_amplitudes[i] = alpha0 * c_b_at(Omega_grid[i], t);
    return amp;
}

// ---------------------------------------------------------------------------

RwaEvolution evolve_a_rwa(const BathSpectrum& s, const ModelParams& p, double t,
                          const QuadratureConfig& cfg, const std::vector<double>& Omega_grid,
                          bool counter_term) {
    RwaDiag::Options opt;
    opt.shift = counter_term ? RwaShiftKind::CounterTerm : RwaShiftKind::F;
    RwaDiag d(s, p, cfg, opt);
    return d.evolve(t, Omega_grid);
}

CoherentAmplitude coherent_decay(const BathSpectrum& s, const ModelParams& p,
                                 std::complex<double> alpha0, double t,
                                 const QuadratureConfig& cfg) {
    // the coherent-state trajectory follows the weak-dissipation reduction of
    // the full model, whose shift is H (H_R = 0 in the limit mode)
    RwaDiag::Options opt;
    opt.shift = s.cutoff_infinite ? RwaShiftKind::CounterTerm : RwaShiftKind::H;
    RwaDiag d(s, p, cfg, opt);
    return d.coherent_decay(alpha0, t);
}

std::complex<double> coherent_decay_weak(const BathSpectrum& s, const ModelParams& p,
                                         std::complex<double> alpha0, double t,
                                         const QuadratureConfig& cfg, bool counter_term) {
    const double vsq0 = coupling_sq(s, p, p.omega0);
    double dw; // frequency shift H(w0), or H_R with the counter-term
    if (counter_term) {
        dw = s.cutoff_infinite ? 0.0 : renormalized_shift_H_R(s, p, p.omega0, cfg);
    } else {
        if (s.cutoff_infinite)
            throw std::invalid_argument("coherent_decay_weak: H diverges in the limit mode "
                                        "without the counter-term");
        dw = has_closed_F(s) ? closed_H(s, p, p.omega0) : level_shift_H(s, p, p.omega0, cfg);
    }
    const std::complex<double> phase(0.0, -(p.omega0 + dw) * t);
    return alpha0 * std::exp(phase) * std::exp(-M_PI * vsq0 * t);
}

} // namespace fanodho
