#include "fanodho/level_shift.hpp"

#include <cmath>
#include <stdexcept>

namespace fanodho {

namespace {

// Split point for the [0, inf) Drude integrals; the remainder is handled
// exactly by the 1/W substitution.
double split_point(const BathSpectrum& s, const QuadratureConfig& cfg, double pole) {
    double hi;
    switch (s.kind) {
        case SpectrumKind::OhmicSharp: hi = s.cutoff; break;
        case SpectrumKind::Tabulated: hi = s.table.back().first; break;
        case SpectrumKind::Drude:
        default: hi = cfg.grid_max > 0.0 ? cfg.grid_max : 10.0 * s.cutoff; break;
    }
    if (pole > 0.0) hi = std::max(hi, 2.0 * pole);
    return hi;
}

bool has_infinite_tail(const BathSpectrum& s) { return s.kind == SpectrumKind::Drude && !s.cutoff_infinite; }

void reject_limit_mode(const BathSpectrum& s, const char* what) {
    if (s.cutoff_infinite)
        throw std::invalid_argument(std::string(what) +
                                    ": diverges in the cutoff->infinity limit; only the "
                                    "renormalized combination H_R is finite there");
}

} // namespace

double level_shift_F(const BathSpectrum& s, const ModelParams& p, double w,
                     const QuadratureConfig& cfg) {
    if (!(w > 0.0)) throw std::invalid_argument("level_shift_F: w must be > 0");
    reject_limit_mode(s, "level_shift_F");
    const double hi = split_point(s, cfg, w);
    auto vsq = [&](double W) { return coupling_sq(s, p, W); };
    auto kern = [&](double W) { return vsq(W) / (w - W); };

    double value;
    if (w < hi) {
        value = quad::cauchy_pv(vsq, w, 0.0, hi, cfg).value;
    } else {
        // pole above the support edge: ordinary integral
        value = quad::integrate(kern, 0.0, hi, cfg).value;
    }
    if (has_infinite_tail(s)) value += quad::integrate_to_inf(kern, hi, cfg).value;
    return value;
}

double level_shift_G(const BathSpectrum& s, const ModelParams& p, double w,
                     const QuadratureConfig& cfg) {
    if (w < 0.0) throw std::invalid_argument("level_shift_G: w must be >= 0");
    reject_limit_mode(s, "level_shift_G");
    const double hi = split_point(s, cfg, w);
    auto kern = [&](double W) { return coupling_sq(s, p, W) / (w + W); };
    double value = quad::integrate(kern, 0.0, hi, cfg).value;
    if (has_infinite_tail(s)) value += quad::integrate_to_inf(kern, hi, cfg).value;
    return value;
}

double level_shift_H(const BathSpectrum& s, const ModelParams& p, double w,
                     const QuadratureConfig& cfg) {
    if (w < 0.0) throw std::invalid_argument("level_shift_H: w must be >= 0");
    // F(0) - G(0) = -2 int |v|^2/W dW exactly
    if (w == 0.0) return -frequency_shift_sq(s, p, cfg) / (2.0 * p.omega0);
    return level_shift_F(s, p, w, cfg) - level_shift_G(s, p, w, cfg);
}

double frequency_shift_sq(const BathSpectrum& s, const ModelParams& p,
                          const QuadratureConfig& cfg) {
    reject_limit_mode(s, "frequency_shift_sq");
    if (s.kind == SpectrumKind::Tabulated && s.table.front().first == 0.0 &&
        s.table.front().second != 0.0)
        throw std::invalid_argument("frequency_shift_sq: J(0) != 0 makes the integrand divergent");
    const double hi = split_point(s, cfg, 0.0);
    auto kern = [&](double W) {
        if (W == 0.0) return 0.0; // J has (at least) linear onset, limit handled by continuity
        return coupling_sq(s, p, W) / W;
    };
    double value = quad::integrate(kern, 0.0, hi, cfg).value;
    if (has_infinite_tail(s)) value += quad::integrate_to_inf(kern, hi, cfg).value;
    return 4.0 * p.omega0 * value;
}

double renormalized_shift_H_R(const BathSpectrum& s, const ModelParams& p, double w,
                              const QuadratureConfig& cfg) {
    if (s.cutoff_infinite) return 0.0;
    return level_shift_H(s, p, w, cfg) + frequency_shift_sq(s, p, cfg) / (2.0 * p.omega0);
}

namespace closed_form {

double drude_H(const ModelParams& p, double w) {
    const double r = w / p.cutoff;
    return -(p.gamma * p.cutoff / p.omega0) / (1.0 + r * r);
}

double drude_F(const ModelParams& p, double w) {
    if (!(w > 0.0)) throw std::invalid_argument("drude_F: w must be > 0");
    const double r = w / p.cutoff;
    const double lor = 1.0 / (1.0 + r * r);
    return (p.gamma / (M_PI * p.omega0)) * w * std::log(w / p.cutoff) * lor -
           (p.gamma * p.cutoff / (2.0 * p.omega0)) * lor;
}

double drude_G(const ModelParams& p, double w) { return drude_F(p, w) - drude_H(p, w); }

double ohmic_sharp_H(const ModelParams& p, double w) {
    if (!(w > 0.0) || w == p.cutoff)
        throw std::invalid_argument("ohmic_sharp_H: need 0 < w != cutoff");
    const double Wc = p.cutoff;
    return (p.gamma / (M_PI * p.omega0)) *
           (-2.0 * Wc + w * std::log(w * w / std::abs(Wc * Wc - w * w)));
}

} // namespace closed_form
} // namespace fanodho
