// level_shift.hpp — level-shift functions F, G, H, the frequency shift
// Delta w^2, and their counter-term renormalized combinations.

#pragma once

#include "fanodho/params.hpp"
#include "fanodho/quadrature.hpp"
#include "fanodho/spectral.hpp"

namespace fanodho {

// F(w) = PV int |v(W)|^2 / (w - W) dW over the bath support, w > 0.
double level_shift_F(const BathSpectrum& s, const ModelParams& p, double w,
                     const QuadratureConfig& cfg = {});

// G(w) = int |v(W)|^2 / (w + W) dW, w >= 0.
double level_shift_G(const BathSpectrum& s, const ModelParams& p, double w,
                     const QuadratureConfig& cfg = {});

// H(w) = F(w) - G(w).
double level_shift_H(const BathSpectrum& s, const ModelParams& p, double w,
                     const QuadratureConfig& cfg = {});

// Delta w^2 = 4 omega0 int |v(w)|^2 / w dw  (equals 2 gamma cutoff for Drude).
double frequency_shift_sq(const BathSpectrum& s, const ModelParams& p,
                          const QuadratureConfig& cfg = {});

// H_R(w) = H(w) + Delta w^2 / (2 omega0); identically 0 for ohmic/Drude in
// the cutoff -> infinity limit.
double renormalized_shift_H_R(const BathSpectrum& s, const ModelParams& p, double w,
                              const QuadratureConfig& cfg = {});

// Closed forms for the Drude spectrum, used as fast paths in the kernels and
// as independent oracles in the tests.
namespace closed_form {

// H(w) = -(gamma cutoff / omega0) / (1 + w^2/cutoff^2)
double drude_H(const ModelParams& p, double w);

// F(w) = (gamma/(pi omega0)) w ln(w/cutoff)/(1 + w^2/cutoff^2)
//        - (gamma cutoff/(2 omega0)) / (1 + w^2/cutoff^2), w > 0
double drude_F(const ModelParams& p, double w);

// G(w) = F(w) - H(w)
double drude_G(const ModelParams& p, double w);

inline double drude_freq_shift_sq(const ModelParams& p) { return 2.0 * p.gamma * p.cutoff; }
inline double ohmic_sharp_freq_shift_sq(const ModelParams& p) {
    return 4.0 * p.gamma * p.cutoff / M_PI;
}

// Sharp-cutoff ohmic H for 0 < w != cutoff.
double ohmic_sharp_H(const ModelParams& p, double w);

} // namespace closed_form
} // namespace fanodho
