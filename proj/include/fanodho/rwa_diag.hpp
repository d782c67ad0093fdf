// rwa_diag.hpp — diagonalization of the rotating-wave Hamiltonian: spectral
// weight |alpha_w|^2, Heisenberg evolution of a, and coherent-state decay.

#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "fanodho/interp.hpp"
#include "fanodho/level_shift.hpp"
#include "fanodho/parallel.hpp"
#include "fanodho/params.hpp"
#include "fanodho/quadrature.hpp"
#include "fanodho/spectral.hpp"

namespace fanodho {

// |alpha_w|^2 = |v|^2 / ([w - w0 - S(w)]^2 + [pi |v|^2]^2). The shift S is
// F(w) for the bare rotating-wave model; with the counter-term it becomes
// H_R(w), which vanishes in the ohmic cutoff -> infinity limit.
double alpha_sq_rwa(const BathSpectrum& s, const ModelParams& p, double w,
                    const QuadratureConfig& cfg = {}, bool counter_term = false);

struct RwaKernel {
    std::vector<double> omega_grid;
    std::vector<double> alpha_sq;
    std::vector<double> F_values; // the shift actually used on the grid
};

struct RwaEvolution {
    double t = 0.0;
    std::complex<double> c_a{1.0, 0.0};
    std::vector<double> Omega;
    std::vector<std::complex<double>> c_b;
};

// eigenvalue trajectory of an initially coherent state (vacuum reservoir)
struct CoherentAmplitude {
    double t = 0.0;
    std::complex<double> value{0.0, 0.0};
    std::vector<double> Omega;
    std::vector<std::complex<double>> reservoir_amplitudes;
};

// Shift entering the denominator of |alpha_w|^2: the bare rotating-wave
// model has F(w); the weak-dissipation reduction of the full model carries
// H(w) instead; CounterTerm selects H_R(w), which vanishes in the ohmic
// cutoff -> infinity limit.
enum class RwaShiftKind { F, H, CounterTerm };

struct RwaDiagOptions {
    RwaShiftKind shift = RwaShiftKind::F;
    double grid_max = 0.0; // 0 -> automatic
    std::size_t grid_points = 1200;
    std::size_t peak_points = 600;
};

class RwaDiag {
public:
    using Options = RwaDiagOptions;

    RwaDiag(BathSpectrum s, ModelParams p, QuadratureConfig cfg = {}, Options opt = {});

    const RwaKernel& kernel() const { return kernel_; }
    const ModelParams& params() const { return params_; }
    const BathSpectrum& spectrum() const { return spectrum_; }
    RwaShiftKind shift_kind() const { return opt_.shift; }
    bool limit_mode() const { return spectrum_.cutoff_infinite; }
    double grid_max() const { return grid_max_; }

    double shift(double w) const;
    double alpha_sq_at(double w) const;

    // root of w - w0 - S(w) = 0 (the center of the spectral weight) and the
    // resonance halfwidth pi |v|^2 there
    double resonance() const { return resonance_; }
    double resonance_width() const { return width_; }

    // int |alpha_w|^2 dw; equals 1 when the continuum is complete (no bound
    // normal mode split off below the band)
    double normalization() const;

    // a discrete mode below the band exists when int |v|^2/W dW > omega0,
    // i.e. Delta w^2 > 4 omega0^2; the continuum then carries less than unit
    // weight
    bool has_bound_mode() const;

    std::complex<double> evolve_c_a(double t) const;
    std::complex<double> c_b_at(double W, double t) const;
    RwaEvolution evolve(double t, const std::vector<double>& Omega_grid = {},
                        ExecPolicy policy = ExecPolicy::Parallel) const;

    // |c_a|^2 + int |c_b|^2 dW with an analytic estimate of the large-W tail
    double sum_rule(double t) const;

    CoherentAmplitude coherent_decay(std::complex<double> alpha0, double t,
                                     const std::vector<double>& Omega_grid = {}) const;

private:
    BathSpectrum spectrum_;
    ModelParams params_;
    QuadratureConfig cfg_;
    Options opt_;
    double grid_max_ = 0.0;
    double freq_shift_sq_ = 0.0;
    double resonance_ = 0.0;
    double width_ = 0.0;
    bool shift_closed_form_ = false;
    RwaKernel kernel_;
    PchipInterpolant shift_cache_;

    std::vector<double> peak_breaks() const;
};

RwaEvolution evolve_a_rwa(const BathSpectrum& s, const ModelParams& p, double t,
                          const QuadratureConfig& cfg = {},
                          const std::vector<double>& Omega_grid = {}, bool counter_term = false);

CoherentAmplitude coherent_decay(const BathSpectrum& s, const ModelParams& p,
                                 std::complex<double> alpha0, double t,
                                 const QuadratureConfig& cfg = {});

// weak-dissipation closed form alpha0 e^{-i(w0 + H(w0)) t} e^{-pi |v(w0)|^2 t};
// for ohmic + counter-term in the cutoff -> infinity limit this is
// alpha0 e^{-i w0 t} e^{-gamma t}
std::complex<double> coherent_decay_weak(const BathSpectrum& s, const ModelParams& p,
                                         std::complex<double> alpha0, double t,
                                         const QuadratureConfig& cfg = {},
                                         bool counter_term = false);

} // namespace fanodho
