// full_diag.hpp — exact diagonalization of the coordinate-coordinate model
// beyond the rotating-wave approximation: mode weights, the spectral weight
// |L(w)|^2 of the system operator, the Heisenberg coefficients of a(t), and
// the validity analysis of the RWA reduction.

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

// z(w) = (w^2 - w0^2 - 2 w0 Hx(w)) / (2 w0 |v(w)|^2) with Hx = H_R when the
// counter-term is included, H otherwise. Throws on vanishing coupling.
double z_of_omega(const BathSpectrum& s, const ModelParams& p, double w, bool counter_term,
                  const QuadratureConfig& cfg = {});

// Weight families of the exact eigenoperator
//   A_w = alpha_w a + chi_w a^+ + int beta b + int sigma b^+.
// The arbitrary phase of alpha_w is fixed real positive; beta's principal
// value part and on-shell part are reported separately.
struct ModeWeights {
    double omega = 0.0;
    double alpha = 0.0;     // real positive by phase convention
    double alpha_sq = 0.0;
    double chi = 0.0;       // (w - w0)/(w + w0) alpha
    double z = 0.0;

    BathSpectrum spectrum;
    ModelParams params;

    // beta_{w,W} = [PV 1/(w-W) + z delta(w-W)] * beta_pv_coeff(W)
    double beta_pv_coeff(double W) const;
    double beta_onshell() const; // z(w) * beta_pv_coeff(w)
    // sigma_{w,W} = sigma_coeff(W) / (w + W)
    double sigma(double W) const;
};

ModeWeights mode_weights(const BathSpectrum& s, const ModelParams& p, double w,
                         bool counter_term, const QuadratureConfig& cfg = {});

// Closed forms in the ohmic cutoff -> infinity limit with the counter-term,
// where H_R = 0 and |v|^2 = gamma w / (pi w0). All derived by residue
// evaluation of the defining frequency integrals and cross-checked against
// principal-value quadrature in the tests.
namespace limit_closed {

// D(w) = (w^2 - w0^2)^2 + (2 gamma w)^2
double denom_D(const ModelParams& p, double w);

// |L_R(w)|^2 = 2 gamma w / D(w)
double lineshape_sq(const ModelParams& p, double w);

// X_R(W; t) = PV int dw 2 |L_R|^2 w cos(w t) / (w^2 - W^2)
double X_R(const ModelParams& p, double W, double t);

// W_R(W; t) = PV int dw 2 |L_R|^2 sin(w t) / (w^2 - W^2); d/dt W_R = X_R
double W_R(const ModelParams& p, double W, double t);

// Z_R(W) = pi (W^2 - w0^2) / D(W); satisfies X_R(W;0) + Z_R(W) = 0
double Z_R(const ModelParams& p, double W);

// Heisenberg coefficients of a and a^+ (valid for t > 0; the imaginary part
// of c_a jumps by gamma/w0 at t = 0+, the frequency-cutoff analog of the
// initial slip)
std::complex<double> c_a(const ModelParams& p, double t);
std::complex<double> c_adag(const ModelParams& p, double t);

} // namespace limit_closed

struct DiagKernelOptions {
    bool counter_term = true;
    double grid_max = 0.0; // 0 -> automatic
    std::size_t grid_points = 1200;
    std::size_t peak_points = 600;
};

// Frequency-grid tables of the diagonalization. `L_sq` uses the bare shift H
// (only available when w0^2 > |Delta w^2|), `L_sq_renorm` the counter-term
// renormalized H_R.
class DiagKernel {
public:
    using Options = DiagKernelOptions;

    DiagKernel(BathSpectrum s, ModelParams p, QuadratureConfig cfg = {}, Options opt = {});

    const std::vector<double>& omega_grid() const { return omega_; }
    const std::vector<double>& z_values() const { return z_; }
    const std::vector<double>& L_sq_renorm() const { return L_sq_renorm_; }
    // empty when the no-counter-term model is unstable
    const std::vector<double>& L_sq() const { return L_sq_; }

    bool counter_term() const { return opt_.counter_term; }
    bool limit_mode() const { return spectrum_.cutoff_infinite; }
    double grid_max() const { return grid_max_; }
    const BathSpectrum& spectrum() const { return spectrum_; }
    const ModelParams& params() const { return params_; }
    const QuadratureConfig& quad_config() const { return cfg_; }

    // pointwise evaluators (closed forms where available, cached shift
    // otherwise); `shift` is H or H_R according to the counter-term flag
    double shift(double w) const;
    double coupling(double w) const;   // |v(w)|^2
    double z_of(double w) const;
    double lineshape_sq_at(double w) const;
    double freq_shift_sq() const { return freq_shift_sq_; }

    // peak of the active lineshape (root of w^2 - w0^2 - 2 w0 Hx(w)) and its
    // halfwidth pi w0 |v|^2 / w there
    double resonance() const { return resonance_; }
    double resonance_width() const { return width_; }
    // interior abscissae bracketing the peak, for quadrature seeding
    std::vector<double> peak_breaks() const;

    // A, B, C prefactors of |L|^2 in a(t)
    static double coeff_A(const ModelParams& p, double w) { return 2.0 * w; }
    static double coeff_B(const ModelParams& p, double w) {
        return (w * w + p.omega0 * p.omega0) / p.omega0;
    }
    static double coeff_C(const ModelParams& p, double w) {
        return (w * w - p.omega0 * p.omega0) / p.omega0;
    }

private:
    double bare_shift(double w) const; // H(w) regardless of the counter-term flag

    BathSpectrum spectrum_;
    ModelParams params_;
    QuadratureConfig cfg_;
    Options opt_;
    double grid_max_ = 0.0;
    double freq_shift_sq_ = 0.0;
    double resonance_ = 0.0;
    double width_ = 0.0;
    bool shift_closed_form_ = false;
    std::vector<double> omega_, z_, L_sq_, L_sq_renorm_;
    PchipInterpolant shift_cache_; // H(w) for spectra without a closed form
};

// Build the lineshape tables (the kernel constructor with precondition
// checks); named per the operation it implements.
DiagKernel lineshape(const BathSpectrum& s, const ModelParams& p, const QuadratureConfig& cfg = {},
                     DiagKernel::Options opt = {});

// Coefficients of the Heisenberg solution
//   a(t) = c_a a + c_adag a^+ + int dW/pi [B1 b_W + B2 b_W^+].
struct EvolutionCoefficients {
    double t = 0.0;
    std::complex<double> c_a{1.0, 0.0};
    std::complex<double> c_adag{0.0, 0.0};
    std::vector<double> Omega;
    std::vector<std::complex<double>> B1, B2;
    std::vector<double> X, Y_plus, Y_minus, Z;
};

// Evaluate c_a, c_adag (always) and the bath coefficient tables on
// Omega_grid (when nonempty). t >= 0.
EvolutionCoefficients evolve_a_full(const DiagKernel& k, double t,
                                    const std::vector<double>& Omega_grid = {},
                                    ExecPolicy policy = ExecPolicy::Parallel);

// |c_a|^2 - |c_adag|^2 + (1/pi^2) int dW (|B1|^2 - |B2|^2); equals 1 for the
// exact diagonalization. Limit mode only (uses the closed-form coefficient
// tables plus analytic large-W tails).
double commutator_sum_rule(const DiagKernel& k, double t);

// int (dw/pi) |L|^2 A(w) dw; equals 1 (the t = 0 completeness sum rule).
double lineshape_sum_rule(const DiagKernel& k);

// Validity analysis of the RWA reduction near the resonance.
struct RwaReductionReport {
    bool valid = false;
    double threshold = 0.05;
    double weak_coupling_ratio = 0.0;  // max pi|v|^2 / w0 near w0
    double shift_ratio = 0.0;          // max |Hx| / w0 near w0
    double H_over_F_at_w0 = 0.0;       // NaN in limit mode (F diverges)
    bool reduced_to_gamma_condition = false;
    std::vector<double> omega;
    std::vector<double> alpha_tilde_sq;
    std::vector<double> lineshape_route; // (2 w0 / pi) |L|^2
    double max_rel_dev_near_peak = 0.0;
};

RwaReductionReport rwa_reduction(const BathSpectrum& s, const ModelParams& p,
                                 const QuadratureConfig& cfg = {},
                                 DiagKernel::Options opt = {}, double threshold = 0.05);

} // namespace fanodho
