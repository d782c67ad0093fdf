// dynamics.hpp — mean-position evolution of the damped oscillator, the
// damping kernel L(t), and the identities that distinguish the bare from the
// improved factorizable initial condition.

#pragma once

#include <vector>

#include "fanodho/params.hpp"
#include "fanodho/parallel.hpp"
#include "fanodho/quadrature.hpp"
#include "fanodho/spectral.hpp"

namespace fanodho {

enum class DampingRegime { Under, Critical, Over };
enum class ReservoirIC { Bare, Shifted };

// Bare: bath means vanish at t = 0. Shifted: bath coordinates are displaced
// to the minimum of the coupled potential, <q_j> = C_j q0 / (m_j w_j^2).
struct InitialState {
    double q0 = 0.0;
    double p0 = 0.0;
    ReservoirIC reservoir_ic = ReservoirIC::Shifted;
};

DampingRegime damping_regime(const ModelParams& p);

// Oscillatory basis continued across damping regimes:
//   c(t) ~ cos(w' t) and s_over(t) ~ sin(w' t)/w' with w' = sqrt(w0^2-g^2),
// turning into cosh / sinh(nu t)/nu when overdamped. A dedicated series
// branch handles |gamma - omega0| < 1e-8 omega0.
struct DampingBasis {
    double omega0;
    double gamma;
    double c(double t) const;
    double s_over(double t) const;
};

// L(t): sin(w't) e^{-gt}/w' underdamped, t e^{-gt} critical, and the
// hyperbolic analog overdamped. L(0) = 0, L'(0) = 1 in every regime.
double damping_kernel_L(const ModelParams& p, double t);

// dL/dt, evaluated analytically per regime.
double damping_kernel_dL(const ModelParams& p, double t);

// <q(t)>. Bare: q0 L'(t) + (p0/M) L(t). Shifted: q0 (L' + 2 gamma L) + (p0/M) L.
double mean_position(const ModelParams& p, const InitialState& ic, double t);

// Classical damped trajectory through (q0, p0); identical to the Shifted
// mean position.
double classical_trajectory(const ModelParams& p, double q0, double p0, double t);

struct Trajectory {
    std::vector<double> times;
    std::vector<double> q_mean;
    DampingRegime regime;
};

Trajectory mean_trajectory(const ModelParams& p, const InitialState& ic,
                           const std::vector<double>& times);

// Residuals of the two bath-average identities: I1(t) (which vanishes) and
// H(t) = I2(t) against 2 gamma L(t). Requires the ohmic cutoff -> infinity
// spectrum.
struct AppendixBReport {
    std::vector<double> t_grid;
    std::vector<double> I1;
    std::vector<double> H_quad;
    std::vector<double> H_closed;
    double I1_max_abs = 0.0;
    double H_vs_2gammaL_max_rel = 0.0;
};

AppendixBReport appendix_b_check(const BathSpectrum& s, const ModelParams& p,
                                 const std::vector<double>& t_grid,
                                 const QuadratureConfig& cfg = {},
                                 ExecPolicy policy = ExecPolicy::Parallel);

// PV-quadrature response tables W_R(W, t) and Z_R(W) entering the reservoir
// part of q(t).
struct BathResponseTables {
    double t = 0.0;
    std::vector<double> Omega;
    std::vector<double> W_R;
    std::vector<double> Z_R;
};

BathResponseTables bath_response_tables(const BathSpectrum& s, const ModelParams& p,
                                        const std::vector<double>& Omega_grid, double t,
                                        const QuadratureConfig& cfg = {},
                                        ExecPolicy policy = ExecPolicy::Parallel);

} // namespace fanodho
