// classical_bath.hpp — classical ensemble simulation of the discrete
// coordinate-coordinate model: density-matched bath discretization, thermal
// sampling in the shifted or bare coordinates, symplectic integration, and
// fluctuating-force statistics.

#pragma once

#include <cstdint>
#include <vector>

#include "fanodho/dynamics.hpp"
#include "fanodho/parallel.hpp"
#include "fanodho/params.hpp"
#include "fanodho/rng.hpp"
#include "fanodho/spectral.hpp"

namespace fanodho {

enum class DiscretizationScheme { UniformFreq };

// N bath oscillators on the uniform grid w_j = (j - 1/2) dw with couplings
// C_j^2 = (2/pi) m_j w_j J(w_j) dw (all m_j = 1 by convention).
struct DiscreteBath {
    std::vector<double> omega;
    std::vector<double> mass;
    std::vector<double> coupling;
    double delta_omega = 0.0;
    double omega_max = 0.0;

    std::size_t size() const { return omega.size(); }
    double recurrence_time() const { return 2.0 * M_PI / delta_omega; }
    // sum_j C_j^2/(m_j w_j^2) = M * (discrete frequency shift)^2
    double counter_term_sum() const;
    // box-binned reconstruction of J at frequency w
    double reconstructed_J(double w) const;
};

DiscreteBath discretize_bath(const BathSpectrum& s, const ModelParams& p, std::size_t N,
                             DiscretizationScheme scheme = DiscretizationScheme::UniformFreq,
                             double omega_max_override = 0.0);

struct EnsembleConfig {
    std::size_t n_samples = 1;
    double kT = 0.0;
    std::uint64_t seed = 0;
    double dt = 1e-3;
    double t_max = 10.0;
    ReservoirIC ic_variant = ReservoirIC::Shifted;
    std::size_t n_output = 201;
    double impulse_window = 0.0; // 0 -> min(t_max, 40 pi / omega_max)

    void validate(const DiscreteBath& bath) const;
};

struct PhaseSpaceState {
    double q = 0.0, p = 0.0;
    std::vector<double> q_bath, p_bath;
};

// Shifted: q_j(0) = C_j q0/(m_j w_j^2) + N(0, kT/(m_j w_j^2)); Bare: the same
// Gaussians centered at zero. p_j(0) = N(0, m_j kT); the system starts at
// exactly (q0, p0).
PhaseSpaceState sample_initial_conditions(const DiscreteBath& bath, const EnsembleConfig& cfg,
                                          double q0, double p0, const CounterRng& rng,
                                          std::uint64_t sample_index);

struct IntegrationResult {
    std::vector<double> times;
    std::vector<double> q, p;
    double energy_drift = 0.0; // relative
};

// Velocity-Verlet integration of the counter-term-completed Hamiltonian.
// Throws when the relative energy drift exceeds 1e-3.
IntegrationResult integrate_eom(const DiscreteBath& bath, const ModelParams& p,
                                PhaseSpaceState state, const EnsembleConfig& cfg);

struct EnsembleStats {
    std::vector<double> times;
    std::vector<double> q_mean, q_se;
    std::size_t n_samples = 0;
};

// Ensemble mean trajectory with standard errors. Deterministic for any
// thread count: samples are reduced in fixed 64-sample blocks.
EnsembleStats run_ensemble(const DiscreteBath& bath, const ModelParams& p,
                           const EnsembleConfig& cfg, double q0, double p0,
                           ExecPolicy policy = ExecPolicy::Parallel);

struct ForceStats {
    std::vector<double> times;
    std::vector<double> mean_force, se_force;
    std::vector<double> autocorr_tau, autocorr;
    double autocorr_integral = 0.0; // int <F(t)F(t+tau)> dtau over the window
    double kick_impulse = 0.0;      // int <F(t)> dt over [0, impulse_window]
    double kick_impulse_se = 0.0;
    bool insufficient_samples = false;
};

// Statistics of the fluctuating force F(t) = sum_j C_j qt_j(0) cos(w_j t)
//  + sum_j (C_j/w_j) qdot_j(0) sin(w_j t), with qt_j the coordinates relative
// to the shifted equilibrium. Evaluated directly from the sampled initial
// conditions.
ForceStats fluctuating_force_stats(const DiscreteBath& bath, const ModelParams& p,
                                   const EnsembleConfig& cfg, double q0,
                                   ExecPolicy policy = ExecPolicy::Parallel);

struct MemoryKernelReport {
    double kernel_integral = 0.0;  // discrete memory integral at t_end
    double markovian_value = 0.0;  // 2 M gamma qdot(t_end)
    double rel_deviation = 0.0;
    double memory_time = 0.0;      // first zero crossing of K(tau)
};

// Compares the discrete friction kernel acting on qdot against the ohmic
// (Markovian) limit 2 M gamma qdot(t).
MemoryKernelReport memory_kernel_check(const DiscreteBath& bath, const ModelParams& p,
                                       const std::vector<double>& times,
                                       const std::vector<double>& qdot);

// First zero crossing of K(tau) = sum_j C_j^2/(m_j w_j^2) cos(w_j tau).
double kernel_memory_time(const DiscreteBath& bath);

} // namespace fanodho
