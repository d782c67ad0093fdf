#include "fanodho/classical_bath.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fanodho {

double DiscreteBath::counter_term_sum() const {
    double acc = 0.0;
    for (std::size_t j = 0; j < size(); ++j)
        acc += coupling[j] * coupling[j] / (mass[j] * omega[j] * omega[j]);
    return acc;
}

double DiscreteBath::reconstructed_J(double w) const {
    // (pi/2) sum_j C_j^2/(m_j w_j) box(w - w_j)/dw
    if (w < 0.0 || w >= omega_max) return 0.0;
    const std::size_t j = std::min(size() - 1, static_cast<std::size_t>(w / delta_omega));
    return M_PI / 2.0 * coupling[j] * coupling[j] / (mass[j] * omega[j]) / delta_omega;
}

DiscreteBath discretize_bath(const BathSpectrum& s, const ModelParams& p, std::size_t N,
                             DiscretizationScheme scheme, double omega_max_override) {
    if (scheme != DiscretizationScheme::UniformFreq)
        throw std::invalid_argument("discretize_bath: unknown scheme");
    if (N < 2) throw std::invalid_argument("discretize_bath: N must be >= 2");
    if (s.cutoff_infinite)
        throw std::invalid_argument("discretize_bath: a finite-cutoff spectrum is required");

    double omega_max = 5.0 * s.cutoff;
    if (s.kind == SpectrumKind::Tabulated) omega_max = s.table.back().first;
    if (omega_max_override > 0.0) omega_max = std::min(omega_max, omega_max_override);

    DiscreteBath bath;
    bath.omega_max = omega_max;
    bath.delta_omega = omega_max / static_cast<double>(N);
    if (bath.delta_omega > p.omega0 / 4.0) {
        std::ostringstream msg;
        msg << "discretize_bath: N = " << N << " cannot resolve omega0 (delta_omega = "
            << bath.delta_omega << " > omega0/4 = " << p.omega0 / 4.0 << ")";
        throw std::invalid_argument(msg.str());
    }
    bath.omega.resize(N);
    bath.mass.assign(N, 1.0);
    bath.coupling.resize(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double w = (static_cast<double>(j) + 0.5) * bath.delta_omega;
        bath.omega[j] = w;
        const double J = spectral_density(s, p.mass, w);
        bath.coupling[j] = std::sqrt(2.0 / M_PI * bath.mass[j] * w * J * bath.delta_omega);
    }
    return bath;
}

void EnsembleConfig::validate(const DiscreteBath& bath) const {
    if (n_samples < 1) throw std::invalid_argument("EnsembleConfig: n_samples must be >= 1");
    if (!(dt > 0.0) || !(t_max > 0.0))
        throw std::invalid_argument("EnsembleConfig: dt and t_max must be > 0");
    const double wmax = bath.omega.empty() ? 0.0 : bath.omega.back();
    if (dt >= 0.1 / wmax)
        throw std::invalid_argument("EnsembleConfig: dt must be below 0.1/max(omega_j)");
    if (kT < 0.0) throw std::invalid_argument("EnsembleConfig: kT must be >= 0");
    if (n_output < 2) throw std::invalid_argument("EnsembleConfig: n_output must be >= 2");
}

PhaseSpaceState sample_initial_conditions(const DiscreteBath& bath, const EnsembleConfig& cfg,
                                          double q0, double p0, const CounterRng& rng,
                                          std::uint64_t sample_index) {
    const std::size_t N = bath.size();
    PhaseSpaceState st;
    st.q = q0;
    st.p = p0;
    st.q_bath.resize(N);
    st.p_bath.resize(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double mj = bath.mass[j], wj = bath.omega[j];
        const double sigma_q = cfg.kT > 0.0 ? std::sqrt(cfg.kT / (mj * wj * wj)) : 0.0;
        const double sigma_p = cfg.kT > 0.0 ? std::sqrt(mj * cfg.kT) : 0.0;
        const double center = cfg.ic_variant == ReservoirIC::Shifted
                                  ? bath.coupling[j] * q0 / (mj * wj * wj)
                                  : 0.0;
        // identical noise draws for both variants (common random numbers)
        st.q_bath[j] = center + sigma_q * rng.normal(sample_index, 2 * j);
        st.p_bath[j] = sigma_p * rng.normal(sample_index, 2 * j + 1);
    }
    return st;
}

namespace {

double hamiltonian(const DiscreteBath& bath, const ModelParams& p, const PhaseSpaceState& st) {
    double h = st.p * st.p / (2.0 * p.mass) +
               0.5 * p.mass * p.omega0 * p.omega0 * st.q * st.q;
    for (std::size_t j = 0; j < bath.size(); ++j) {
        const double mj = bath.mass[j], wj = bath.omega[j];
        const double d = st.q_bath[j] - bath.coupling[j] / (mj * wj * wj) * st.q;
        h += st.p_bath[j] * st.p_bath[j] / (2.0 * mj) + 0.5 * mj * wj * wj * d * d;
    }
    return h;
}

struct Integrator {
    const DiscreteBath& bath;
    const ModelParams& p;
    std::vector<double> w2;       // m_j w_j^2
    double k_sys;                 // M (w0^2 + dW^2_disc)

    Integrator(const DiscreteBath& b, const ModelParams& pp) : bath(b), p(pp) {
        const std::size_t N = bath.size();
        w2.resize(N);
        for (std::size_t j = 0; j < N; ++j) w2[j] = bath.mass[j] * bath.omega[j] * bath.omega[j];
        k_sys = p.mass * p.omega0 * p.omega0 + bath.counter_term_sum();
    }

    double coupling_sum(const PhaseSpaceState& st) const {
        double s = 0.0;
        const double* C = bath.coupling.data();
        const double* qb = st.q_bath.data();
        for (std::size_t j = 0; j < bath.size(); ++j) s += C[j] * qb[j];
        return s;
    }

    // one velocity-Verlet step; coupling_sum is evaluated once per half-kick
    void step(PhaseSpaceState& st, double dt) const {
        const std::size_t N = bath.size();
        const double* C = bath.coupling.data();
        double* qb = st.q_bath.data();
        double* pb = st.p_bath.data();
        const double half = 0.5 * dt;

        double fsys = -k_sys * st.q + coupling_sum(st);
        st.p += half * fsys;
        const double q_half = st.q; // forces on the bath use q at the same stage
        for (std::size_t j = 0; j < N; ++j) pb[j] += half * (C[j] * q_half - w2[j] * qb[j]);

        st.q += dt * st.p / p.mass;
        for (std::size_t j = 0; j < N; ++j) qb[j] += dt * pb[j] / bath.mass[j];

        fsys = -k_sys * st.q + coupling_sum(st);
        st.p += half * fsys;
        for (std::size_t j = 0; j < N; ++j) pb[j] += half * (C[j] * st.q - w2[j] * qb[j]);
    }
};

} // namespace

IntegrationResult integrate_eom(const DiscreteBath& bath, const ModelParams& p,
                                PhaseSpaceState state, const EnsembleConfig& cfg) {
    cfg.validate(bath);
    const Integrator integ(bath, p);
    const std::size_t n_out = cfg.n_output;
    // choose a step that divides the output spacing exactly so every sample
    // is recorded at its labelled time
    const double dt_out = cfg.t_max / static_cast<double>(n_out - 1);
    const std::size_t steps_per_out =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(dt_out / cfg.dt - 1e-12)));
    const double dt = dt_out / static_cast<double>(steps_per_out);

    IntegrationResult out;
    out.times.resize(n_out);
    out.q.resize(n_out);
    out.p.resize(n_out);
    const double h0 = hamiltonian(bath, p, state);
    const double h_scale =
        std::max({std::abs(h0), 0.5 * p.mass * p.omega0 * p.omega0 * state.q * state.q,
                  p.mass * p.omega0 * p.omega0});

    for (std::size_t k = 0; k < n_out; ++k) {
        out.times[k] = dt_out * static_cast<double>(k);
        out.q[k] = state.q;
        out.p[k] = state.p;
        if (k + 1 < n_out)
            for (std::size_t s = 0; s < steps_per_out; ++s) integ.step(state, dt);
    }
    const double h1 = hamiltonian(bath, p, state);
    out.energy_drift = std::abs(h1 - h0) / h_scale;
    if (out.energy_drift > 1e-3) {
        std::ostringstream msg;
        msg << "integrate_eom: relative energy drift " << out.energy_drift
            << " exceeds 1e-3; reduce dt (dt = " << dt << ")";
        throw std::runtime_error(msg.str());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ensembles. Samples are reduced in fixed blocks of 64 so the result is
// bit-identical for any thread count.

namespace {
constexpr std::size_t kBlock = 64;
}

EnsembleStats run_ensemble(const DiscreteBath& bath, const ModelParams& p,
                           const EnsembleConfig& cfg, double q0, double p0, ExecPolicy policy) {
    cfg.validate(bath);
    const CounterRng rng(cfg.seed);
    const std::size_t n_out = cfg.n_output;
    const std::size_t n_blocks = (cfg.n_samples + kBlock - 1) / kBlock;

    std::vector<std::vector<double>> block_sum(n_blocks), block_sumsq(n_blocks);
    parallel_for(n_blocks, policy, [&](std::size_t b) {
        std::vector<double> sum(n_out, 0.0), sumsq(n_out, 0.0);
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(cfg.n_samples, lo + kBlock);
        for (std::size_t s = lo; s < hi; ++s) {
            PhaseSpaceState st = sample_initial_conditions(bath, cfg, q0, p0, rng, s);
            IntegrationResult tr = integrate_eom(bath, p, std::move(st), cfg);
            for (std::size_t k = 0; k < n_out; ++k) {
                sum[k] += tr.q[k];
                sumsq[k] += tr.q[k] * tr.q[k];
            }
        }
        block_sum[b] = std::move(sum);
        block_sumsq[b] = std::move(sumsq);
    });

    EnsembleStats st;
    st.n_samples = cfg.n_samples;
    st.times.resize(n_out);
    st.q_mean.assign(n_out, 0.0);
    st.q_se.assign(n_out, 0.0);
    for (std::size_t k = 0; k < n_out; ++k)
        st.times[k] = cfg.t_max * static_cast<double>(k) / (n_out - 1);
    for (std::size_t b = 0; b < n_blocks; ++b)
        for (std::size_t k = 0; k < n_out; ++k) {
            st.q_mean[k] += block_sum[b][k];
            st.q_se[k] += block_sumsq[b][k];
        }
    const double n = static_cast<double>(cfg.n_samples);
    for (std::size_t k = 0; k < n_out; ++k) {
        const double mean = st.q_mean[k] / n;
        const double var = std::max(0.0, st.q_se[k] / n - mean * mean);
        st.q_mean[k] = mean;
        st.q_se[k] = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
    }
    return st;
}

ForceStats fluctuating_force_stats(const DiscreteBath& bath, const ModelParams& p,
                                   const EnsembleConfig& cfg, double q0, ExecPolicy policy) {
    cfg.validate(bath);
    const CounterRng rng(cfg.seed);
    const std::size_t N = bath.size();
    const std::size_t n_out = cfg.n_output;
    const double dt_out = cfg.t_max / (n_out - 1);
    const std::size_t n_blocks = (cfg.n_samples + kBlock - 1) / kBlock;

    const double t_kick = cfg.impulse_window > 0.0
                              ? std::min(cfg.impulse_window, cfg.t_max)
                              : std::min(cfg.t_max, 40.0 * M_PI / bath.omega_max);
    const std::size_t n_kick =
        std::min(n_out, static_cast<std::size_t>(std::floor(t_kick / dt_out)) + 1);

    // autocorrelation lags (quarter of the window) and base points
    const std::size_t n_tau = n_out / 4;
    const std::size_t n_base = 8;

    struct BlockAcc {
        std::vector<double> f_sum, f_sumsq, ac_sum;
        double imp_sum = 0.0, imp_sumsq = 0.0;
    };
    std::vector<BlockAcc> blocks(n_blocks);

    // per-mode rotation for the output grid spacing
    std::vector<double> cd(N), sd(N);
    for (std::size_t j = 0; j < N; ++j) {
        cd[j] = std::cos(bath.omega[j] * dt_out);
        sd[j] = std::sin(bath.omega[j] * dt_out);
    }

    parallel_for(n_blocks, policy, [&](std::size_t b) {
        BlockAcc acc;
        acc.f_sum.assign(n_out, 0.0);
        acc.f_sumsq.assign(n_out, 0.0);
        acc.ac_sum.assign(n_tau, 0.0);
        std::vector<double> A(N), B(N), cj(N), sj(N), F(n_out);
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(cfg.n_samples, lo + kBlock);
        for (std::size_t s = lo; s < hi; ++s) {
            PhaseSpaceState st = sample_initial_conditions(bath, cfg, q0, 0.0, rng, s);
            for (std::size_t j = 0; j < N; ++j) {
                const double mj = bath.mass[j], wj = bath.omega[j];
                const double qt = st.q_bath[j] - bath.coupling[j] * q0 / (mj * wj * wj);
                A[j] = bath.coupling[j] * qt;
                B[j] = bath.coupling[j] / wj * (st.p_bath[j] / mj);
                cj[j] = 1.0;
                sj[j] = 0.0;
            }
            for (std::size_t k = 0; k < n_out; ++k) {
                double f = 0.0;
                for (std::size_t j = 0; j < N; ++j) {
                    f += A[j] * cj[j] + B[j] * sj[j];
                    const double c_new = cj[j] * cd[j] - sj[j] * sd[j];
                    sj[j] = sj[j] * cd[j] + cj[j] * sd[j];
                    cj[j] = c_new;
                }
                F[k] = f;
                acc.f_sum[k] += f;
                acc.f_sumsq[k] += f * f;
            }
            double imp = 0.0;
            for (std::size_t k = 0; k + 1 < n_kick; ++k) imp += 0.5 * (F[k] + F[k + 1]) * dt_out;
            acc.imp_sum += imp;
            acc.imp_sumsq += imp * imp;
            for (std::size_t m = 0; m < n_tau; ++m) {
                double prod = 0.0;
                for (std::size_t ib = 0; ib < n_base; ++ib) {
                    const std::size_t k0 = ib * (n_out - n_tau - 1) / (n_base - 1);
                    prod += F[k0] * F[k0 + m];
                }
                acc.ac_sum[m] += prod / n_base;
            }
        }
        blocks[b] = std::move(acc);
    });

    ForceStats out;
    out.times.resize(n_out);
    for (std::size_t k = 0; k < n_out; ++k) out.times[k] = k * dt_out;
    out.mean_force.assign(n_out, 0.0);
    out.se_force.assign(n_out, 0.0);
    out.autocorr_tau.resize(n_tau);
    out.autocorr.assign(n_tau, 0.0);
    for (std::size_t m = 0; m < n_tau; ++m) out.autocorr_tau[m] = m * dt_out;

    double imp_sum = 0.0, imp_sumsq = 0.0;
    for (const auto& b : blocks) {
        for (std::size_t k = 0; k < n_out; ++k) {
            out.mean_force[k] += b.f_sum[k];
            out.se_force[k] += b.f_sumsq[k];
        }
        for (std::size_t m = 0; m < n_tau; ++m) out.autocorr[m] += b.ac_sum[m];
        imp_sum += b.imp_sum;
        imp_sumsq += b.imp_sumsq;
    }
    const double n = static_cast<double>(cfg.n_samples);
    for (std::size_t k = 0; k < n_out; ++k) {
        const double mean = out.mean_force[k] / n;
        const double var = std::max(0.0, out.se_force[k] / n - mean * mean);
        out.mean_force[k] = mean;
        out.se_force[k] = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
    }
    for (std::size_t m = 0; m < n_tau; ++m) out.autocorr[m] /= n;
    // raw product average <F(t)F(t+tau)>; integrated over the symmetric
    // window [-tau_max, tau_max] using evenness in tau
    out.autocorr_integral = 0.0;
    for (std::size_t m = 1; m < n_tau; ++m)
        out.autocorr_integral += 0.5 * (out.autocorr[m - 1] + out.autocorr[m]) * dt_out;
    out.autocorr_integral *= 2.0;

    out.kick_impulse = imp_sum / n;
    const double imp_var = std::max(0.0, imp_sumsq / n - out.kick_impulse * out.kick_impulse);
    out.kick_impulse_se = n > 1 ? std::sqrt(imp_var / (n - 1)) : 0.0;
    out.insufficient_samples =
        std::abs(out.kick_impulse) > 0.0 && out.kick_impulse_se > 0.5 * std::abs(out.kick_impulse);
    return out;
}

MemoryKernelReport memory_kernel_check(const DiscreteBath& bath, const ModelParams& p,
                                       const std::vector<double>& times,
                                       const std::vector<double>& qdot) {
    if (times.size() != qdot.size() || times.size() < 2)
        throw std::invalid_argument("memory_kernel_check: need matching grids of size >= 2");
    const double t_end = times.back();
    // sum_j C_j^2/(m_j w_j^2) int_0^t cos(w_j (t - t')) qdot(t') dt'
    double acc = 0.0;
    for (std::size_t j = 0; j < bath.size(); ++j) {
        const double cj = bath.coupling[j] * bath.coupling[j] /
                          (bath.mass[j] * bath.omega[j] * bath.omega[j]);
        double integral = 0.0;
        for (std::size_t k = 0; k + 1 < times.size(); ++k) {
            const double f0 = std::cos(bath.omega[j] * (t_end - times[k])) * qdot[k];
            const double f1 = std::cos(bath.omega[j] * (t_end - times[k + 1])) * qdot[k + 1];
            integral += 0.5 * (f0 + f1) * (times[k + 1] - times[k]);
        }
        acc += cj * integral;
    }
    MemoryKernelReport rep;
    rep.kernel_integral = acc;
    rep.markovian_value = 2.0 * p.mass * p.gamma * qdot.back();
    rep.rel_deviation = rep.markovian_value != 0.0
                            ? std::abs(acc - rep.markovian_value) / std::abs(rep.markovian_value)
                            : std::abs(acc);
    rep.memory_time = kernel_memory_time(bath);
    return rep;
}

double kernel_memory_time(const DiscreteBath& bath) {
    auto K = [&](double tau) {
        double k = 0.0;
        for (std::size_t j = 0; j < bath.size(); ++j)
            k += bath.coupling[j] * bath.coupling[j] /
                 (bath.mass[j] * bath.omega[j] * bath.omega[j]) * std::cos(bath.omega[j] * tau);
        return k;
    };
    const double dtau = 0.01 / bath.omega_max;
    double prev = K(0.0);
    for (double tau = dtau; tau < bath.recurrence_time(); tau += dtau) {
        const double cur = K(tau);
        if (prev > 0.0 && cur <= 0.0) {
            // linear interpolation of the crossing
            return tau - dtau + dtau * prev / (prev - cur);
        }
        prev = cur;
    }
    return bath.recurrence_time();
}

} // namespace fanodho
