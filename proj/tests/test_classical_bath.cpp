#include <doctest.h>

#include <cmath>

#include "fanodho/classical_bath.hpp"

using namespace fanodho;

namespace {

ModelParams params(double gamma = 0.1, double cutoff = 10.0, double kT = 0.0) {
    ModelParams p;
    p.gamma = gamma;
    p.cutoff = cutoff;
    p.kT = kT;
    return p;
}

} // namespace

TEST_CASE("bath discretization") {
    auto p = params();
    auto s = BathSpectrum::drude(p.gamma, p.cutoff);
    SUBCASE("reconstructed spectral density matches the input near resonance") {
        auto bath = discretize_bath(s, p, 400, DiscretizationScheme::UniformFreq, 30.0);
        const double J_in = spectral_density(s, p.mass, p.omega0);
        CHECK(bath.reconstructed_J(p.omega0) == doctest::Approx(J_in).epsilon(0.02));
    }
    SUBCASE("zero damping gives zero couplings") {
        auto z = BathSpectrum::drude(0.0, p.cutoff);
        auto bath = discretize_bath(z, p, 256, DiscretizationScheme::UniformFreq, 30.0);
        for (double c : bath.coupling) CHECK(c == 0.0);
    }
    SUBCASE("counter-term sum approaches the drude frequency shift") {
        auto bath = discretize_bath(s, p, 2000);
        // sum_j C_j^2/(m_j w_j^2) -> M * 2 gamma cutoff as the grid refines
        CHECK(bath.counter_term_sum() / p.mass ==
              doctest::Approx(2.0 * p.gamma * p.cutoff * (2.0 / M_PI) * std::atan(5.0))
                  .epsilon(0.02));
    }
    SUBCASE("insufficient resolution is rejected") {
        CHECK_THROWS_AS(discretize_bath(s, p, 2), std::invalid_argument);
    }
}

TEST_CASE("initial-condition sampling") {
    auto p = params(0.1, 10.0, 0.1);
    auto s = BathSpectrum::drude(p.gamma, p.cutoff);
    auto bath = discretize_bath(s, p, 128, DiscretizationScheme::UniformFreq, 20.0);
    EnsembleConfig cfg;
    cfg.kT = 0.1;
    cfg.seed = 42;
    cfg.dt = 1e-3;
    cfg.t_max = 1.0;
    CounterRng rng(cfg.seed);

    SUBCASE("zero temperature pins the shifted coordinates") {
        EnsembleConfig c0 = cfg;
        c0.kT = 0.0;
        c0.ic_variant = ReservoirIC::Shifted;
        auto st = sample_initial_conditions(bath, c0, 1.5, 0.0, rng, 0);
        for (std::size_t j = 0; j < bath.size(); ++j) {
            const double expect = bath.coupling[j] * 1.5 / (bath.omega[j] * bath.omega[j]);
            CHECK(st.q_bath[j] == doctest::Approx(expect).epsilon(1e-14));
            CHECK(st.p_bath[j] == 0.0);
        }
        CHECK(st.q == 1.5);
        CHECK(st.p == 0.0);
    }
    SUBCASE("relative coordinates are centered and carry the right variance") {
        cfg.ic_variant = ReservoirIC::Shifted;
        const std::size_t n = 10000;
        const std::size_t j_probe = 10;
        double sum = 0.0, sumsq = 0.0;
        const double q0 = 1.0;
        for (std::size_t smp = 0; smp < n; ++smp) {
            auto st = sample_initial_conditions(bath, cfg, q0, 0.0, rng, smp);
            const double wj = bath.omega[j_probe];
            const double qt = st.q_bath[j_probe] - bath.coupling[j_probe] * q0 / (wj * wj);
            sum += qt;
            sumsq += qt * qt;
        }
        const double mean = sum / n;
        const double var = sumsq / n - mean * mean;
        const double wj = bath.omega[j_probe];
        const double var_expect = cfg.kT / (wj * wj);
        const double se = std::sqrt(var_expect / n);
        CHECK(std::abs(mean) <= 3.0 * se);
        CHECK(var == doctest::Approx(var_expect).epsilon(0.05));
    }
    SUBCASE("draws are keyed, not sequential") {
        auto a = sample_initial_conditions(bath, cfg, 1.0, 0.0, rng, 7);
        auto b = sample_initial_conditions(bath, cfg, 1.0, 0.0, rng, 7);
        CHECK(a.q_bath == b.q_bath);
        auto c = sample_initial_conditions(bath, cfg, 1.0, 0.0, rng, 8);
        CHECK(a.q_bath != c.q_bath);
    }
}

TEST_CASE("symplectic integration") {
    auto p = params(0.1, 10.0);
    SUBCASE("uncoupled oscillator stays on the cosine") {
        auto z = BathSpectrum::drude(0.0, p.cutoff);
        auto bath = discretize_bath(z, p, 128, DiscretizationScheme::UniformFreq, 20.0);
        EnsembleConfig cfg;
        cfg.dt = 0.01 / 20.0;
        cfg.t_max = 2.0 * M_PI * 10.0;
        cfg.n_output = 401;
        PhaseSpaceState st;
        st.q = 1.0;
        st.p = 0.0;
        st.q_bath.assign(128, 0.0);
        st.p_bath.assign(128, 0.0);
        auto tr = integrate_eom(bath, p, st, cfg);
        double max_dev = 0.0;
        for (std::size_t k = 0; k < tr.times.size(); ++k)
            max_dev = std::max(max_dev, std::abs(tr.q[k] - std::cos(tr.times[k])));
        CHECK(max_dev <= 1e-6 * 2.0 * M_PI * 10.0); // phase error accumulates linearly
    }
    SUBCASE("energy drift stays below 1e-6 per period") {
        auto s = BathSpectrum::drude(p.gamma, p.cutoff);
        auto bath = discretize_bath(s, p, 128, DiscretizationScheme::UniformFreq, 20.0);
        EnsembleConfig cfg;
        cfg.dt = 0.01 / 20.0;
        cfg.t_max = 2.0 * M_PI;
        cfg.kT = 0.1;
        CounterRng rng(1);
        auto st = sample_initial_conditions(bath, cfg, 1.0, 0.0, rng, 0);
        auto tr = integrate_eom(bath, p, st, cfg);
        CHECK(tr.energy_drift <= 1e-6);
    }
    SUBCASE("instability detection names the cure") {
        auto s = BathSpectrum::drude(p.gamma, p.cutoff);
        auto bath = discretize_bath(s, p, 96, DiscretizationScheme::UniformFreq, 20.0);
        EnsembleConfig cfg;
        cfg.dt = 0.099 / 20.0; // stable for verlet but sloppy: drift exceeds the bound
        cfg.t_max = 400.0;
        PhaseSpaceState st;
        st.q = 1.0;
        st.p = 0.0;
        st.q_bath.assign(96, 0.0);
        st.p_bath.assign(96, 0.0);
        // want either a clean pass or the advisory error; never silent nonsense
        try {
            auto tr = integrate_eom(bath, p, st, cfg);
            CHECK(tr.energy_drift <= 1e-3);
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("reduce dt") != std::string::npos);
        }
    }
    SUBCASE("single shifted zero-temperature sample follows the damped trajectory") {
        // the finite cutoff renormalizes the frequency by ~ gamma w0^2/cutoff,
        // so the cutoff must sit far above omega0 for a 2% match
        ModelParams ps = p;
        ps.cutoff = 80.0;
        auto s = BathSpectrum::ohmic_sharp(ps.gamma, ps.cutoff);
        auto bath = discretize_bath(s, ps, 400, DiscretizationScheme::UniformFreq, 80.0);
        EnsembleConfig cfg;
        cfg.dt = 1.2e-3;
        cfg.t_max = std::min(5.0 / ps.gamma, 0.45 * bath.recurrence_time());
        cfg.n_output = 301;
        cfg.ic_variant = ReservoirIC::Shifted;
        CounterRng rng(0);
        auto st = sample_initial_conditions(bath, cfg, 1.0, 0.0, rng, 0);
        auto tr = integrate_eom(bath, ps, st, cfg);
        double max_dev = 0.0;
        for (std::size_t k = 0; k < tr.times.size(); ++k)
            max_dev = std::max(max_dev,
                               std::abs(tr.q[k] - classical_trajectory(ps, 1.0, 0.0, tr.times[k])));
        CHECK(max_dev <= 0.02);
    }
}

TEST_CASE("ensemble statistics are deterministic across policies") {
    auto p = params(0.1, 10.0, 0.1);
    auto s = BathSpectrum::drude(p.gamma, p.cutoff);
    auto bath = discretize_bath(s, p, 128, DiscretizationScheme::UniformFreq, 20.0);
    EnsembleConfig cfg;
    cfg.n_samples = 96;
    cfg.kT = 0.1;
    cfg.seed = 1234;
    cfg.dt = 4e-3;
    cfg.t_max = 5.0;
    cfg.n_output = 51;
    auto a = run_ensemble(bath, p, cfg, 1.0, 0.0, ExecPolicy::Serial);
    auto b = run_ensemble(bath, p, cfg, 1.0, 0.0, ExecPolicy::Parallel);
    CHECK(a.q_mean == b.q_mean);
    CHECK(a.q_se == b.q_se);
    auto fa = fluctuating_force_stats(bath, p, cfg, 1.0, ExecPolicy::Serial);
    auto fb = fluctuating_force_stats(bath, p, cfg, 1.0, ExecPolicy::Parallel);
    CHECK(fa.mean_force == fb.mean_force);
    CHECK(fa.autocorr == fb.autocorr);
    CHECK(fa.kick_impulse == fb.kick_impulse);
}

TEST_CASE("fluctuating force statistics") {
    auto p = params(0.1, 10.0, 0.1);
    auto s = BathSpectrum::ohmic_sharp(p.gamma, 20.0);
    auto bath = discretize_bath(s, p, 400, DiscretizationScheme::UniformFreq, 20.0);
    EnsembleConfig cfg;
    cfg.n_samples = 4000;
    cfg.kT = 0.1;
    cfg.seed = 99;
    cfg.dt = 4e-3;
    cfg.t_max = 40.0;
    cfg.n_output = 801;

    SUBCASE("shifted ensemble: force consistent with zero") {
        cfg.ic_variant = ReservoirIC::Shifted;
        auto st = fluctuating_force_stats(bath, p, cfg, 1.0);
        std::size_t violations = 0;
        for (std::size_t k = 0; k < st.times.size(); ++k)
            if (std::abs(st.mean_force[k]) > 3.0 * st.se_force[k]) ++violations;
        // a few 3-sigma excursions out of 801 points are expected
        CHECK(violations <= st.times.size() / 100);
    }
    SUBCASE("bare ensemble follows the finite-cutoff kick profile") {
        cfg.ic_variant = ReservoirIC::Bare;
        auto st = fluctuating_force_stats(bath, p, cfg, 1.0);
        const double Wmax = bath.omega_max;
        for (std::size_t k = 1; k < 20; ++k) {
            const double t = st.times[k];
            const double expect = -(4.0 * p.mass * p.gamma * 1.0 / M_PI) * std::sin(Wmax * t) / t;
            CHECK(std::abs(st.mean_force[k] - expect) <= 4.0 * st.se_force[k] + 1e-3);
        }
    }
    SUBCASE("bare-minus-shifted impulse equals the delta kick") {
        EnsembleConfig cb = cfg;
        cb.ic_variant = ReservoirIC::Bare;
        cb.n_samples = 512; // common random numbers cancel the noise exactly
        auto stb = fluctuating_force_stats(bath, p, cb, 1.0);
        EnsembleConfig cs = cb;
        cs.ic_variant = ReservoirIC::Shifted;
        auto sts = fluctuating_force_stats(bath, p, cs, 1.0);
        const double diff = stb.kick_impulse - sts.kick_impulse;
        CHECK(diff == doctest::Approx(-2.0 * p.mass * p.gamma * 1.0).epsilon(0.05));
    }
    SUBCASE("integrated autocorrelation approaches 4 M gamma kT") {
        cfg.ic_variant = ReservoirIC::Shifted;
        auto st = fluctuating_force_stats(bath, p, cfg, 0.0);
        CHECK(st.autocorr_integral ==
              doctest::Approx(4.0 * p.mass * p.gamma * cfg.kT).epsilon(0.10));
    }
}

TEST_CASE("memory kernel check") {
    auto p = params(0.1, 10.0);
    auto s = BathSpectrum::ohmic_sharp(p.gamma, 50.0);
    auto bath = discretize_bath(s, p, 2000, DiscretizationScheme::UniformFreq, 50.0);
    SUBCASE("constant velocity") {
        std::vector<double> times, qdot;
        for (int i = 0; i <= 2000; ++i) {
            times.push_back(1.0 * i / 2000.0);
            qdot.push_back(0.7);
        }
        auto rep = memory_kernel_check(bath, p, times, qdot);
        CHECK(rep.rel_deviation <= 0.03);
    }
    SUBCASE("zero coupling gives a vanishing integral") {
        auto z = BathSpectrum::drude(0.0, 10.0);
        auto zb = discretize_bath(z, p, 128, DiscretizationScheme::UniformFreq, 20.0);
        std::vector<double> times{0.0, 0.5, 1.0}, qdot{1.0, 1.0, 1.0};
        auto rep = memory_kernel_check(zb, p, times, qdot);
        CHECK(rep.kernel_integral == 0.0);
    }
    SUBCASE("halving the band doubles the memory time") {
        auto b1 = discretize_bath(s, p, 2000, DiscretizationScheme::UniformFreq, 50.0);
        auto b2 = discretize_bath(s, p, 2000, DiscretizationScheme::UniformFreq, 25.0);
        const double m1 = kernel_memory_time(b1);
        const double m2 = kernel_memory_time(b2);
        CHECK(m2 > m1);
        CHECK(m2 / m1 == doctest::Approx(2.0).epsilon(0.05));
    }
}
