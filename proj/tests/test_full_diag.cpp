#include <doctest.h>

#include <cmath>
#include <complex>

#include "fanodho/full_diag.hpp"
#include "fanodho/dynamics.hpp"

using namespace fanodho;

namespace {

ModelParams params(double gamma = 0.1, double cutoff = 50.0) {
    ModelParams p;
    p.gamma = gamma;
    p.cutoff = cutoff;
    return p;
}

// principal-value route for X_R, independent of the residue evaluation
double X_R_by_pv(const ModelParams& p, double W, double t, double hi) {
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-10;
    cfg.rel_tol = 1e-9;
    auto g = [&](double w) { return 2.0 * limit_closed::lineshape_sq(p, w) * w; };
    // PV int g cos(wt)/(w^2-W^2) = (1/2W)[PV int g cos/(w-W) - int g cos/(w+W)]
    const auto pv = quad::cauchy_pv_osc(g, W, t, 0.0, hi, cfg);
    const double pv_cos = std::real(-pv.value);
    auto anti = [&](double w) { return g(w) / (w + W); };
    const double reg = quad::osc_cos(anti, 0.0, hi, t, cfg).value;
    return (pv_cos - reg) / (2.0 * W);
}

double W_R_by_pv(const ModelParams& p, double W, double t, double hi) {
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-10;
    cfg.rel_tol = 1e-9;
    auto g = [&](double w) { return 2.0 * limit_closed::lineshape_sq(p, w); };
    const auto pv = quad::cauchy_pv_osc(g, W, t, 0.0, hi, cfg);
    const double pv_sin = std::imag(pv.value);
    auto anti = [&](double w) { return g(w) / (w + W); };
    const double reg = quad::osc_sin(anti, 0.0, hi, t, cfg).value;
    return (pv_sin - reg) / (2.0 * W);
}

} // namespace

TEST_CASE("z(w) from the closed-form shifts") {
    SUBCASE("counter-term, limit mode: z vanishes on resonance") {
        auto s = BathSpectrum::ohmic_limit(0.1);
        auto p = params();
        CHECK(z_of_omega(s, p, 1.0, true) == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("finite drude without counter-term against the closed forms") {
        auto p = params();
        auto s = BathSpectrum::drude(p.gamma, p.cutoff);
        const double w = 2.0;
        const double H = closed_form::drude_H(p, w);
        const double vsq = coupling_sq(s, p, w);
        const double oracle = (w * w - 1.0 - 2.0 * H) / (2.0 * vsq);
        CHECK(z_of_omega(s, p, w, false) == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(oracle == doctest::Approx(102.14).epsilon(1e-3));
    }
    SUBCASE("z scales as 1/gamma in the limit mode") {
        auto p = params();
        const double w = 1.7;
        double ref = 0.0;
        int i = 0;
        for (double g : {0.1, 0.2, 0.4}) {
            auto s = BathSpectrum::ohmic_limit(g);
            auto pg = params(g);
            const double zg = z_of_omega(s, pg, w, true) * g;
            if (i++ == 0) ref = zg;
            CHECK(zg == doctest::Approx(ref).epsilon(1e-10));
        }
    }
    SUBCASE("vanishing coupling is a singularity") {
        auto s = BathSpectrum::ohmic_sharp(0.1, 5.0);
        CHECK_THROWS_AS(z_of_omega(s, params(0.1, 5.0), 7.0, false), std::domain_error);
    }
}

TEST_CASE("mode weights") {
    auto p = params();
    auto s = BathSpectrum::drude(p.gamma, p.cutoff);
    SUBCASE("counter-rotating weight vanishes on resonance") {
        auto m = mode_weights(s, p, 1.0, true);
        CHECK(m.chi == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("normalization identity holds pointwise") {
        for (double w : {0.3, 1.0, 2.5, 20.0}) {
            auto m = mode_weights(s, p, w, false);
            const double vsq = coupling_sq(s, p, w);
            const double norm = m.alpha_sq * 4.0 * p.omega0 * p.omega0 * vsq *
                                (M_PI * M_PI + m.z * m.z) /
                                ((w + p.omega0) * (w + p.omega0));
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    SUBCASE("sigma on the diagonal at resonance") {
        auto m = mode_weights(s, p, 1.0, true);
        const double v0 = std::sqrt(coupling_sq(s, p, 1.0));
        CHECK(m.sigma(1.0) == doctest::Approx(v0 * m.alpha / (2.0 * p.omega0)).epsilon(1e-12));
    }
    SUBCASE("the two printed forms of the spectral weight agree") {
        // (2 w0/pi) |L|^2 = (2 w0/(w+w0))^2 |alpha_w|^2
        DiagKernel k(s, p, {});
        for (double w : {0.4, 0.95, 1.0, 1.05, 3.0, 30.0}) {
            auto m = mode_weights(s, p, w, true);
            const double lhs = 2.0 * p.omega0 / M_PI * k.lineshape_sq_at(w);
            const double f = 2.0 * p.omega0 / (w + p.omega0);
            CHECK(lhs == doctest::Approx(f * f * m.alpha_sq).epsilon(1e-10));
        }
    }
}

TEST_CASE("lineshape kernel") {
    SUBCASE("limit-mode peak value at resonance") {
        auto s = BathSpectrum::ohmic_limit(0.1);
        DiagKernel k(s, params(), {});
        CHECK(k.lineshape_sq_at(1.0) == doctest::Approx(5.0).epsilon(1e-14));
    }
    SUBCASE("weak damping tends to a lorentzian of width gamma") {
        const double g = 1e-3;
        auto s = BathSpectrum::ohmic_limit(g);
        DiagKernel k(s, params(g), {});
        const double peak = 1.0 / (2.0 * g);
        double max_dev = 0.0;
        for (double d = -10.0 * g; d <= 10.0 * g; d += g / 7.0) {
            const double w = 1.0 + d;
            const double lor = (1.0 / 2.0) * g / (d * d + g * g);
            max_dev = std::max(max_dev, std::abs(k.lineshape_sq_at(w) - lor) / peak);
        }
        CHECK(max_dev <= 0.01);
    }
    SUBCASE("missing counter-term fails the stability precondition") {
        auto p = params();
        auto s = BathSpectrum::drude(p.gamma, p.cutoff); // 2 gamma cutoff = 10 > omega0^2
        DiagKernel::Options opt;
        opt.counter_term = false;
        CHECK_THROWS_AS(lineshape(s, p, {}, opt), StabilityError);
        try {
            lineshape(s, p, {}, opt);
        } catch (const StabilityError& e) {
            CHECK(std::string(e.what()).find("omega0^2 > |Delta w^2|") != std::string::npos);
        }
    }
    SUBCASE("stable weak-coupling kernel carries both tables") {
        auto p = params(0.004, 50.0); // 2 g Wc = 0.4 < 1
        auto s = BathSpectrum::drude(p.gamma, p.cutoff);
        DiagKernel::Options opt;
        opt.counter_term = false;
        DiagKernel k(s, p, {}, opt);
        CHECK(!k.L_sq().empty());
        CHECK(!k.L_sq_renorm().empty());
        CHECK(k.omega_grid().size() == k.z_values().size());
    }
    SUBCASE("completeness sum rule") {
        auto s = BathSpectrum::ohmic_limit(0.1);
        DiagKernel k(s, params(), {});
        CHECK(lineshape_sum_rule(k) == doctest::Approx(1.0).epsilon(1e-6));
        auto sf = BathSpectrum::drude(0.1, 50.0);
        DiagKernel kf(sf, params(), {});
        CHECK(lineshape_sum_rule(kf) == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("limit-mode closed forms against principal-value quadrature") {
    auto p = params(0.3, 50.0);
    const double hi = 400.0;
    SUBCASE("X_R") {
        for (double W : {0.5, 1.3, 4.0}) {
            for (double t : {0.0, 0.8, 3.0}) {
                const double closed = limit_closed::X_R(p, W, t);
                const double pv = X_R_by_pv(p, W, t, hi);
                CHECK(closed == doctest::Approx(pv).epsilon(2e-4));
            }
        }
    }
    SUBCASE("W_R and its time derivative") {
        for (double W : {0.5, 2.1}) {
            CHECK(limit_closed::W_R(p, W, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
            const double t = 1.7;
            CHECK(limit_closed::W_R(p, W, t) == doctest::Approx(W_R_by_pv(p, W, t, hi)).epsilon(2e-4));
            // d/dt W_R = X_R via a one-sided second-order stencil at t = 0
            const double h = 1e-5;
            const double d0 = (-3.0 * limit_closed::W_R(p, W, 0.0) +
                               4.0 * limit_closed::W_R(p, W, h) - limit_closed::W_R(p, W, 2.0 * h)) /
                              (2.0 * h);
            CHECK(d0 == doctest::Approx(limit_closed::X_R(p, W, 0.0)).epsilon(1e-5));
        }
    }
    SUBCASE("X_R(W;0) + Z_R(W) = 0") {
        for (double W : {0.2, 1.0, 5.0, 40.0})
            CHECK(limit_closed::X_R(p, W, 0.0) + limit_closed::Z_R(p, W) ==
                  doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("full-model evolution coefficients") {
    SUBCASE("quadrature route matches the residue evaluation") {
        for (double g : {0.1, 0.5}) {
            auto s = BathSpectrum::ohmic_limit(g);
            DiagKernel k(s, params(g), {});
            for (double t : {0.7, 5.0, 20.0}) {
                auto ev = evolve_a_full(k, t);
                const auto ca = limit_closed::c_a(k.params(), t);
                const auto cad = limit_closed::c_adag(k.params(), t);
                CHECK(std::abs(ev.c_a - ca) <= 1e-6 * std::abs(ca) + 1e-9);
                CHECK(std::abs(ev.c_adag - cad) <= 1e-6 * std::abs(cad) + 1e-9);
            }
        }
    }
    SUBCASE("identity at t = 0") {
        auto s = BathSpectrum::ohmic_limit(0.1);
        DiagKernel k(s, params(), {});
        std::vector<double> grid{0.3, 1.0, 2.5};
        auto ev = evolve_a_full(k, 0.0, grid);
        CHECK(std::abs(ev.c_a - 1.0) <= 1e-6);
        CHECK(std::abs(ev.c_adag) <= 1e-12);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(std::abs(ev.B1[i]) <= 1e-10);
            CHECK(std::abs(ev.B2[i]) <= 1e-10);
        }
    }
    SUBCASE("counter-rotating coefficient is negligible at weak damping") {
        const double g = 1e-3;
        auto s = BathSpectrum::ohmic_limit(g);
        DiagKernel k(s, params(g), {});
        for (double t : {10.0, 500.0, 5000.0}) {
            const auto ca = limit_closed::c_a(k.params(), t);
            const auto cad = limit_closed::c_adag(k.params(), t);
            CHECK(std::abs(cad) / std::abs(ca) <= 1e-2);
        }
    }
    SUBCASE("commutator sum rule, limit mode") {
        auto s = BathSpectrum::ohmic_limit(0.5);
        DiagKernel k(s, params(0.5), {});
        CHECK(commutator_sum_rule(k, 1.0) == doctest::Approx(1.0).epsilon(1e-4));
    }
    SUBCASE("finite-cutoff coefficients at t = 0") {
        auto p = params(0.05, 8.0);
        auto s = BathSpectrum::drude(p.gamma, p.cutoff);
        DiagKernel k(s, p, {});
        std::vector<double> grid{0.5, 1.0, 3.0};
        auto ev = evolve_a_full(k, 0.0, grid, ExecPolicy::Serial);
        CHECK(std::abs(ev.c_a - 1.0) <= 2e-4);
        CHECK(std::abs(ev.c_adag) <= 1e-12);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(std::abs(ev.B1[i]) <= 2e-3);
            CHECK(std::abs(ev.B2[i]) <= 2e-3);
        }
    }
}

TEST_CASE("rwa reduction report") {
    SUBCASE("shift doubling for a wide drude bath") {
        auto p = params(1e-3, 500.0);
        auto s = BathSpectrum::drude(p.gamma, p.cutoff);
        auto rep = rwa_reduction(s, p);
        CHECK(rep.H_over_F_at_w0 == doctest::Approx(2.0).epsilon(0.10));
    }
    SUBCASE("ohmic limit with counter-term reduces to gamma << omega0") {
        auto s = BathSpectrum::ohmic_limit(1e-3);
        auto rep = rwa_reduction(s, params(1e-3));
        CHECK(rep.reduced_to_gamma_condition);
        CHECK(rep.valid);
        auto s2 = BathSpectrum::ohmic_limit(0.5);
        auto rep2 = rwa_reduction(s2, params(0.5));
        CHECK(!rep2.valid);
    }
    SUBCASE("two routes to the reduced spectral weight agree near the peak") {
        auto p = params(1e-3, 500.0);
        auto s = BathSpectrum::drude(p.gamma, p.cutoff);
        auto rep = rwa_reduction(s, p);
        CHECK(rep.max_rel_dev_near_peak <= 0.02);
    }
}
