#include <doctest.h>

#include <cmath>

#include "fanodho/level_shift.hpp"

using namespace fanodho;

namespace {

ModelParams params(double gamma = 0.1, double cutoff = 50.0) {
    ModelParams p;
    p.gamma = gamma;
    p.cutoff = cutoff;
    return p;
}

// brute-force F: paired midpoint Riemann around the pole, midpoint Riemann to
// 20 cutoffs, then a midpoint Riemann in u = 1/W for the far Drude tail
double riemann_F(const BathSpectrum& s, const ModelParams& p, double pole) {
    auto vsq = [&](double W) { return coupling_sq(s, p, W); };
    const double w = pole; // symmetric window [0, 2 pole]
    const int n = 2000000;
    const double h = w / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = (i + 0.5) * h;
        acc += (vsq(pole - u) - vsq(pole + u)) / u * h;
    }
    const double X = 20.0 * s.cutoff;
    const int m = 2000000;
    const double hr = (X - 2.0 * pole) / m;
    for (int i = 0; i < m; ++i) {
        const double W = 2.0 * pole + (i + 0.5) * hr;
        acc += vsq(W) / (pole - W) * hr;
    }
    const int k = 200000;
    const double hu = (1.0 / X) / k;
    for (int i = 0; i < k; ++i) {
        const double u = (i + 0.5) * hu;
        const double W = 1.0 / u;
        acc += vsq(W) / (pole - W) / (u * u) * hu;
    }
    return acc;
}

} // namespace

TEST_CASE("drude H quadrature matches the closed form") {
    auto p = params();
    auto s = BathSpectrum::drude(p.gamma, p.cutoff);
    CHECK(level_shift_H(s, p, 1.0) == doctest::Approx(-5.0 / 1.0004).epsilon(1e-9));
    double max_rel = 0.0;
    for (double w : {0.01, 0.5, 1.0, 7.0, 49.0, 80.0, 200.0}) {
        const double hq = level_shift_H(s, p, w);
        const double hc = closed_form::drude_H(p, w);
        max_rel = std::max(max_rel, std::abs(hq - hc) / std::abs(hc));
    }
    CHECK(max_rel <= 1e-6);
}

TEST_CASE("drude H far above the cutoff") {
    auto p = params();
    auto s = BathSpectrum::drude(p.gamma, p.cutoff);
    const double w = 100.0 * p.cutoff;
    const double hq = level_shift_H(s, p, w);
    CHECK(hq < 0.0);
    CHECK(hq == doctest::Approx(closed_form::drude_H(p, w)).epsilon(0.1));
}

TEST_CASE("drude F quadrature matches closed form and riemann oracle") {
    auto p = params();
    auto s = BathSpectrum::drude(p.gamma, p.cutoff);
    for (double w : {0.3, 1.0, 5.0}) {
        CHECK(level_shift_F(s, p, w) == doctest::Approx(closed_form::drude_F(p, w)).epsilon(1e-8));
    }
    const double brute = riemann_F(s, p, p.omega0);
    CHECK(level_shift_F(s, p, p.omega0) == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("two grid resolutions of F agree") {
    auto p = params();
    auto s = BathSpectrum::drude(p.gamma, p.cutoff);
    QuadratureConfig coarse;
    coarse.grid_max = 8.0 * p.cutoff;
    QuadratureConfig fine;
    fine.grid_max = 40.0 * p.cutoff;
    CHECK(level_shift_F(s, p, 1.0, coarse) ==
          doctest::Approx(level_shift_F(s, p, 1.0, fine)).epsilon(1e-6));
}

TEST_CASE("F scales linearly with gamma toward zero") {
    auto s1 = BathSpectrum::drude(1e-10, 50.0);
    auto p1 = params(1e-10);
    const double f = level_shift_F(s1, p1, 1.0);
    CHECK(std::abs(f) <= 1e-8); // F is about 26 gamma at these parameters
    CHECK(f == doctest::Approx(closed_form::drude_F(p1, 1.0)).epsilon(1e-6));
}

TEST_CASE("H is below F wherever the coupling is nonzero") {
    auto p = params();
    auto s = BathSpectrum::drude(p.gamma, p.cutoff);
    for (double w : {0.2, 1.0, 3.0, 20.0}) {
        CHECK(level_shift_H(s, p, w) < level_shift_F(s, p, w));
        CHECK(level_shift_G(s, p, w) > 0.0);
    }
}

TEST_CASE("H(omega0) is about twice F(omega0) for a wide drude bath") {
    auto p = params(1e-3, 500.0);
    auto s = BathSpectrum::drude(p.gamma, p.cutoff);
    const double ratio = level_shift_H(s, p, p.omega0) / level_shift_F(s, p, p.omega0);
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("frequency shift matches 2 gamma cutoff for drude") {
    const double pairs[3][2] = {{0.1, 50.0}, {0.05, 120.0}, {0.7, 9.0}};
    for (auto& [g, Wc] : pairs) {
        auto p = params(g, Wc);
        auto s = BathSpectrum::drude(g, Wc);
        CHECK(frequency_shift_sq(s, p) == doctest::Approx(2.0 * g * Wc).epsilon(1e-6));
    }
    // sharp ohmic cutoff carries a different prefactor
    auto p = params();
    auto sh = BathSpectrum::ohmic_sharp(p.gamma, p.cutoff);
    CHECK(frequency_shift_sq(sh, p) ==
          doctest::Approx(closed_form::ohmic_sharp_freq_shift_sq(p)).epsilon(1e-8));
    auto z = BathSpectrum::drude(0.0, 50.0);
    CHECK(frequency_shift_sq(z, params(1e-300, 50.0)) == 0.0);
}

TEST_CASE("renormalized shift H_R") {
    auto p = params();
    auto s = BathSpectrum::drude(p.gamma, p.cutoff);
    SUBCASE("limit mode is exactly zero") {
        auto lim = BathSpectrum::ohmic_limit(p.gamma);
        CHECK(renormalized_shift_H_R(lim, p, 1.0) == 0.0);
        CHECK(renormalized_shift_H_R(lim, p, 123.0) == 0.0);
    }
    SUBCASE("exact cancellation at w = 0") {
        CHECK(std::abs(renormalized_shift_H_R(s, p, 0.0)) <= 1e-8);
    }
    SUBCASE("finite cutoff value from the closed forms") {
        // gamma cutoff / omega0 * (1 - 1/(1 + w^2/cutoff^2)) at w = 1
        CHECK(renormalized_shift_H_R(s, p, 1.0) == doctest::Approx(0.0019992).epsilon(1e-4));
    }
}

TEST_CASE("limit-mode spectra reject the divergent shifts") {
    auto p = params();
    auto lim = BathSpectrum::ohmic_limit(p.gamma);
    CHECK_THROWS_AS(level_shift_F(lim, p, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(level_shift_H(lim, p, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(frequency_shift_sq(lim, p), std::invalid_argument);
}
