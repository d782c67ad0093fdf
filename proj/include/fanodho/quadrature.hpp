// quadrature.hpp — adaptive Gauss-Kronrod integration, Filon-type oscillatory
// integrals, and Cauchy principal-value quadrature.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "fanodho/errors.hpp"

namespace fanodho {

// Controls principal-value and adaptive quadrature. excision_halfwidth = 0
// selects the default 1e-4 * max(scale, pole); grid_max = 0 selects
// 50 * cutoff when a semi-infinite integral has no analytic tail.
struct QuadratureConfig {
    double excision_halfwidth = 0.0;
    double rel_tol = 1e-8;
    double abs_tol = 1e-9;
    std::size_t max_subdivisions = 4000;
    double grid_max = 0.0;

    void validate() const {
        if (excision_halfwidth < 0.0) throw std::invalid_argument("QuadratureConfig: excision_halfwidth must be >= 0");
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("QuadratureConfig: tolerances must be > 0");
        if (max_subdivisions < 4) throw std::invalid_argument("QuadratureConfig: max_subdivisions too small");
    }

    double effective_excision(double pole, double scale) const {
        if (excision_halfwidth > 0.0) return excision_halfwidth;
        const double ref = std::max(std::abs(pole), std::abs(scale));
        return 1e-4 * (ref > 0.0 ? ref : 1.0);
    }
};

namespace quad {

using Fn = std::function<double(double)>;

struct Result {
    double value = 0.0;
    double error = 0.0;
};

// Adaptive Gauss(7)/Kronrod(15) over [a, b]. Throws QuadratureError carrying
// the best estimate when max_subdivisions is exhausted without convergence.
// `breaks` lists interior abscissae of known narrow features (resonance
// peaks); the initial panels are cut there so adaptivity cannot miss them.
Result integrate(const Fn& f, double a, double b, const QuadratureConfig& cfg,
                 const std::vector<double>& breaks = {});

// Integral over [a, infinity) via the substitution u = 1/x (a > 0 required);
// f must decay faster than 1/x.
Result integrate_to_inf(const Fn& f, double a, const QuadratureConfig& cfg);

// Sine integral Si(x) = int_0^x sin(u)/u du and its complement
// int_x^inf sin(u)/u du = pi/2 - Si(x). Accurate to ~1e-14.
double si(double x);
double si_tail(double x);

// int_X^inf cos(u)/u^2 du, X > 0.
double cos_tail_over_sq(double X);

// Oscillatory integrals int_a^b f(w) cos(w t) dw and the sine analog for
// t >= 0, by adaptive Filon-type panels (quadratic envelope fit with exact
// trigonometric moments; plain Gauss for weakly oscillating panels).
Result osc_cos(const Fn& f, double a, double b, double t, const QuadratureConfig& cfg,
               const std::vector<double>& breaks = {});
Result osc_sin(const Fn& f, double a, double b, double t, const QuadratureConfig& cfg,
               const std::vector<double>& breaks = {});

struct ComplexResult {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;
};

// int_a^b f(w) exp(-i w t) dw, t >= 0.
ComplexResult osc_exp(const Fn& f, double a, double b, double t, const QuadratureConfig& cfg,
                      const std::vector<double>& breaks = {});

// Cauchy principal value PV int_a^b f(w) / (pole - w) dw for a < pole < b,
// f continuous at the pole. Symmetric-window pairing around the pole with
// Richardson extrapolation in the excision halfwidth, plus ordinary adaptive
// quadrature outside the window.
Result cauchy_pv(const Fn& f, double pole, double a, double b, const QuadratureConfig& cfg);

// Independent evaluation path: pole subtraction
//   PV int f/(pole-w) = int (f(w)-f(pole))/(pole-w) + f(pole) log|(pole-a)/(b-pole)|.
Result cauchy_pv_subtracted(const Fn& f, double pole, double a, double b, const QuadratureConfig& cfg);

// PV int_a^b g(w) exp(-i w t) / (pole - w) dw for t >= 0. The pole window is
// folded symmetrically, which removes the singularity exactly; the remaining
// sin(ut)/u moment is Si-based.
ComplexResult cauchy_pv_osc(const Fn& g, double pole, double t, double a, double b,
                            const QuadratureConfig& cfg, const std::vector<double>& breaks = {});

} // namespace quad
} // namespace fanodho
