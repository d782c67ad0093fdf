#include "fanodho/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace fanodho::quad {

namespace {

// 15-point Kronrod abscissae (positive half) with the embedded 7-point Gauss
// rule at the odd indices.
constexpr double XGK[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};
constexpr double WGK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double WG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
    double value;
    double error;
};

PanelEstimate gk15(const Fn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * XGK[i]);
        fv[14 - i] = f(c + h * XGK[i]);
    }
    fv[7] = f(c);
    double kron = WGK[7] * fv[7];
    double gauss = WG[3] * fv[7];
    for (int i = 0; i < 7; ++i) kron += WGK[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) gauss += WG[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    kron *= h;
    gauss *= h;

    // QUADPACK-style error scaling against the variation of f on the panel.
    double resasc = WGK[7] * std::abs(fv[7] - kron / (b - a));
    for (int i = 0; i < 7; ++i)
        resasc += WGK[i] * (std::abs(fv[i] - kron / (b - a)) + std::abs(fv[14 - i] - kron / (b - a)));
    resasc *= h;
    double err = std::abs(kron - gauss);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    return {kron, err};
}

struct Segment {
    double a, b;
    double value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

std::vector<double> seed_edges(double a, double b, const std::vector<double>& breaks) {
    std::vector<double> edges{a};
    for (double x : breaks)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

// Generic global-adaptive driver over a panel rule.
template <class Rule>
Result adapt(const Rule& rule, double a, double b, const QuadratureConfig& cfg, const char* what,
             const std::vector<double>& breaks = {}) {
    std::priority_queue<Segment> segs;
    const std::vector<double> edges = seed_edges(a, b, breaks);
    double total = 0.0;
    double toterr = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        PanelEstimate e0 = rule(edges[i], edges[i + 1]);
        segs.push({edges[i], edges[i + 1], e0.value, e0.error});
        total += e0.value;
        toterr += e0.error;
    }
    std::size_t n = edges.size() - 1;
    while (toterr > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
        if (n >= cfg.max_subdivisions) {
            throw QuadratureError(std::string(what) + ": no convergence within max_subdivisions",
                                  total, toterr);
        }
        Segment s = segs.top();
        segs.pop();
        const double m = 0.5 * (s.a + s.b);
        if (m <= s.a || m >= s.b) {
            // interval has collapsed to machine precision; accept as is
            segs.push({s.a, s.b, s.value, 0.0});
            toterr -= s.error;
            continue;
        }
        PanelEstimate l = rule(s.a, m);
        PanelEstimate r = rule(m, s.b);
        total += l.value + r.value - s.value;
        toterr += l.error + r.error - s.error;
        segs.push({s.a, m, l.value, l.error});
        segs.push({m, s.b, r.value, r.error});
        ++n;
    }
    return {total, toterr};
}

// ---------------------------------------------------------------------------
// Filon panels: quadratic envelope fit with exact moments of exp(-i w t).

struct OscPanel {
    std::complex<double> value;
    double error;
};

// Centered moments m_k = int_{-h}^{h} u^k exp(-i t u) du.
void osc_moments(double t, double h, std::complex<double>& m0, std::complex<double>& m1,
                 std::complex<double>& m2) {
    const double th = t * h;
    const double s = std::sin(th), c = std::cos(th);
    m0 = {2.0 * s / t, 0.0};
    m1 = {0.0, -2.0 * (s - th * c) / (t * t)};
    m2 = {2.0 * ((th * th - 2.0) * s + 2.0 * th * c) / (t * t * t), 0.0};
}

std::complex<double> osc_panel_value(const Fn& f, double a, double b, double t) {
    const double m = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    if (t * h <= 0.5) {
        // weakly oscillating: 7-point Gauss on the product
        std::complex<double> acc{0.0, 0.0};
        const double xg[4] = {0.0, XGK[5], XGK[3], XGK[1]};
        for (int i = 0; i < 4; ++i) {
            const double w = WG[3 - i];
            if (i == 0) {
                acc += w * f(m) * std::exp(std::complex<double>(0.0, -t * m));
            } else {
                const double xl = m - h * xg[i], xr = m + h * xg[i];
                acc += w * (f(xl) * std::exp(std::complex<double>(0.0, -t * xl)) +
                            f(xr) * std::exp(std::complex<double>(0.0, -t * xr)));
            }
        }
        return acc * h;
    }
    std::complex<double> m0, m1, m2;
    osc_moments(t, h, m0, m1, m2);
    const double f0 = f(a), f1 = f(m), f2 = f(b);
    const double d1 = (f2 - f0) / (2.0 * h);
    const double d2 = (f2 - 2.0 * f1 + f0) / (2.0 * h * h);
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, -t * m));
    return phase * (f1 * m0 + d1 * m1 + d2 * m2);
}

OscPanel osc_panel(const Fn& f, double a, double b, double t) {
    const double m = 0.5 * (a + b);
    const std::complex<double> whole = osc_panel_value(f, a, b, t);
    const std::complex<double> halves = osc_panel_value(f, a, m, t) + osc_panel_value(f, m, b, t);
    return {halves, std::abs(whole - halves)};
}

struct OscSegment {
    double a, b;
    std::complex<double> value;
    double error;
    bool operator<(const OscSegment& o) const { return error < o.error; }
};

ComplexResult osc_adapt(const Fn& f, double a, double b, double t, const QuadratureConfig& cfg,
                        const char* what, const std::vector<double>& breaks = {}) {
    std::priority_queue<OscSegment> segs;
    std::complex<double> total{0.0, 0.0};
    double toterr = 0.0;
    std::size_t n = 0;
    const std::vector<double> edges = seed_edges(a, b, breaks);
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        // seed with panels no wider than a few oscillation periods so the
        // quadratic moment fit starts in its converging regime
        const double len = edges[e + 1] - edges[e];
        const double max_w = t > 0.0 ? 8.0 * M_PI / t : len;
        const int n0 = std::max(1, std::min<int>(256, static_cast<int>(std::ceil(len / max_w))));
        for (int i = 0; i < n0; ++i) {
            const double x0 = edges[e] + len * i / n0;
            const double x1 = edges[e] + len * (i + 1) / n0;
            OscPanel p = osc_panel(f, x0, x1, t);
            segs.push({x0, x1, p.value, p.error});
            total += p.value;
            toterr += p.error;
        }
        n += static_cast<std::size_t>(n0);
    }
    while (toterr > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
        if (n >= cfg.max_subdivisions)
            throw QuadratureError(std::string(what) + ": no convergence within max_subdivisions",
                                  std::abs(total), toterr);
        OscSegment s = segs.top();
        segs.pop();
        const double m = 0.5 * (s.a + s.b);
        if (m <= s.a || m >= s.b) {
            segs.push({s.a, s.b, s.value, 0.0});
            toterr -= s.error;
            continue;
        }
        OscPanel l = osc_panel(f, s.a, m, t);
        OscPanel r = osc_panel(f, m, s.b, t);
        total += l.value + r.value - s.value;
        toterr += l.error + r.error - s.error;
        segs.push({s.a, m, l.value, l.error});
        segs.push({m, s.b, r.value, r.error});
        ++n;
    }
    return {total, toterr};
}

} // namespace

Result integrate(const Fn& f, double a, double b, const QuadratureConfig& cfg,
                 const std::vector<double>& breaks) {
    if (a == b) return {0.0, 0.0};
    const double sign = a < b ? 1.0 : -1.0;
    if (sign < 0) std::swap(a, b);
    Result r = adapt([&](double x0, double x1) { return gk15(f, x0, x1); }, a, b, cfg, "integrate",
                     breaks);
    r.value *= sign;
    return r;
}

Result integrate_to_inf(const Fn& f, double a, const QuadratureConfig& cfg) {
    if (!(a > 0.0)) throw std::invalid_argument("integrate_to_inf: lower limit must be > 0");
    auto g = [&](double u) {
        if (u == 0.0) return 0.0;
        return f(1.0 / u) / (u * u);
    };
    return integrate(g, 0.0, 1.0 / a, cfg);
}

double si(double x) {
    const double ax = std::abs(x);
    double v;
    if (ax <= 6.0) {
        // Taylor series: sum_{k>=0} (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)
        const double x2 = ax * ax;
        double s = 0.0, t = ax; // t = x^{2k+1}/(2k+1)!
        for (int k = 0; k < 60; ++k) {
            s += t / (2.0 * k + 1.0);
            t *= -x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            if (std::abs(t) < 1e-18 * std::abs(s)) break;
        }
        v = s;
    } else {
        v = M_PI / 2.0 - si_tail(ax);
    }
    return x < 0.0 ? -v : v;
}

double si_tail(double x) {
    if (x <= 0.0) throw std::invalid_argument("si_tail: x must be > 0");
    if (x <= 6.0) return M_PI / 2.0 - si(x);
    // auxiliary Laplace integrals: f = int_0^inf e^{-xu}/(1+u^2) du,
    // g = int_0^inf u e^{-xu}/(1+u^2) du; tail = f cos x + g sin x
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-15;
    cfg.rel_tol = 1e-13;
    const double umax = 50.0 / x;
    auto fa = [x](double u) { return std::exp(-x * u) / (1.0 + u * u); };
    auto ga = [x](double u) { return u * std::exp(-x * u) / (1.0 + u * u); };
    const double fv = integrate(fa, 0.0, umax, cfg).value;
    const double gv = integrate(ga, 0.0, umax, cfg).value;
    return fv * std::cos(x) + gv * std::sin(x);
}

double cos_tail_over_sq(double X) {
    if (!(X > 0.0)) throw std::invalid_argument("cos_tail_over_sq: X must be > 0");
    return std::cos(X) / X - si_tail(X);
}

ComplexResult osc_exp(const Fn& f, double a, double b, double t, const QuadratureConfig& cfg,
                      const std::vector<double>& breaks) {
    if (t < 0.0) throw std::invalid_argument("osc_exp: t must be >= 0");
    if (a == b) return {};
    return osc_adapt(f, a, b, t, cfg, "osc_exp", breaks);
}

Result osc_cos(const Fn& f, double a, double b, double t, const QuadratureConfig& cfg,
               const std::vector<double>& breaks) {
    ComplexResult r = osc_exp(f, a, b, t, cfg, breaks);
    return {r.value.real(), r.error};
}

Result osc_sin(const Fn& f, double a, double b, double t, const QuadratureConfig& cfg,
               const std::vector<double>& breaks) {
    ComplexResult r = osc_exp(f, a, b, t, cfg, breaks);
    return {-r.value.imag(), r.error};
}

Result cauchy_pv(const Fn& f, double pole, double a, double b, const QuadratureConfig& cfg) {
    if (!(a < pole && pole < b)) throw std::invalid_argument("cauchy_pv: pole must lie inside the domain");
    const double w = std::min(pole - a, b - pole);
    double value = 0.0, error = 0.0;

    // ordinary adaptive quadrature outside the symmetric window
    auto kern = [&](double x) { return f(x) / (pole - x); };
    if (pole - w > a) {
        Result r = integrate(kern, a, pole - w, cfg);
        value += r.value;
        error += r.error;
    }
    if (pole + w < b) {
        Result r = integrate(kern, pole + w, b, cfg);
        value += r.value;
        error += r.error;
    }

    // paired excised window: int_eps^w [f(pole-u) - f(pole+u)]/u du,
    // Richardson-extrapolated in eps
    auto paired = [&](double u) { return (f(pole - u) - f(pole + u)) / u; };
    double eps = cfg.effective_excision(pole, w);
    eps = std::min(eps, w / 8.0);
    const double i_e = integrate(paired, eps, w, cfg).value;
    const double i_e2 = integrate(paired, eps / 2.0, w, cfg).value;
    const double i_e4 = integrate(paired, eps / 4.0, w, cfg).value;
    const double a1 = 2.0 * i_e2 - i_e;
    const double a2 = 2.0 * i_e4 - i_e2;
    const double rich = (4.0 * a2 - a1) / 3.0;
    value += rich;
    error += std::abs(rich - a2) + cfg.abs_tol;
    return {value, error};
}

Result cauchy_pv_subtracted(const Fn& f, double pole, double a, double b,
                            const QuadratureConfig& cfg) {
    if (!(a < pole && pole < b)) throw std::invalid_argument("cauchy_pv_subtracted: pole must lie inside the domain");
    const double f0 = f(pole);
    auto g = [&](double x) {
        const double d = pole - x;
        if (d == 0.0) return 0.0;
        return (f(x) - f0) / d;
    };
    Result r = integrate(g, a, b, cfg);
    r.value += f0 * std::log(std::abs((pole - a) / (b - pole)));
    return r;
}

ComplexResult cauchy_pv_osc(const Fn& g, double pole, double t, double a, double b,
                            const QuadratureConfig& cfg, const std::vector<double>& breaks) {
    if (!(a < pole && pole < b)) throw std::invalid_argument("cauchy_pv_osc: pole must lie inside the domain");
    if (t < 0.0) throw std::invalid_argument("cauchy_pv_osc: t must be >= 0");
    const double w = std::min(pole - a, b - pole);
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;

    auto kern = [&](double x) { return g(x) / (pole - x); };
    if (pole - w > a) {
        ComplexResult r = osc_exp(kern, a, pole - w, t, cfg, breaks);
        value += r.value;
        error += r.error;
    }
    if (pole + w < b) {
        ComplexResult r = osc_exp(kern, pole + w, b, t, cfg, breaks);
        value += r.value;
        error += r.error;
    }

    // Folded window: with gm(u) = g(pole-u), gp(u) = g(pole+u),
    //   int_{pole-w}^{pole+w} g e^{-iwt}/(pole-w') dw'
    //     = e^{-i pole t} int_0^w [ (gm-gp)/u cos(ut) + i ((gm+gp)-2 g0)/u sin(ut) ] du
    //       + 2 i g0 Si(w t) e^{-i pole t}
    const double g0 = g(pole);
    auto even = [&](double u) {
        if (u == 0.0) return 0.0; // limit is -2 g'(pole) but the node u=0 is never hit by Gauss panels
        return (g(pole - u) - g(pole + u)) / u;
    };
    auto odd = [&](double u) {
        if (u == 0.0) return 0.0;
        return (g(pole - u) + g(pole + u) - 2.0 * g0) / u;
    };
    std::vector<double> folded;
    for (double x : breaks) {
        const double u = std::abs(x - pole);
        if (u > 0.0 && u < w) folded.push_back(u);
    }
    Result rc = osc_cos(even, 0.0, w, t, cfg, folded);
    Result rs = osc_sin(odd, 0.0, w, t, cfg, folded);
    std::complex<double> window{rc.value, rs.value};
    window += std::complex<double>(0.0, 2.0 * g0 * si(w * t));
    value += window * std::exp(std::complex<double>(0.0, -pole * t));
    error += rc.error + rs.error;
    return {value, error};
}

} // namespace fanodho::quad
