// interp.hpp — shape-preserving cubic interpolation (Fritsch-Carlson) used to
// cache level-shift functions on kernel grids.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fanodho {

class PchipInterpolant {
public:
    PchipInterpolant() = default;

    PchipInterpolant(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("PchipInterpolant: need matching grids of size >= 2");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("PchipInterpolant: grid must be strictly increasing");
        m_.resize(n);
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        m_[0] = d[0];
        m_[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                m_[i] = 0.0;
            } else {
                const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
                const double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
                m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
    }

    double operator()(double x) const {
        if (x <= x_.front()) return y_.front() + m_.front() * (x - x_.front());
        if (x >= x_.back()) return y_.back() + m_.back() * (x - x_.back());
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
        const double h = x_[i + 1] - x_[i];
        const double s = (x - x_[i]) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
        return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
    }

    bool empty() const { return x_.empty(); }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::vector<double> x_, y_, m_;
};

// Frequency grid that is logarithmically dense around the resonance (the
// lineshape width is gamma there) with uniform coverage elsewhere.
inline std::vector<double> graded_grid(double w0, double gamma, double w_max,
                                       std::size_t n_uniform = 1200, std::size_t n_peak = 600) {
    std::vector<double> g;
    g.reserve(n_uniform + 2 * n_peak + 4);
    for (std::size_t i = 0; i <= n_uniform; ++i) g.push_back(w_max * double(i) / double(n_uniform));
    const double span = 20.0 * gamma;
    const double inner = std::max(1e-6 * gamma, 1e-3 * gamma);
    for (std::size_t i = 0; i < n_peak; ++i) {
        const double u = double(i) / double(n_peak - 1);
        const double r = inner * std::pow(span / inner, u);
        if (w0 + r < w_max) g.push_back(w0 + r);
        if (w0 - r > 0.0) g.push_back(w0 - r);
    }
    if (w0 > 0.0 && w0 < w_max) g.push_back(w0);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-14 * (1.0 + std::abs(a)); }),
            g.end());
    return g;
}

} // namespace fanodho
