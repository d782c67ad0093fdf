#include "fanodho/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fanodho {

void BathSpectrum::validate() const {
    if (!(gamma >= 0.0)) throw std::invalid_argument("BathSpectrum: gamma must be >= 0");
    if (kind != SpectrumKind::Tabulated && !cutoff_infinite && !(cutoff > 0.0))
        throw std::invalid_argument("BathSpectrum: cutoff must be > 0");
    if (kind == SpectrumKind::Tabulated) {
        if (table.size() < 2)
            throw std::invalid_argument("BathSpectrum: table needs at least two points");
        double prev = -1.0;
        for (const auto& [w, j] : table) {
            if (w < 0.0) throw std::invalid_argument("BathSpectrum: table frequencies must be >= 0");
            if (w <= prev) throw std::invalid_argument("BathSpectrum: table frequencies must be strictly increasing");
            if (j < 0.0) throw std::invalid_argument("BathSpectrum: J(w) must be >= 0");
            prev = w;
        }
        if (table.front().first == 0.0 && table.front().second != 0.0)
            throw std::invalid_argument("BathSpectrum: J(0) must be 0");
    }
}

BathSpectrum BathSpectrum::ohmic_sharp(double gamma, double cutoff) {
    BathSpectrum s;
    s.kind = SpectrumKind::OhmicSharp;
    s.gamma = gamma;
    s.cutoff = cutoff;
    s.validate();
    return s;
}

BathSpectrum BathSpectrum::drude(double gamma, double cutoff) {
    BathSpectrum s;
    s.kind = SpectrumKind::Drude;
    s.gamma = gamma;
    s.cutoff = cutoff;
    s.validate();
    return s;
}

BathSpectrum BathSpectrum::ohmic_limit(double gamma) {
    BathSpectrum s;
    s.kind = SpectrumKind::Drude;
    s.gamma = gamma;
    s.cutoff = 0.0;
    s.cutoff_infinite = true;
    s.validate();
    return s;
}

BathSpectrum BathSpectrum::tabulated(std::vector<std::pair<double, double>> table, double gamma) {
    BathSpectrum s;
    s.kind = SpectrumKind::Tabulated;
    s.gamma = gamma;
    s.table = std::move(table);
    s.cutoff = s.table.empty() ? 1.0 : s.table.back().first;
    s.validate();
    return s;
}

BathSpectrum BathSpectrum::from_csv(const std::string& path, double gamma) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("BathSpectrum::from_csv: cannot open " + path);
    std::vector<std::pair<double, double>> table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double w, j;
        if (!(ss >> w >> j)) {
            if (table.empty()) continue; // header row
            throw std::invalid_argument("BathSpectrum::from_csv: malformed line: " + line);
        }
        table.emplace_back(w, j);
    }
    return tabulated(std::move(table), gamma);
}

double BathSpectrum::support_max() const {
    switch (kind) {
        case SpectrumKind::OhmicSharp: return cutoff_infinite ? std::numeric_limits<double>::infinity() : cutoff;
        case SpectrumKind::Drude: return std::numeric_limits<double>::infinity();
        case SpectrumKind::Tabulated: return table.back().first;
    }
    return cutoff;
}

double spectral_density(const BathSpectrum& s, double mass, double w) {
    if (w < 0.0) throw std::invalid_argument("spectral_density: w must be >= 0");
    switch (s.kind) {
        case SpectrumKind::OhmicSharp:
            if (s.cutoff_infinite) return 2.0 * mass * s.gamma * w;
            return w < s.cutoff ? 2.0 * mass * s.gamma * w : 0.0;
        case SpectrumKind::Drude:
            if (s.cutoff_infinite) return 2.0 * mass * s.gamma * w;
            return 2.0 * mass * s.gamma * w / (1.0 + (w / s.cutoff) * (w / s.cutoff));
        case SpectrumKind::Tabulated: {
            const auto& t = s.table;
            if (w <= t.front().first) {
                // implicit zero extension below the table (and linear from 0 if
                // the table starts at w = 0)
                return w == t.front().first ? t.front().second : 0.0;
            }
            if (w >= t.back().first) return w == t.back().first ? t.back().second : 0.0;
            auto it = std::upper_bound(t.begin(), t.end(), w,
                                       [](double x, const std::pair<double, double>& q) { return x < q.first; });
            const auto& [w1, j1] = *it;
            const auto& [w0, j0] = *(it - 1);
            const double f = (w - w0) / (w1 - w0);
            return j0 + f * (j1 - j0);
        }
    }
    return 0.0;
}

double coupling_sq(const BathSpectrum& s, const ModelParams& p, double w) {
    return spectral_density(s, p.mass, w) / (2.0 * M_PI * p.mass * p.omega0);
}

} // namespace fanodho
