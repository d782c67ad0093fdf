// spectral.hpp — bath spectral densities J(w) and the coupling function |v(w)|^2

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fanodho/params.hpp"

namespace fanodho {

enum class SpectrumKind { OhmicSharp, Drude, Tabulated };

// Parametric spectral density. For OhmicSharp, J(w) = 2 M gamma w below the
// cutoff and zero above it; for Drude, J(w) = 2 M gamma w / (1 + w^2/cutoff^2).
// Tabulated spectra interpolate linearly between samples and are zero outside
// the table. `cutoff_infinite` selects the analytic cutoff -> infinity forms
// instead of a large numerical cutoff.
struct BathSpectrum {
    SpectrumKind kind = SpectrumKind::Drude;
    double gamma = 0.1;
    double cutoff = 50.0;
    bool cutoff_infinite = false;
    std::vector<std::pair<double, double>> table; // (w, J) pairs, w ascending

    void validate() const;

    static BathSpectrum ohmic_sharp(double gamma, double cutoff);
    static BathSpectrum drude(double gamma, double cutoff);
    // Ohmic J = 2 M gamma w with the cutoff taken to infinity analytically.
    static BathSpectrum ohmic_limit(double gamma);
    static BathSpectrum tabulated(std::vector<std::pair<double, double>> table, double gamma);

    // Two-column CSV (w, J); header row optional, w strictly ascending.
    static BathSpectrum from_csv(const std::string& path, double gamma);

    // Upper edge of the spectral support (infinite for Drude / limit forms).
    double support_max() const;
};

// J(w) in units of mass * frequency^2. Throws std::invalid_argument for w < 0.
double spectral_density(const BathSpectrum& s, double mass, double w);

// |v(w)|^2 = J(w) / (2 pi M omega0), frequency units. For Drude this is
// gamma w / (pi omega0 (1 + w^2/cutoff^2)).
double coupling_sq(const BathSpectrum& s, const ModelParams& p, double w);

} // namespace fanodho
