// params.hpp — model parameters of the damped oscillator + bath

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace fanodho {

// Oscillator of mass M and frequency omega0 coupled to an ohmic-type bath of
// damping rate gamma and cutoff frequency cutoff. kT is a thermal energy used
// only by the classical ensemble; hbar fixes units of action.
struct ModelParams {
    double mass = 1.0;
    double omega0 = 1.0;
    double gamma = 0.1;
    double cutoff = 50.0;
    double kT = 0.0;
    double hbar = 1.0;

    void validate() const {
        if (!(mass > 0.0)) throw std::invalid_argument("ModelParams: mass must be > 0");
        if (!(omega0 > 0.0)) throw std::invalid_argument("ModelParams: omega0 must be > 0");
        if (!(gamma > 0.0)) throw std::invalid_argument("ModelParams: gamma must be > 0");
        if (!(cutoff > 0.0)) throw std::invalid_argument("ModelParams: cutoff must be > 0");
        if (kT < 0.0) throw std::invalid_argument("ModelParams: kT must be >= 0");
        if (!(hbar > 0.0)) throw std::invalid_argument("ModelParams: hbar must be > 0");
    }

    // The cutoff should sit well above the system frequency; not enforced.
    bool cutoff_well_separated() const { return cutoff >= 10.0 * omega0; }
};

} // namespace fanodho
